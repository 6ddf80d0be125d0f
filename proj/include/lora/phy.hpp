// LoRa PHY timing and radio constants: spreading factors, time on air,
// duty-cycle off time, receiver noise power and per-SF sensitivity.
#pragma once

#include <array>
#include <stdexcept>

namespace lora {

/// Spreading factor, restricted to the LoRa uplink range 7..12.
class SpreadingFactor {
public:
  static constexpr int kMin = 7;
  static constexpr int kMax = 12;

  explicit SpreadingFactor(int value) : value_(value) {
    if (value < kMin || value > kMax)
      throw std::invalid_argument("spreading factor must be in [7, 12]");
  }

  int value() const { return value_; }
  /// Zero-based index into per-SF tables (SF7 -> 0 ... SF12 -> 5).
  int idx() const { return value_ - kMin; }

  static std::array<SpreadingFactor, 6> all() {
    return {SpreadingFactor(7),  SpreadingFactor(8),  SpreadingFactor(9),
            SpreadingFactor(10), SpreadingFactor(11), SpreadingFactor(12)};
  }

  friend bool operator==(SpreadingFactor a, SpreadingFactor b) { return a.value_ == b.value_; }
  friend bool operator!=(SpreadingFactor a, SpreadingFactor b) { return a.value_ != b.value_; }
  friend bool operator<(SpreadingFactor a, SpreadingFactor b) { return a.value_ < b.value_; }

private:
  int value_;
};

/// Radio parameters shared by every uplink in a scenario.
struct PhyParams {
  double bandwidth_hz = 125000.0;
  int payload_bytes = 10;
  int coding_rate = 1;              // CR in 1..4, denominator 4/(4+CR)
  double preamble_symbols = 12.25;  // preamble length incl. sync word
  double duty_cycle = 0.01;         // fraction of time a node may transmit
  double noise_figure_db = 6.0;
  // Receiver sensitivity per SF, dBm, index 0 = SF7.
  std::array<double, 6> sensitivity_dbm = {-123.0, -126.0, -129.0, -132.0, -134.5, -137.0};

  /// Throws std::invalid_argument on out-of-range values.
  void validate() const;
};

/// Low-data-rate optimization is mandated for SF11/SF12 at 125 kHz.
inline bool low_data_rate_optimization(SpreadingFactor sf) { return sf.value() >= 11; }

/// Number of payload symbols (the 8-symbol base plus the coded payload block,
/// clamped so a tiny payload never yields fewer than 8 symbols).
double payload_symbols(SpreadingFactor sf, const PhyParams& phy);

/// Packet airtime in seconds: (preamble + payload + 4.25 sync) * 2^SF / BW.
double time_on_air(SpreadingFactor sf, const PhyParams& phy);

/// Enforced silence after a transmission of length t_a under the duty cycle d:
/// ((1 - d)/d) * t_a.
double time_off(double t_a_s, const PhyParams& phy);

/// AWGN power at the gateway in watts: -174 dBm/Hz + NF + 10 log10(BW).
double noise_power(const PhyParams& phy);

/// Receiver sensitivity for one SF, dBm.
double sensitivity(SpreadingFactor sf, const PhyParams& phy);

/// The weakest sensitivity in the table (SF12): the activity threshold.
double sensitivity_min_dbm(const PhyParams& phy);

} // namespace lora
