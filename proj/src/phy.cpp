// LoRa PHY timing and radio constants.
#include "lora/phy.hpp"

#include "lora/units.hpp"

#include <cmath>

namespace lora {

void PhyParams::validate() const {
  if (bandwidth_hz <= 0.0)
    throw std::invalid_argument("phy: bandwidth must be positive");
  if (payload_bytes < 1)
    throw std::invalid_argument("phy: payload must be at least 1 byte");
  if (coding_rate < 1 || coding_rate > 4)
    throw std::invalid_argument("phy: coding rate must be in [1, 4]");
  if (preamble_symbols <= 0.0)
    throw std::invalid_argument("phy: preamble length must be positive");
  if (duty_cycle <= 0.0 || duty_cycle >= 1.0)
    throw std::invalid_argument("phy: duty cycle must be in (0, 1)");
  for (std::size_t i = 1; i < sensitivity_dbm.size(); ++i)
    if (sensitivity_dbm[i] >= sensitivity_dbm[i - 1])
      throw std::invalid_argument("phy: sensitivity must be strictly decreasing with SF");
}

double payload_symbols(SpreadingFactor sf, const PhyParams& phy) {
  const int de = low_data_rate_optimization(sf) ? 1 : 0;
  // Explicit header (+28) and payload CRC (+16) are always on for uplinks.
  const double num = 8.0 * phy.payload_bytes - 4.0 * sf.value() + 28.0 + 16.0;
  const double den = 4.0 * (sf.value() - 2 * de);
  const double block = std::ceil(num / den) * (phy.coding_rate + 4);
  return 8.0 + std::max(block, 0.0);
}

double time_on_air(SpreadingFactor sf, const PhyParams& phy) {
  const double symbols = phy.preamble_symbols + payload_symbols(sf, phy) + 4.25;
  return symbols * std::ldexp(1.0, sf.value()) / phy.bandwidth_hz;
}

double time_off(double t_a_s, const PhyParams& phy) {
  return (1.0 - phy.duty_cycle) / phy.duty_cycle * t_a_s;
}

double noise_power(const PhyParams& phy) {
  const double dbm = -174.0 + phy.noise_figure_db + 10.0 * std::log10(phy.bandwidth_hz);
  return dbm_to_watts(dbm);
}

double sensitivity(SpreadingFactor sf, const PhyParams& phy) {
  return phy.sensitivity_dbm[static_cast<std::size_t>(sf.idx())];
}

double sensitivity_min_dbm(const PhyParams& phy) {
  return phy.sensitivity_dbm.back();
}

} // namespace lora
