// Wireless energy harvesting: beacon power aggregation at a user, the linear
// and sigmoidal (nonlinear saturation) harvester models, and the
// harvest-then-transmit power caps.
#pragma once

#include "lora/geometry.hpp"
#include "lora/phy.hpp"

#include <vector>

namespace lora {

struct EhModel {
  enum class Kind { linear, sigmoidal };

  Kind kind = Kind::sigmoidal;
  double linear_efficiency = 0.5;  // used by the linear model only
  // Sigmoidal model constants: steepness a (1/W), turn-on threshold b (W) and
  // saturation level M (W).
  double sigmoid_a = 1500.0;
  double sigmoid_b = 0.0022;
  double sigmoid_m_w = 0.024;
  // When set, beacon->user links use the fading mean (1) instead of the
  // per-trial draws.
  bool mean_field_beacons = false;

  void validate() const;
};

/// Per-user working state assembled by the trial pipeline.
struct EnergyState {
  double harvest_rate_w = 0.0;  // E_n: DC power while harvesting
  double eh_time_s = 0.0;       // tau_e
  double power_cap_w = 0.0;     // feasible transmit power given the above
};

/// Total beacon power received by one user: sum over beacons of
/// P_b * h * d^-alpha, with the beacon-user distance clamped to the guard
/// radius of the topology.
double received_beacon_power(std::size_t user, const Topology& topo, double beacon_tx_w,
                             bool mean_field = false);

/// DC harvest rate E_n for a received RF power.  The sigmoidal model is the
/// normalized logistic curve (zero at zero input, saturating at M); the
/// linear model is efficiency * p_rec.
double harvest_rate(double p_rec_w, const EhModel& model);

/// Harvest rate for every user of a topology.
std::vector<double> harvest_rates(const Topology& topo, const EhModel& model,
                                  double beacon_tx_w);

/// Transmit power usable after harvesting for eh_time seconds and then
/// transmitting for t_a seconds: min(p_t, (eh_time / t_a) * E_n).
double power_cap(double eh_time_s, double t_a_s, double harvest_rate_w, double p_t_w);

/// Cap when the whole duty-cycle off window is spent harvesting:
/// min(p_t, ((1 - d)/d) * E_n).  This is the power entering SF allocation.
double p_n_max(double harvest_rate_w, const PhyParams& phy, double p_t_w);

} // namespace lora
