// Energy harvesting models and harvest-then-transmit power caps.
#include "lora/energy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lora {

namespace {

// Logistic function, evaluated on the side that cannot overflow.
double logistic(double y) {
  if (y >= 0.0) return 1.0 / (1.0 + std::exp(-y));
  const double e = std::exp(y);
  return e / (1.0 + e);
}

} // namespace

void EhModel::validate() const {
  if (kind == Kind::linear) {
    if (linear_efficiency <= 0.0 || linear_efficiency > 1.0)
      throw std::invalid_argument("eh: linear efficiency must be in (0, 1]");
  }
  if (sigmoid_a <= 0.0 || sigmoid_b <= 0.0 || sigmoid_m_w <= 0.0)
    throw std::invalid_argument("eh: sigmoid parameters must be positive");
}

double received_beacon_power(std::size_t user, const Topology& topo, double beacon_tx_w,
                             bool mean_field) {
  const auto& u = topo.users[user];
  double p = 0.0;
  for (const auto& bc : topo.beacons) {
    // The guard radius applies to beacon-user links too; a beacon drawn on
    // top of a user must not blow up the pathloss law.
    const double d = std::max(std::hypot(bc.x_m - u.x_m, bc.y_m - u.y_m),
                              topo.min_distance_m);
    const double h = mean_field ? 1.0 : bc.fading[user];
    p += beacon_tx_w * h * std::pow(d, -topo.pathloss_exponent);
  }
  return p;
}

double harvest_rate(double p_rec_w, const EhModel& model) {
  if (model.kind == EhModel::Kind::linear) return model.linear_efficiency * p_rec_w;
  // Normalized logistic: exactly zero at zero input, saturating at M.  The
  // zero-input offset Omega is the same logistic evaluation as beta(0), so
  // the subtraction cancels exactly there.
  const double m = model.sigmoid_m_w;
  const double omega = logistic(-model.sigmoid_a * model.sigmoid_b);
  const double beta = logistic(model.sigmoid_a * (p_rec_w - model.sigmoid_b));
  const double psi = m * (beta - omega) / (1.0 - omega);
  return std::clamp(psi, 0.0, m);
}

std::vector<double> harvest_rates(const Topology& topo, const EhModel& model,
                                  double beacon_tx_w) {
  std::vector<double> rates(topo.users.size());
  for (std::size_t i = 0; i < topo.users.size(); ++i)
    rates[i] = harvest_rate(
        received_beacon_power(i, topo, beacon_tx_w, model.mean_field_beacons), model);
  return rates;
}

double power_cap(double eh_time_s, double t_a_s, double harvest_rate_w, double p_t_w) {
  return std::min(p_t_w, eh_time_s / t_a_s * harvest_rate_w);
}

double p_n_max(double harvest_rate_w, const PhyParams& phy, double p_t_w) {
  return std::min(p_t_w, (1.0 - phy.duty_cycle) / phy.duty_cycle * harvest_rate_w);
}

} // namespace lora
