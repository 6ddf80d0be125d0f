// SINR with partial-overlap interference weights and rate reports.
#include "lora/interference.hpp"

#include "lora/phy.hpp"

#include <cmath>
#include <stdexcept>

namespace lora {

void CorrelationPolicy::validate() const {
  if (kind == Kind::custom) {
    if (custom_matrix.size() != 6)
      throw std::invalid_argument("corr: custom matrix must be 6x6");
    for (const auto& row : custom_matrix)
      if (row.size() != 6)
        throw std::invalid_argument("corr: custom matrix must be 6x6");
    for (std::size_t i = 0; i < 6; ++i)
      for (std::size_t j = 0; j < 6; ++j) {
        if (custom_matrix[i][j] < 0.0 || custom_matrix[i][j] > 1.0)
          throw std::invalid_argument("corr: custom entries must be in [0, 1]");
        if (custom_matrix[i][j] != custom_matrix[j][i])
          throw std::invalid_argument("corr: custom matrix must be symmetric");
      }
  } else {
    if (rho_co < 0.0 || rho_co > 1.0 || rho_inter < 0.0 || rho_inter > 1.0)
      throw std::invalid_argument("corr: correlations must be in [0, 1]");
  }
}

double correlation(const CorrelationPolicy& policy, int sf_n, int sf_m, bool same_user) {
  if (same_user) return 1.0;
  switch (policy.kind) {
    case CorrelationPolicy::Kind::none:
      return 0.0;
    case CorrelationPolicy::Kind::co_sf_only:
      return sf_n == sf_m ? policy.rho_co : 0.0;
    case CorrelationPolicy::Kind::co_and_inter_sf:
      return sf_n == sf_m ? policy.rho_co : policy.rho_inter;
    case CorrelationPolicy::Kind::custom:
      return policy.custom_matrix[static_cast<std::size_t>(sf_n - SpreadingFactor::kMin)]
                                 [static_cast<std::size_t>(sf_m - SpreadingFactor::kMin)];
  }
  return 0.0;
}

Matrix correlation_matrix(const CorrelationPolicy& policy, const std::vector<int>& sfs) {
  const std::size_t n = sfs.size();
  Matrix rho(n);
  for (std::size_t i = 0; i < n; ++i) {
    rho.at(i, i) = 1.0;
    for (std::size_t j = i + 1; j < n; ++j) {
      const double r = correlation(policy, sfs[i], sfs[j]);
      rho.at(i, j) = r;
      rho.at(j, i) = r;
    }
  }
  return rho;
}

Matrix interference_weights(const Matrix& col, const std::vector<double>& toa_s,
                            const Matrix& rho) {
  const std::size_t n = toa_s.size();
  Matrix w(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j) w.at(i, j) = col.at(i, j) / toa_s[j] * rho.at(i, j);
  return w;
}

double sinr(std::size_t n, const std::vector<double>& powers_w,
            const std::vector<double>& gains, const Matrix& weights, double noise_w) {
  const double* row = weights.row(n);
  double interference = 0.0;
  for (std::size_t m = 0; m < powers_w.size(); ++m)
    interference += row[m] * powers_w[m] * gains[m];  // diagonal weight is zero
  return powers_w[n] * gains[n] / (interference + noise_w);
}

std::vector<double> sinr_all(const std::vector<double>& powers_w,
                             const std::vector<double>& gains, const Matrix& weights,
                             double noise_w) {
  std::vector<double> out(powers_w.size());
  for (std::size_t n = 0; n < powers_w.size(); ++n)
    out[n] = sinr(n, powers_w, gains, weights, noise_w);
  return out;
}

RateReport rates(const std::vector<double>& powers_w, const std::vector<double>& gains,
                 const Matrix& weights, double noise_w) {
  if (powers_w.empty()) throw std::runtime_error("empty active set");
  RateReport rep;
  rep.sinr_linear = sinr_all(powers_w, gains, weights, noise_w);
  rep.rate_nats.resize(rep.sinr_linear.size());
  double sum = 0.0;
  double mn = rep.rate_nats.empty() ? 0.0 : 1e308;
  for (std::size_t i = 0; i < rep.sinr_linear.size(); ++i) {
    rep.rate_nats[i] = std::log1p(rep.sinr_linear[i]);
    sum += rep.rate_nats[i];
    mn = std::min(mn, rep.rate_nats[i]);
  }
  rep.min_rate_nats = mn;
  rep.mean_rate_nats = sum / static_cast<double>(rep.rate_nats.size());
  return rep;
}

} // namespace lora
