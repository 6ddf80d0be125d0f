// SINR and throughput under partial-overlap interference.  Each interferer is
// weighted by the fraction of its airtime that collides with the user and by
// the cross-correlation of the two waveforms.
#pragma once

#include "lora/matrix.hpp"

#include <vector>

namespace lora {

struct CorrelationPolicy {
  enum class Kind {
    none,             // interference-free reference
    co_sf_only,       // same-SF pairs at rho_co, different SFs orthogonal
    co_and_inter_sf,  // same-SF at rho_co, cross-SF at rho_inter
    custom,           // per-SF-pair table
  };

  Kind kind = Kind::co_and_inter_sf;
  double rho_co = 1.0;     // worst-case convention: full correlation
  double rho_inter = 1.0;
  // 6x6 per-SF-pair correlations for Kind::custom, row/col 0 = SF7.
  std::vector<std::vector<double>> custom_matrix;

  void validate() const;
};

/// Correlation between the waveforms of two users.  A user is fully
/// correlated with itself.
double correlation(const CorrelationPolicy& policy, int sf_n, int sf_m,
                   bool same_user = false);

/// Per-pair correlation matrix for a set of users (diagonal 1).
Matrix correlation_matrix(const CorrelationPolicy& policy, const std::vector<int>& sfs);

/// Interference weight matrix W(n, m) = (col(n, m) / T_a(m)) * rho(n, m) for
/// n != m, zero diagonal.  Every entry lies in [0, 1]: the overlap never
/// exceeds the interferer's own airtime.
Matrix interference_weights(const Matrix& col, const std::vector<double>& toa_s,
                            const Matrix& rho);

/// SINR of user n: p_n g_n / (sum_m W(n, m) p_m g_m + noise).
double sinr(std::size_t n, const std::vector<double>& powers_w,
            const std::vector<double>& gains, const Matrix& weights, double noise_w);

/// SINR of every user.
std::vector<double> sinr_all(const std::vector<double>& powers_w,
                             const std::vector<double>& gains, const Matrix& weights,
                             double noise_w);

struct RateReport {
  std::vector<double> sinr_linear;
  std::vector<double> rate_nats;  // ln(1 + sinr)
  double min_rate_nats = 0.0;
  double mean_rate_nats = 0.0;
};

/// Rates for every user in the set.  Throws std::runtime_error("empty active
/// set") when called with no users.
RateReport rates(const std::vector<double>& powers_w, const std::vector<double>& gains,
                 const Matrix& weights, double noise_w);

} // namespace lora
