// EH-time selection and max-min power allocation.
#include "lora/optimizer.hpp"

#include "lora/energy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lora {

namespace {

bool all_weights_zero(const Matrix& w) {
  for (double v : w.data())
    if (v != 0.0) return false;
  return true;
}

double min_solo_rate(const std::vector<double>& caps_w, const std::vector<double>& gains,
                     double noise_w) {
  double mn = 1e308;
  for (std::size_t n = 0; n < caps_w.size(); ++n)
    mn = std::min(mn, std::log1p(caps_w[n] * gains[n] / noise_w));
  return mn;
}

// Solves a x = b in place by Gaussian elimination with partial pivoting; b is
// overwritten with the solution.  Returns false on a vanishing pivot.
bool solve_inplace(Matrix& a, std::vector<double>& b) {
  const std::size_t n = b.size();
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t pivot = k;
    for (std::size_t i = k + 1; i < n; ++i)
      if (std::abs(a.at(i, k)) > std::abs(a.at(pivot, k))) pivot = i;
    if (a.at(pivot, k) == 0.0) return false;
    if (pivot != k) {
      for (std::size_t j = k; j < n; ++j) std::swap(a.at(k, j), a.at(pivot, j));
      std::swap(b[k], b[pivot]);
    }
    const double inv = 1.0 / a.at(k, k);
    for (std::size_t i = k + 1; i < n; ++i) {
      const double factor = a.at(i, k) * inv;
      if (factor == 0.0) continue;
      for (std::size_t j = k + 1; j < n; ++j) a.at(i, j) -= factor * a.at(k, j);
      b[i] -= factor * b[k];
    }
  }
  for (std::size_t k = n; k-- > 0;) {
    double sum = b[k];
    for (std::size_t j = k + 1; j < n; ++j) sum -= a.at(k, j) * b[j];
    b[k] = sum / a.at(k, k);
  }
  return true;
}

} // namespace

double eh_time_select(double t_a_s, double harvest_rate_w, double p_t_w,
                      const PhyParams& phy, EhTimeMode mode) {
  const double off_factor = (1.0 - phy.duty_cycle) / phy.duty_cycle;
  switch (mode) {
    case EhTimeMode::max_off_time:
      return off_factor * t_a_s;
    case EhTimeMode::cap_matching: {
      // A node that harvests nothing cannot match the cap; it falls back to
      // the full off window.
      const double factor = harvest_rate_w > 0.0
                                ? std::min(p_t_w / harvest_rate_w, off_factor)
                                : off_factor;
      return factor * t_a_s;
    }
    case EhTimeMode::grid_search:
      throw std::invalid_argument("eh_time_select: grid_search needs the system context");
  }
  throw std::invalid_argument("eh_time_select: unknown mode");
}

std::vector<double> select_eh_times(const EhTimePolicy& policy, CollisionMode col_mode,
                                    const EhSearchContext& ctx, const PhyParams& phy) {
  const std::size_t n = ctx.toa_s.size();
  std::vector<double> tau(n);

  if (policy.mode != EhTimeMode::grid_search) {
    for (std::size_t i = 0; i < n; ++i)
      tau[i] = eh_time_select(ctx.toa_s[i], ctx.harvest_rates_w[i], ctx.p_t_w, phy,
                              policy.mode);
    return tau;
  }

  if (policy.grid_points < 1)
    throw std::invalid_argument("eh_time: grid needs at least one point");

  // One-dimensional exhaustive search: every node harvests for the same
  // fraction c of its off window, c on a grid over (0, 1] whose floor is
  // 1/grid_points and whose last point is the full off window.  Scaling all
  // EH times together keeps same-SF windows aligned, so the search trades
  // harvested power against cross-SF overlap exactly like the per-node
  // closed forms do.  Each candidate is scored by the min-rate the
  // configured power rule reaches; ascending scan, strict improvement.
  const Matrix rho = correlation_matrix(ctx.corr, ctx.sfs);
  std::vector<double> delta1(n);
  for (std::size_t i = 0; i < n; ++i) delta1[i] = time_off(ctx.toa_s[i], phy);

  std::vector<double> best_tau;
  double best_score = -1.0;
  std::vector<TxWindow> windows(n);
  std::vector<double> caps(n);
  for (int k = 1; k <= policy.grid_points; ++k) {
    const double c = static_cast<double>(k) / policy.grid_points;
    for (std::size_t i = 0; i < n; ++i) {
      tau[i] = c * delta1[i];
      windows[i] = {tau[i], ctx.toa_s[i]};
      caps[i] = power_cap(tau[i], ctx.toa_s[i], ctx.harvest_rates_w[i], ctx.p_t_w);
    }
    const Matrix col = collision_matrix(windows, col_mode);
    const Matrix w = interference_weights(col, ctx.toa_s, rho);
    double score;
    if (ctx.power_mode_maxmin) {
      score = maxmin_power(caps, ctx.gains, w, ctx.noise_w, ctx.maxmin_tol_nats).t_star_nats;
    } else {
      score = rates(caps, ctx.gains, w, ctx.noise_w).min_rate_nats;
    }
    if (score > best_score) {
      best_score = score;
      best_tau = tau;
    }
  }
  return best_tau;
}

EhTimeMode matching_eh_mode(CollisionMode col_mode) {
  return col_mode == CollisionMode::eh_dependent ? EhTimeMode::max_off_time
                                                 : EhTimeMode::cap_matching;
}

FeasibilityResult feasible(double t_nats, const std::vector<double>& caps_w,
                           const std::vector<double>& gains, const Matrix& weights,
                           double noise_w) {
  const std::size_t n = caps_w.size();
  if (n != gains.size() || n != weights.size())
    throw std::invalid_argument("feasible: mismatched sizes");
  if (!std::isfinite(t_nats) || !std::isfinite(noise_w))
    throw std::invalid_argument("feasible: non-finite input");
  for (std::size_t i = 0; i < n; ++i)
    if (!std::isfinite(caps_w[i]) || !std::isfinite(gains[i]))
      throw std::invalid_argument("feasible: non-finite input");

  const double beta = std::expm1(t_nats);  // required SINR
  FeasibilityResult res;
  res.powers_w.assign(n, 0.0);
  res.solves = 1;

  // (I - beta W) q = beta noise in received powers q = p g.
  Matrix a(n);
  std::vector<double> q(n, beta * noise_w);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t m = 0; m < n; ++m)
      a.at(i, m) = (i == m ? 1.0 : 0.0) - beta * weights.at(i, m);
  if (!solve_inplace(a, q)) return res;  // singular: at the critical coupling

  // A finite nonnegative solution certifies the coupling is subcritical and
  // is the least received-power vector meeting the target; anything else
  // means no finite powers reach the target at all.
  for (std::size_t i = 0; i < n; ++i)
    if (!std::isfinite(q[i]) || q[i] < 0.0) return res;
  for (std::size_t i = 0; i < n; ++i)
    if (q[i] > caps_w[i] * gains[i] * (1.0 + 1e-12)) return res;

  for (std::size_t i = 0; i < n; ++i)
    res.powers_w[i] = gains[i] > 0.0 ? std::min(q[i] / gains[i], caps_w[i]) : 0.0;
  res.feasible = true;
  return res;
}

PowerSolution maxmin_power(const std::vector<double>& caps_w,
                           const std::vector<double>& gains, const Matrix& weights,
                           double noise_w, double tol_nats, int max_iter) {
  if (caps_w.empty()) throw std::runtime_error("empty active set");

  PowerSolution sol;
  // Decoupled set: nobody limits anybody, so everyone transmits at the cap
  // and the common rate is the weakest solo rate.
  if (all_weights_zero(weights)) {
    sol.powers_w = caps_w;
    sol.t_star_nats = min_solo_rate(caps_w, gains, noise_w);
    sol.converged = true;
    return sol;
  }

  double t_hi = 0.0;
  for (std::size_t i = 0; i < caps_w.size(); ++i)
    t_hi = std::max(t_hi, std::log1p(caps_w[i] * gains[i] / noise_w));

  {
    // The upper bound itself may be supportable (weak coupling).
    FeasibilityResult top = feasible(t_hi, caps_w, gains, weights, noise_w);
    if (top.feasible) {
      sol.powers_w = std::move(top.powers_w);
      sol.t_star_nats = t_hi;
      sol.converged = true;
      return sol;
    }
  }

  double t_lo = 0.0;  // q = 0, p = 0: always feasible
  sol.powers_w.assign(caps_w.size(), 0.0);
  while (t_hi - t_lo > tol_nats && sol.iterations < max_iter) {
    const double mid = 0.5 * (t_lo + t_hi);
    FeasibilityResult res = feasible(mid, caps_w, gains, weights, noise_w);
    if (res.feasible) {
      t_lo = mid;
      sol.powers_w = std::move(res.powers_w);
    } else {
      t_hi = mid;
    }
    ++sol.iterations;
  }
  sol.t_star_nats = t_lo;
  sol.converged = t_hi - t_lo <= tol_nats;
  return sol;
}

} // namespace lora
