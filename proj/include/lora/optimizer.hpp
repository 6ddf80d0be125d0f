// EH-time selection and max-min transmit power allocation.  The EH time
// trades harvested energy (longer is better) against window overlap; the two
// closed forms cover the monotone collision cases and a one-dimensional grid
// search covers the rest.  Powers are then balanced by bisection on the
// common rate with an exact linear feasibility oracle.
#pragma once

#include "lora/collision.hpp"
#include "lora/interference.hpp"
#include "lora/matrix.hpp"
#include "lora/phy.hpp"

#include <vector>

namespace lora {

enum class EhTimeMode {
  max_off_time,  // delta1: harvest through the whole duty-cycle off window
  cap_matching,  // delta2: harvest just long enough to reach the power limit
  grid_search,   // exhaustive one-dimensional search over scaled off windows
};

struct EhTimePolicy {
  EhTimeMode mode = EhTimeMode::max_off_time;
  int grid_points = 64;
};

/// Closed-form EH time for one node.
///   max_off_time: ((1 - d)/d) * T_a
///   cap_matching: min(p_t / E_n, (1 - d)/d) * T_a, i.e. the shortest harvest
///                 that already yields the full transmit power; nodes with
///                 E_n = 0 fall back to the full off window.
/// grid_search is a system-level decision; use select_eh_times for it.
double eh_time_select(double t_a_s, double harvest_rate_w, double p_t_w,
                      const PhyParams& phy, EhTimeMode mode);

/// Inputs the grid search needs to score a candidate EH-time vector.
struct EhSearchContext {
  std::vector<double> toa_s;            // per active user
  std::vector<double> harvest_rates_w;  // per active user
  std::vector<double> gains;            // per active user
  std::vector<int> sfs;                 // per active user
  CorrelationPolicy corr;
  double p_t_w = 0.0;
  double noise_w = 0.0;
  // Candidates are scored by the same power rule the pipeline applies next.
  bool power_mode_maxmin = true;
  double maxmin_tol_nats = 1e-6;
};

/// EH times for the whole active set.  The closed-form modes apply
/// eh_time_select per node.  grid_search sweeps a common fraction c over
/// grid_points values in (0, 1], scores the candidate tau = c * max_off_time
/// by the system min-rate at the resulting power caps, and keeps the best;
/// the scan runs in ascending c and later candidates must strictly improve,
/// so ties resolve to the smallest maximizing fraction.
std::vector<double> select_eh_times(const EhTimePolicy& policy, CollisionMode col_mode,
                                    const EhSearchContext& ctx, const PhyParams& phy);

/// The closed form matching a collision mode: overlap shrinks (or is gone)
/// as harvesting extends under eh_dependent windows, so the full off window
/// is optimal; under worst_case overlap the EH time only matters through the
/// power cap, so harvesting past the cap is pointless.
EhTimeMode matching_eh_mode(CollisionMode col_mode);

struct FeasibilityResult {
  bool feasible = false;
  std::vector<double> powers_w;  // componentwise-minimal when feasible
  int solves = 0;                // linear systems decided (diagnostics)
};

/// Can every user reach rate t (nats) within its power cap?  In received
/// powers q = p * g the rate constraints at equality are the linear system
/// (I - (e^t - 1) W) q = (e^t - 1) noise, whose solution - when finite and
/// nonnegative - is componentwise minimal among all power vectors meeting
/// the target (it is the limit of the monotone iteration
/// p <- (e^t - 1)(W p g + noise) / g from zero).  Feasible exactly when that
/// solution exists and fits under the caps; a singular system or a negative
/// component certifies that the target is unreachable at any power.
/// Throws std::invalid_argument on non-finite inputs.
FeasibilityResult feasible(double t_nats, const std::vector<double>& caps_w,
                           const std::vector<double>& gains, const Matrix& weights,
                           double noise_w);

struct PowerSolution {
  std::vector<double> powers_w;
  double t_star_nats = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Largest common rate supportable within the caps, by bisection on
/// [0, ln(1 + max_n cap_n g_n / noise)].  Decoupled sets (all weights zero)
/// short-circuit to full caps and the weakest solo rate.  Throws
/// std::runtime_error("empty active set") on empty input.
PowerSolution maxmin_power(const std::vector<double>& caps_w,
                           const std::vector<double>& gains, const Matrix& weights,
                           double noise_w, double tol_nats = 1e-6, int max_iter = 60);

} // namespace lora
