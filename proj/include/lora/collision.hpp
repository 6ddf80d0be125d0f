// Pairwise collision-time calculus for harvest-then-transmit uplinks.  Every
// node harvests from t = 0 and transmits for its airtime as soon as harvesting
// ends, so a transmission occupies [tau_e, tau_e + T_a] on a common timeline
// and the overlap of two such windows has a closed form.
#pragma once

#include "lora/matrix.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace lora {

/// One transmission window on the shared trial timeline.
struct TxWindow {
  double start_s = 0.0;     // harvest end = transmit start (tau_e)
  double duration_s = 0.0;  // airtime T_a
};

enum class CollisionMode {
  eh_dependent,  // overlap of the actual windows (depends on the EH times)
  worst_case,    // maximal possible overlap regardless of timing
};

/// Closed-form overlap of two windows, in seconds.  Writing dtau for the
/// start difference and dT for the duration difference, the overlap is
/// branch-resolved on whether dtau and dT share a sign:
///   same sign:      0 when |dtau| >= min(T); else min(T) - |dtau|
///   opposite signs: 0 when |dtau| >= max(T);
///                   max(T) - |dtau| when |dT| <= |dtau| < max(T);
///                   min(T) when |dtau| < |dT|
/// Zero differences are routed through the same-sign branch; both branches
/// agree there.  Equals the interval overlap max(0, min(ends) - max(starts)).
double collision_time(const TxWindow& a, const TxWindow& b);

/// Independent interval-overlap evaluation of the same quantity; kept as the
/// reference implementation for equivalence tests.
double collision_time_oracle(const TxWindow& a, const TxWindow& b);

/// Largest overlap two windows of the given durations can have: min(Ta, Tb).
double worst_case_collision(double t_a_s, double t_b_s);

/// Full pairwise matrix for a set of windows.  Entry (n, m) is the collision
/// time between n and m under the requested mode; the diagonal is each
/// window's own duration.  Symmetric by construction.
Matrix collision_matrix(const std::vector<TxWindow>& windows, CollisionMode mode);

/// Debug export, one row per line.
void write_matrix_csv(const Matrix& m, const std::string& path);

} // namespace lora
