// Closed-form collision times and the pairwise matrix.
#include "lora/collision.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

namespace lora {

double collision_time(const TxWindow& a, const TxWindow& b) {
  const double dtau = a.start_s - b.start_s;
  const double dt = a.duration_s - b.duration_s;
  const double big = std::max(a.duration_s, b.duration_s);
  const double small = std::min(a.duration_s, b.duration_s);
  const double adtau = std::abs(dtau);

  // A zero start or duration difference satisfies either sign convention;
  // route it through the same-sign branch (the branches agree there).
  const bool same_sign = (dtau >= 0.0 && dt >= 0.0) || (dtau <= 0.0 && dt <= 0.0);
  if (same_sign) {
    // The later window is also the longer one: the short window's tail is
    // swallowed unless the start gap exceeds the short duration.
    return adtau >= small ? 0.0 : small - adtau;
  }
  // Opposite signs: the later window is the shorter one and may be contained.
  if (adtau >= big) return 0.0;
  if (adtau >= std::abs(dt)) return big - adtau;
  return small;
}

double collision_time_oracle(const TxWindow& a, const TxWindow& b) {
  const double lo = std::max(a.start_s, b.start_s);
  const double hi = std::min(a.start_s + a.duration_s, b.start_s + b.duration_s);
  return std::max(0.0, hi - lo);
}

double worst_case_collision(double t_a_s, double t_b_s) {
  return std::min(t_a_s, t_b_s);
}

Matrix collision_matrix(const std::vector<TxWindow>& windows, CollisionMode mode) {
  const std::size_t n = windows.size();
  Matrix m(n);
  for (std::size_t i = 0; i < n; ++i) {
    m.at(i, i) = windows[i].duration_s;  // full self-overlap by convention
    for (std::size_t j = i + 1; j < n; ++j) {
      const double c = mode == CollisionMode::worst_case
                           ? worst_case_collision(windows[i].duration_s, windows[j].duration_s)
                           : collision_time(windows[i], windows[j]);
      m.at(i, j) = c;
      m.at(j, i) = c;
    }
  }
  return m;
}

void write_matrix_csv(const Matrix& m, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("matrix csv: cannot open " + path);
  out.precision(17);
  for (std::size_t i = 0; i < m.size(); ++i) {
    for (std::size_t j = 0; j < m.size(); ++j) {
      if (j) out << ',';
      out << m.at(i, j);
    }
    out << '\n';
  }
}

} // namespace lora
