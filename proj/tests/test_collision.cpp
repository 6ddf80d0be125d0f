#include "lora/collision.hpp"
#include "lora/phy.hpp"
#include "lora/rng.hpp"

#include <doctest.h>

#include <cmath>
#include <vector>

using namespace lora;

namespace {

const double kToa[6] = {0.045568, 0.080896, 0.161792, 0.323584, 0.647168, 1.130496};

} // namespace

TEST_CASE("closed form equals the interval-overlap oracle on random windows") {
  Rng rng(2024);
  for (int i = 0; i < 20000; ++i) {
    const TxWindow a{200.0 * rng.uniform(), kToa[rng.engine()() % 6]};
    const TxWindow b{200.0 * rng.uniform(), kToa[rng.engine()() % 6]};
    const double closed = collision_time(a, b);
    const double oracle = collision_time_oracle(a, b);
    CAPTURE(a.start_s);
    CAPTURE(b.start_s);
    CAPTURE(a.duration_s);
    CAPTURE(b.duration_s);
    CHECK(closed == doctest::Approx(oracle).epsilon(1e-12));
    CHECK(closed == collision_time(b, a));  // symmetric by construction
    CHECK(closed >= 0.0);
    CHECK(closed <= std::min(a.duration_s, b.duration_s) * (1.0 + 1e-12));
  }
}

TEST_CASE("branch boundaries are exact") {
  const double tn = 1.0, tm = 3.0;  // min 1, max 3

  // Same sign: overlap min(T) - |dtau| until it hits zero.
  CHECK(collision_time({0.0, tn}, {0.0, tm}) == tn);        // dtau = 0: full overlap
  CHECK(collision_time({0.5, tm}, {0.0, tn}) == 0.5);       // inside
  CHECK(collision_time({1.0, tm}, {0.0, tn}) == 0.0);       // |dtau| = min(T): gone
  CHECK(collision_time({2.0, tm}, {0.0, tn}) == 0.0);

  // Opposite signs: the short window slides through the long one.
  CHECK(collision_time({0.5, tn}, {0.0, tm}) == tn);        // |dtau| < |dT|: contained
  CHECK(collision_time({2.0, tn}, {0.0, tm}) == doctest::Approx(1.0));  // max(T)-|dtau|
  CHECK(collision_time({2.5, tn}, {0.0, tm}) == doctest::Approx(0.5));
  CHECK(collision_time({3.0, tn}, {0.0, tm}) == 0.0);       // |dtau| = max(T): gone
  CHECK(collision_time({4.0, tn}, {0.0, tm}) == 0.0);

  // |dtau| exactly |dT|: both opposite-sign expressions agree (continuity).
  CHECK(collision_time({2.0, tn}, {0.0, tm}) == doctest::Approx(tn));

  // Equal durations route through the same-sign branch.
  CHECK(collision_time({0.25, tn}, {0.0, tn}) == doctest::Approx(0.75));
  CHECK(collision_time({0.0, tn}, {0.0, tn}) == tn);
}

TEST_CASE("worst case is the shorter airtime") {
  CHECK(worst_case_collision(1.0, 3.0) == 1.0);
  CHECK(worst_case_collision(3.0, 1.0) == 1.0);
  CHECK(worst_case_collision(2.0, 2.0) == 2.0);
}

TEST_CASE("aligned duty-cycle windows separate different spreading factors") {
  // With every node harvesting for its full off window, transmissions start
  // at 99 * T_a.  Same-SF windows coincide; windows of different SFs can
  // never meet because the next SF starts later than this one ends:
  // 99 T_m >= 100 T_n whenever T_m / T_n >= 100/99, and the actual airtime
  // ratios are all >= 1.74.
  const PhyParams phy;
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j) {
      const double ti = time_on_air(SpreadingFactor(7 + i), phy);
      const double tj = time_on_air(SpreadingFactor(7 + j), phy);
      const TxWindow wi{time_off(ti, phy), ti};
      const TxWindow wj{time_off(tj, phy), tj};
      if (i == j)
        CHECK(collision_time(wi, wj) == ti);  // exactly full overlap
      else
        CHECK(collision_time(wi, wj) == 0.0);  // exactly none
    }
}

TEST_CASE("collision matrix modes") {
  const std::vector<TxWindow> windows = {
      {4.511232, 0.045568}, {4.511232, 0.045568}, {111.919104, 1.130496}};

  const Matrix eh = collision_matrix(windows, CollisionMode::eh_dependent);
  REQUIRE(eh.size() == 3);
  CHECK(eh.at(0, 0) == 0.045568);            // diagonal: own airtime
  CHECK(eh.at(2, 2) == 1.130496);
  CHECK(eh.at(0, 1) == 0.045568);            // co-SF aligned: full overlap
  CHECK(eh.at(0, 2) == 0.0);                 // cross-SF aligned: none
  CHECK(eh.at(2, 0) == 0.0);

  const Matrix wc = collision_matrix(windows, CollisionMode::worst_case);
  CHECK(wc.at(0, 1) == 0.045568);
  CHECK(wc.at(0, 2) == 0.045568);            // worst case ignores the timing
  CHECK(wc.at(2, 0) == 0.045568);
  CHECK(wc.at(2, 2) == 1.130496);

  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) {
      CHECK(eh.at(i, j) == eh.at(j, i));
      CHECK(wc.at(i, j) == wc.at(j, i));
      CHECK(eh.at(i, j) <= wc.at(i, j));  // actual overlap never beats worst case
    }
}

TEST_CASE("staggered same-duration windows overlap partially") {
  const double t = kToa[2];
  const TxWindow a{10.0, t};
  const TxWindow b{10.0 + 0.25 * t, t};
  CHECK(collision_time(a, b) == doctest::Approx(0.75 * t).epsilon(1e-12));
}
