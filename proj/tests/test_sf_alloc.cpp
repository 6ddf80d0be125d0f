#include "lora/sf_alloc.hpp"

#include "lora/energy.hpp"
#include "lora/units.hpp"

#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <numeric>
#include <vector>

using namespace lora;

namespace {

// Hand-built topology: n users on the x axis at the given distances.
Topology line_topology(const std::vector<double>& distances) {
  Topology topo;
  topo.cell_radius_m = 100.0;
  topo.pathloss_exponent = 3.5;
  topo.min_distance_m = 1.0;
  for (double d : distances) {
    Topology::User u;
    u.x_m = d;
    u.distance_m = d;
    u.fading = 1.0;
    u.gain = std::pow(d, -3.5);
    topo.users.push_back(u);
  }
  return topo;
}

std::vector<int> iota_ids(int n) {
  std::vector<int> ids(n);
  std::iota(ids.begin(), ids.end(), 0);
  return ids;
}

} // namespace

TEST_CASE("equal split sizes") {
  CHECK(group_sizes_unfair(600) == std::array<int, 6>{100, 100, 100, 100, 100, 100});
  CHECK(group_sizes_unfair(601) == std::array<int, 6>{101, 100, 100, 100, 100, 100});
  CHECK(group_sizes_unfair(603) == std::array<int, 6>{101, 101, 101, 100, 100, 100});
  CHECK(group_sizes_unfair(5) == std::array<int, 6>{1, 1, 1, 1, 1, 0});
  CHECK(group_sizes_unfair(0) == std::array<int, 6>{0, 0, 0, 0, 0, 0});
}

TEST_CASE("airtime-balancing split sizes") {
  // Weights f/2^f over f = 7..12, normalized: more users on the fast SFs so
  // each user's share of channel time comes out even.
  CHECK(group_sizes_fair(600) == std::array<int, 6>{270, 154, 87, 48, 27, 14});

  for (int n : {1, 2, 3, 7, 50, 99, 313, 314, 601}) {
    const auto sizes = group_sizes_fair(n);
    CHECK(std::accumulate(sizes.begin(), sizes.end(), 0) == n);
    // Monotone: a faster SF never gets fewer users.
    for (int f = 0; f < 5; ++f) CHECK(sizes[f] >= sizes[f + 1]);
  }
}

TEST_CASE("activation threshold is inclusive") {
  const PhyParams phy;
  const double p_t = 1.0;
  const double threshold = dbm_to_watts(sensitivity_min_dbm(phy));
  // Huge harvest: the cap is the radio limit, so RSSI = gain exactly.
  const std::vector<double> harvest = {1.0, 1.0, 1.0};
  const std::vector<double> gains = {threshold,                      // exactly at: active
                                     std::nextafter(threshold, 0.0),  // just below: not
                                     2.0 * threshold};
  const auto active = activate(gains, harvest, phy, p_t);
  CHECK(active == std::vector<int>{0, 2});
}

TEST_CASE("nodes that harvest nothing cannot activate") {
  const PhyParams phy;
  const auto active = activate({1.0, 1.0}, {0.0, 1.0}, phy, 0.05);
  CHECK(active == std::vector<int>{1});
}

TEST_CASE("equal split ranks by RSSI with id tiebreak") {
  // 12 users, descending RSSI by construction: ids 0,1 strongest -> SF7.
  std::vector<double> rssi(12);
  for (int i = 0; i < 12; ++i) rssi[i] = 1e-6 / (1.0 + i);
  const SfAssignment asg = allocate_unfair(rssi, iota_ids(12), 12);
  CHECK(asg.group_sizes == std::array<int, 6>{2, 2, 2, 2, 2, 2});
  CHECK(asg.sf_of[0] == 7);
  CHECK(asg.sf_of[1] == 7);
  CHECK(asg.sf_of[5] == 9);
  CHECK(asg.sf_of[10] == 12);
  CHECK(asg.sf_of[11] == 12);

  // Ties broken by id: equal RSSI everywhere keeps ascending id order.
  std::vector<double> flat(12, 1e-6);
  const SfAssignment tied = allocate_unfair(flat, iota_ids(12), 12);
  CHECK(tied.sf_of[0] == 7);
  CHECK(tied.sf_of[2] == 8);
  CHECK(tied.sf_of[11] == 12);
}

TEST_CASE("airtime-balancing allocation fills fast groups first") {
  std::vector<double> rssi(20);
  for (int i = 0; i < 20; ++i) rssi[i] = 1e-6 / (1.0 + i);
  const SfAssignment asg = allocate_fair(rssi, iota_ids(20), 20);
  const auto sizes = group_sizes_fair(20);
  CHECK(asg.group_sizes == sizes);
  // The strongest users take SF7.
  for (int i = 0; i < sizes[0]; ++i) CHECK(asg.sf_of[i] == 7);
}

TEST_CASE("distance rings with exact boundaries") {
  // R = 100: ring width 100/6.  A user exactly on a boundary joins the outer
  // ring; the rim belongs to SF12.
  const double ring = 100.0 / 6.0;
  const Topology topo =
      line_topology({1.0, 0.5 * ring, ring, 1.5 * ring, 2.0 * ring, 5.0 * ring, 99.0, 100.0});
  const SfAssignment asg = allocate_distance(topo, iota_ids(8));
  CHECK(asg.sf_of[0] == 7);   // innermost
  CHECK(asg.sf_of[1] == 7);
  CHECK(asg.sf_of[2] == 8);   // exactly at R/6
  CHECK(asg.sf_of[3] == 8);
  CHECK(asg.sf_of[4] == 9);   // exactly at 2R/6
  CHECK(asg.sf_of[5] == 12);  // exactly at 5R/6
  CHECK(asg.sf_of[6] == 12);
  CHECK(asg.sf_of[7] == 12);  // the rim
}

TEST_CASE("pathloss allocation picks the smallest workable SF") {
  const PhyParams phy;
  // RSSI exactly at a threshold qualifies for that SF.
  const std::vector<double> rssi = {
      dbm_to_watts(-120.0),  // above SF7 sensitivity
      dbm_to_watts(-123.0),  // exactly SF7
      std::nextafter(dbm_to_watts(-123.0), 0.0),  // just below: SF8
      dbm_to_watts(-130.0),  // between SF9 and SF10 thresholds
      dbm_to_watts(-137.0),  // exactly the SF12 floor
  };
  const SfAssignment asg = allocate_pathloss(rssi, iota_ids(5), 5, phy);
  CHECK(asg.sf_of[0] == 7);
  CHECK(asg.sf_of[1] == 7);
  CHECK(asg.sf_of[2] == 8);
  CHECK(asg.sf_of[3] == 10);
  CHECK(asg.sf_of[4] == 12);
}

TEST_CASE("assignments partition the active set") {
  std::vector<double> rssi(50);
  for (int i = 0; i < 50; ++i) rssi[i] = 1e-6 / (1.0 + (i * 7) % 50);
  std::vector<int> active;
  for (int i = 0; i < 50; i += 2) active.push_back(i);  // evens only

  const Topology topo = line_topology(std::vector<double>(50, 10.0));
  for (const SfPolicy policy :
       {SfPolicy::unfair, SfPolicy::fair, SfPolicy::distance, SfPolicy::pathloss}) {
    CAPTURE(static_cast<int>(policy));
    const SfAssignment asg = allocate(policy, topo, rssi, active, PhyParams());
    CHECK(asg.active_ids == active);
    std::array<int, 6> counts{};
    for (int id = 0; id < 50; ++id) {
      if (id % 2 == 1) {
        CHECK(asg.sf_of[id] == -1);  // inactive users carry no SF
      } else {
        REQUIRE(asg.sf_of[id] >= 7);
        REQUIRE(asg.sf_of[id] <= 12);
        ++counts[asg.sf_of[id] - 7];
      }
    }
    CHECK(counts == asg.group_sizes);
    CHECK(std::accumulate(counts.begin(), counts.end(), 0) == 25);
  }
}

TEST_CASE("assignment csv export") {
  std::vector<double> rssi = {1e-6, 2e-6, 3e-6};
  const SfAssignment asg = allocate_unfair(rssi, iota_ids(3), 3);
  const std::string path = "sf_alloc_dump.csv";
  dump_assignment_csv(asg, rssi, "unfair", path);
  std::FILE* f = std::fopen(path.c_str(), "r");
  REQUIRE(f != nullptr);
  char line[256];
  REQUIRE(std::fgets(line, sizeof line, f) != nullptr);
  CHECK(std::string(line).find("id") == 0);
  int rows = 0;
  while (std::fgets(line, sizeof line, f)) ++rows;
  std::fclose(f);
  std::remove(path.c_str());
  CHECK(rows == 3);
}
