// Cell geometry: node placement on a disk around the gateway, pathloss and
// block-fading channel gains, and topology CSV round-trip.
#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace lora {

struct GeometryConfig {
  double cell_radius_m = 100.0;
  double user_density_per_km2 = 1e4;
  double beacon_density_per_km2 = 1e3;
  double pathloss_exponent = 3.5;
  double min_distance_m = 1.0;  // guard radius against the d -> 0 singularity
  bool poisson_counts = false;  // default: deterministic rounded-mean counts

  void validate() const;
};

/// One sampled cell: users and power beacons with fixed positions and one
/// fading draw per link (block fading; a new trial redraws everything).
struct Topology {
  struct User {
    double x_m = 0.0;
    double y_m = 0.0;
    double distance_m = 0.0;  // to the gateway at the origin, >= min_distance
    double fading = 1.0;      // unit-mean exponential power fading to the gateway
    double gain = 0.0;        // fading * distance^-alpha
  };
  struct Beacon {
    double x_m = 0.0;
    double y_m = 0.0;
    // Fading of the beacon->user link, one entry per user.  Empty on
    // topologies loaded from CSV (harvest rates are carried in the file).
    std::vector<double> fading;
  };

  std::uint64_t seed = 0;
  double cell_radius_m = 0.0;
  double pathloss_exponent = 0.0;
  double min_distance_m = 0.0;
  std::vector<User> users;
  std::vector<Beacon> beacons;
};

/// Pathloss channel gain h * d^-alpha (all linear).
double channel_gain(double distance_m, double pathloss_exponent, double fading);

/// Received signal strength in watts for a transmit power and a gain.
double rssi(double tx_power_w, double gain);

/// Draws one topology.  Node counts are round(density * area) by default, or
/// Poisson draws with that mean when cfg.poisson_counts is set.  Throws
/// std::runtime_error("empty topology") when no user lands in the cell.
Topology sample_topology(const GeometryConfig& cfg, std::uint64_t seed);

/// Writes one row per node (users first, then beacons) with the per-user
/// harvest rate alongside so a reloaded topology is usable without the
/// beacon fading draws.  Values are shortest-round-trip formatted.
void dump_topology_csv(const Topology& topo, const std::vector<double>& harvest_rates_w,
                       const std::string& path);

/// Reads a file written by dump_topology_csv.  Beacon->user fading is not in
/// the file; the returned beacons carry unit fading and the per-user harvest
/// rates are returned alongside.
std::pair<Topology, std::vector<double>> load_topology_csv(const std::string& path);

} // namespace lora
