// Disk-cell topology sampling and channel gains.
#include "lora/geometry.hpp"

#include "lora/rng.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <system_error>

namespace lora {

namespace {

// Shortest round-trip decimal form; CSV files must reload bit-exactly.
std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& s) {
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw std::runtime_error("topology csv: bad number '" + s + "'");
  return v;
}

std::size_t node_count(double density_per_km2, double radius_m, bool poisson, Rng& rng) {
  const double area_km2 = std::numbers::pi * radius_m * radius_m * 1e-6;
  const double mean = density_per_km2 * area_km2;
  if (poisson) return rng.poisson(mean);
  return static_cast<std::size_t>(std::llround(mean));
}

} // namespace

void GeometryConfig::validate() const {
  if (cell_radius_m <= 0.0)
    throw std::invalid_argument("geometry: cell radius must be positive");
  if (user_density_per_km2 < 0.0 || beacon_density_per_km2 < 0.0)
    throw std::invalid_argument("geometry: densities must be nonnegative");
  if (pathloss_exponent <= 2.0)
    throw std::invalid_argument("geometry: pathloss exponent must exceed 2");
  if (min_distance_m <= 0.0 || min_distance_m >= cell_radius_m)
    throw std::invalid_argument("geometry: guard radius must be in (0, cell radius)");
}

double channel_gain(double distance_m, double pathloss_exponent, double fading) {
  return fading * std::pow(distance_m, -pathloss_exponent);
}

double rssi(double tx_power_w, double gain) { return tx_power_w * gain; }

Topology sample_topology(const GeometryConfig& cfg, std::uint64_t seed) {
  cfg.validate();
  Rng rng(seed);
  Topology topo;
  topo.seed = seed;
  topo.cell_radius_m = cfg.cell_radius_m;
  topo.pathloss_exponent = cfg.pathloss_exponent;
  topo.min_distance_m = cfg.min_distance_m;

  // Draw order is part of the reproducibility contract: user count, user
  // attributes, beacon count, beacon positions, then the beacon-user fading
  // matrix beacon-major.
  const std::size_t n_users = node_count(cfg.user_density_per_km2, cfg.cell_radius_m,
                                         cfg.poisson_counts, rng);
  if (n_users == 0) throw std::runtime_error("empty topology");

  topo.users.reserve(n_users);
  for (std::size_t i = 0; i < n_users; ++i) {
    Topology::User u;
    // sqrt law: uniform over the disk area, clamped at the guard radius.
    const double r = std::max(cfg.cell_radius_m * std::sqrt(rng.uniform()),
                              cfg.min_distance_m);
    const double theta = 2.0 * std::numbers::pi * rng.uniform();
    u.x_m = r * std::cos(theta);
    u.y_m = r * std::sin(theta);
    u.distance_m = r;
    u.fading = rng.exponential();
    u.gain = channel_gain(u.distance_m, cfg.pathloss_exponent, u.fading);
    topo.users.push_back(u);
  }

  const std::size_t n_beacons = node_count(cfg.beacon_density_per_km2, cfg.cell_radius_m,
                                           cfg.poisson_counts, rng);
  topo.beacons.reserve(n_beacons);
  for (std::size_t b = 0; b < n_beacons; ++b) {
    Topology::Beacon bc;
    const double r = cfg.cell_radius_m * std::sqrt(rng.uniform());
    const double theta = 2.0 * std::numbers::pi * rng.uniform();
    bc.x_m = r * std::cos(theta);
    bc.y_m = r * std::sin(theta);
    topo.beacons.push_back(bc);
  }
  for (auto& bc : topo.beacons) {
    bc.fading.reserve(n_users);
    for (std::size_t i = 0; i < n_users; ++i) bc.fading.push_back(rng.exponential());
  }
  return topo;
}

void dump_topology_csv(const Topology& topo, const std::vector<double>& harvest_rates_w,
                       const std::string& path) {
  if (harvest_rates_w.size() != topo.users.size())
    throw std::invalid_argument("topology csv: one harvest rate per user required");
  std::ofstream out(path);
  if (!out) throw std::runtime_error("topology csv: cannot open " + path);
  out << "id,kind,x_m,y_m,distance_m,fading,gain,harvest_rate_w\n";
  for (std::size_t i = 0; i < topo.users.size(); ++i) {
    const auto& u = topo.users[i];
    out << i << ",user," << format_double(u.x_m) << ',' << format_double(u.y_m) << ','
        << format_double(u.distance_m) << ',' << format_double(u.fading) << ','
        << format_double(u.gain) << ',' << format_double(harvest_rates_w[i]) << '\n';
  }
  for (std::size_t b = 0; b < topo.beacons.size(); ++b) {
    const auto& bc = topo.beacons[b];
    const double d = std::hypot(bc.x_m, bc.y_m);
    out << topo.users.size() + b << ",beacon," << format_double(bc.x_m) << ','
        << format_double(bc.y_m) << ',' << format_double(d) << ",0,0,0\n";
  }
}

std::pair<Topology, std::vector<double>> load_topology_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("topology csv: cannot open " + path);
  std::string line;
  if (!std::getline(in, line) || line != "id,kind,x_m,y_m,distance_m,fading,gain,harvest_rate_w")
    throw std::runtime_error("topology csv: unexpected header");

  Topology topo;
  std::vector<double> harvest;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string field;
    std::vector<std::string> fields;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (fields.size() != 8) throw std::runtime_error("topology csv: bad row '" + line + "'");
    if (fields[1] == "user") {
      Topology::User u;
      u.x_m = parse_double(fields[2]);
      u.y_m = parse_double(fields[3]);
      u.distance_m = parse_double(fields[4]);
      u.fading = parse_double(fields[5]);
      u.gain = parse_double(fields[6]);
      topo.users.push_back(u);
      harvest.push_back(parse_double(fields[7]));
    } else if (fields[1] == "beacon") {
      Topology::Beacon bc;
      bc.x_m = parse_double(fields[2]);
      bc.y_m = parse_double(fields[3]);
      topo.beacons.push_back(bc);
    } else {
      throw std::runtime_error("topology csv: unknown node kind '" + fields[1] + "'");
    }
  }
  if (topo.users.empty()) throw std::runtime_error("empty topology");
  // Fading draws are not persisted; reloaded beacons carry the mean.  The
  // generative parameters (radius, exponent) are likewise not in the file:
  // a loaded topology is consumed through its gains and harvest rates.
  for (auto& bc : topo.beacons) bc.fading.assign(topo.users.size(), 1.0);
  return {std::move(topo), std::move(harvest)};
}

} // namespace lora
