// Scenario configuration: one struct covering the whole pipeline, a JSON
// file loader and dotted-path overrides.  Defaults reproduce the reference
// urban cell (R = 100 m, 10^4 users and 10^3 beacons per km^2, 17 dBm power
// limit, 1% duty cycle, sigmoidal harvester).
#pragma once

#include "lora/collision.hpp"
#include "lora/energy.hpp"
#include "lora/geometry.hpp"
#include "lora/interference.hpp"
#include "lora/optimizer.hpp"
#include "lora/phy.hpp"
#include "lora/sf_alloc.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace lora {

enum class PowerMode {
  maxmin,    // bisection-balanced rates
  full_cap,  // every node at its harvested cap
};

/// One named policy combination evaluated by a sweep.  Fields left unset fall
/// back to the base configuration.
struct Variant {
  std::string name;
  SfPolicy sf_policy;
  CorrelationPolicy::Kind corr_kind;
  CollisionMode col_mode;
  EhTimeMode eh_mode;
  PowerMode power_mode;
};

struct ScenarioConfig {
  GeometryConfig geometry;
  PhyParams phy;
  EhModel eh;
  double beacon_tx_w = 1.0;
  double p_t_w = 0.05011872336272722;  // 17 dBm

  SfPolicy sf_policy = SfPolicy::unfair;
  CorrelationPolicy corr;
  CollisionMode col_mode = CollisionMode::eh_dependent;
  EhTimePolicy eh_policy;
  PowerMode power_mode = PowerMode::maxmin;
  double maxmin_tol_nats = 1e-6;

  std::vector<std::uint64_t> seeds = default_seeds();
  std::vector<double> density_sweep = {1000.0, 2500.0, 5000.0, 7500.0, 10000.0};
  std::vector<Variant> variants;  // empty: sweep the base configuration only
  int threads = 0;                // 0: hardware concurrency

  static std::vector<std::uint64_t> default_seeds();  // 1..100

  /// Validates every nested block; throws std::invalid_argument.
  void validate() const;
};

/// Loads a JSON config file.  Missing keys keep their defaults; unknown keys
/// are an error so typos do not silently vanish.
ScenarioConfig load_config(const std::string& path);

/// Applies one "dotted.path=value" override (e.g. "phy.duty_cycle=0.02",
/// "corr.kind=none") on top of a config.  Values parse as JSON when possible
/// and as strings otherwise.
void apply_override(ScenarioConfig& cfg, const std::string& key_value);

/// Enum <-> label helpers shared by config parsing and CSV output.
const char* to_label(SfPolicy p);
const char* to_label(CorrelationPolicy::Kind k);
const char* to_label(CollisionMode m);
const char* to_label(EhTimeMode m);
const char* to_label(PowerMode m);
SfPolicy sf_policy_from(const std::string& s);
CorrelationPolicy::Kind corr_kind_from(const std::string& s);
CollisionMode col_mode_from(const std::string& s);
EhTimeMode eh_mode_from(const std::string& s);
PowerMode power_mode_from(const std::string& s);

/// A variant equal to the base configuration's policy fields.
Variant base_variant(const ScenarioConfig& cfg);

} // namespace lora
