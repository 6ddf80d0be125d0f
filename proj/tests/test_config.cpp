#include "lora/config.hpp"

#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>

using namespace lora;

namespace {

struct TempFile {
  std::string path;
  explicit TempFile(const std::string& name, const std::string& content) : path(name) {
    std::ofstream out(path);
    out << content;
  }
  ~TempFile() { std::remove(path.c_str()); }
};

} // namespace

TEST_CASE("defaults validate and carry the reference scenario") {
  ScenarioConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  CHECK(cfg.geometry.cell_radius_m == 100.0);
  CHECK(cfg.geometry.user_density_per_km2 == 1e4);
  CHECK(cfg.p_t_w == doctest::Approx(0.05011872336272722).epsilon(1e-15));  // 17 dBm
  CHECK(cfg.phy.duty_cycle == 0.01);
  CHECK(cfg.eh.kind == EhModel::Kind::sigmoidal);
  CHECK(cfg.seeds.size() == 100);
  CHECK(cfg.seeds.front() == 1);
  CHECK(cfg.seeds.back() == 100);
  CHECK(cfg.density_sweep == std::vector<double>{1000.0, 2500.0, 5000.0, 7500.0, 10000.0});
}

TEST_CASE("enum labels round trip") {
  for (const auto p : {SfPolicy::unfair, SfPolicy::fair, SfPolicy::distance,
                       SfPolicy::pathloss})
    CHECK(sf_policy_from(to_label(p)) == p);
  for (const auto k :
       {CorrelationPolicy::Kind::none, CorrelationPolicy::Kind::co_sf_only,
        CorrelationPolicy::Kind::co_and_inter_sf, CorrelationPolicy::Kind::custom})
    CHECK(corr_kind_from(to_label(k)) == k);
  for (const auto m : {CollisionMode::eh_dependent, CollisionMode::worst_case})
    CHECK(col_mode_from(to_label(m)) == m);
  for (const auto m :
       {EhTimeMode::max_off_time, EhTimeMode::cap_matching, EhTimeMode::grid_search})
    CHECK(eh_mode_from(to_label(m)) == m);
  for (const auto m : {PowerMode::maxmin, PowerMode::full_cap})
    CHECK(power_mode_from(to_label(m)) == m);

  CHECK_THROWS_AS(sf_policy_from("bogus"), std::invalid_argument);
  CHECK_THROWS_AS(col_mode_from(""), std::invalid_argument);
}

TEST_CASE("json config loads over the defaults") {
  const TempFile file("config_ok.json", R"({
    "geometry": {"cell_radius_m": 250.0, "user_density_per_km2": 2000.0},
    "phy": {"duty_cycle": 0.02, "payload_bytes": 20},
    "eh": {"kind": "linear", "linear_efficiency": 0.7},
    "sf_policy": "fair",
    "corr": {"kind": "co_sf_only", "rho_co": 0.5},
    "col_mode": "worst_case",
    "eh_policy": {"mode": "grid_search", "grid_points": 16},
    "power_mode": "full_cap",
    "seeds": [3, 1, 4],
    "density_sweep": [500.0, 1500.0],
    "threads": 2
  })");
  const ScenarioConfig cfg = load_config(file.path);
  CHECK(cfg.geometry.cell_radius_m == 250.0);
  CHECK(cfg.geometry.user_density_per_km2 == 2000.0);
  CHECK(cfg.geometry.beacon_density_per_km2 == 1000.0);  // untouched default
  CHECK(cfg.phy.duty_cycle == 0.02);
  CHECK(cfg.phy.payload_bytes == 20);
  CHECK(cfg.eh.kind == EhModel::Kind::linear);
  CHECK(cfg.eh.linear_efficiency == 0.7);
  CHECK(cfg.sf_policy == SfPolicy::fair);
  CHECK(cfg.corr.kind == CorrelationPolicy::Kind::co_sf_only);
  CHECK(cfg.corr.rho_co == 0.5);
  CHECK(cfg.col_mode == CollisionMode::worst_case);
  CHECK(cfg.eh_policy.mode == EhTimeMode::grid_search);
  CHECK(cfg.eh_policy.grid_points == 16);
  CHECK(cfg.power_mode == PowerMode::full_cap);
  CHECK(cfg.seeds == std::vector<std::uint64_t>{3, 1, 4});
  CHECK(cfg.density_sweep == std::vector<double>{500.0, 1500.0});
  CHECK(cfg.threads == 2);
}

TEST_CASE("unknown keys are rejected") {
  const TempFile file("config_typo.json", R"({"phy": {"duty_cycel": 0.02}})");
  CHECK_THROWS_AS(load_config(file.path), std::invalid_argument);
  const TempFile file2("config_typo2.json", R"({"geometri": {}})");
  CHECK_THROWS_AS(load_config(file2.path), std::invalid_argument);
}

TEST_CASE("sensitivity table needs all six factors") {
  const TempFile file("config_sens.json",
                      R"({"phy": {"sensitivity_dbm": {"7": -120.0}}})");
  CHECK_THROWS_AS(load_config(file.path), std::invalid_argument);

  const TempFile ok("config_sens_ok.json", R"({"phy": {"sensitivity_dbm": {
    "7": -120.0, "8": -123.0, "9": -126.0, "10": -129.0, "11": -131.5, "12": -134.0
  }}})");
  const ScenarioConfig cfg = load_config(ok.path);
  CHECK(cfg.phy.sensitivity_dbm[0] == -120.0);
  CHECK(cfg.phy.sensitivity_dbm[5] == -134.0);
}

TEST_CASE("invalid values fail validation at load time") {
  const TempFile file("config_bad.json", R"({"phy": {"duty_cycle": 0.0}})");
  CHECK_THROWS_AS(load_config(file.path), std::invalid_argument);
  CHECK_THROWS_AS(load_config("no_such_config.json"), std::runtime_error);
  const TempFile garbled("config_garbled.json", "{not json");
  CHECK_THROWS(load_config(garbled.path));
}

TEST_CASE("dotted-path overrides") {
  ScenarioConfig cfg;
  apply_override(cfg, "phy.duty_cycle=0.02");
  CHECK(cfg.phy.duty_cycle == 0.02);
  apply_override(cfg, "corr.kind=none");
  CHECK(cfg.corr.kind == CorrelationPolicy::Kind::none);
  apply_override(cfg, "sf_policy=pathloss");
  CHECK(cfg.sf_policy == SfPolicy::pathloss);
  apply_override(cfg, "seeds=[5,6,7]");
  CHECK(cfg.seeds == std::vector<std::uint64_t>{5, 6, 7});
  apply_override(cfg, "geometry.cell_radius_m=50");
  CHECK(cfg.geometry.cell_radius_m == 50.0);
  apply_override(cfg, "eh_policy.grid_points=8");
  CHECK(cfg.eh_policy.grid_points == 8);

  CHECK_THROWS_AS(apply_override(cfg, "no_equals_sign"), std::invalid_argument);
  CHECK_THROWS_AS(apply_override(cfg, "phy.no_such_field=1"), std::invalid_argument);
  // Overrides re-validate: a bad value cannot slip through.
  CHECK_THROWS_AS(apply_override(cfg, "phy.duty_cycle=-0.5"), std::invalid_argument);
}

TEST_CASE("base variant mirrors the configuration") {
  ScenarioConfig cfg;
  cfg.sf_policy = SfPolicy::distance;
  cfg.col_mode = CollisionMode::worst_case;
  cfg.eh_policy.mode = EhTimeMode::cap_matching;
  cfg.power_mode = PowerMode::full_cap;
  cfg.corr.kind = CorrelationPolicy::Kind::co_sf_only;
  const Variant v = base_variant(cfg);
  CHECK(v.sf_policy == SfPolicy::distance);
  CHECK(v.corr_kind == CorrelationPolicy::Kind::co_sf_only);
  CHECK(v.col_mode == CollisionMode::worst_case);
  CHECK(v.eh_mode == EhTimeMode::cap_matching);
  CHECK(v.power_mode == PowerMode::full_cap);
}
