// Scenario configuration: JSON file loading, dotted-path overrides and the
// enum <-> label maps shared with CSV output.
#include "lora/config.hpp"

#include <json.hpp>

#include <fstream>
#include <numeric>
#include <stdexcept>

namespace lora {

using nlohmann::json;

namespace {

[[noreturn]] void bad_value(const std::string& what) {
  throw std::invalid_argument("config: " + what);
}

void expect_keys(const json& j, const char* block, std::initializer_list<const char*> allowed) {
  for (const auto& item : j.items()) {
    bool known = false;
    for (const char* k : allowed)
      if (item.key() == k) { known = true; break; }
    if (!known) bad_value(std::string("unknown key '") + item.key() + "' in " + block);
  }
}

void parse_geometry(const json& j, GeometryConfig& g) {
  expect_keys(j, "geometry",
              {"cell_radius_m", "user_density_per_km2", "beacon_density_per_km2",
               "pathloss_exponent", "min_distance_m", "poisson_counts"});
  g.cell_radius_m = j.value("cell_radius_m", g.cell_radius_m);
  g.user_density_per_km2 = j.value("user_density_per_km2", g.user_density_per_km2);
  g.beacon_density_per_km2 = j.value("beacon_density_per_km2", g.beacon_density_per_km2);
  g.pathloss_exponent = j.value("pathloss_exponent", g.pathloss_exponent);
  g.min_distance_m = j.value("min_distance_m", g.min_distance_m);
  g.poisson_counts = j.value("poisson_counts", g.poisson_counts);
}

void parse_phy(const json& j, PhyParams& p) {
  expect_keys(j, "phy",
              {"bandwidth_hz", "payload_bytes", "coding_rate", "preamble_symbols",
               "duty_cycle", "noise_figure_db", "sensitivity_dbm"});
  p.bandwidth_hz = j.value("bandwidth_hz", p.bandwidth_hz);
  p.payload_bytes = j.value("payload_bytes", p.payload_bytes);
  p.coding_rate = j.value("coding_rate", p.coding_rate);
  p.preamble_symbols = j.value("preamble_symbols", p.preamble_symbols);
  p.duty_cycle = j.value("duty_cycle", p.duty_cycle);
  p.noise_figure_db = j.value("noise_figure_db", p.noise_figure_db);
  if (j.contains("sensitivity_dbm")) {
    const json& s = j.at("sensitivity_dbm");
    // All six SFs must be present: a partial table is a configuration error.
    for (int sf = 7; sf <= 12; ++sf) {
      const std::string key = std::to_string(sf);
      if (!s.contains(key)) bad_value("sensitivity_dbm is missing SF" + key);
      p.sensitivity_dbm[static_cast<std::size_t>(sf - 7)] = s.at(key).get<double>();
    }
    if (s.size() != 6) bad_value("sensitivity_dbm must list exactly SF 7..12");
  }
}

void parse_eh(const json& j, EhModel& m) {
  expect_keys(j, "eh",
              {"kind", "linear_efficiency", "sigmoid_a", "sigmoid_b", "sigmoid_m_w",
               "mean_field_beacons"});
  if (j.contains("kind")) {
    const std::string k = j.at("kind").get<std::string>();
    if (k == "linear") m.kind = EhModel::Kind::linear;
    else if (k == "sigmoidal") m.kind = EhModel::Kind::sigmoidal;
    else bad_value("unknown eh.kind '" + k + "'");
  }
  m.linear_efficiency = j.value("linear_efficiency", m.linear_efficiency);
  m.sigmoid_a = j.value("sigmoid_a", m.sigmoid_a);
  m.sigmoid_b = j.value("sigmoid_b", m.sigmoid_b);
  m.sigmoid_m_w = j.value("sigmoid_m_w", m.sigmoid_m_w);
  m.mean_field_beacons = j.value("mean_field_beacons", m.mean_field_beacons);
}

void parse_corr(const json& j, CorrelationPolicy& c) {
  expect_keys(j, "corr", {"kind", "rho_co", "rho_inter", "custom_matrix"});
  if (j.contains("kind")) c.kind = corr_kind_from(j.at("kind").get<std::string>());
  c.rho_co = j.value("rho_co", c.rho_co);
  c.rho_inter = j.value("rho_inter", c.rho_inter);
  if (j.contains("custom_matrix"))
    c.custom_matrix = j.at("custom_matrix").get<std::vector<std::vector<double>>>();
}

void parse_eh_policy(const json& j, EhTimePolicy& p) {
  expect_keys(j, "eh_policy", {"mode", "grid_points"});
  if (j.contains("mode")) p.mode = eh_mode_from(j.at("mode").get<std::string>());
  p.grid_points = j.value("grid_points", p.grid_points);
}

Variant parse_variant(const json& j, const ScenarioConfig& base) {
  expect_keys(j, "variants[]",
              {"name", "sf_policy", "corr_kind", "col_mode", "eh_mode", "power_mode"});
  Variant v = base_variant(base);
  if (j.contains("name")) v.name = j.at("name").get<std::string>();
  if (j.contains("sf_policy")) v.sf_policy = sf_policy_from(j.at("sf_policy").get<std::string>());
  if (j.contains("corr_kind")) v.corr_kind = corr_kind_from(j.at("corr_kind").get<std::string>());
  if (j.contains("col_mode")) v.col_mode = col_mode_from(j.at("col_mode").get<std::string>());
  if (j.contains("eh_mode")) v.eh_mode = eh_mode_from(j.at("eh_mode").get<std::string>());
  if (j.contains("power_mode")) v.power_mode = power_mode_from(j.at("power_mode").get<std::string>());
  return v;
}

ScenarioConfig config_from_json(const json& j) {
  ScenarioConfig cfg;
  expect_keys(j, "config root",
              {"geometry", "phy", "eh", "beacon_tx_w", "p_t_w", "sf_policy", "corr",
               "col_mode", "eh_policy", "power_mode", "maxmin_tol_nats", "seeds",
               "density_sweep", "variants", "threads"});
  if (j.contains("geometry")) parse_geometry(j.at("geometry"), cfg.geometry);
  if (j.contains("phy")) parse_phy(j.at("phy"), cfg.phy);
  if (j.contains("eh")) parse_eh(j.at("eh"), cfg.eh);
  cfg.beacon_tx_w = j.value("beacon_tx_w", cfg.beacon_tx_w);
  cfg.p_t_w = j.value("p_t_w", cfg.p_t_w);
  if (j.contains("sf_policy")) cfg.sf_policy = sf_policy_from(j.at("sf_policy").get<std::string>());
  if (j.contains("corr")) parse_corr(j.at("corr"), cfg.corr);
  if (j.contains("col_mode")) cfg.col_mode = col_mode_from(j.at("col_mode").get<std::string>());
  if (j.contains("eh_policy")) parse_eh_policy(j.at("eh_policy"), cfg.eh_policy);
  if (j.contains("power_mode")) cfg.power_mode = power_mode_from(j.at("power_mode").get<std::string>());
  cfg.maxmin_tol_nats = j.value("maxmin_tol_nats", cfg.maxmin_tol_nats);
  if (j.contains("seeds")) cfg.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
  if (j.contains("density_sweep"))
    cfg.density_sweep = j.at("density_sweep").get<std::vector<double>>();
  if (j.contains("threads")) cfg.threads = j.at("threads").get<int>();
  if (j.contains("variants"))
    for (const auto& vj : j.at("variants")) cfg.variants.push_back(parse_variant(vj, cfg));
  cfg.validate();
  return cfg;
}

json config_to_json(const ScenarioConfig& cfg) {
  json j;
  j["geometry"] = {{"cell_radius_m", cfg.geometry.cell_radius_m},
                   {"user_density_per_km2", cfg.geometry.user_density_per_km2},
                   {"beacon_density_per_km2", cfg.geometry.beacon_density_per_km2},
                   {"pathloss_exponent", cfg.geometry.pathloss_exponent},
                   {"min_distance_m", cfg.geometry.min_distance_m},
                   {"poisson_counts", cfg.geometry.poisson_counts}};
  json sens;
  for (int sf = 7; sf <= 12; ++sf)
    sens[std::to_string(sf)] = cfg.phy.sensitivity_dbm[static_cast<std::size_t>(sf - 7)];
  j["phy"] = {{"bandwidth_hz", cfg.phy.bandwidth_hz},
              {"payload_bytes", cfg.phy.payload_bytes},
              {"coding_rate", cfg.phy.coding_rate},
              {"preamble_symbols", cfg.phy.preamble_symbols},
              {"duty_cycle", cfg.phy.duty_cycle},
              {"noise_figure_db", cfg.phy.noise_figure_db},
              {"sensitivity_dbm", sens}};
  j["eh"] = {{"kind", cfg.eh.kind == EhModel::Kind::linear ? "linear" : "sigmoidal"},
             {"linear_efficiency", cfg.eh.linear_efficiency},
             {"sigmoid_a", cfg.eh.sigmoid_a},
             {"sigmoid_b", cfg.eh.sigmoid_b},
             {"sigmoid_m_w", cfg.eh.sigmoid_m_w},
             {"mean_field_beacons", cfg.eh.mean_field_beacons}};
  j["beacon_tx_w"] = cfg.beacon_tx_w;
  j["p_t_w"] = cfg.p_t_w;
  j["sf_policy"] = to_label(cfg.sf_policy);
  j["corr"] = {{"kind", to_label(cfg.corr.kind)},
               {"rho_co", cfg.corr.rho_co},
               {"rho_inter", cfg.corr.rho_inter}};
  if (!cfg.corr.custom_matrix.empty()) j["corr"]["custom_matrix"] = cfg.corr.custom_matrix;
  j["col_mode"] = to_label(cfg.col_mode);
  j["eh_policy"] = {{"mode", to_label(cfg.eh_policy.mode)},
                    {"grid_points", cfg.eh_policy.grid_points}};
  j["power_mode"] = to_label(cfg.power_mode);
  j["maxmin_tol_nats"] = cfg.maxmin_tol_nats;
  j["seeds"] = cfg.seeds;
  j["density_sweep"] = cfg.density_sweep;
  j["threads"] = cfg.threads;
  json vars = json::array();
  for (const auto& v : cfg.variants)
    vars.push_back({{"name", v.name},
                    {"sf_policy", to_label(v.sf_policy)},
                    {"corr_kind", to_label(v.corr_kind)},
                    {"col_mode", to_label(v.col_mode)},
                    {"eh_mode", to_label(v.eh_mode)},
                    {"power_mode", to_label(v.power_mode)}});
  if (!vars.empty()) j["variants"] = vars;
  return j;
}

} // namespace

std::vector<std::uint64_t> ScenarioConfig::default_seeds() {
  std::vector<std::uint64_t> s(100);
  std::iota(s.begin(), s.end(), 1);
  return s;
}

void ScenarioConfig::validate() const {
  geometry.validate();
  phy.validate();
  eh.validate();
  corr.validate();
  if (beacon_tx_w <= 0.0) throw std::invalid_argument("config: beacon power must be positive");
  if (p_t_w <= 0.0) throw std::invalid_argument("config: power limit must be positive");
  if (maxmin_tol_nats <= 0.0) throw std::invalid_argument("config: maxmin tolerance must be positive");
  if (eh_policy.grid_points < 1) throw std::invalid_argument("config: grid_points must be >= 1");
  if (seeds.empty()) throw std::invalid_argument("config: at least one seed required");
  if (density_sweep.empty()) throw std::invalid_argument("config: density sweep must not be empty");
  for (double d : density_sweep)
    if (d <= 0.0) throw std::invalid_argument("config: sweep densities must be positive");
  if (threads < 0) throw std::invalid_argument("config: threads must be >= 0");
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("config: cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw std::invalid_argument("config: " + std::string(e.what()));
  }
  return config_from_json(j);
}

void apply_override(ScenarioConfig& cfg, const std::string& key_value) {
  const auto eq = key_value.find('=');
  if (eq == std::string::npos || eq == 0)
    throw std::invalid_argument("config: override must be key=value, got '" + key_value + "'");
  std::string path = key_value.substr(0, eq);
  const std::string raw = key_value.substr(eq + 1);

  // Dotted path -> JSON pointer.
  for (auto& ch : path)
    if (ch == '.') ch = '/';
  const json::json_pointer ptr("/" + path);

  json j = config_to_json(cfg);
  json value;
  try {
    value = json::parse(raw);
  } catch (const json::parse_error&) {
    value = raw;  // bare strings (enum labels) need no quotes
  }
  try {
    j[ptr] = value;
  } catch (const json::exception& e) {
    throw std::invalid_argument("config: bad override path '" + key_value + "': " + e.what());
  }
  cfg = config_from_json(j);
}

const char* to_label(SfPolicy p) {
  switch (p) {
    case SfPolicy::unfair: return "unfair";
    case SfPolicy::fair: return "fair";
    case SfPolicy::distance: return "distance";
    case SfPolicy::pathloss: return "pathloss";
  }
  return "?";
}

const char* to_label(CorrelationPolicy::Kind k) {
  switch (k) {
    case CorrelationPolicy::Kind::none: return "none";
    case CorrelationPolicy::Kind::co_sf_only: return "co_sf_only";
    case CorrelationPolicy::Kind::co_and_inter_sf: return "co_and_inter_sf";
    case CorrelationPolicy::Kind::custom: return "custom";
  }
  return "?";
}

const char* to_label(CollisionMode m) {
  return m == CollisionMode::eh_dependent ? "eh_dependent" : "worst_case";
}

const char* to_label(EhTimeMode m) {
  switch (m) {
    case EhTimeMode::max_off_time: return "max_off_time";
    case EhTimeMode::cap_matching: return "cap_matching";
    case EhTimeMode::grid_search: return "grid_search";
  }
  return "?";
}

const char* to_label(PowerMode m) {
  return m == PowerMode::maxmin ? "maxmin" : "full_cap";
}

SfPolicy sf_policy_from(const std::string& s) {
  if (s == "unfair") return SfPolicy::unfair;
  if (s == "fair") return SfPolicy::fair;
  if (s == "distance") return SfPolicy::distance;
  if (s == "pathloss") return SfPolicy::pathloss;
  bad_value("unknown sf_policy '" + s + "'");
}

CorrelationPolicy::Kind corr_kind_from(const std::string& s) {
  if (s == "none") return CorrelationPolicy::Kind::none;
  if (s == "co_sf_only") return CorrelationPolicy::Kind::co_sf_only;
  if (s == "co_and_inter_sf") return CorrelationPolicy::Kind::co_and_inter_sf;
  if (s == "custom") return CorrelationPolicy::Kind::custom;
  bad_value("unknown corr kind '" + s + "'");
}

CollisionMode col_mode_from(const std::string& s) {
  if (s == "eh_dependent") return CollisionMode::eh_dependent;
  if (s == "worst_case") return CollisionMode::worst_case;
  bad_value("unknown col_mode '" + s + "'");
}

EhTimeMode eh_mode_from(const std::string& s) {
  if (s == "max_off_time") return EhTimeMode::max_off_time;
  if (s == "cap_matching") return EhTimeMode::cap_matching;
  if (s == "grid_search") return EhTimeMode::grid_search;
  bad_value("unknown eh mode '" + s + "'");
}

PowerMode power_mode_from(const std::string& s) {
  if (s == "maxmin") return PowerMode::maxmin;
  if (s == "full_cap") return PowerMode::full_cap;
  bad_value("unknown power_mode '" + s + "'");
}

Variant base_variant(const ScenarioConfig& cfg) {
  Variant v;
  v.name = "base";
  v.sf_policy = cfg.sf_policy;
  v.corr_kind = cfg.corr.kind;
  v.col_mode = cfg.col_mode;
  v.eh_mode = cfg.eh_policy.mode;
  v.power_mode = cfg.power_mode;
  return v;
}

} // namespace lora
