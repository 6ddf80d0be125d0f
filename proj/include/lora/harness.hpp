// Monte Carlo harness: the full per-trial pipeline (topology -> activation ->
// SF allocation -> EH time -> collisions -> powers -> rates), deterministic
// seeded sweeps over density, and CSV emission.
#pragma once

#include "lora/config.hpp"
#include "lora/interference.hpp"

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace lora {

/// Everything one trial produces; vectors are over the active set in
/// ascending user id order.
struct TrialResult {
  std::uint64_t seed = 0;
  double density_per_km2 = 0.0;
  int users = 0;
  int active_users = 0;
  std::array<int, 6> sf_counts{};  // index 0 = SF7

  std::vector<int> active_ids;
  std::vector<int> sfs;
  std::vector<double> rssi_w;
  std::vector<double> harvest_rates_w;
  std::vector<double> eh_times_s;
  std::vector<double> caps_w;
  std::vector<double> powers_w;
  RateReport report;

  int solver_iterations = 0;
  bool solver_converged = true;
};

/// Runs the pipeline once.  The density argument overrides the geometry
/// density (sweeps reuse one config across cells).  Module errors propagate
/// annotated with the failing stage, e.g. "sf_alloc: ...".
TrialResult run_trial(const ScenarioConfig& cfg, std::uint64_t seed, double density_per_km2);
TrialResult run_trial(const ScenarioConfig& cfg, std::uint64_t seed);

/// One sweep row: a (density, seed, variant) cell.
struct SweepRow {
  double density_per_km2 = 0.0;
  std::uint64_t seed = 0;
  std::string sf_policy;
  std::string corr_policy;
  std::string col_mode;
  std::string eh_policy;
  std::string power_mode;
  int users = 0;
  int active_users = 0;
  std::array<int, 6> sf_counts{};
  double min_rate_nats = 0.0;
  double mean_rate_nats = 0.0;
};

/// Aggregate over seeds for one (density, variant) cell.
struct SweepSummaryRow {
  double density_per_km2 = 0.0;
  std::string sf_policy;
  std::string corr_policy;
  std::string col_mode;
  std::string eh_policy;
  std::string power_mode;
  int trials = 0;
  double mean_min_rate_nats = 0.0;
  double p10_min_rate_nats = 0.0;
  double p50_min_rate_nats = 0.0;
  double p90_min_rate_nats = 0.0;
};

struct SweepResult {
  std::vector<SweepRow> rows;          // ordered by (density, seed, variant)
  std::vector<SweepSummaryRow> summary;
};

/// Cross product of configured densities, seeds and variants.  Each (density,
/// seed) cell draws one topology (same across variants) from a seed mixed
/// with the density index; trials run in parallel and the result is
/// invariant to the worker count.
SweepResult run_sweep(const ScenarioConfig& cfg);
SweepResult run_sweep(const ScenarioConfig& cfg, const std::vector<Variant>& variants);

/// Per-trial and summary CSV emission; byte-stable across runs.
void emit_csv(const SweepResult& res, const std::string& rows_path,
              const std::string& summary_path);
std::string sweep_rows_csv(const SweepResult& res);
std::string sweep_summary_csv(const SweepResult& res);

/// Per-user CSV of one trial.
void dump_trial_csv(const TrialResult& t, const std::string& path);

/// Figure-reproduction datasets: SF histogram per policy, EH-time
/// grid-vs-closed-form agreement, and min-rate vs density per policy family.
void write_fig3_sf_histogram(const ScenarioConfig& cfg, const std::string& path);
void write_fig4_ehtime_agreement(const ScenarioConfig& cfg, const std::string& path);
void write_fig5_minrate_vs_density(const ScenarioConfig& cfg, const std::string& path);

} // namespace lora
