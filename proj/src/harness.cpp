// Monte Carlo harness: trial pipeline, density sweeps and CSV emission.
#include "lora/harness.hpp"

#include "lora/energy.hpp"
#include "lora/rng.hpp"
#include "lora/units.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <fstream>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace lora {

namespace {

std::string fmt(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

// Rethrows any error annotated with the pipeline stage that produced it;
// messages that already name the stage are passed through untouched.
template <typename Fn>
auto stage(const char* name, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const std::exception& e) {
    const std::string what = e.what();
    const std::string prefix = std::string(name) + ":";
    if (what.rfind(prefix, 0) == 0) throw std::runtime_error(what);
    throw std::runtime_error(prefix + " " + what);
  }
}

ScenarioConfig apply_variant(const ScenarioConfig& base, const Variant& v) {
  ScenarioConfig cfg = base;
  cfg.sf_policy = v.sf_policy;
  cfg.corr.kind = v.corr_kind;
  cfg.col_mode = v.col_mode;
  cfg.eh_policy.mode = v.eh_mode;
  cfg.power_mode = v.power_mode;
  return cfg;
}

// Deterministic worker pool: job indices map to fixed result slots, so the
// outcome does not depend on scheduling or worker count.
template <typename Fn>
void parallel_for(std::size_t jobs, int threads, Fn&& fn) {
  std::size_t workers = threads > 0 ? static_cast<std::size_t>(threads)
                                    : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, jobs);
  if (workers <= 1) {
    for (std::size_t i = 0; i < jobs; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= jobs) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

double percentile_nearest_rank(std::vector<double> sorted_values, double p) {
  const auto n = sorted_values.size();
  const auto rank = static_cast<std::size_t>(std::ceil(p / 100.0 * static_cast<double>(n)));
  return sorted_values[std::clamp<std::size_t>(rank, 1, n) - 1];
}

} // namespace

TrialResult run_trial(const ScenarioConfig& cfg, std::uint64_t seed, double density_per_km2) {
  TrialResult out;
  out.seed = seed;
  out.density_per_km2 = density_per_km2;

  GeometryConfig geom = cfg.geometry;
  geom.user_density_per_km2 = density_per_km2;
  const Topology topo = stage("geometry", [&] { return sample_topology(geom, seed); });
  out.users = static_cast<int>(topo.users.size());

  const std::vector<double> harvest =
      stage("energy", [&] { return harvest_rates(topo, cfg.eh, cfg.beacon_tx_w); });

  std::vector<double> gains(topo.users.size());
  std::vector<double> rssi_w(topo.users.size());
  for (std::size_t i = 0; i < topo.users.size(); ++i) {
    gains[i] = topo.users[i].gain;
    rssi_w[i] = rssi(p_n_max(harvest[i], cfg.phy, cfg.p_t_w), gains[i]);
  }

  const SfAssignment asg = stage("sf_alloc", [&] {
    const auto active = activate(gains, harvest, cfg.phy, cfg.p_t_w);
    return allocate(cfg.sf_policy, topo, rssi_w, active, cfg.phy);
  });
  out.active_ids = asg.active_ids;
  out.active_users = static_cast<int>(asg.active_ids.size());
  out.sf_counts = asg.group_sizes;

  // Active-subset working vectors, ascending user id.
  const std::size_t n = asg.active_ids.size();
  std::vector<double> toa(n);
  out.sfs.resize(n);
  out.rssi_w.resize(n);
  out.harvest_rates_w.resize(n);
  std::vector<double> g(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto id = static_cast<std::size_t>(asg.active_ids[i]);
    out.sfs[i] = asg.sf_of[id];
    toa[i] = time_on_air(SpreadingFactor(out.sfs[i]), cfg.phy);
    out.rssi_w[i] = rssi_w[id];
    out.harvest_rates_w[i] = harvest[id];
    g[i] = gains[id];
  }

  out.eh_times_s = stage("optimizer", [&] {
    EhSearchContext ctx;
    ctx.toa_s = toa;
    ctx.harvest_rates_w = out.harvest_rates_w;
    ctx.gains = g;
    ctx.sfs = out.sfs;
    ctx.corr = cfg.corr;
    ctx.p_t_w = cfg.p_t_w;
    ctx.noise_w = noise_power(cfg.phy);
    ctx.power_mode_maxmin = cfg.power_mode == PowerMode::maxmin;
    ctx.maxmin_tol_nats = cfg.maxmin_tol_nats;
    return select_eh_times(cfg.eh_policy, cfg.col_mode, ctx, cfg.phy);
  });

  const Matrix col = stage("collision", [&] {
    std::vector<TxWindow> windows(n);
    for (std::size_t i = 0; i < n; ++i) windows[i] = {out.eh_times_s[i], toa[i]};
    return collision_matrix(windows, cfg.col_mode);
  });

  const Matrix weights = stage("interference", [&] {
    const Matrix rho = correlation_matrix(cfg.corr, out.sfs);
    return interference_weights(col, toa, rho);
  });

  out.caps_w.resize(n);
  for (std::size_t i = 0; i < n; ++i)
    out.caps_w[i] = power_cap(out.eh_times_s[i], toa[i], out.harvest_rates_w[i], cfg.p_t_w);

  const double noise = noise_power(cfg.phy);
  if (cfg.power_mode == PowerMode::maxmin) {
    const PowerSolution sol = stage("optimizer", [&] {
      return maxmin_power(out.caps_w, g, weights, noise, cfg.maxmin_tol_nats);
    });
    out.powers_w = sol.powers_w;
    out.solver_iterations = sol.iterations;
    out.solver_converged = sol.converged;
  } else {
    out.powers_w = out.caps_w;
  }

  out.report = stage("interference", [&] { return rates(out.powers_w, g, weights, noise); });
  return out;
}

TrialResult run_trial(const ScenarioConfig& cfg, std::uint64_t seed) {
  return run_trial(cfg, seed, cfg.geometry.user_density_per_km2);
}

SweepResult run_sweep(const ScenarioConfig& cfg) {
  if (!cfg.variants.empty()) return run_sweep(cfg, cfg.variants);
  return run_sweep(cfg, {base_variant(cfg)});
}

SweepResult run_sweep(const ScenarioConfig& cfg, const std::vector<Variant>& variants) {
  if (variants.empty()) throw std::invalid_argument("sweep: variant list must not be empty");

  const std::size_t n_d = cfg.density_sweep.size();
  const std::size_t n_s = cfg.seeds.size();
  const std::size_t n_v = variants.size();

  std::vector<ScenarioConfig> variant_cfgs;
  variant_cfgs.reserve(n_v);
  for (const auto& v : variants) variant_cfgs.push_back(apply_variant(cfg, v));

  SweepResult res;
  res.rows.resize(n_d * n_s * n_v);

  // Jobs map to (density, seed, variant) cells in canonical order.  The cell
  // seed mixes the user seed with the density index, and variants of one
  // cell share it, so they see the same topology.
  parallel_for(res.rows.size(), cfg.threads, [&](std::size_t job) {
    const std::size_t di = job / (n_s * n_v);
    const std::size_t si = (job / n_v) % n_s;
    const std::size_t vi = job % n_v;
    const std::uint64_t cell_seed = mix_seed(cfg.seeds[si], di);
    const TrialResult t =
        run_trial(variant_cfgs[vi], cell_seed, cfg.density_sweep[di]);

    SweepRow row;
    row.density_per_km2 = cfg.density_sweep[di];
    row.seed = cfg.seeds[si];
    row.sf_policy = to_label(variants[vi].sf_policy);
    row.corr_policy = to_label(variants[vi].corr_kind);
    row.col_mode = to_label(variants[vi].col_mode);
    row.eh_policy = to_label(variants[vi].eh_mode);
    row.power_mode = to_label(variants[vi].power_mode);
    row.users = t.users;
    row.active_users = t.active_users;
    row.sf_counts = t.sf_counts;
    row.min_rate_nats = t.report.min_rate_nats;
    row.mean_rate_nats = t.report.mean_rate_nats;
    res.rows[job] = std::move(row);
  });

  // Aggregate each (density, variant) cell over seeds.
  for (std::size_t di = 0; di < n_d; ++di)
    for (std::size_t vi = 0; vi < n_v; ++vi) {
      std::vector<double> mins;
      mins.reserve(n_s);
      double sum = 0.0;
      for (std::size_t si = 0; si < n_s; ++si) {
        const auto& row = res.rows[(di * n_s + si) * n_v + vi];
        mins.push_back(row.min_rate_nats);
        sum += row.min_rate_nats;
      }
      std::sort(mins.begin(), mins.end());
      SweepSummaryRow s;
      s.density_per_km2 = cfg.density_sweep[di];
      s.sf_policy = to_label(variants[vi].sf_policy);
      s.corr_policy = to_label(variants[vi].corr_kind);
      s.col_mode = to_label(variants[vi].col_mode);
      s.eh_policy = to_label(variants[vi].eh_mode);
      s.power_mode = to_label(variants[vi].power_mode);
      s.trials = static_cast<int>(n_s);
      s.mean_min_rate_nats = sum / static_cast<double>(n_s);
      s.p10_min_rate_nats = percentile_nearest_rank(mins, 10.0);
      s.p50_min_rate_nats = percentile_nearest_rank(mins, 50.0);
      s.p90_min_rate_nats = percentile_nearest_rank(mins, 90.0);
      res.summary.push_back(std::move(s));
    }
  return res;
}

std::string sweep_rows_csv(const SweepResult& res) {
  std::string out =
      "density_per_km2,seed,sf_policy,corr_policy,col_mode,eh_policy,power_mode,"
      "users,active_users,sf7,sf8,sf9,sf10,sf11,sf12,"
      "min_rate_nats,min_rate_bits,mean_rate_nats,mean_rate_bits\n";
  for (const auto& r : res.rows) {
    out += fmt(r.density_per_km2);
    out += ',' + std::to_string(r.seed);
    out += ',' + r.sf_policy + ',' + r.corr_policy + ',' + r.col_mode + ',' + r.eh_policy +
           ',' + r.power_mode;
    out += ',' + std::to_string(r.users) + ',' + std::to_string(r.active_users);
    for (int c : r.sf_counts) out += ',' + std::to_string(c);
    out += ',' + fmt(r.min_rate_nats) + ',' + fmt(nats_to_bits(r.min_rate_nats));
    out += ',' + fmt(r.mean_rate_nats) + ',' + fmt(nats_to_bits(r.mean_rate_nats));
    out += '\n';
  }
  return out;
}

std::string sweep_summary_csv(const SweepResult& res) {
  std::string out =
      "density_per_km2,sf_policy,corr_policy,col_mode,eh_policy,power_mode,trials,"
      "mean_min_rate_nats,mean_min_rate_bits,p10_min_rate_nats,p50_min_rate_nats,"
      "p90_min_rate_nats\n";
  for (const auto& s : res.summary) {
    out += fmt(s.density_per_km2);
    out += ',' + s.sf_policy + ',' + s.corr_policy + ',' + s.col_mode + ',' + s.eh_policy +
           ',' + s.power_mode;
    out += ',' + std::to_string(s.trials);
    out += ',' + fmt(s.mean_min_rate_nats) + ',' + fmt(nats_to_bits(s.mean_min_rate_nats));
    out += ',' + fmt(s.p10_min_rate_nats) + ',' + fmt(s.p50_min_rate_nats) + ',' +
           fmt(s.p90_min_rate_nats);
    out += '\n';
  }
  return out;
}

void emit_csv(const SweepResult& res, const std::string& rows_path,
              const std::string& summary_path) {
  std::ofstream rows(rows_path);
  if (!rows) throw std::runtime_error("sweep csv: cannot open " + rows_path);
  rows << sweep_rows_csv(res);
  std::ofstream summary(summary_path);
  if (!summary) throw std::runtime_error("sweep csv: cannot open " + summary_path);
  summary << sweep_summary_csv(res);
}

void dump_trial_csv(const TrialResult& t, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("trial csv: cannot open " + path);
  out << "id,sf,rssi_dbm,harvest_rate_w,eh_time_s,power_cap_w,power_w,sinr,rate_nats,rate_bits\n";
  for (std::size_t i = 0; i < t.active_ids.size(); ++i) {
    out << t.active_ids[i] << ',' << t.sfs[i] << ',' << fmt(watts_to_dbm(t.rssi_w[i]))
        << ',' << fmt(t.harvest_rates_w[i]) << ',' << fmt(t.eh_times_s[i]) << ','
        << fmt(t.caps_w[i]) << ',' << fmt(t.powers_w[i]) << ','
        << fmt(t.report.sinr_linear[i]) << ',' << fmt(t.report.rate_nats[i]) << ','
        << fmt(nats_to_bits(t.report.rate_nats[i])) << '\n';
  }
}

void write_fig3_sf_histogram(const ScenarioConfig& cfg, const std::string& path) {
  // Allocation only; the optimizer half of the pipeline does not move SF
  // counts, so this stays cheap at full density.
  const SfPolicy policies[] = {SfPolicy::unfair, SfPolicy::fair, SfPolicy::distance,
                               SfPolicy::pathloss};
  std::array<std::array<double, 6>, 4> mean_counts{};
  double mean_active = 0.0;

  for (std::uint64_t seed : cfg.seeds) {
    const Topology topo = sample_topology(cfg.geometry, seed);
    const auto harvest = harvest_rates(topo, cfg.eh, cfg.beacon_tx_w);
    std::vector<double> gains(topo.users.size());
    std::vector<double> rssi_w(topo.users.size());
    for (std::size_t i = 0; i < topo.users.size(); ++i) {
      gains[i] = topo.users[i].gain;
      rssi_w[i] = rssi(p_n_max(harvest[i], cfg.phy, cfg.p_t_w), gains[i]);
    }
    const auto active = activate(gains, harvest, cfg.phy, cfg.p_t_w);
    mean_active += static_cast<double>(active.size());
    for (std::size_t p = 0; p < 4; ++p) {
      const SfAssignment asg = allocate(policies[p], topo, rssi_w, active, cfg.phy);
      for (std::size_t f = 0; f < 6; ++f) mean_counts[p][f] += asg.group_sizes[f];
    }
  }
  const auto n_seeds = static_cast<double>(cfg.seeds.size());

  std::ofstream out(path);
  if (!out) throw std::runtime_error("fig3: cannot open " + path);
  out << "sf_policy,sf,mean_users\n";
  for (std::size_t p = 0; p < 4; ++p)
    for (std::size_t f = 0; f < 6; ++f)
      out << to_label(policies[p]) << ',' << 7 + f << ',' << fmt(mean_counts[p][f] / n_seeds)
          << '\n';
}

void write_fig4_ehtime_agreement(const ScenarioConfig& cfg, const std::string& path) {
  // Grid search vs the closed form matched to each collision model.
  std::vector<Variant> variants;
  for (CollisionMode cm : {CollisionMode::eh_dependent, CollisionMode::worst_case})
    for (bool grid : {false, true}) {
      Variant v = base_variant(cfg);
      v.col_mode = cm;
      v.eh_mode = grid ? EhTimeMode::grid_search : matching_eh_mode(cm);
      v.name = std::string(to_label(cm)) + "/" + to_label(v.eh_mode);
      variants.push_back(v);
    }
  const SweepResult res = run_sweep(cfg, variants);

  std::ofstream out(path);
  if (!out) throw std::runtime_error("fig4: cannot open " + path);
  out << "density_per_km2,col_mode,eh_policy,mean_min_rate_nats,mean_min_rate_bits,"
         "ratio_to_closed_form\n";
  // Summary rows appear density-major in variant order: closed form first.
  for (std::size_t i = 0; i < res.summary.size(); i += 2) {
    const auto& closed = res.summary[i];
    const auto& grid = res.summary[i + 1];
    const double ratio =
        closed.mean_min_rate_nats > 0.0 ? grid.mean_min_rate_nats / closed.mean_min_rate_nats
                                        : 1.0;
    for (const auto* s : {&closed, &grid})
      out << fmt(s->density_per_km2) << ',' << s->col_mode << ',' << s->eh_policy << ','
          << fmt(s->mean_min_rate_nats) << ',' << fmt(nats_to_bits(s->mean_min_rate_nats))
          << ',' << fmt(s == &grid ? ratio : 1.0) << '\n';
  }
}

void write_fig5_minrate_vs_density(const ScenarioConfig& cfg, const std::string& path) {
  // Policy families x collision model, plus interference-model references
  // for the base policy.
  std::vector<Variant> variants;
  for (SfPolicy sp : {SfPolicy::unfair, SfPolicy::fair, SfPolicy::distance, SfPolicy::pathloss})
    for (CollisionMode cm : {CollisionMode::eh_dependent, CollisionMode::worst_case}) {
      Variant v = base_variant(cfg);
      v.sf_policy = sp;
      v.corr_kind = CorrelationPolicy::Kind::co_and_inter_sf;
      v.col_mode = cm;
      v.eh_mode = matching_eh_mode(cm);
      variants.push_back(v);
    }
  for (CorrelationPolicy::Kind ck :
       {CorrelationPolicy::Kind::none, CorrelationPolicy::Kind::co_sf_only}) {
    Variant v = base_variant(cfg);
    v.sf_policy = SfPolicy::unfair;
    v.corr_kind = ck;
    v.col_mode = CollisionMode::eh_dependent;
    v.eh_mode = EhTimeMode::max_off_time;
    variants.push_back(v);
  }
  const SweepResult res = run_sweep(cfg, variants);

  std::ofstream out(path);
  if (!out) throw std::runtime_error("fig5: cannot open " + path);
  out << "density_per_km2,sf_policy,corr_policy,col_mode,eh_policy,"
         "mean_min_rate_nats,mean_min_rate_bits\n";
  for (const auto& s : res.summary)
    out << fmt(s.density_per_km2) << ',' << s.sf_policy << ',' << s.corr_policy << ','
        << s.col_mode << ',' << s.eh_policy << ',' << fmt(s.mean_min_rate_nats) << ','
        << fmt(nats_to_bits(s.mean_min_rate_nats)) << '\n';
}

} // namespace lora
