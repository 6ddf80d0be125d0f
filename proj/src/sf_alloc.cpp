// Spreading-factor allocation policies.
#include "lora/sf_alloc.hpp"

#include "lora/energy.hpp"
#include "lora/units.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <stdexcept>

namespace lora {

namespace {

// Largest-remainder apportionment of n_active into six groups with the given
// weights; ties in the remainder go to the lower SF.
std::array<int, 6> largest_remainder(const std::array<double, 6>& weights, int n_active) {
  std::array<int, 6> sizes{};
  std::array<double, 6> frac{};
  int assigned = 0;
  for (int f = 0; f < 6; ++f) {
    const double share = weights[f] * n_active;
    sizes[f] = static_cast<int>(std::floor(share));
    frac[f] = share - sizes[f];
    assigned += sizes[f];
  }
  std::array<int, 6> order = {0, 1, 2, 3, 4, 5};
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return frac[a] > frac[b]; });
  for (int k = 0; k < n_active - assigned; ++k) ++sizes[order[static_cast<std::size_t>(k)]];
  return sizes;
}

// Fractions proportional to f / 2^f over SF 7..12.
std::array<double, 6> fair_weights() {
  std::array<double, 6> w{};
  double total = 0.0;
  for (int f = 7; f <= 12; ++f) total += f * std::ldexp(1.0, -f);
  for (int f = 7; f <= 12; ++f) w[static_cast<std::size_t>(f - 7)] = f * std::ldexp(1.0, -f) / total;
  return w;
}

// Active ids ordered by descending RSSI, user id breaking ties.
std::vector<int> rank_by_rssi(const std::vector<double>& rssi_w,
                              const std::vector<int>& active_ids) {
  std::vector<int> order = active_ids;
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    const double ra = rssi_w[static_cast<std::size_t>(a)];
    const double rb = rssi_w[static_cast<std::size_t>(b)];
    if (ra != rb) return ra > rb;
    return a < b;
  });
  return order;
}

// Hands the ranked users out group by group, SF7 first.
SfAssignment assign_ranked_groups(const std::vector<int>& ranked,
                                  const std::array<int, 6>& sizes, std::size_t n_users,
                                  const std::vector<int>& active_ids) {
  SfAssignment asg;
  asg.active_ids = active_ids;
  asg.sf_of.assign(n_users, -1);
  asg.group_sizes = sizes;
  std::size_t next = 0;
  for (int f = 0; f < 6; ++f)
    for (int k = 0; k < sizes[static_cast<std::size_t>(f)]; ++k)
      asg.sf_of[static_cast<std::size_t>(ranked[next++])] = SpreadingFactor::kMin + f;
  return asg;
}

} // namespace

std::vector<int> activate(const std::vector<double>& gains,
                          const std::vector<double>& harvest_rates_w,
                          const PhyParams& phy, double p_t_w) {
  const double threshold_w = dbm_to_watts(sensitivity_min_dbm(phy));
  std::vector<int> ids;
  for (std::size_t i = 0; i < gains.size(); ++i) {
    const double p_max = p_n_max(harvest_rates_w[i], phy, p_t_w);
    if (rssi(p_max, gains[i]) >= threshold_w) ids.push_back(static_cast<int>(i));
  }
  return ids;
}

std::array<int, 6> group_sizes_unfair(int n_active) {
  return largest_remainder({1.0 / 6, 1.0 / 6, 1.0 / 6, 1.0 / 6, 1.0 / 6, 1.0 / 6}, n_active);
}

std::array<int, 6> group_sizes_fair(int n_active) {
  return largest_remainder(fair_weights(), n_active);
}

SfAssignment allocate_unfair(const std::vector<double>& rssi_w,
                             const std::vector<int>& active_ids, std::size_t n_users) {
  return assign_ranked_groups(rank_by_rssi(rssi_w, active_ids),
                              group_sizes_unfair(static_cast<int>(active_ids.size())),
                              n_users, active_ids);
}

SfAssignment allocate_fair(const std::vector<double>& rssi_w,
                           const std::vector<int>& active_ids, std::size_t n_users) {
  return assign_ranked_groups(rank_by_rssi(rssi_w, active_ids),
                              group_sizes_fair(static_cast<int>(active_ids.size())),
                              n_users, active_ids);
}

SfAssignment allocate_distance(const Topology& topo, const std::vector<int>& active_ids) {
  SfAssignment asg;
  asg.active_ids = active_ids;
  asg.sf_of.assign(topo.users.size(), -1);
  asg.group_sizes.fill(0);
  const double ring = topo.cell_radius_m / 6.0;
  for (int id : active_ids) {
    const double d = topo.users[static_cast<std::size_t>(id)].distance_m;
    // Half-open rings [i*R/6, (i+1)*R/6); boundaries resolved by the same
    // comparisons the definition uses, the rim folding into SF12.
    int i = std::clamp(static_cast<int>(d / ring), 0, 5);
    while (i < 5 && d >= (i + 1) * ring) ++i;
    while (i > 0 && d < i * ring) --i;
    asg.sf_of[static_cast<std::size_t>(id)] = SpreadingFactor::kMin + i;
    ++asg.group_sizes[static_cast<std::size_t>(i)];
  }
  return asg;
}

SfAssignment allocate_pathloss(const std::vector<double>& rssi_w,
                               const std::vector<int>& active_ids, std::size_t n_users,
                               const PhyParams& phy) {
  SfAssignment asg;
  asg.active_ids = active_ids;
  asg.sf_of.assign(n_users, -1);
  asg.group_sizes.fill(0);
  for (int id : active_ids) {
    const double r = rssi_w[static_cast<std::size_t>(id)];
    for (auto sf : SpreadingFactor::all()) {
      if (r >= dbm_to_watts(sensitivity(sf, phy))) {
        asg.sf_of[static_cast<std::size_t>(id)] = sf.value();
        ++asg.group_sizes[static_cast<std::size_t>(sf.idx())];
        break;
      }
    }
  }
  return asg;
}

SfAssignment allocate(SfPolicy policy, const Topology& topo,
                      const std::vector<double>& rssi_w,
                      const std::vector<int>& active_ids, const PhyParams& phy) {
  switch (policy) {
    case SfPolicy::unfair:
      return allocate_unfair(rssi_w, active_ids, topo.users.size());
    case SfPolicy::fair:
      return allocate_fair(rssi_w, active_ids, topo.users.size());
    case SfPolicy::distance:
      return allocate_distance(topo, active_ids);
    case SfPolicy::pathloss:
      return allocate_pathloss(rssi_w, active_ids, topo.users.size(), phy);
  }
  throw std::invalid_argument("sf_alloc: unknown policy");
}

void dump_assignment_csv(const SfAssignment& asg, const std::vector<double>& rssi_w,
                         const char* policy_label, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("assignment csv: cannot open " + path);
  out.precision(17);
  out << "id,sf,rssi_dbm,policy\n";
  for (int id : asg.active_ids)
    out << id << ',' << asg.sf_of[static_cast<std::size_t>(id)] << ','
        << watts_to_dbm(rssi_w[static_cast<std::size_t>(id)]) << ',' << policy_label << '\n';
}

} // namespace lora
