// Spreading-factor allocation policies: the RSSI-ranked equal and
// throughput-balancing splits, plus the distance-ring and pathloss-threshold
// baselines.
#pragma once

#include "lora/geometry.hpp"
#include "lora/phy.hpp"

#include <array>
#include <vector>

namespace lora {

enum class SfPolicy { unfair, fair, distance, pathloss };

/// Result of one allocation: the active users and their SFs.
struct SfAssignment {
  std::vector<int> active_ids;     // ascending user id
  std::vector<int> sf_of;          // per user id; -1 for inactive users
  std::array<int, 6> group_sizes;  // active users per SF, index 0 = SF7

  int sf_count(int sf) const { return group_sizes[sf - SpreadingFactor::kMin]; }
};

/// Users able to reach the gateway at all: RSSI at the full-off-window power
/// cap meets the weakest sensitivity in the table (inclusive).  Returns
/// ascending user ids.
std::vector<int> activate(const std::vector<double>& gains,
                          const std::vector<double>& harvest_rates_w,
                          const PhyParams& phy, double p_t_w);

/// Group sizes that differ by at most one, remainders going to the lowest SFs.
std::array<int, 6> group_sizes_unfair(int n_active);

/// Group sizes proportional to f / 2^f (more users on the faster SFs so the
/// per-user share of airtime balances); largest-remainder rounding with ties
/// toward the lower SF.
std::array<int, 6> group_sizes_fair(int n_active);

/// Equal groups by descending RSSI: the strongest sixth gets SF7.
SfAssignment allocate_unfair(const std::vector<double>& rssi_w,
                             const std::vector<int>& active_ids, std::size_t n_users);

/// f/2^f-proportional groups by descending RSSI.
SfAssignment allocate_fair(const std::vector<double>& rssi_w,
                           const std::vector<int>& active_ids, std::size_t n_users);

/// Six equal-width distance rings, ring i -> SF 7+i; the boundary d = (i+1)R/6
/// belongs to the outer ring and the rim belongs to SF12.
SfAssignment allocate_distance(const Topology& topo, const std::vector<int>& active_ids);

/// Smallest SF whose sensitivity the user's RSSI meets.  Active users always
/// meet the SF12 threshold, so every active user is assigned.
SfAssignment allocate_pathloss(const std::vector<double>& rssi_w,
                               const std::vector<int>& active_ids, std::size_t n_users,
                               const PhyParams& phy);

/// Policy dispatch.
SfAssignment allocate(SfPolicy policy, const Topology& topo,
                      const std::vector<double>& rssi_w,
                      const std::vector<int>& active_ids, const PhyParams& phy);

/// Assignment export: one row per active user with its RSSI and SF.
void dump_assignment_csv(const SfAssignment& asg, const std::vector<double>& rssi_w,
                         const char* policy_label, const std::string& path);

} // namespace lora
