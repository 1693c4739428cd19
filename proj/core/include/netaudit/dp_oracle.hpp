#pragma once

#include <span>
#include <vector>

#include "netaudit/network.hpp"
#include "netaudit/report.hpp"

namespace netaudit {
namespace dp {

// One recovered agent grouping: elements sharing a per-element value.
struct AgentGroup {
    int label = 0;                    // ordinal by first element index
    std::vector<int> element_indices;
    double per_element_value = 0.0;   // impact-normalized share
    double recovered_resources = 0.0; // per_element_value * |element_indices|
};

enum class ChangeClass { Gained, Lost, Neither };

// Per-element values implied by the initial allocation: every element owned
// by agent a carries resources[a] / link_counts[a]. Output is in agent-block
// order (agent 0's elements first).
std::vector<double> initial_imp(std::span<const double> resources,
                                std::span<const int> link_counts);

// Partitions element indices by equal observed value. Non-uniform impacts
// are divided out first so the grouping key is the resource share.
std::vector<AgentGroup> group_elements(const Observation& obs);
std::vector<AgentGroup> group_elements(const Observation& obs, std::span<const double> impact);

// Init - Current on recovered resources per matched group:
// negative -> Gained, positive -> Lost, zero -> Neither.
std::vector<ChangeClass> classify_change(const std::vector<AgentGroup>& init_groups,
                                         const std::vector<AgentGroup>& curr_groups);

// Full attribution from two observation snapshots: recovers groupings,
// classifies the change and names the modifying agent through the links.
AttributionReport attribute(const Observation& init_obs, const Observation& curr_obs,
                            const std::vector<AgentId>& links,
                            std::span<const double> impact, double pool_total = 1.0);

}  // namespace dp
}  // namespace netaudit
