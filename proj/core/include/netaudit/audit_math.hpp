#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "netaudit/network.hpp"

namespace netaudit {

// Index of the first element whose value changed between two snapshots;
// empty means no change was detected.
using ChangeIndex = std::optional<int>;

// rho: theta-scaled total influence of the network on the end user,
// sum over elements of resource share times impact.
double influence_score(const NetworkGraph& graph, double theta = 1.0);

// mu: per-element responsibility percentages; sums to 100.
// Throws ZeroInfluence when total influence is zero.
std::vector<double> element_responsibility(const NetworkGraph& graph);

// Compares per-element value ratios between snapshots; returns the lowest
// changed index, or empty when every ratio is 1 within tolerance. Entries
// that are zero in prev compare by absolute difference.
ChangeIndex detect_change(const Observation& prev, const Observation& curr);

// Maps a detected change back to the agent owning the changed element.
AgentId identify_agent(const NetworkGraph& graph, ChangeIndex change);

struct AgentResponsibility {
    std::vector<double> nu;        // per-agent percentages on curr; sums to 100
    std::vector<double> delta_nu;  // nu_curr - nu_prev; sums to 0
};

// nu / delta-nu between two snapshots of the same topology.
AgentResponsibility agent_responsibility(const NetworkGraph& prev, const NetworkGraph& curr);

}  // namespace netaudit
