#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "netaudit/errors.hpp"

namespace netaudit {

using AgentId = int;

// Single comparison epsilon for the whole artifact: value equality,
// change detection and grouping all use this tolerance.
inline constexpr double kValueEpsilon = 1e-9;

// Per-element influence values exposed to learners and auditors.
using Observation = std::vector<double>;

struct NetworkConfig {
    int num_agents = 3;
    int num_elements = 8;
    std::optional<std::vector<AgentId>> links;     // element index -> owning agent
    std::optional<std::vector<double>> impact;     // per element, > 0
    std::optional<std::vector<double>> resources;  // per agent, >= 0
    double pool_total = 1.0;
    std::optional<std::uint64_t> seed;  // required when any of the above is omitted
};

// The three-domain influence graph: management agents control service
// elements, elements weigh on the end user through their impact factor.
// Immutable after construction; mutating operations return new values.
class NetworkGraph {
public:
    static NetworkGraph build(const NetworkConfig& config);

    int num_agents() const { return num_agents_; }
    int num_elements() const { return static_cast<int>(links_.size()); }
    double pool_total() const { return pool_total_; }

    const std::vector<AgentId>& links() const { return links_; }
    const std::vector<double>& impact() const { return impact_; }
    const std::vector<double>& resources() const { return resources_; }

    AgentId owner(int element) const { return links_[static_cast<std::size_t>(element)]; }
    int link_count(AgentId agent) const { return link_counts_[static_cast<std::size_t>(agent)]; }

    // resources[owner(e)] / link_count(owner(e)): the per-element resource share.
    double element_share(int element) const;

    // Z(e) = share(e) * impact(e) for every element.
    Observation element_values() const;

    // Returns a copy with resources[agent] += delta. Throws IllegalAllocation
    // when the result would be negative or exceed the pool.
    NetworkGraph with_resource_change(AgentId agent, double delta) const;

    // Replaces the whole resource vector (same legality checks). Used by the
    // auditors to reconstruct snapshots from recovered resources.
    NetworkGraph with_resources(std::vector<double> resources) const;

    bool same_topology(const NetworkGraph& other) const;

    // True when no two agents share the same per-element value. The DP
    // grouping rule is unsound under collisions, so valid graphs keep this.
    bool has_distinct_agent_values() const;

    std::string to_json_string() const;
    static NetworkGraph from_json_string(const std::string& text);

private:
    NetworkGraph(int num_agents, std::vector<AgentId> links, std::vector<double> impact,
                 std::vector<double> resources, double pool_total);

    void validate() const;

    int num_agents_ = 0;
    std::vector<AgentId> links_;
    std::vector<double> impact_;
    std::vector<double> resources_;
    std::vector<int> link_counts_;
    double pool_total_ = 1.0;
};

// Lambda legality: true iff sum(resources) <= pool_total. Pure; throws
// DomainError on negative entries.
bool check_allocation_legal(std::span<const double> resources, double pool_total);

std::string to_json_string(const NetworkConfig& config);
NetworkConfig network_config_from_json_string(const std::string& text);

}  // namespace netaudit
