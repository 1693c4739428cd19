#include "netaudit/dp_oracle.hpp"

#include <algorithm>
#include <cmath>

#include "netaudit/audit_math.hpp"

namespace netaudit {
namespace dp {

std::vector<double> initial_imp(std::span<const double> resources,
                                std::span<const int> link_counts) {
    if (resources.size() != link_counts.size()) {
        throw LengthMismatch("resources and link_counts differ in length");
    }
    std::vector<double> values;
    for (std::size_t a = 0; a < resources.size(); ++a) {
        if (link_counts[a] < 1) {
            throw ZeroLinks("agent " + std::to_string(a) + " has zero links");
        }
        const double v = resources[a] / link_counts[a];
        values.insert(values.end(), static_cast<std::size_t>(link_counts[a]), v);
    }
    return values;
}

std::vector<AgentGroup> group_elements(const Observation& obs) {
    const std::vector<double> unit(obs.size(), 1.0);
    return group_elements(obs, unit);
}

std::vector<AgentGroup> group_elements(const Observation& obs, std::span<const double> impact) {
    if (obs.size() != impact.size()) {
        throw LengthMismatch("observation and impact differ in length");
    }
    std::vector<AgentGroup> groups;
    for (std::size_t e = 0; e < obs.size(); ++e) {
        if (!(impact[e] > 0.0)) throw DomainError("impact values must be strictly positive");
        const double key = obs[e] / impact[e];
        auto it = std::find_if(groups.begin(), groups.end(), [&](const AgentGroup& g) {
            return std::abs(g.per_element_value - key) <= kValueEpsilon;
        });
        if (it == groups.end()) {
            AgentGroup g;
            g.label = static_cast<int>(groups.size());
            g.per_element_value = key;
            g.element_indices.push_back(static_cast<int>(e));
            groups.push_back(std::move(g));
        } else {
            it->element_indices.push_back(static_cast<int>(e));
        }
    }
    for (AgentGroup& g : groups) {
        g.recovered_resources = g.per_element_value * static_cast<double>(g.element_indices.size());
    }
    return groups;
}

std::vector<ChangeClass> classify_change(const std::vector<AgentGroup>& init_groups,
                                         const std::vector<AgentGroup>& curr_groups) {
    if (init_groups.size() != curr_groups.size()) {
        throw GroupMismatch("snapshots partition elements differently");
    }
    std::vector<ChangeClass> classes;
    classes.reserve(init_groups.size());
    for (std::size_t g = 0; g < init_groups.size(); ++g) {
        if (init_groups[g].element_indices != curr_groups[g].element_indices) {
            throw GroupMismatch("group " + std::to_string(g) + " covers different elements");
        }
        const double change = init_groups[g].recovered_resources -
                              curr_groups[g].recovered_resources;
        if (std::abs(change) <= kValueEpsilon) {
            classes.push_back(ChangeClass::Neither);
        } else {
            classes.push_back(change > 0.0 ? ChangeClass::Lost : ChangeClass::Gained);
        }
    }
    return classes;
}

AttributionReport attribute(const Observation& init_obs, const Observation& curr_obs,
                            const std::vector<AgentId>& links,
                            std::span<const double> impact, double pool_total) {
    if (init_obs.size() != curr_obs.size() || init_obs.size() != links.size()) {
        throw LengthMismatch("snapshots and links differ in length");
    }
    const std::vector<AgentGroup> init_groups = group_elements(init_obs, impact);
    const std::vector<AgentGroup> curr_groups = group_elements(curr_obs, impact);
    const std::vector<ChangeClass> classes = classify_change(init_groups, curr_groups);

    int changed = -1;
    for (std::size_t g = 0; g < classes.size(); ++g) {
        if (classes[g] == ChangeClass::Neither) continue;
        if (changed >= 0) {
            throw MultipleAgentsChanged("more than one group changed between snapshots");
        }
        changed = static_cast<int>(g);
    }
    if (changed < 0) throw NoChangeDetected("snapshots are identical");

    // Groups of one observation share one owner; any member resolves it.
    const int first_element = curr_groups[static_cast<std::size_t>(changed)].element_indices.front();
    const AgentId agent = links[static_cast<std::size_t>(first_element)];
    const int num_agents = *std::max_element(links.begin(), links.end()) + 1;
    const int num_elements = static_cast<int>(links.size());

    AttributionReport report;
    report.modifying_agent = agent;
    report.change_index = first_element;

    // n(g) * |delta per-element value| == |delta recovered resources|.
    double contribution_sum = 0.0;
    std::vector<double> per_group(classes.size(), 0.0);
    for (std::size_t g = 0; g < classes.size(); ++g) {
        if (classes[g] == ChangeClass::Neither) continue;
        per_group[g] = std::abs(curr_groups[g].recovered_resources -
                                init_groups[g].recovered_resources);
        contribution_sum += per_group[g];
    }
    report.net_change = contribution_sum / (num_elements * pool_total);
    report.paper_literal_responsibility = num_elements * pool_total * 100.0;
    report.responsibility.assign(static_cast<std::size_t>(num_agents), 0.0);
    for (std::size_t g = 0; g < classes.size(); ++g) {
        const AgentId owner = links[static_cast<std::size_t>(curr_groups[g].element_indices.front())];
        report.responsibility[static_cast<std::size_t>(owner)] +=
            per_group[g] / contribution_sum * 100.0;
    }

    // Recover the full resource vectors and reuse the responsibility
    // equations for the per-element and per-agent percentage view.
    const auto recover = [&](const std::vector<AgentGroup>& groups) {
        std::vector<double> resources(static_cast<std::size_t>(num_agents), 0.0);
        for (const AgentGroup& g : groups) {
            const AgentId owner = links[static_cast<std::size_t>(g.element_indices.front())];
            for (int e : g.element_indices) {
                if (links[static_cast<std::size_t>(e)] != owner) {
                    throw AmbiguousGrouping("group spans elements of different agents");
                }
            }
            resources[static_cast<std::size_t>(owner)] = g.recovered_resources;
        }
        return resources;
    };
    NetworkConfig cfg;
    cfg.num_agents = num_agents;
    cfg.num_elements = num_elements;
    cfg.links = links;
    cfg.impact.emplace(impact.begin(), impact.end());
    cfg.pool_total = pool_total;
    cfg.resources = recover(init_groups);
    const NetworkGraph init_graph = NetworkGraph::build(cfg);
    cfg.resources = recover(curr_groups);
    const NetworkGraph curr_graph = NetworkGraph::build(cfg);

    report.mu = element_responsibility(curr_graph);
    AgentResponsibility ar = agent_responsibility(init_graph, curr_graph);
    report.nu = std::move(ar.nu);
    report.delta_nu = std::move(ar.delta_nu);
    return report;
}

}  // namespace dp
}  // namespace netaudit
