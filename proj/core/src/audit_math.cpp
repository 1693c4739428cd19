#include "netaudit/audit_math.hpp"

#include <cmath>

namespace netaudit {

double influence_score(const NetworkGraph& graph, double theta) {
    if (!(theta > 0.0)) throw DomainError("theta must be positive");
    double sum = 0.0;
    for (int e = 0; e < graph.num_elements(); ++e) {
        sum += graph.element_share(e) * graph.impact()[static_cast<std::size_t>(e)];
    }
    return theta * sum;
}

std::vector<double> element_responsibility(const NetworkGraph& graph) {
    const Observation values = graph.element_values();
    double total = 0.0;
    for (double v : values) total += v;
    if (total <= kValueEpsilon) {
        throw ZeroInfluence("total influence is zero; percentages undefined");
    }
    std::vector<double> mu(values.size());
    for (std::size_t e = 0; e < values.size(); ++e) {
        mu[e] = values[e] / total * 100.0;
    }
    return mu;
}

ChangeIndex detect_change(const Observation& prev, const Observation& curr) {
    if (prev.size() != curr.size()) {
        throw LengthMismatch("observations differ in length");
    }
    for (std::size_t e = 0; e < prev.size(); ++e) {
        if (std::abs(prev[e]) <= kValueEpsilon) {
            if (std::abs(curr[e] - prev[e]) > kValueEpsilon) return static_cast<int>(e);
        } else if (std::abs(curr[e] / prev[e] - 1.0) > kValueEpsilon) {
            return static_cast<int>(e);
        }
    }
    return std::nullopt;
}

AgentId identify_agent(const NetworkGraph& graph, ChangeIndex change) {
    if (!change) throw NoChangeToAttribute("no changed element to attribute");
    const int e = *change;
    if (e < 0 || e >= graph.num_elements()) {
        throw DomainError("change index out of range");
    }
    return graph.owner(e);
}

AgentResponsibility agent_responsibility(const NetworkGraph& prev, const NetworkGraph& curr) {
    if (!prev.same_topology(curr)) {
        throw TopologyMismatch("snapshots have different topology");
    }
    const auto sum_per_agent = [](const NetworkGraph& g) {
        const std::vector<double> mu = element_responsibility(g);
        std::vector<double> nu(static_cast<std::size_t>(g.num_agents()), 0.0);
        for (int e = 0; e < g.num_elements(); ++e) {
            nu[static_cast<std::size_t>(g.owner(e))] += mu[static_cast<std::size_t>(e)];
        }
        return nu;
    };
    AgentResponsibility out;
    out.nu = sum_per_agent(curr);
    const std::vector<double> nu_prev = sum_per_agent(prev);
    out.delta_nu.resize(out.nu.size());
    for (std::size_t a = 0; a < out.nu.size(); ++a) {
        out.delta_nu[a] = out.nu[a] - nu_prev[a];
    }
    return out;
}

}  // namespace netaudit
