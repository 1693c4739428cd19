#include "netaudit/network.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "json.hpp"
#include "netaudit/rng.hpp"

namespace netaudit {

namespace {

constexpr int kBuildRetries = 100;

std::vector<int> count_links(const std::vector<AgentId>& links, int num_agents) {
    std::vector<int> counts(static_cast<std::size_t>(num_agents), 0);
    for (AgentId a : links) {
        if (a < 0 || a >= num_agents) {
            throw InvalidConfig("link maps to unknown agent " + std::to_string(a));
        }
        ++counts[static_cast<std::size_t>(a)];
    }
    return counts;
}

}  // namespace

bool check_allocation_legal(std::span<const double> resources, double pool_total) {
    double sum = 0.0;
    for (double r : resources) {
        if (r < 0.0) throw DomainError("negative resource entry");
        sum += r;
    }
    return sum <= pool_total + kValueEpsilon;
}

NetworkGraph::NetworkGraph(int num_agents, std::vector<AgentId> links, std::vector<double> impact,
                           std::vector<double> resources, double pool_total)
    : num_agents_(num_agents),
      links_(std::move(links)),
      impact_(std::move(impact)),
      resources_(std::move(resources)),
      link_counts_(count_links(links_, num_agents)),
      pool_total_(pool_total) {
    validate();
}

void NetworkGraph::validate() const {
    if (num_agents_ < 1) throw InvalidConfig("need at least one agent");
    if (num_elements() < num_agents_) throw InvalidConfig("fewer elements than agents");
    if (pool_total_ <= 0.0) throw InvalidConfig("pool_total must be positive");
    if (impact_.size() != links_.size()) throw InvalidConfig("impact size mismatch");
    if (resources_.size() != static_cast<std::size_t>(num_agents_)) {
        throw InvalidConfig("resources size mismatch");
    }
    for (int a = 0; a < num_agents_; ++a) {
        if (link_counts_[static_cast<std::size_t>(a)] == 0) {
            throw InvalidConfig("agent " + std::to_string(a) + " controls no element");
        }
    }
    for (double w : impact_) {
        if (!(w > 0.0)) throw InvalidConfig("impact values must be strictly positive");
    }
    if (!check_allocation_legal(resources_, pool_total_)) {
        throw InvalidConfig("resource allocation exceeds pool");
    }
    if (!has_distinct_agent_values()) {
        throw InvalidConfig("per-element values collide across agents");
    }
}

bool NetworkGraph::has_distinct_agent_values() const {
    for (int a = 0; a < num_agents_; ++a) {
        const double va = resources_[static_cast<std::size_t>(a)] / link_count(a);
        for (int b = a + 1; b < num_agents_; ++b) {
            const double vb = resources_[static_cast<std::size_t>(b)] / link_count(b);
            if (std::abs(va - vb) <= kValueEpsilon) return false;
        }
    }
    return true;
}

double NetworkGraph::element_share(int element) const {
    const AgentId a = owner(element);
    return resources_[static_cast<std::size_t>(a)] / link_count(a);
}

Observation NetworkGraph::element_values() const {
    Observation values(links_.size());
    for (int e = 0; e < num_elements(); ++e) {
        values[static_cast<std::size_t>(e)] =
            element_share(e) * impact_[static_cast<std::size_t>(e)];
    }
    return values;
}

NetworkGraph NetworkGraph::with_resource_change(AgentId agent, double delta) const {
    if (agent < 0 || agent >= num_agents_) {
        throw DomainError("agent index out of range");
    }
    std::vector<double> next = resources_;
    next[static_cast<std::size_t>(agent)] += delta;
    if (next[static_cast<std::size_t>(agent)] < 0.0) {
        throw IllegalAllocation("resource change drives agent below zero");
    }
    if (!check_allocation_legal(next, pool_total_)) {
        throw IllegalAllocation("resource change exceeds pool");
    }
    return NetworkGraph(num_agents_, links_, impact_, std::move(next), pool_total_);
}

NetworkGraph NetworkGraph::with_resources(std::vector<double> resources) const {
    if (resources.size() != static_cast<std::size_t>(num_agents_)) {
        throw DomainError("resource vector size mismatch");
    }
    if (!check_allocation_legal(resources, pool_total_)) {
        throw IllegalAllocation("resource vector exceeds pool");
    }
    return NetworkGraph(num_agents_, links_, impact_, std::move(resources), pool_total_);
}

bool NetworkGraph::same_topology(const NetworkGraph& other) const {
    return num_agents_ == other.num_agents_ && links_ == other.links_ && impact_ == other.impact_ &&
           pool_total_ == other.pool_total_;
}

NetworkGraph NetworkGraph::build(const NetworkConfig& config) {
    if (config.num_agents < 1) throw InvalidConfig("num_agents must be >= 1");
    if (config.num_elements < config.num_agents) {
        throw InvalidConfig("num_elements must be >= num_agents");
    }
    const bool needs_rng = !config.links || !config.impact || !config.resources;
    if (needs_rng && !config.seed) {
        throw InvalidConfig("seed required for random assignment");
    }

    Rng rng(config.seed.value_or(0));
    const int n_agents = config.num_agents;
    const int n_elems = config.num_elements;

    for (int attempt = 0; attempt < kBuildRetries; ++attempt) {
        std::vector<AgentId> links;
        if (config.links) {
            links = *config.links;
            if (static_cast<int>(links.size()) != n_elems) {
                throw InvalidConfig("links size mismatch");
            }
        } else {
            // One element per agent first, the rest uniform, so every agent
            // controls at least one element.
            links.resize(static_cast<std::size_t>(n_elems));
            std::vector<int> order(static_cast<std::size_t>(n_elems));
            std::iota(order.begin(), order.end(), 0);
            std::shuffle(order.begin(), order.end(), rng);
            std::uniform_int_distribution<int> pick(0, n_agents - 1);
            for (int i = 0; i < n_elems; ++i) {
                links[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])] =
                    i < n_agents ? i : pick(rng);
            }
        }

        std::vector<double> impact;
        if (config.impact) {
            impact = *config.impact;
            if (static_cast<int>(impact.size()) != n_elems) {
                throw InvalidConfig("impact size mismatch");
            }
        } else {
            // Integer weights in {1, 2} by default; arbitrary per the source
            // formulation and overridable in config.
            impact.resize(static_cast<std::size_t>(n_elems));
            std::uniform_int_distribution<int> w(1, 2);
            for (double& v : impact) v = static_cast<double>(w(rng));
        }

        std::vector<double> resources;
        if (config.resources) {
            resources = *config.resources;
            if (static_cast<int>(resources.size()) != n_agents) {
                throw InvalidConfig("resources size mismatch");
            }
        } else {
            // Normalize random draws to a fraction of the pool, leaving some
            // headroom so perturbations in both directions stay exercisable.
            resources.resize(static_cast<std::size_t>(n_agents));
            std::uniform_real_distribution<double> u(0.1, 1.0);
            std::uniform_real_distribution<double> fill(0.7, 1.0);
            double sum = 0.0;
            for (double& r : resources) {
                r = u(rng);
                sum += r;
            }
            const double scale = config.pool_total * fill(rng) / sum;
            for (double& r : resources) r *= scale;
        }

        try {
            return NetworkGraph(n_agents, std::move(links), std::move(impact),
                                std::move(resources), config.pool_total);
        } catch (const InvalidConfig&) {
            // Explicit configurations fail loudly; only resampled ones retry.
            if (!needs_rng) throw;
        }
    }
    throw InvalidConfig("could not sample a valid graph after " + std::to_string(kBuildRetries) +
                        " attempts");
}

std::string NetworkGraph::to_json_string() const {
    nlohmann::json j{{"num_agents", num_agents_}, {"num_elements", num_elements()},
                     {"links", links_},           {"impact", impact_},
                     {"resources", resources_},   {"pool_total", pool_total_}};
    return j.dump();
}

NetworkGraph NetworkGraph::from_json_string(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("bad graph json: ") + e.what());
    }
    NetworkConfig cfg;
    cfg.num_agents = j.at("num_agents").get<int>();
    cfg.num_elements = j.at("num_elements").get<int>();
    cfg.links = j.at("links").get<std::vector<AgentId>>();
    cfg.impact = j.at("impact").get<std::vector<double>>();
    cfg.resources = j.at("resources").get<std::vector<double>>();
    cfg.pool_total = j.at("pool_total").get<double>();
    return build(cfg);
}

std::string to_json_string(const NetworkConfig& config) {
    nlohmann::json j{{"num_agents", config.num_agents},
                     {"num_elements", config.num_elements},
                     {"pool_total", config.pool_total}};
    if (config.links) j["links"] = *config.links;
    if (config.impact) j["impact"] = *config.impact;
    if (config.resources) j["resources"] = *config.resources;
    if (config.seed) j["seed"] = *config.seed;
    return j.dump();
}

NetworkConfig network_config_from_json_string(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("bad network config json: ") + e.what());
    }
    NetworkConfig cfg;
    if (j.contains("num_agents")) cfg.num_agents = j.at("num_agents").get<int>();
    if (j.contains("num_elements")) cfg.num_elements = j.at("num_elements").get<int>();
    if (j.contains("links")) cfg.links = j.at("links").get<std::vector<AgentId>>();
    if (j.contains("impact")) cfg.impact = j.at("impact").get<std::vector<double>>();
    if (j.contains("resources")) cfg.resources = j.at("resources").get<std::vector<double>>();
    if (j.contains("pool_total")) cfg.pool_total = j.at("pool_total").get<double>();
    if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
    return cfg;
}

}  // namespace netaudit
