#pragma once

#include <optional>
#include <string>
#include <vector>

#include "netaudit/network.hpp"

namespace netaudit {

// Attribution result for one audited episode. The equation pipeline fills
// the shared fields; the dynamic-programming oracle additionally reports its
// change-magnitude normalization.
struct AttributionReport {
    AgentId modifying_agent = -1;
    std::optional<int> change_index;    // lowest changed element index
    std::vector<double> mu;             // per-element percentages on curr
    std::vector<double> nu;             // per-agent percentages on curr
    std::vector<double> delta_nu;       // nu_curr - nu_prev

    // Oracle-only fields (empty / zero for the equation pipeline).
    std::vector<double> responsibility; // per-agent change share, sums to 100
    double net_change = 0.0;
    // The source formula's quotient collapses to a constant
    // (num_elements * pool_total * 100); kept for transparency.
    double paper_literal_responsibility = 0.0;

    std::string to_json_string() const;
    static AttributionReport from_json_string(const std::string& text);
};

}  // namespace netaudit
