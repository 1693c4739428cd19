#include "netaudit/report.hpp"

#include "json.hpp"

namespace netaudit {

std::string AttributionReport::to_json_string() const {
    nlohmann::json j{{"modifying_agent", modifying_agent},
                     {"mu", mu},
                     {"nu", nu},
                     {"delta_nu", delta_nu}};
    j["change_index"] = change_index ? nlohmann::json(*change_index) : nlohmann::json(nullptr);
    if (!responsibility.empty()) {
        j["responsibility"] = responsibility;
        j["net_change"] = net_change;
        j["paper_literal_responsibility"] = paper_literal_responsibility;
    }
    return j.dump();
}

AttributionReport AttributionReport::from_json_string(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("bad attribution report json: ") + e.what());
    }
    AttributionReport r;
    r.modifying_agent = j.at("modifying_agent").get<AgentId>();
    if (j.contains("change_index") && !j.at("change_index").is_null()) {
        r.change_index = j.at("change_index").get<int>();
    }
    r.mu = j.at("mu").get<std::vector<double>>();
    r.nu = j.at("nu").get<std::vector<double>>();
    r.delta_nu = j.at("delta_nu").get<std::vector<double>>();
    if (j.contains("responsibility")) {
        r.responsibility = j.at("responsibility").get<std::vector<double>>();
        r.net_change = j.at("net_change").get<double>();
        r.paper_literal_responsibility = j.at("paper_literal_responsibility").get<double>();
    }
    return r;
}

}  // namespace netaudit
