#include "rake/objective.hpp"

#include <cstdio>

namespace rake {

std::string Objective::to_string() const {
    switch (kind) {
        case ObjectiveKind::kMq:
            return "mq";
        case ObjectiveKind::kAbcp:
            return "abcp";
        case ObjectiveKind::kWeighted: {
            char buf[48];
            std::snprintf(buf, sizeof buf, "weighted:%.17g", weight);
            return buf;
        }
    }
    return "mq";
}

Objective parse_objective(const std::string& spec) {
    if (spec == "mq") return {ObjectiveKind::kMq, 1.0};
    if (spec == "abcp") return {ObjectiveKind::kAbcp, 0.0};
    const std::string prefix = "weighted:";
    if (spec.rfind(prefix, 0) == 0) {
        const std::string rest = spec.substr(prefix.size());
        double w = 0.0;
        std::size_t consumed = 0;
        try {
            w = std::stod(rest, &consumed);
        } catch (const std::exception&) {
            throw ConfigError("cannot parse weight in objective '" + spec + "'");
        }
        if (consumed != rest.size() || w < 0.0 || w > 1.0) {
            throw ConfigError("objective weight must be in [0,1], got '" + rest + "'");
        }
        if (w == 1.0) return {ObjectiveKind::kMq, 1.0};
        if (w == 0.0) return {ObjectiveKind::kAbcp, 0.0};
        return {ObjectiveKind::kWeighted, w};
    }
    throw ConfigError("unknown objective '" + spec + "' (expected mq | abcp | weighted:<w>)");
}

double objective_value(const CallGraph& g, const Decomposition& d, const Objective& objective) {
    switch (objective.kind) {
        case ObjectiveKind::kMq:
            return mq(g, d);
        case ObjectiveKind::kAbcp:
            return abcp(bcp(g, d).value, di(g, d).value) / 100.0;
        case ObjectiveKind::kWeighted: {
            const double structural = (mq(g, d) + 1.0) / 2.0;
            const double alignment = abcp(bcp(g, d).value, di(g, d).value) / 100.0;
            return objective.weight * structural + (1.0 - objective.weight) * alignment;
        }
    }
    return 0.0;
}

}  // namespace rake
