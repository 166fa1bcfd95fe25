#pragma once

#include <string>

#include "rake/metrics.hpp"

namespace rake {

enum class ObjectiveKind { kMq, kAbcp, kWeighted };

/// The optimization target driving a decomposition run. MQ keeps its native
/// [-1,1] scale; ABCP is rescaled to [0,1]; a weighted blend maps MQ to
/// (MQ+1)/2 first so both terms are commensurate.
struct Objective {
    ObjectiveKind kind = ObjectiveKind::kMq;
    double weight = 1.0;  // MQ share, kWeighted only

    std::string to_string() const;
    bool operator==(const Objective&) const = default;
};

/// Parse "mq" | "abcp" | "weighted:<w>" with w in [0,1]. The degenerate
/// blends weighted:1 and weighted:0 canonicalize to the pure objectives so
/// they share the exact reward path (and hence the exact training run) with
/// mq resp. abcp. Throws ConfigError on anything else.
Objective parse_objective(const std::string& spec);

double objective_value(const CallGraph& g, const Decomposition& d, const Objective& objective);

}  // namespace rake
