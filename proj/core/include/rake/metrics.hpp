#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "rake/decomposition.hpp"
#include "rake/graph.hpp"

namespace rake {

// Decomposition-quality metrics. Cohesion counts unique intra-service edges
// (self-loops included) against the N_i^2 possible pairs; coupling counts
// unique cross-service edges in both directions against 2*N_i*N_j. The
// entropy metrics use natural logs normalized by log(B) resp. log(k), so
// they are base-independent and bounded in [0,100]. Empty services never
// exist here: Decomposition stores non-empty services only.

/// How a method shared by several capabilities enters the BCP/DI histograms:
/// one full count per capability (default) or 1/|caps| per capability.
enum class CapabilityWeighting { kMembership, kFractional };

struct CohesionResult {
    double value = 0.0;                     // mean over services
    std::vector<double> per_service;        // mu_i / N_i^2
    std::vector<std::int64_t> intra_edges;  // mu_i
};

struct ServicePairCoupling {
    int first = 0;
    int second = 0;
    std::int64_t cross_edges = 0;  // unique edges between the pair, both directions
    double value = 0.0;            // cross_edges / (2 * N_i * N_j)
};

struct CouplingResult {
    double value = 0.0;  // mean over unordered service pairs; 0 when k == 1
    bool single_service = false;
    std::vector<ServicePairCoupling> pairs;
};

struct EntropyAlignment {
    double value = 0.0;                    // scaled to [0, 100]
    std::vector<double> per_unit_entropy;  // normalized entropy per service (bcp) / capability (di)
    std::vector<std::string> flags;
};

CohesionResult cohesion(const CallGraph& g, const Decomposition& d);
CouplingResult coupling(const CallGraph& g, const Decomposition& d);

/// Modularization quality: cohesion minus coupling for k > 1, the single
/// service's cohesion for k == 1. Range [-1, 1].
double mq(const CallGraph& g, const Decomposition& d);

/// Business context purity: 100 minus the mean normalized entropy of
/// capability mixing inside each service. A service without any labeled
/// method contributes maximal entropy and is flagged.
EntropyAlignment bcp(const CallGraph& g, const Decomposition& d,
                     CapabilityWeighting weighting = CapabilityWeighting::kMembership);

/// Domain independence: 100 minus the mean normalized entropy of each
/// capability's dispersion across services. Capabilities without labeled
/// methods are skipped and flagged.
EntropyAlignment di(const CallGraph& g, const Decomposition& d,
                    CapabilityWeighting weighting = CapabilityWeighting::kMembership);

/// Equal-weight average of BCP and DI.
double abcp(double bcp_value, double di_value);

/// Log-damped fraction of call weight crossing service boundaries:
/// cross-service sum of (ln(inv)+1) over the total sum. 0 when k == 1
/// or the graph has no calls.
double icp(const CallGraph& g, const Decomposition& d);

/// Mean per-service count of methods invoked from other services.
double ifn(const CallGraph& g, const Decomposition& d);

struct ServiceDetail {
    int size = 0;
    std::int64_t intra_edges = 0;
    std::vector<std::string> interface_methods;            // called from other services
    std::map<std::string, double> capability_counts;       // histogram n_b
};

struct MetricsReport {
    double cohesion = 0.0;
    double coupling = 0.0;
    double mq = 0.0;
    double bcp = 0.0;
    double di = 0.0;
    double abcp = 0.0;
    double icp = 0.0;
    double ifn = 0.0;
    int service_count = 0;
    std::vector<ServiceDetail> per_service;
    std::vector<std::string> flags;
};

MetricsReport compute_metrics(const CallGraph& g, const Decomposition& d,
                              CapabilityWeighting weighting = CapabilityWeighting::kMembership);

}  // namespace rake
