#include "rake/metrics.hpp"

#include <cmath>
#include <set>

namespace rake {

namespace {

struct ServiceStats {
    std::vector<int> svc;    // method index -> service index
    std::vector<int> sizes;  // N_i
    std::vector<std::int64_t> mu;
    std::map<std::pair<int, int>, std::int64_t> nu;  // unordered pair (i<j) -> cross edges
    std::vector<std::set<int>> interfaces;           // per service, callee method indices
    double icp_cross = 0.0;
    double icp_total = 0.0;
};

// One pass over the non-zero entries of inv, bucketed by service pair.
ServiceStats accumulate(const CallGraph& g, const Decomposition& d) {
    const int n = g.method_count();
    if (d.method_count() != n) {
        throw InvalidConfig("decomposition covers " + std::to_string(d.method_count()) +
                            " methods, graph has " + std::to_string(n));
    }
    ServiceStats st;
    st.svc = d.assignment;
    st.sizes.reserve(d.service_count());
    for (const auto& members : d.services) st.sizes.push_back(static_cast<int>(members.size()));
    st.mu.assign(d.service_count(), 0);
    st.interfaces.assign(d.service_count(), {});

    for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) {
            const std::int64_t count = g.inv[a][b];
            if (count <= 0) continue;
            const double damped = std::log(static_cast<double>(count)) + 1.0;
            st.icp_total += damped;
            const int i = st.svc[a];
            const int j = st.svc[b];
            if (i == j) {
                ++st.mu[i];
            } else {
                ++st.nu[{std::min(i, j), std::max(i, j)}];
                st.interfaces[j].insert(b);
                st.icp_cross += damped;
            }
        }
    }
    return st;
}

double normalized_entropy(const std::vector<double>& counts, double total, double log_base) {
    if (total <= 0.0 || log_base <= 0.0) return 0.0;
    double h = 0.0;
    for (double c : counts) {
        if (c <= 0.0) continue;
        const double p = c / total;
        h -= p * std::log(p);
    }
    return h / log_base;
}

double method_weight(const CapabilityMap& caps, const std::string& method,
                     CapabilityWeighting weighting) {
    if (weighting == CapabilityWeighting::kMembership) return 1.0;
    const auto it = caps.method_caps.find(method);
    return it == caps.method_caps.end() ? 0.0 : 1.0 / static_cast<double>(it->second.size());
}

}  // namespace

CohesionResult cohesion(const CallGraph& g, const Decomposition& d) {
    const ServiceStats st = accumulate(g, d);
    CohesionResult r;
    r.intra_edges = st.mu;
    r.per_service.reserve(st.mu.size());
    for (std::size_t i = 0; i < st.mu.size(); ++i) {
        const double ni = st.sizes[i];
        r.per_service.push_back(static_cast<double>(st.mu[i]) / (ni * ni));
        r.value += r.per_service.back();
    }
    r.value /= static_cast<double>(d.service_count());
    return r;
}

CouplingResult coupling(const CallGraph& g, const Decomposition& d) {
    CouplingResult r;
    const int k = d.service_count();
    if (k == 1) {
        r.single_service = true;
        return r;
    }
    const ServiceStats st = accumulate(g, d);
    double sum = 0.0;
    for (int i = 0; i < k; ++i) {
        for (int j = i + 1; j < k; ++j) {
            ServicePairCoupling pair;
            pair.first = i;
            pair.second = j;
            const auto it = st.nu.find({i, j});
            pair.cross_edges = it == st.nu.end() ? 0 : it->second;
            pair.value = static_cast<double>(pair.cross_edges) /
                         (2.0 * st.sizes[i] * st.sizes[j]);
            sum += pair.value;
            r.pairs.push_back(pair);
        }
    }
    // 2/(k(k-1)) times the sum over unordered pairs = mean over pairs
    r.value = sum * 2.0 / (static_cast<double>(k) * (k - 1));
    return r;
}

double mq(const CallGraph& g, const Decomposition& d) {
    const CohesionResult ch = cohesion(g, d);
    if (d.service_count() == 1) {
        return ch.per_service[0];
    }
    return ch.value - coupling(g, d).value;
}

EntropyAlignment bcp(const CallGraph& g, const Decomposition& d, CapabilityWeighting weighting) {
    EntropyAlignment r;
    const std::size_t n_caps = g.caps.capability_count();
    const double log_base = n_caps > 1 ? std::log(static_cast<double>(n_caps)) : 0.0;

    double entropy_sum = 0.0;
    for (int i = 0; i < d.service_count(); ++i) {
        std::map<std::string, double> hist;
        double total = 0.0;
        for (int m : d.services[i]) {
            const auto it = g.caps.method_caps.find(g.methods[m]);
            if (it == g.caps.method_caps.end()) continue;
            const double w = method_weight(g.caps, g.methods[m], weighting);
            for (const auto& cap : it->second) {
                hist[cap] += w;
                total += w;
            }
        }
        double h = 0.0;
        if (total <= 0.0) {
            // no capability information at all: maximal uncertainty
            h = 1.0;
            r.flags.push_back("service " + std::to_string(i) + " has no capability labels");
        } else if (n_caps > 1) {
            std::vector<double> counts;
            counts.reserve(hist.size());
            for (const auto& [cap, c] : hist) counts.push_back(c);
            h = normalized_entropy(counts, total, log_base);
        }
        r.per_unit_entropy.push_back(h);
        entropy_sum += h;
    }
    r.value = (1.0 - entropy_sum / static_cast<double>(d.service_count())) * 100.0;
    return r;
}

EntropyAlignment di(const CallGraph& g, const Decomposition& d, CapabilityWeighting weighting) {
    EntropyAlignment r;
    const int k = d.service_count();
    const double log_base = k > 1 ? std::log(static_cast<double>(k)) : 0.0;

    double entropy_sum = 0.0;
    int used = 0;
    for (const auto& cap : g.caps.capabilities) {
        std::vector<double> per_service(static_cast<std::size_t>(k), 0.0);
        double total = 0.0;
        for (int m = 0; m < g.method_count(); ++m) {
            const auto it = g.caps.method_caps.find(g.methods[m]);
            if (it == g.caps.method_caps.end() || !it->second.count(cap)) continue;
            const double w = method_weight(g.caps, g.methods[m], weighting);
            per_service[d.assignment[m]] += w;
            total += w;
        }
        if (total <= 0.0) {
            r.flags.push_back("capability '" + cap + "' has no labeled methods");
            r.per_unit_entropy.push_back(0.0);
            continue;
        }
        const double h = k > 1 ? normalized_entropy(per_service, total, log_base) : 0.0;
        r.per_unit_entropy.push_back(h);
        entropy_sum += h;
        ++used;
    }
    if (used == 0) {
        r.flags.push_back("no capability has labeled methods");
        r.value = 0.0;
        return r;
    }
    r.value = (1.0 - entropy_sum / static_cast<double>(used)) * 100.0;
    return r;
}

double abcp(double bcp_value, double di_value) {
    return 0.5 * bcp_value + 0.5 * di_value;
}

double icp(const CallGraph& g, const Decomposition& d) {
    if (d.service_count() == 1) return 0.0;
    const ServiceStats st = accumulate(g, d);
    if (st.icp_total == 0.0) return 0.0;
    return st.icp_cross / st.icp_total;
}

double ifn(const CallGraph& g, const Decomposition& d) {
    const ServiceStats st = accumulate(g, d);
    double sum = 0.0;
    for (const auto& iface : st.interfaces) sum += static_cast<double>(iface.size());
    return sum / static_cast<double>(d.service_count());
}

MetricsReport compute_metrics(const CallGraph& g, const Decomposition& d,
                              CapabilityWeighting weighting) {
    const ServiceStats st = accumulate(g, d);
    const int k = d.service_count();

    MetricsReport rep;
    rep.service_count = k;

    const CohesionResult ch = cohesion(g, d);
    const CouplingResult cp = coupling(g, d);
    rep.cohesion = ch.value;
    rep.coupling = cp.value;
    rep.mq = k == 1 ? ch.per_service[0] : ch.value - cp.value;
    if (cp.single_service) {
        rep.flags.push_back("single service: coupling reported as 0");
    }

    const EntropyAlignment b = bcp(g, d, weighting);
    const EntropyAlignment dom = di(g, d, weighting);
    rep.bcp = b.value;
    rep.di = dom.value;
    rep.abcp = abcp(b.value, dom.value);
    rep.flags.insert(rep.flags.end(), b.flags.begin(), b.flags.end());
    rep.flags.insert(rep.flags.end(), dom.flags.begin(), dom.flags.end());

    rep.icp = icp(g, d);
    rep.ifn = ifn(g, d);

    for (int i = 0; i < k; ++i) {
        ServiceDetail detail;
        detail.size = st.sizes[i];
        detail.intra_edges = st.mu[i];
        for (int m : st.interfaces[i]) detail.interface_methods.push_back(g.methods[m]);
        for (int m : d.services[i]) {
            const auto it = g.caps.method_caps.find(g.methods[m]);
            if (it == g.caps.method_caps.end()) continue;
            const double w = method_weight(g.caps, g.methods[m], weighting);
            for (const auto& cap : it->second) detail.capability_counts[cap] += w;
        }
        rep.per_service.push_back(std::move(detail));
    }
    return rep;
}

}  // namespace rake
