#include "rake/decomposition.hpp"

#include <algorithm>
#include <map>

namespace rake {

Decomposition Decomposition::from_assignment(const std::vector<int>& raw) {
    if (raw.empty()) {
        throw InvalidConfig("decomposition needs at least one method");
    }
    std::map<int, int> compact;  // original index -> 0..k-1, ascending
    for (int s : raw) {
        if (s < 0) throw InvalidConfig("negative service index");
        compact.emplace(s, 0);
    }
    int next = 0;
    for (auto& [orig, idx] : compact) idx = next++;

    Decomposition d;
    d.assignment.reserve(raw.size());
    d.services.assign(compact.size(), {});
    for (std::size_t m = 0; m < raw.size(); ++m) {
        const int s = compact.at(raw[m]);
        d.assignment.push_back(s);
        d.services[s].push_back(static_cast<int>(m));
    }
    return d;
}

Decomposition Decomposition::single_service(int n_methods) {
    return from_assignment(std::vector<int>(static_cast<std::size_t>(n_methods), 0));
}

}  // namespace rake
