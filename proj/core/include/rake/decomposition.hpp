#pragma once

#include <vector>

#include "rake/error.hpp"

namespace rake {

/// A method-to-service partition. The stored assignment is compacted:
/// service indices are 0..k-1 and every service is non-empty.
struct Decomposition {
    std::vector<int> assignment;             // method index -> service index
    std::vector<std::vector<int>> services;  // method indices per service

    int method_count() const { return static_cast<int>(assignment.size()); }
    int service_count() const { return static_cast<int>(services.size()); }

    /// Build from a raw assignment vector. Empty service columns are dropped
    /// and the surviving indices are renumbered to 0..k-1, preserving their
    /// original relative order. Raw indices must be non-negative.
    static Decomposition from_assignment(const std::vector<int>& raw);

    /// All methods in service 0.
    static Decomposition single_service(int n_methods);

    bool operator==(const Decomposition&) const = default;
};

}  // namespace rake
