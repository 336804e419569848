#pragma once

#include <functional>
#include <string>
#include <vector>

#include "circlt/config.hpp"

namespace circlt {

/// Result of one built-in verification criterion.
struct CriterionResult {
    int id = 0;
    std::string name;
    bool passed = false;
    std::string detail;
    double seconds = 0;
};

inline constexpr int kCriteriaCount = 14;

/// Run one criterion (1-based id). Uses the config's seed, tolerance
/// multiplier, thread count and enumeration budget; every other constant
/// is pinned in code.
CriterionResult run_criterion(int id, const ExperimentConfig& cfg);

/// Run all criteria in order, invoking `on_result` after each.
std::vector<CriterionResult> run_all_criteria(
    const ExperimentConfig& cfg,
    const std::function<void(const CriterionResult&)>& on_result = nullptr);

}  // namespace circlt
