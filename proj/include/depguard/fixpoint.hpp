#pragma once

#include "depguard/datalog.hpp"
#include "depguard/facts.hpp"

#include <chrono>
#include <optional>
#include <string>
#include <vector>

namespace depguard
{
struct FixpointOptions
{
    uint64_t seed = 0;  ///< non-zero permutes rule and delta order
    size_t max_facts = 20'000'000;
    std::optional<std::chrono::steady_clock::time_point> deadline;
};

/// Least fixpoint of the dependency rules: the derived facts, sorted.
struct Lfp
{
    std::vector<DepFact> facts;
    datalog::Stats stats;

    [[nodiscard]] bool contains(const DepFact& f) const;
    [[nodiscard]] std::vector<DepFact> of(Pred p) const;
};

/// Names of the dependency rules in declaration order.
std::vector<std::string> rule_names();

/// Solves the rules over `facts` plus `grounding`.
Lfp solve_fixpoint(const std::vector<DepFact>& facts, const std::vector<DepFact>& grounding,
                   const FixpointOptions& opt = {});

inline Lfp solve_fixpoint(const FactBase& fb, const FixpointOptions& opt = {})
{
    return solve_fixpoint(fb.facts, fb.grounding, opt);
}
}  // namespace depguard
