#pragma once

#include "depguard/cfg.hpp"
#include "depguard/facts.hpp"
#include "depguard/fixpoint.hpp"
#include "depguard/patterns.hpp"

#include <chrono>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace depguard
{
struct AnalysisOptions
{
    uint64_t timeout_ms = 60'000;
    uint64_t seed = 0;
    size_t max_facts = 20'000'000;
};

/// Everything the pipeline computes for one contract.
struct Analysis
{
    Cfg cfg;
    FactBase facts;
    Lfp lfp;
    std::map<std::string, double> phase_ms;  ///< cfg, facts, fixpoint

    [[nodiscard]] const Contract& contract() const noexcept { return cfg.contract(); }

    /// Local and derived facts in dump form, sorted lexicographically.
    [[nodiscard]] std::vector<std::string> dump() const;

    /// Printable facts per predicate name.
    [[nodiscard]] std::map<std::string, size_t> counts() const;

    /// Tags reaching GasDependOn / MsizeDependOn at any pc.
    [[nodiscard]] std::vector<std::string> gas_tags() const;
    [[nodiscard]] std::vector<std::string> msize_tags() const;
};

/// CFG construction, fact generation and fixpoint under one deadline. Throws Error(Timeout)
/// when the deadline passes and Error(BudgetExceeded) when the fact budget is exhausted.
Analysis analyze(const Contract& c, const AnalysisOptions& opt = {});

/// Pattern by CLI name: "ts", "rw" or "ni:<components>:<opcodes>".
/// Throws std::invalid_argument for malformed names.
Pattern make_pattern(const std::string& name, const Contract& c);
}  // namespace depguard
