#pragma once

#include <array>
#include <chrono>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace depguard::datalog
{
using SymId = uint32_t;
constexpr SymId kUnbound = UINT32_MAX;
constexpr size_t kMaxArity = 4;

/// Fixed-width tuple; columns past the relation's arity hold kUnbound.
using Tuple = std::array<SymId, kMaxArity>;

struct TupleHash
{
    size_t operator()(const Tuple& t) const noexcept
    {
        uint64_t h = 0xcbf29ce484222325ULL;
        for (const SymId v : t)
        {
            h ^= v;
            h *= 0x100000001b3ULL;
        }
        return static_cast<size_t>(h ^ (h >> 29));
    }
};

/// Append-only set of tuples with lazily built hash indices per bound-column mask.
class Relation
{
public:
    Relation(std::string name, uint8_t arity) : name_(std::move(name)), arity_(arity) {}

    [[nodiscard]] const std::string& name() const noexcept { return name_; }
    [[nodiscard]] uint8_t arity() const noexcept { return arity_; }
    [[nodiscard]] size_t size() const noexcept { return rows_.size(); }
    [[nodiscard]] const Tuple& row(size_t i) const { return rows_[i]; }
    [[nodiscard]] bool contains(const Tuple& t) const { return set_.contains(t); }

    /// Returns false if the tuple was already present.
    bool insert(const Tuple& t);

    /// Rows whose columns in `mask` equal those of `key` (other key columns ignored).
    const std::vector<uint32_t>& lookup(unsigned mask, const Tuple& key);

private:
    using Index = std::unordered_map<Tuple, std::vector<uint32_t>, TupleHash>;
    static Tuple project(unsigned mask, const Tuple& t);

    std::string name_;
    uint8_t arity_;
    std::vector<Tuple> rows_;
    std::unordered_map<Tuple, uint32_t, TupleHash> set_;
    std::array<std::unique_ptr<Index>, 1u << kMaxArity> indices_;
};

struct Term
{
    bool is_var = false;
    uint32_t id = 0;  ///< variable index or constant symbol

    static Term var(uint32_t v) { return {true, v}; }
    static Term constant(SymId s) { return {false, s}; }
};

struct Atom
{
    uint32_t rel = 0;
    std::vector<Term> terms;
};

struct Rule
{
    std::string name;
    Atom head;
    std::vector<Atom> body;
    unsigned stratum = 0;
};

struct Options
{
    /// Non-zero seeds permute rule order and delta iteration order.
    uint64_t seed = 0;
    size_t max_facts = 20'000'000;
    std::optional<std::chrono::steady_clock::time_point> deadline;
};

struct Stats
{
    size_t rounds = 0;
    size_t derivations = 0;
};

/// Bottom-up semi-naive evaluator for positive, stratified Horn clauses.
class Engine
{
public:
    uint32_t add_relation(std::string name, uint8_t arity);
    [[nodiscard]] Relation& relation(uint32_t id) { return *rels_[id]; }
    [[nodiscard]] const Relation& relation(uint32_t id) const { return *rels_[id]; }
    [[nodiscard]] size_t relation_count() const noexcept { return rels_.size(); }

    /// Throws std::invalid_argument for arity mismatches or unbound head variables.
    void add_rule(Rule r);
    [[nodiscard]] const std::vector<Rule>& rules() const noexcept { return rules_; }

    bool add_fact(uint32_t rel, const Tuple& t);

    /// Runs every stratum to its fixpoint. Throws Error(BudgetExceeded) or Error(Timeout).
    Stats solve(const Options& opt = {});

    [[nodiscard]] size_t total_facts() const noexcept;

private:
    struct Plan;
    class Evaluator;

    std::vector<std::unique_ptr<Relation>> rels_;
    std::vector<Rule> rules_;
};
}  // namespace depguard::datalog
