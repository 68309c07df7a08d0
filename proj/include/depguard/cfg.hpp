#pragma once

#include "depguard/frontend.hpp"
#include "depguard/state.hpp"
#include "depguard/variable.hpp"

#include <compare>
#include <functional>
#include <map>
#include <string>
#include <vector>

namespace depguard
{
/// Sink pcs for the two terminal CFG nodes.
constexpr Pc kHaltPc = 0xfffffffeu;
constexpr Pc kExceptionPc = 0xfffffffdu;

/// CFG node (pc, k): the k-th intermediate point of the instruction at pc.
struct CfgNode
{
    Pc pc = 0;
    uint16_t sub = 0;

    static constexpr CfgNode halt() { return {kHaltPc, 0}; }
    static constexpr CfgNode exception() { return {kExceptionPc, 0}; }
    [[nodiscard]] bool is_sink() const noexcept { return pc == kHaltPc || pc == kExceptionPc; }
    [[nodiscard]] std::string str() const;

    friend bool operator==(const CfgNode&, const CfgNode&) = default;
    friend std::strong_ordering operator<=>(const CfgNode&, const CfgNode&) = default;
};

using StateFn = std::function<void(CfgState&)>;
using GuardFn = std::function<bool(const CfgState&)>;

/// One labeled edge. State edges carry `apply`; guard edges carry `guard` and define nothing.
struct CfgEdge
{
    CfgNode src;
    CfgNode dst;
    std::string label;  ///< edge family within the instruction, e.g. "gas", "mem.s", "call.tmp"
    VarSet def;
    VarSet use;
    StateFn apply;
    GuardFn guard;

    [[nodiscard]] bool is_guard() const noexcept { return static_cast<bool>(guard); }
};

class Cfg
{
public:
    /// Builds the CFG of a linearized, preprocessed contract.
    static Cfg build(Contract contract);

    [[nodiscard]] const Contract& contract() const noexcept { return contract_; }
    [[nodiscard]] CfgNode entry() const noexcept { return {contract_.entry, 0}; }
    [[nodiscard]] const std::vector<CfgNode>& nodes() const noexcept { return nodes_; }
    [[nodiscard]] const std::vector<CfgEdge>& edges() const noexcept { return edges_; }
    [[nodiscard]] size_t index(const CfgNode& n) const;
    [[nodiscard]] const std::vector<size_t>& out_edges(size_t node) const { return out_[node]; }
    [[nodiscard]] const std::vector<size_t>& in_edges(size_t node) const { return in_[node]; }
    /// Edges belonging to the instruction at pc, in chain order.
    [[nodiscard]] std::vector<size_t> edges_of(Pc pc) const;

    /// Takes the unique enabled outgoing edge. Throws Error(Stuck) if none is enabled.
    CfgNode step(const CfgNode& at, CfgState& state) const;

    std::string to_dot() const;

    /// Construction API used by the per-opcode rules.
    void add_edge(CfgEdge e);
    size_t intern(const CfgNode& n);

private:
    Contract contract_;
    std::vector<CfgNode> nodes_;
    std::map<CfgNode, size_t> ids_;
    std::vector<CfgEdge> edges_;
    std::vector<std::vector<size_t>> out_;
    std::vector<std::vector<size_t>> in_;
};

struct CfgRun
{
    CfgNode final_node;
    CfgState state;
    uint64_t steps = 0;
};

/// Steps from `start` until a sink. Throws Error(FuelExhausted) after `fuel` edges.
CfgRun run_cfg(const Cfg& cfg, CfgNode start, CfgState state, uint64_t fuel);

/// Window sizes beyond this are truncated when materializing memory bytes; such accesses would
/// exhaust any realistic gas budget before reaching the interpreter's data path.
constexpr uint64_t kMaxWindowBytes = 1u << 20;
}  // namespace depguard
