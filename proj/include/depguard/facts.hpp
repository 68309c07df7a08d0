#pragma once

#include "depguard/cfg.hpp"
#include "depguard/opcode.hpp"
#include "depguard/u256.hpp"
#include "depguard/variable.hpp"

#include <compare>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace depguard
{
enum class SymKind : uint8_t
{
    Pc,
    Var,
    Loc,   ///< memory/storage location or window offset
    Size,  ///< window size
    Top,   ///< unknown location or size
    Tag,   ///< source opcode
};

/// Typed constant appearing in a fact.
struct Sym
{
    SymKind kind = SymKind::Pc;
    u256 value;

    static Sym pc(Pc p) { return {SymKind::Pc, u256{p}}; }
    static Sym var(VarId v) { return {SymKind::Var, u256{v}}; }
    static Sym loc(const u256& l) { return {SymKind::Loc, l}; }
    static Sym size(const u256& s) { return {SymKind::Size, s}; }
    static Sym top() { return {SymKind::Top, u256{}}; }
    static Sym tag(Op op) { return {SymKind::Tag, u256{static_cast<uint64_t>(op)}}; }

    [[nodiscard]] Op op() const { return static_cast<Op>(value.low64()); }
    [[nodiscard]] std::string str() const;

    friend bool operator==(const Sym&, const Sym&) = default;
    friend std::strong_ordering operator<=>(const Sym&, const Sym&) = default;
};

enum class Pred : uint8_t
{
    // Local dependency facts, one group per kind of written variable.
    VarSource,
    VarVar,
    VarMem,
    VarStor,
    VarGas,
    VarMsize,
    VarExternal,
    MemSource,
    MemVar,
    MemMem,
    MemStore,
    MemGas,
    MemMsize,
    MemExternal,
    StoreVar,
    GasSource,
    GasVar,
    GasMem,
    GasStore,
    GasMsize,
    GasExternal,
    MsizeVar,
    ExternalSource,
    ExternalVar,
    ExternalMem,
    ExternalStore,
    ExternalGas,
    ExternalMsize,
    // Write markers and structural facts.
    VarWrite,
    MemWrite,
    StorWrite,
    GasWrite,
    MsizeWrite,
    ExternalWrite,
    NoReassignMem,
    NoReassignStor,
    Controls,
    // Derived predicates.
    MayControls,
    VarMayDependOn,
    MemMayDependOn,
    StorMayDependOn,
    GasDependOn,
    MsizeDependOn,
    ExternalDependOn,
    InstMayDepOn,
    // Grounding relations; internal to the solver and never printed.
    Succ,
    Cond,
    ReadMem,
    ReadStor,
    IvlCell,
    IsConst,
    MemFrame,
    StorFrame,
};
constexpr size_t kPredCount = static_cast<size_t>(Pred::StorFrame) + 1;

struct PredInfo
{
    std::string_view name;
    uint8_t arity = 0;       ///< including the pc index when `indexed`
    bool indexed = false;    ///< first argument is the pc and prints as NAME@pc(...)
    bool derived = false;
    bool internal = false;
};

const PredInfo& pred_info(Pred p) noexcept;

/// Ground atom: predicate plus typed arguments.
struct DepFact
{
    Pred pred = Pred::VarVar;
    std::vector<Sym> args;

    [[nodiscard]] std::string str() const;

    friend bool operator==(const DepFact&, const DepFact&) = default;
    friend std::strong_ordering operator<=>(const DepFact&, const DepFact&) = default;
};

/// Base atom written by an instruction and the base atoms its new value is computed from,
/// obtained by composing the instruction's edge chain through its temporaries.
struct WriteSummary
{
    VarAtom target;
    VarSet sources;
};

std::vector<WriteSummary> summarize(const Cfg& cfg, Pc pc);

/// Source tag for an environment variable read by `op`: the opcode itself when it is the
/// designated reader of that variable, otherwise the variable's canonical reader.
Op source_tag(Op op, const Var& env);

/// Tags that can appear in facts.
const std::vector<Op>& all_tags();

struct FactBase
{
    std::vector<DepFact> facts;      ///< local facts, markers, Controls, NoReassign*
    std::vector<DepFact> grounding;  ///< solver-internal relations
    std::set<u256> mem_domain;
    std::set<u256> stor_domain;
};

/// Local facts of every instruction plus the instruction-level control dependences.
FactBase generate_facts(const Cfg& cfg);
}  // namespace depguard
