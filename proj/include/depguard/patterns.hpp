#pragma once

#include "depguard/facts.hpp"
#include "depguard/fixpoint.hpp"
#include "depguard/frontend.hpp"
#include "depguard/variable.hpp"

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace depguard
{
/// A component of an EVM configuration that a noninterference property may vary.
struct Component
{
    enum class Kind : uint8_t
    {
        Global,   ///< block/transaction field
        Local,    ///< call-frame field: actor, input, sender, value, code
        Stack,    ///< SSA stack variable
        Memory,   ///< memory word at a location
        Storage,  ///< actor storage slot
        Other,    ///< every account other than the actor
    };

    Kind kind = Kind::Global;
    u256 index;

    static Component global(GlobalName g) { return {Kind::Global, u256{static_cast<uint64_t>(g)}}; }
    static Component local(LocalName l) { return {Kind::Local, u256{static_cast<uint64_t>(l)}}; }
    static Component stack(VarId v) { return {Kind::Stack, u256{v}}; }
    static Component memory(const u256& loc) { return {Kind::Memory, loc}; }
    static Component storage(const u256& loc) { return {Kind::Storage, loc}; }
    static Component other() { return {Kind::Other, u256{}}; }
    static Component timestamp() { return global(GlobalName::Timestamp); }
    static Component caller() { return local(LocalName::Sender); }

    [[nodiscard]] std::string str() const;
    /// Accepts the names printed by str() plus the opcode-style aliases (e.g. "coinbase").
    static std::optional<Component> parse(std::string_view name);

    friend bool operator==(const Component&, const Component&) = default;
    friend auto operator<=>(const Component&, const Component&) = default;
};

/// CFG variables holding a component.
VarSet to_var(const Component& z);

/// Tags whose source variable lies in to_var(z). Empty for components without a tag
/// (stack, memory, storage, other accounts).
std::set<Op> tags_of(const Component& z);

/// Instruction predicate f, expressed as opcode-set membership.
using OpSet = std::set<Op>;

/// Parses a comma-separated list of opcode names ("CALL,SSTORE").
OpSet parse_opset(std::string_view text);
/// Parses a comma-separated list of component names ("timestamp,number").
std::vector<Component> parse_components(std::string_view text);

enum class Polarity : uint8_t
{
    ComplianceByAbsence,  ///< property holds if no fact is derived
    ViolationByAbsence,   ///< a violation is proven for a group if none of its facts is derived
};

/// Facts that must be absent together; RW keeps one group per SSTORE.
struct FactGroup
{
    Pc pc = 0;
    std::vector<DepFact> facts;
};

struct Pattern
{
    std::string name;
    Polarity polarity = Polarity::ComplianceByAbsence;
    std::vector<FactGroup> groups;

    /// Union of all group facts, sorted.
    [[nodiscard]] std::vector<DepFact> facts() const;
};

/// P_NI(Z, f). Throws std::invalid_argument if a component of Z carries no tag, since such a
/// pattern could not certify independence from it.
Pattern pattern_noninterference(const std::vector<Component>& z, const OpSet& f, const Contract& c);

/// Timestamp independence of CALL arguments and reachability.
Pattern pattern_timestamp(const Contract& c);

/// Restricted-write violation pattern: per SSTORE, the caller dependencies of its key and of
/// its reachability.
Pattern pattern_restricted_write(const Contract& c);

struct GroupVerdict
{
    Pc pc = 0;
    bool matched = false;
    std::vector<DepFact> witnesses;
};

struct Verdict
{
    bool matched = false;
    std::vector<DepFact> witnesses;  ///< pattern facts present in the fixpoint, sorted
    std::vector<GroupVerdict> groups;
};

/// Compliance patterns match iff no pattern fact is derived. Violation patterns match iff some
/// group has no derived fact; that group proves the violation.
Verdict check_pattern(const Pattern& p, const Lfp& lfp);
}  // namespace depguard
