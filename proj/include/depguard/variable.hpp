#pragma once

#include "depguard/frontend.hpp"
#include "depguard/u256.hpp"

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace depguard
{
enum class VarKind : uint8_t
{
    Stack,
    MemS,
    MemD,
    StorS,
    StorD,
    Gas,
    Msize,
    Local,
    Global,
    External,
};

enum class LocalName : uint8_t
{
    Actor,
    Input,
    Sender,
    Value,
    Code,
};
constexpr unsigned kLocalCount = 5;

enum class GlobalName : uint8_t
{
    Parent,
    Beneficiary,
    Difficulty,
    Number,
    Gaslimit,
    Timestamp,
    Origin,
    Prize,
};
constexpr unsigned kGlobalCount = 8;

const char* to_string(LocalName n) noexcept;
const char* to_string(GlobalName n) noexcept;

/// A concrete CFG variable. `key` holds the stack id, location, pc or env-name index.
struct Var
{
    VarKind kind = VarKind::Stack;
    bool temporal = false;
    u256 key;

    static Var stack(VarId id) { return {VarKind::Stack, false, u256{id}}; }
    static Var mem_s(const u256& loc) { return {VarKind::MemS, false, loc}; }
    static Var mem_d(const u256& loc) { return {VarKind::MemD, false, loc}; }
    static Var stor_s(const u256& loc) { return {VarKind::StorS, false, loc}; }
    static Var stor_d(const u256& loc) { return {VarKind::StorD, false, loc}; }
    static Var gas(Pc pc) { return {VarKind::Gas, false, u256{pc}}; }
    static Var msize(Pc pc) { return {VarKind::Msize, false, u256{pc}}; }
    static Var local(LocalName n) { return {VarKind::Local, false, u256{static_cast<uint64_t>(n)}}; }
    static Var global(GlobalName n) { return {VarKind::Global, false, u256{static_cast<uint64_t>(n)}}; }
    static Var external() { return {VarKind::External, false, u256{}}; }

    [[nodiscard]] Var temp() const { return {kind, true, key}; }
    [[nodiscard]] Var base() const { return {kind, false, key}; }

    [[nodiscard]] Pc pc() const { return static_cast<Pc>(key.low64()); }
    [[nodiscard]] VarId stack_id() const { return static_cast<VarId>(key.low64()); }
    [[nodiscard]] LocalName local_name() const { return static_cast<LocalName>(key.low64()); }
    [[nodiscard]] GlobalName global_name() const { return static_cast<GlobalName>(key.low64()); }

    [[nodiscard]] std::string str() const;

    friend bool operator==(const Var&, const Var&) = default;
    friend std::strong_ordering operator<=>(const Var&, const Var&) = default;
};

/// Element of a symbolic variable set: one variable, a whole family, or a byte range of
/// memory cells. Families and ranges are how unknown (TOP) locations appear in Def/Use.
struct VarAtom
{
    enum class Shape : uint8_t
    {
        Single,
        All,
        Range,  ///< cells whose key lies in [lo, hi)
    };

    VarKind kind = VarKind::Stack;
    bool temporal = false;
    Shape shape = Shape::Single;
    u256 lo;
    u256 hi;

    static VarAtom of(const Var& v) { return {v.kind, v.temporal, Shape::Single, v.key, {}}; }
    static VarAtom all(VarKind k, bool temporal = false) { return {k, temporal, Shape::All, {}, {}}; }
    static VarAtom range(VarKind k, const u256& lo, const u256& hi, bool temporal = false)
    {
        return {k, temporal, Shape::Range, lo, hi};
    }

    [[nodiscard]] bool is_single() const noexcept { return shape == Shape::Single; }
    [[nodiscard]] Var var() const { return {kind, temporal, lo}; }
    [[nodiscard]] VarAtom temp() const
    {
        VarAtom a = *this;
        a.temporal = true;
        return a;
    }
    [[nodiscard]] VarAtom base() const
    {
        VarAtom a = *this;
        a.temporal = false;
        return a;
    }
    [[nodiscard]] bool contains(const Var& v) const;
    [[nodiscard]] std::string str() const;

    friend bool operator==(const VarAtom&, const VarAtom&) = default;
    friend std::strong_ordering operator<=>(const VarAtom&, const VarAtom&) = default;
};

/// True iff some concrete variable belongs to both atoms.
bool overlaps(const VarAtom& a, const VarAtom& b);

/// Sorted, deduplicated set of atoms.
class VarSet
{
public:
    VarSet() = default;
    VarSet(std::initializer_list<VarAtom> atoms);
    VarSet(std::initializer_list<Var> vars);

    void add(const VarAtom& a);
    void add(const Var& v) { add(VarAtom::of(v)); }
    void add(const VarSet& other);

    [[nodiscard]] bool empty() const noexcept { return atoms_.empty(); }
    [[nodiscard]] size_t size() const noexcept { return atoms_.size(); }
    [[nodiscard]] const std::vector<VarAtom>& atoms() const noexcept { return atoms_; }
    auto begin() const noexcept { return atoms_.begin(); }
    auto end() const noexcept { return atoms_.end(); }

    /// Symbolic membership of a concrete variable.
    [[nodiscard]] bool contains(const Var& v) const;
    [[nodiscard]] bool intersects(const VarAtom& a) const;
    [[nodiscard]] bool intersects(const VarSet& other) const;

    [[nodiscard]] std::string str() const;

    friend bool operator==(const VarSet&, const VarSet&) = default;

private:
    std::vector<VarAtom> atoms_;
};

/// Whether a variable of this kind is indexed by a location (memory/storage).
constexpr bool is_located(VarKind k) noexcept
{
    return k == VarKind::MemS || k == VarKind::MemD || k == VarKind::StorS || k == VarKind::StorD;
}
}  // namespace depguard
