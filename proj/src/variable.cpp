#include "depguard/variable.hpp"

#include <algorithm>

namespace depguard
{
const char* to_string(LocalName n) noexcept
{
    switch (n)
    {
    case LocalName::Actor:
        return "actor";
    case LocalName::Input:
        return "input";
    case LocalName::Sender:
        return "sender";
    case LocalName::Value:
        return "value";
    case LocalName::Code:
        return "code";
    }
    return "?";
}

const char* to_string(GlobalName n) noexcept
{
    switch (n)
    {
    case GlobalName::Parent:
        return "parent";
    case GlobalName::Beneficiary:
        return "beneficiary";
    case GlobalName::Difficulty:
        return "difficulty";
    case GlobalName::Number:
        return "number";
    case GlobalName::Gaslimit:
        return "gaslimit";
    case GlobalName::Timestamp:
        return "timestamp";
    case GlobalName::Origin:
        return "origin";
    case GlobalName::Prize:
        return "prize";
    }
    return "?";
}

namespace
{
const char* kind_name(VarKind k)
{
    switch (k)
    {
    case VarKind::Stack:
        return "Stack";
    case VarKind::MemS:
        return "MemS";
    case VarKind::MemD:
        return "MemD";
    case VarKind::StorS:
        return "StorS";
    case VarKind::StorD:
        return "StorD";
    case VarKind::Gas:
        return "Gas";
    case VarKind::Msize:
        return "Msize";
    case VarKind::Local:
        return "Local";
    case VarKind::Global:
        return "Global";
    case VarKind::External:
        return "External";
    }
    return "?";
}

std::string key_str(VarKind k, const u256& key)
{
    switch (k)
    {
    case VarKind::Stack:
        return "s" + key.dec();
    case VarKind::Gas:
    case VarKind::Msize:
        return key.low64() == kExitPc ? "exit" : key.dec();
    case VarKind::Local:
        return to_string(static_cast<LocalName>(key.low64()));
    case VarKind::Global:
        return to_string(static_cast<GlobalName>(key.low64()));
    default:
        return key.hex();
    }
}

std::string wrap_temp(bool temporal, std::string s)
{
    return temporal ? "T(" + s + ")" : s;
}
}  // namespace

std::string Var::str() const
{
    if (kind == VarKind::External)
        return wrap_temp(temporal, "External");
    return wrap_temp(temporal, std::string(kind_name(kind)) + "(" + key_str(kind, key) + ")");
}

bool VarAtom::contains(const Var& v) const
{
    if (v.kind != kind || v.temporal != temporal)
        return false;
    switch (shape)
    {
    case Shape::Single:
        return v.key == lo;
    case Shape::All:
        return true;
    case Shape::Range:
        return lo <= v.key && v.key < hi;
    }
    return false;
}

std::string VarAtom::str() const
{
    switch (shape)
    {
    case Shape::Single:
        return var().str();
    case Shape::All:
        return wrap_temp(temporal, std::string(kind_name(kind)) + "(*)");
    case Shape::Range:
        return wrap_temp(temporal, std::string(kind_name(kind)) + "[" + lo.hex() + "," + hi.hex() + ")");
    }
    return "?";
}

bool overlaps(const VarAtom& a, const VarAtom& b)
{
    if (a.kind != b.kind || a.temporal != b.temporal)
        return false;
    using S = VarAtom::Shape;
    if (a.shape == S::All || b.shape == S::All)
        return true;
    if (a.shape == S::Single)
        return b.contains(a.var());
    if (b.shape == S::Single)
        return a.contains(b.var());
    return a.lo < b.hi && b.lo < a.hi;
}

VarSet::VarSet(std::initializer_list<VarAtom> atoms)
{
    for (const auto& a : atoms)
        add(a);
}

VarSet::VarSet(std::initializer_list<Var> vars)
{
    for (const auto& v : vars)
        add(v);
}

void VarSet::add(const VarAtom& a)
{
    if (a.shape == VarAtom::Shape::Range && !(a.lo < a.hi))
        return;
    const auto it = std::lower_bound(atoms_.begin(), atoms_.end(), a);
    if (it == atoms_.end() || !(*it == a))
        atoms_.insert(it, a);
}

void VarSet::add(const VarSet& other)
{
    for (const auto& a : other.atoms_)
        add(a);
}

bool VarSet::contains(const Var& v) const
{
    return std::any_of(atoms_.begin(), atoms_.end(), [&](const VarAtom& a) { return a.contains(v); });
}

bool VarSet::intersects(const VarAtom& a) const
{
    return std::any_of(atoms_.begin(), atoms_.end(), [&](const VarAtom& x) { return overlaps(x, a); });
}

bool VarSet::intersects(const VarSet& other) const
{
    return std::any_of(other.atoms_.begin(), other.atoms_.end(), [&](const VarAtom& a) { return intersects(a); });
}

std::string VarSet::str() const
{
    std::string out = "{";
    for (size_t i = 0; i < atoms_.size(); ++i)
    {
        if (i)
            out += ", ";
        out += atoms_[i].str();
    }
    return out + "}";
}
}  // namespace depguard
