#include "depguard/patterns.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>

namespace depguard
{
namespace
{
struct Alias
{
    std::string_view name;
    Component comp;
};

const std::vector<Alias>& aliases()
{
    using G = GlobalName;
    using L = LocalName;
    // First entry per component is its printed name.
    static const std::vector<Alias> table{
        {"timestamp", Component::global(G::Timestamp)}, {"number", Component::global(G::Number)},
        {"difficulty", Component::global(G::Difficulty)}, {"gaslimit", Component::global(G::Gaslimit)},
        {"coinbase", Component::global(G::Beneficiary)}, {"beneficiary", Component::global(G::Beneficiary)},
        {"parent", Component::global(G::Parent)},         {"blockhash", Component::global(G::Parent)},
        {"origin", Component::global(G::Origin)},         {"gasprice", Component::global(G::Prize)},
        {"caller", Component::local(L::Sender)},          {"sender", Component::local(L::Sender)},
        {"address", Component::local(L::Actor)},          {"actor", Component::local(L::Actor)},
        {"callvalue", Component::local(L::Value)},        {"value", Component::local(L::Value)},
        {"calldata", Component::local(L::Input)},         {"input", Component::local(L::Input)},
        {"code", Component::local(L::Code)},              {"other", Component::other()},
    };
    return table;
}

std::string lower(std::string_view s)
{
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

std::string_view trim(std::string_view s)
{
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
        s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
        s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split(std::string_view text)
{
    std::vector<std::string_view> out;
    while (true)
    {
        const size_t comma = text.find(',');
        const std::string_view item = trim(text.substr(0, comma));
        if (!item.empty())
            out.push_back(item);
        if (comma == std::string_view::npos)
            break;
        text.remove_prefix(comma + 1);
    }
    return out;
}

/// Parses "name(arg)" into arg, or nullopt if the prefix does not match.
std::optional<u256> indexed(std::string_view s, std::string_view prefix)
{
    if (!s.starts_with(prefix) || !s.ends_with(")"))
        return std::nullopt;
    s.remove_prefix(prefix.size());
    s.remove_suffix(1);
    return u256::parse(s);
}

DepFact var_dep(VarId x, Op tag)
{
    return {Pred::VarMayDependOn, {Sym::var(x), Sym::tag(tag)}};
}

DepFact inst_dep(Pc pc, Op tag)
{
    return {Pred::InstMayDepOn, {Sym::pc(pc), Sym::tag(tag)}};
}

void normalize(std::vector<DepFact>& v)
{
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
}
}  // namespace

std::string Component::str() const
{
    switch (kind)
    {
    case Kind::Stack:
        return "stack(" + index.dec() + ")";
    case Kind::Memory:
        return "mem(" + index.dec() + ")";
    case Kind::Storage:
        return "stor(" + index.dec() + ")";
    default:
        for (const auto& a : aliases())
            if (a.comp == *this)
                return std::string(a.name);
        return "?";
    }
}

std::optional<Component> Component::parse(std::string_view name)
{
    const std::string n = lower(trim(name));
    for (const auto& a : aliases())
        if (a.name == n)
            return a.comp;
    if (const auto i = indexed(n, "stack("); i && i->fits_u64() && i->low64() <= UINT32_MAX)
        return stack(static_cast<VarId>(i->low64()));
    if (const auto i = indexed(n, "mem("))
        return memory(*i);
    if (const auto i = indexed(n, "stor("))
        return storage(*i);
    return std::nullopt;
}

VarSet to_var(const Component& z)
{
    switch (z.kind)
    {
    case Component::Kind::Global:
        return {Var::global(static_cast<GlobalName>(z.index.low64()))};
    case Component::Kind::Local:
        return {Var::local(static_cast<LocalName>(z.index.low64()))};
    case Component::Kind::Stack:
        return {Var::stack(static_cast<VarId>(z.index.low64()))};
    case Component::Kind::Memory:
        return {Var::mem_s(z.index), Var::mem_d(z.index)};
    case Component::Kind::Storage:
        return {Var::stor_s(z.index), Var::stor_d(z.index)};
    case Component::Kind::Other:
        return {Var::external()};
    }
    return {};
}

std::set<Op> tags_of(const Component& z)
{
    std::set<Op> out;
    if (z.kind != Component::Kind::Global && z.kind != Component::Kind::Local)
        return out;
    const Var v = to_var(z).atoms().front().var();
    // A tag belongs to the component when it is the designated reader of the variable.
    for (const Op t : all_tags())
        if (source_tag(t, v) == t)
            out.insert(t);
    return out;
}

OpSet parse_opset(std::string_view text)
{
    OpSet out;
    for (const auto item : split(text))
    {
        std::string up(item);
        std::transform(up.begin(), up.end(), up.begin(), [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
        const auto op = op_from_name(up);
        if (!op)
            throw std::invalid_argument("unknown opcode '" + std::string(item) + "'");
        out.insert(*op);
    }
    return out;
}

std::vector<Component> parse_components(std::string_view text)
{
    std::vector<Component> out;
    for (const auto item : split(text))
    {
        const auto c = Component::parse(item);
        if (!c)
            throw std::invalid_argument("unknown component '" + std::string(item) + "'");
        out.push_back(*c);
    }
    return out;
}

std::vector<DepFact> Pattern::facts() const
{
    std::vector<DepFact> out;
    for (const auto& g : groups)
        out.insert(out.end(), g.facts.begin(), g.facts.end());
    normalize(out);
    return out;
}

Pattern pattern_noninterference(const std::vector<Component>& z, const OpSet& f, const Contract& c)
{
    std::set<Op> tags;
    std::string zs;
    for (const auto& comp : z)
    {
        const auto t = tags_of(comp);
        if (t.empty())
            throw std::invalid_argument("component '" + comp.str() + "' has no source tag");
        tags.insert(t.begin(), t.end());
        zs += (zs.empty() ? "" : ",") + comp.str();
    }
    std::string fs;
    for (const Op op : f)
        fs += (fs.empty() ? "" : ",") + std::string(op_name(op));

    Pattern p;
    p.name = "ni:" + zs + ":" + fs;
    p.polarity = Polarity::ComplianceByAbsence;
    FactGroup g;
    for (const auto& [pc, ins] : c.code)
    {
        if (!f.contains(ins.op))
            continue;
        for (const Op t : tags)
        {
            g.facts.push_back(inst_dep(pc, t));
            for (const VarId x : ins.in_vars)
                g.facts.push_back(var_dep(x, t));
        }
    }
    normalize(g.facts);
    if (!g.facts.empty())
        p.groups.push_back(std::move(g));
    return p;
}

Pattern pattern_timestamp(const Contract& c)
{
    Pattern p = pattern_noninterference({Component::timestamp()}, {Op::CALL}, c);
    p.name = "ts";
    return p;
}

Pattern pattern_restricted_write(const Contract& c)
{
    Pattern p;
    p.name = "rw";
    p.polarity = Polarity::ViolationByAbsence;
    for (const auto& [pc, ins] : c.code)
    {
        if (ins.op != Op::SSTORE)
            continue;
        FactGroup g{pc, {var_dep(ins.in_vars[0], Op::CALLER), inst_dep(pc, Op::CALLER)}};
        normalize(g.facts);
        p.groups.push_back(std::move(g));
    }
    return p;
}

Verdict check_pattern(const Pattern& p, const Lfp& lfp)
{
    Verdict v;
    for (const auto& g : p.groups)
    {
        GroupVerdict gv{g.pc, true, {}};
        for (const auto& f : g.facts)
            if (lfp.contains(f))
                gv.witnesses.push_back(f);
        gv.matched = gv.witnesses.empty();
        v.witnesses.insert(v.witnesses.end(), gv.witnesses.begin(), gv.witnesses.end());
        v.groups.push_back(std::move(gv));
    }
    normalize(v.witnesses);
    if (p.polarity == Polarity::ComplianceByAbsence)
        v.matched = v.witnesses.empty();
    else
        v.matched = std::any_of(v.groups.begin(), v.groups.end(), [](const GroupVerdict& g) { return g.matched; });
    return v;
}
}  // namespace depguard
