#include "depguard/facts.hpp"

#include "depguard/pdg.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <stdexcept>

namespace depguard
{
namespace
{
// clang-format off
constexpr std::array<PredInfo, kPredCount> kPreds{{
    {"VarSource", 3, true}, {"VarVar", 3, true}, {"VarMem", 3, true}, {"VarStor", 3, true},
    {"VarGas", 2, true}, {"VarMsize", 2, true}, {"VarExternal", 2, true},
    {"MemSource", 3, true}, {"MemVar", 3, true}, {"MemMem", 4, true}, {"MemStore", 3, true},
    {"MemGas", 2, true}, {"MemMsize", 2, true}, {"MemExternal", 2, true},
    {"StoreVar", 3, true},
    {"GasSource", 2, true}, {"GasVar", 2, true}, {"GasMem", 2, true}, {"GasStore", 2, true},
    {"GasMsize", 1, true}, {"GasExternal", 1, true},
    {"MsizeVar", 2, true},
    {"ExternalSource", 2, true}, {"ExternalVar", 2, true}, {"ExternalMem", 2, true},
    {"ExternalStore", 2, true}, {"ExternalGas", 1, true}, {"ExternalMsize", 1, true},
    {"VarWrite", 2, true}, {"MemWrite", 2, true}, {"StorWrite", 2, true}, {"GasWrite", 1, true},
    {"MsizeWrite", 1, true}, {"ExternalWrite", 1, true},
    {"NoReassignMem", 1}, {"NoReassignStor", 1}, {"Controls", 2},
    {"MayControls", 3, true, true}, {"VarMayDependOn", 2, false, true},
    {"MemMayDependOn", 3, true, true}, {"StorMayDependOn", 3, true, true},
    {"GasDependOn", 2, true, true}, {"MsizeDependOn", 2, true, true},
    {"ExternalDependOn", 2, true, true}, {"InstMayDepOn", 2, false, true},
    {"Succ", 2, false, false, true}, {"Cond", 2, false, false, true}, {"ReadMem", 2, false, false, true},
    {"ReadStor", 2, false, false, true}, {"IvlCell", 3, false, false, true},
    {"IsConst", 1, false, false, true}, {"MemFrame", 2, false, false, true},
    {"StorFrame", 2, false, false, true},
}};
// clang-format on

bool is_mem(VarKind k)
{
    return k == VarKind::MemS || k == VarKind::MemD;
}

bool is_stor(VarKind k)
{
    return k == VarKind::StorS || k == VarKind::StorD;
}

/// Kind of variable being written, which selects the fact family.
enum class Writer
{
    Var,
    Mem,
    Stor,
    Gas,
    Msize,
    External,
};

class Emitter
{
public:
    Emitter(FactBase& fb, const Instruction& ins) : fb_(fb), ins_(ins), pc_(Sym::pc(ins.pc)) {}

    void write(const WriteSummary& w)
    {
        const VarAtom& t = w.target;
        switch (t.kind)
        {
        case VarKind::Stack:
            writer_ = Writer::Var;
            target_ = Sym::var(t.var().stack_id());
            emit(Pred::VarWrite, {target_});
            break;
        case VarKind::MemS:
        case VarKind::MemD:
            writer_ = Writer::Mem;
            target_ = t.is_single() ? Sym::loc(t.lo) : Sym::top();
            emit(Pred::MemWrite, {target_});
            break;
        case VarKind::StorS:
        case VarKind::StorD:
            writer_ = Writer::Stor;
            target_ = t.is_single() ? Sym::loc(t.lo) : Sym::top();
            emit(Pred::StorWrite, {target_});
            break;
        case VarKind::Gas:
            writer_ = Writer::Gas;
            emit(Pred::GasWrite, {});
            break;
        case VarKind::Msize:
            writer_ = Writer::Msize;
            emit(Pred::MsizeWrite, {});
            break;
        case VarKind::External:
            writer_ = Writer::External;
            emit(Pred::ExternalWrite, {});
            break;
        default:
            throw std::logic_error("instruction writes an environment variable");
        }
        weak_ = !t.is_single();
        for (const auto& u : w.sources)
            read(u);
    }

private:
    void emit(Pred p, std::vector<Sym> rest)
    {
        DepFact f{p, {}};
        f.args.reserve(rest.size() + 1);
        f.args.push_back(pc_);
        for (auto& s : rest)
            f.args.push_back(std::move(s));
        fb_.facts.push_back(std::move(f));
    }

    /// Writer-specific fact with the target prepended for Var/Mem/Stor writers.
    void emit_for(std::array<Pred, 6> preds, std::vector<Sym> rest)
    {
        const Pred p = preds[static_cast<size_t>(writer_)];
        if (writer_ == Writer::Var || writer_ == Writer::Mem || writer_ == Writer::Stor)
            rest.insert(rest.begin(), target_);
        emit(p, std::move(rest));
    }

    [[noreturn]] static void unexpected(const VarAtom& u)
    {
        throw std::logic_error("no fact for read of " + u.str());
    }

    /// Locations denoted by a non-window memory read for Var/Gas/External writers.
    std::vector<Sym> mem_cells(const VarAtom& u) const
    {
        switch (u.shape)
        {
        case VarAtom::Shape::Single:
            return {Sym::loc(u.lo)};
        case VarAtom::Shape::All:
            return {Sym::top()};
        case VarAtom::Shape::Range:
            break;
        }
        std::vector<Sym> out;
        for (auto it = fb_.mem_domain.lower_bound(u.lo); it != fb_.mem_domain.end() && *it < u.hi; ++it)
            out.push_back(Sym::loc(*it));
        return out;
    }

    void read(const VarAtom& u)
    {
        constexpr Pred X = Pred::Controls;  // placeholder for impossible combinations
        switch (u.kind)
        {
        case VarKind::Stack:
            emit_for({Pred::VarVar, Pred::MemVar, Pred::StoreVar, Pred::GasVar, Pred::MsizeVar, Pred::ExternalVar},
                     {Sym::var(u.var().stack_id())});
            return;
        case VarKind::Local:
        case VarKind::Global:
        {
            if (writer_ == Writer::Stor || writer_ == Writer::Msize)
                unexpected(u);
            const Sym tag = Sym::tag(source_tag(ins_.op, u.var()));
            emit_for({Pred::VarSource, Pred::MemSource, X, Pred::GasSource, X, Pred::ExternalSource}, {tag});
            return;
        }
        case VarKind::MemS:
        case VarKind::MemD:
            if (writer_ == Writer::Mem)
            {
                if (u.shape == VarAtom::Shape::All)
                {
                    if (weak_ && u.kind == VarKind::MemD)
                        return;
                    emit(Pred::MemMem, {target_, Sym::top(), Sym::top()});
                }
                else if (u.shape == VarAtom::Shape::Single)
                    emit(Pred::MemMem, {target_, Sym::loc(u.lo), Sym::size(u256{32})});
                else
                    emit(Pred::MemMem, {target_, Sym::loc(u.lo), Sym::size(u.hi - u.lo)});
                return;
            }
            if (writer_ == Writer::Stor || writer_ == Writer::Msize)
                unexpected(u);
            for (auto& c : mem_cells(u))
                emit_for({Pred::VarMem, X, X, Pred::GasMem, X, Pred::ExternalMem}, {c});
            return;
        case VarKind::StorS:
        case VarKind::StorD:
            if (writer_ == Writer::Stor)
            {
                if (weak_ && u.shape == VarAtom::Shape::All)
                    return;
                unexpected(u);
            }
            if (writer_ == Writer::Msize)
                unexpected(u);
            emit_for({Pred::VarStor, Pred::MemStore, X, Pred::GasStore, X, Pred::ExternalStore},
                     {u.is_single() ? Sym::loc(u.lo) : Sym::top()});
            return;
        case VarKind::Gas:
            if (writer_ == Writer::Gas)
                return;
            if (writer_ == Writer::Stor || writer_ == Writer::Msize)
                unexpected(u);
            emit_for({Pred::VarGas, Pred::MemGas, X, X, X, Pred::ExternalGas}, {});
            return;
        case VarKind::Msize:
            if (writer_ == Writer::Msize)
                return;
            if (writer_ == Writer::Stor)
                unexpected(u);
            emit_for({Pred::VarMsize, Pred::MemMsize, X, Pred::GasMsize, X, Pred::ExternalMsize}, {});
            return;
        case VarKind::External:
            if (writer_ == Writer::External)
                return;
            if (writer_ == Writer::Stor || writer_ == Writer::Msize)
                unexpected(u);
            emit_for({Pred::VarExternal, Pred::MemExternal, X, Pred::GasExternal, X, X}, {});
            return;
        }
    }

    FactBase& fb_;
    const Instruction& ins_;
    Sym pc_;
    Writer writer_ = Writer::Var;
    Sym target_;
    bool weak_ = false;
};

void collect_domain(FactBase& fb, const VarAtom& a)
{
    if (a.temporal)
        return;
    if (is_mem(a.kind) && a.shape != VarAtom::Shape::All)
        fb.mem_domain.insert(a.lo);
    if (is_stor(a.kind) && a.is_single())
        fb.stor_domain.insert(a.lo);
}

DepFact fact(Pred p, std::vector<Sym> args)
{
    return {p, std::move(args)};
}
}  // namespace

const PredInfo& pred_info(Pred p) noexcept
{
    return kPreds[static_cast<size_t>(p)];
}

std::string Sym::str() const
{
    switch (kind)
    {
    case SymKind::Pc:
        return value.dec();
    case SymKind::Var:
        return "s" + value.dec();
    case SymKind::Loc:
    case SymKind::Size:
        return value.hex();
    case SymKind::Top:
        return "TOP";
    case SymKind::Tag:
        return std::string(op_name(op()));
    }
    return "?";
}

std::string DepFact::str() const
{
    const PredInfo& info = pred_info(pred);
    std::string out(info.name);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char ch) { return static_cast<char>(std::toupper(ch)); });
    size_t first = 0;
    if (info.indexed)
    {
        out += "@" + args.at(0).str();
        first = 1;
        if (args.size() == 1)
            return out;
    }
    out += "(";
    for (size_t i = first; i < args.size(); ++i)
    {
        if (i > first)
            out += ",";
        out += args[i].str();
    }
    return out + ")";
}

std::vector<WriteSummary> summarize(const Cfg& cfg, Pc pc)
{
    std::vector<std::pair<VarAtom, VarSet>> temps;
    std::map<VarAtom, VarSet> writes;
    for (const size_t ei : cfg.edges_of(pc))
    {
        const CfgEdge& e = cfg.edges()[ei];
        if (e.is_guard())
            continue;
        VarSet eff;
        for (const auto& u : e.use)
        {
            if (!u.temporal)
            {
                eff.add(u);
                continue;
            }
            for (const auto& [t, src] : temps)
                if (overlaps(t, u))
                    eff.add(src);
        }
        for (const auto& d : e.def)
        {
            if (d.temporal)
                temps.emplace_back(d, eff);
            else
                writes[d].add(eff);
        }
    }
    std::vector<WriteSummary> out;
    out.reserve(writes.size());
    for (auto& [t, src] : writes)
        out.push_back({t, std::move(src)});
    return out;
}

Op source_tag(Op op, const Var& env)
{
    if (env.kind == VarKind::Local)
    {
        switch (env.local_name())
        {
        case LocalName::Actor:
            return Op::ADDRESS;
        case LocalName::Input:
            return op == Op::CALLDATASIZE || op == Op::CALLDATACOPY ? op : Op::CALLDATALOAD;
        case LocalName::Sender:
            return Op::CALLER;
        case LocalName::Value:
            return Op::CALLVALUE;
        case LocalName::Code:
            return Op::CODESIZE;
        }
    }
    switch (env.global_name())
    {
    case GlobalName::Parent:
        return Op::BLOCKHASH;
    case GlobalName::Beneficiary:
        return Op::COINBASE;
    case GlobalName::Difficulty:
        return Op::DIFFICULTY;
    case GlobalName::Number:
        return Op::NUMBER;
    case GlobalName::Gaslimit:
        return Op::GASLIMIT;
    case GlobalName::Timestamp:
        return Op::TIMESTAMP;
    case GlobalName::Origin:
        return Op::ORIGIN;
    case GlobalName::Prize:
        return Op::GASPRICE;
    }
    return Op::INVALID;
}

const std::vector<Op>& all_tags()
{
    static const std::vector<Op> tags{Op::ADDRESS,      Op::ORIGIN,       Op::CALLER,     Op::CALLVALUE,
                                      Op::CALLDATALOAD, Op::CALLDATASIZE, Op::CALLDATACOPY, Op::CODESIZE,
                                      Op::GASPRICE,     Op::BLOCKHASH,    Op::COINBASE,   Op::TIMESTAMP,
                                      Op::NUMBER,       Op::DIFFICULTY,   Op::GASLIMIT};
    return tags;
}

FactBase generate_facts(const Cfg& cfg)
{
    FactBase fb;
    const Contract& c = cfg.contract();

    for (const auto& e : cfg.edges())
    {
        for (const auto& a : e.def)
            collect_domain(fb, a);
        for (const auto& a : e.use)
            collect_domain(fb, a);
    }

    std::map<Pc, std::set<u256>> strong_mem, strong_stor;
    std::set<Pc> writes_mem, writes_stor;
    for (const auto& [pc, ins] : c.code)
    {
        Emitter em(fb, ins);
        for (const auto& w : summarize(cfg, pc))
        {
            em.write(w);
            if (is_mem(w.target.kind))
            {
                writes_mem.insert(pc);
                if (w.target.is_single())
                    strong_mem[pc].insert(w.target.lo);
            }
            if (is_stor(w.target.kind))
            {
                writes_stor.insert(pc);
                if (w.target.is_single())
                    strong_stor[pc].insert(w.target.lo);
            }
        }
        if (!writes_mem.contains(pc))
            fb.facts.push_back(fact(Pred::NoReassignMem, {Sym::pc(pc)}));
        if (!writes_stor.contains(pc))
            fb.facts.push_back(fact(Pred::NoReassignStor, {Sym::pc(pc)}));
        for (const Pc s : c.successors(pc))
            fb.grounding.push_back(fact(Pred::Succ, {Sym::pc(pc), Sym::pc(s)}));
        if (ins.op == Op::JUMPI)
            fb.grounding.push_back(fact(Pred::Cond, {Sym::pc(pc), Sym::var(ins.in_vars[1])}));
    }

    // Instruction-level control dependence from the node-level one.
    const FlowGraph g = flow_graph(cfg);
    for (const auto& [a, b] : control_dependence(g))
    {
        const CfgNode& na = cfg.nodes()[a];
        const CfgNode& nb = cfg.nodes()[b];
        if (na.is_sink() || nb.is_sink())
            continue;
        fb.facts.push_back(fact(Pred::Controls, {Sym::pc(na.pc), Sym::pc(nb.pc)}));
    }

    // Location grounding.
    for (const auto& l : fb.mem_domain)
    {
        fb.grounding.push_back(fact(Pred::ReadMem, {Sym::loc(l), Sym::loc(l)}));
        fb.grounding.push_back(fact(Pred::ReadMem, {Sym::loc(l), Sym::top()}));
        fb.grounding.push_back(fact(Pred::ReadMem, {Sym::top(), Sym::loc(l)}));
    }
    fb.grounding.push_back(fact(Pred::ReadMem, {Sym::top(), Sym::top()}));
    for (const auto& l : fb.stor_domain)
    {
        fb.grounding.push_back(fact(Pred::ReadStor, {Sym::loc(l), Sym::loc(l)}));
        fb.grounding.push_back(fact(Pred::ReadStor, {Sym::loc(l), Sym::top()}));
        fb.grounding.push_back(fact(Pred::ReadStor, {Sym::top(), Sym::loc(l)}));
    }
    fb.grounding.push_back(fact(Pred::ReadStor, {Sym::top(), Sym::top()}));

    for (const auto& f : fb.facts)
    {
        if (f.pred != Pred::MemMem || f.args[2].kind != SymKind::Loc)
            continue;
        const u256 o = f.args[2].value;
        const u256 s = f.args[3].value;
        fb.grounding.push_back(fact(Pred::IsConst, {f.args[2]}));
        const u256 hi = o + s < o ? u256::max() : o + s;
        for (auto it = fb.mem_domain.lower_bound(o); it != fb.mem_domain.end() && *it < hi; ++it)
            fb.grounding.push_back(fact(Pred::IvlCell, {f.args[2], f.args[3], Sym::loc(*it)}));
    }

    const auto frame = [&](Pred p, const std::set<Pc>& writers, std::map<Pc, std::set<u256>>& strong,
                           const std::set<u256>& domain) {
        for (const Pc pc : writers)
        {
            const auto& s = strong[pc];
            for (const auto& l : domain)
                if (!s.contains(l))
                    fb.grounding.push_back(fact(p, {Sym::pc(pc), Sym::loc(l)}));
            fb.grounding.push_back(fact(p, {Sym::pc(pc), Sym::top()}));
        }
    };
    frame(Pred::MemFrame, writes_mem, strong_mem, fb.mem_domain);
    frame(Pred::StorFrame, writes_stor, strong_stor, fb.stor_domain);

    for (auto* v : {&fb.facts, &fb.grounding})
    {
        std::sort(v->begin(), v->end());
        v->erase(std::unique(v->begin(), v->end()), v->end());
    }
    return fb;
}
}  // namespace depguard
