#include "support/properties.hpp"

#include "depguard/error.hpp"
#include "depguard/pdg.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <sstream>

namespace depguard::prop
{
namespace
{
u256 small_word(std::mt19937_64& rng)
{
    switch (rng() % 8)
    {
    case 0: return u256{rng() % 4};
    case 1:
    case 2: return u256{32 * (rng() % 10)};
    case 3: return u256{rng() % 100};
    case 4: return u256{1 + rng() % 8};
    case 5: return u256{rng() % 100000};
    default: return u256{rng(), rng(), rng(), rng()};
    }
}

u256 value_for(const Var& v, std::mt19937_64& rng)
{
    switch (v.kind)
    {
    case VarKind::Gas: return u256{100'000 + rng() % 3'000'000};
    case VarKind::Msize: return u256{rng() % 12};
    case VarKind::Local:
        if (v.local_name() == LocalName::Actor || v.local_name() == LocalName::Sender)
            return u256{1 + rng() % 8};
        return small_word(rng);
    default: return small_word(rng);
    }
}

Bytes random_bytes(std::mt19937_64& rng)
{
    Bytes b(rng() % 70);
    for (auto& x : b)
        x = static_cast<uint8_t>(rng());
    return b;
}

World mutate_world(World w, Sampler& sampler)
{
    auto& rng = sampler.rng();
    w.seed = sampler.word();
    if (!w.accounts.empty() && rng() % 2)
    {
        auto it = w.accounts.begin();
        std::advance(it, static_cast<long>(rng() % w.accounts.size()));
        it->second.balance = sampler.word();
    }
    if (rng() % 2)
        w.returndata = random_bytes(rng);
    return w;
}

std::string show(const std::optional<u256>& v)
{
    return v ? v->hex() : "None";
}

std::set<Var> keys(const CfgState& a, const CfgState& b)
{
    std::set<Var> out;
    for (const auto& [v, _] : a.words)
        out.insert(v);
    for (const auto& [v, _] : b.words)
        out.insert(v);
    return out;
}
}  // namespace

Universe universe_of(const Cfg& cfg)
{
    const Contract& c = cfg.contract();
    std::set<Var> base;
    for (VarId v = 0; v < c.var_count(); ++v)
        base.insert(Var::stack(v));
    std::set<u256> mem_locs, stor_locs;
    for (uint64_t k = 0; k < 10; ++k)
        mem_locs.insert(u256{32 * k});
    for (uint64_t k = 0; k < 8; ++k)
        stor_locs.insert(u256{k});
    for (const auto& [pc, ins] : c.code)
    {
        base.insert(Var::gas(pc));
        base.insert(Var::msize(pc));
        if (ins.pc_next != kExitPc)
        {
            base.insert(Var::gas(ins.pc_next));
            base.insert(Var::msize(ins.pc_next));
        }
        if (!ins.pre.empty() && ins.pre[0])
        {
            if (ins.op == Op::MLOAD || ins.op == Op::MSTORE)
                mem_locs.insert(*ins.pre[0]);
            if (ins.op == Op::SLOAD || ins.op == Op::SSTORE)
                stor_locs.insert(*ins.pre[0]);
        }
    }
    for (const auto& l : mem_locs)
    {
        base.insert(Var::mem_s(l));
        base.insert(Var::mem_d(l));
    }
    for (const auto& l : stor_locs)
    {
        base.insert(Var::stor_s(l));
        base.insert(Var::stor_d(l));
    }
    for (const auto n : {LocalName::Actor, LocalName::Sender, LocalName::Value})
        base.insert(Var::local(n));
    for (unsigned g = 0; g < kGlobalCount; ++g)
        base.insert(Var::global(static_cast<GlobalName>(g)));

    Universe u;
    for (const auto& v : base)
    {
        u.words.push_back(v);
        u.words.push_back(v.temp());
    }
    return u;
}

CfgState random_state(const Universe& u, Sampler& sampler, const Contract& c)
{
    auto& rng = sampler.rng();
    CfgState s = to_cfg(sampler.state(c), sampler.env());
    for (const auto& v : u.words)
    {
        const bool optional = v.temporal || v.kind == VarKind::MemD || v.kind == VarKind::StorD;
        if (optional && rng() % 2)
            s.erase(v);
        else
            s.set(v, value_for(v, rng));
    }
    if (rng() % 2)
        s.t_external = mutate_world(s.external, sampler);
    return s;
}

CfgState perturb_outside(const CfgState& s, const VarSet& use, const Universe& u, Sampler& sampler)
{
    auto& rng = sampler.rng();
    CfgState p = s;
    for (const auto& v : u.words)
    {
        if (use.contains(v))
            continue;
        switch (rng() % 3)
        {
        case 0: break;
        case 1: p.set(v, value_for(v, rng)); break;
        default: p.erase(v); break;
        }
    }
    if (!use.contains(Var::local(LocalName::Input)))
        p.input = random_bytes(rng);
    if (!use.contains(Var::local(LocalName::Code)))
        p.code = random_bytes(rng);
    if (!use.contains(Var::external()))
        p.external = mutate_world(p.external, sampler);
    if (!use.contains(Var::external().temp()))
    {
        if (rng() % 3 == 0)
            p.t_external.reset();
        else
            p.t_external = mutate_world(p.t_external.value_or(p.external), sampler);
    }
    return p;
}

std::optional<std::string> def_use_violation(const CfgEdge& e, const CfgState& s, const CfgState& p)
{
    if (e.is_guard())
    {
        if (e.guard(s) != e.guard(p))
            return "guard outcome depends on a variable outside Use " + e.use.str();
        return std::nullopt;
    }
    CfgState s1 = s;
    e.apply(s1);
    CfgState p1 = p;
    e.apply(p1);

    // Frame law: nothing outside Def changes.
    for (const auto& v : keys(s, s1))
        if (!e.def.contains(v) && s.get_opt(v) != s1.get_opt(v))
            return v.str() + " changed outside Def " + e.def.str() + ": " + show(s.get_opt(v)) + " -> " +
                   show(s1.get_opt(v));
    if (!e.def.contains(Var::local(LocalName::Input)) && s.input != s1.input)
        return "input changed outside Def";
    if (!e.def.contains(Var::local(LocalName::Code)) && s.code != s1.code)
        return "code changed outside Def";
    if (!e.def.contains(Var::external()) && !(s.external == s1.external))
        return "External changed outside Def " + e.def.str();
    if (!e.def.contains(Var::external().temp()) && s.t_external != s1.t_external)
        return "T(External) changed outside Def " + e.def.str();

    // Use law: Def values depend on Use only.
    for (const auto& v : keys(s1, p1))
        if (e.def.contains(v) && s1.get_opt(v) != p1.get_opt(v))
            return v.str() + " depends on a variable outside Use " + e.use.str() + ": " + show(s1.get_opt(v)) +
                   " vs " + show(p1.get_opt(v));
    if (e.def.contains(Var::external()) && !(s1.external == p1.external))
        return "External depends on a variable outside Use " + e.use.str();
    if (e.def.contains(Var::external().temp()) && s1.t_external != p1.t_external)
        return "T(External) depends on a variable outside Use " + e.use.str();
    return std::nullopt;
}

std::string family(const Cfg& cfg, const CfgEdge& e)
{
    return std::string(op_name(cfg.contract().at(e.src.pc).op)) + "/" + e.label;
}

AdequacyReport check_def_use(const std::vector<Cfg>& cfgs, size_t per_family, uint64_t seed)
{
    Sampler sampler(seed);
    std::map<std::string, std::vector<std::pair<size_t, size_t>>> members;
    for (size_t i = 0; i < cfgs.size(); ++i)
        for (size_t e = 0; e < cfgs[i].edges().size(); ++e)
            members[family(cfgs[i], cfgs[i].edges()[e])].emplace_back(i, e);
    std::vector<Universe> universes;
    for (const auto& g : cfgs)
        universes.push_back(universe_of(g));

    AdequacyReport rep;
    for (const auto& [fam, list] : members)
    {
        size_t& n = rep.trials[fam];
        for (size_t k = 0; n < per_family || k < list.size(); ++k)
        {
            const auto [gi, ei] = list[k % list.size()];
            const Cfg& g = cfgs[gi];
            const CfgEdge& e = g.edges()[ei];
            const CfgState s = random_state(universes[gi], sampler, g.contract());
            const CfgState p = perturb_outside(s, e.use, universes[gi], sampler);
            ++n;
            if (auto v = def_use_violation(e, s, p))
            {
                rep.violations.push_back(fam + " at " + e.src.str() + ": " + *v);
                break;
            }
        }
    }
    return rep;
}

namespace
{
std::set<Op> tag_sources(const Cfg& cfg, size_t node)
{
    std::set<Op> tags;
    const CfgNode n = cfg.nodes()[node];
    if (n.is_sink())
        return tags;
    const Op op = cfg.contract().at(n.pc).op;
    for (const size_t ei : cfg.out_edges(node))
        for (const auto& a : cfg.edges()[ei].use)
            if (a.is_single() && !a.temporal && (a.kind == VarKind::Local || a.kind == VarKind::Global))
                tags.insert(source_tag(op, a.var()));
    return tags;
}
}  // namespace

LemmaReport check_slice_inclusion(const Analysis& a)
{
    const Cfg& cfg = a.cfg;
    const FlowGraph fg = flow_graph(cfg);
    const Pdg pdg = build_pdg(fg);
    std::vector<std::set<Op>> tags(fg.size());
    for (size_t n = 0; n < fg.size(); ++n)
        tags[n] = tag_sources(cfg, n);
    std::map<size_t, std::set<Op>> slice_tags;
    const auto tags_in_slice = [&](size_t n) -> const std::set<Op>& {
        auto it = slice_tags.find(n);
        if (it != slice_tags.end())
            return it->second;
        std::set<Op> out;
        for (const size_t m : backward_slice(pdg, {n}))
            out.insert(tags[m].begin(), tags[m].end());
        return slice_tags.emplace(n, std::move(out)).first->second;
    };

    LemmaReport rep;
    for (size_t n = 0; n < fg.size(); ++n)
        for (const size_t ei : cfg.out_edges(n))
            for (const auto& d : cfg.edges()[ei].def)
            {
                if (!d.is_single() || d.temporal || d.kind != VarKind::Stack)
                    continue;
                const VarId y = d.var().stack_id();
                for (const Op t : tags_in_slice(n))
                {
                    ++rep.var_checks;
                    if (!a.lfp.contains({Pred::VarMayDependOn, {Sym::var(y), Sym::tag(t)}}))
                        rep.violations.push_back("missing VARMAYDEPENDON(s" + std::to_string(y) + "," +
                                                 std::string(op_name(t)) + ") from node " +
                                                 cfg.nodes()[n].str());
                }
            }
    for (const auto& [from, to] : pdg.cd)
    {
        const CfgNode target = cfg.nodes()[to];
        if (target.is_sink())
            continue;
        for (const Op t : tags_in_slice(from))
        {
            ++rep.inst_checks;
            if (!a.lfp.contains({Pred::InstMayDepOn, {Sym::pc(target.pc), Sym::tag(t)}}))
                rep.violations.push_back("missing INSTMAYDEPON(" + std::to_string(target.pc) + "," +
                                         std::string(op_name(t)) + ") controlled by " + cfg.nodes()[from].str());
        }
    }
    return rep;
}

SliceRun check_slice_execution(const Cfg& cfg, size_t target, const CfgState& init, uint64_t fuel)
{
    const FlowGraph fg = flow_graph(cfg);
    const Pdg pdg = build_pdg(fg);
    const auto slice = backward_slice(pdg, {target});
    std::vector<bool> in_slice(fg.size(), false);
    for (const size_t n : slice)
        in_slice[n] = true;

    // Distance to the nearest exit along forward edges.
    std::vector<size_t> dist(fg.size(), SIZE_MAX);
    std::vector<std::vector<size_t>> pred(fg.size());
    for (size_t v = 0; v < fg.size(); ++v)
        for (const size_t w : fg.succ[v])
            pred[w].push_back(v);
    std::deque<size_t> work;
    for (size_t v = 0; v < fg.size(); ++v)
        if (fg.exit[v])
        {
            dist[v] = 0;
            work.push_back(v);
        }
    while (!work.empty())
    {
        const size_t v = work.front();
        work.pop_front();
        for (const size_t p : pred[v])
            if (dist[p] == SIZE_MAX)
            {
                dist[p] = dist[v] + 1;
                work.push_back(p);
            }
    }

    std::vector<Var> observed;
    for (const size_t ei : cfg.out_edges(target))
        for (const auto& a : cfg.edges()[ei].use)
            if (a.is_single())
                observed.push_back(a.var());

    using Record = std::vector<std::optional<u256>>;
    const auto record = [&](const CfgState& s) {
        Record r;
        for (const auto& v : observed)
            r.push_back(s.get_opt(v));
        return r;
    };

    SliceRun out;
    std::vector<Record> full;
    {
        CfgState s = init;
        CfgNode n = cfg.entry();
        uint64_t steps = 0;
        for (; steps < fuel && !n.is_sink(); ++steps)
        {
            if (cfg.index(n) == target)
                full.push_back(record(s));
            n = cfg.step(n, s);
        }
        out.terminated = n.is_sink();
    }
    out.visits = full.size();
    if (!out.terminated)
        return out;

    std::vector<Record> sliced;
    {
        CfgState s = init;
        size_t n = cfg.index(cfg.entry());
        for (uint64_t steps = 0; steps < fuel && !fg.exit[n] && sliced.size() <= full.size(); ++steps)
        {
            if (n == target)
                sliced.push_back(record(s));
            if (in_slice[n])
            {
                n = cfg.index(cfg.step(cfg.nodes()[n], s));
                continue;
            }
            const auto& outs = cfg.out_edges(n);
            if (!cfg.edges()[outs[0]].is_guard())
            {
                n = cfg.index(cfg.edges()[outs[0]].dst);
                continue;
            }
            size_t best = SIZE_MAX;
            for (const size_t ei : outs)
            {
                const size_t d = cfg.index(cfg.edges()[ei].dst);
                if (best == SIZE_MAX || dist[d] < dist[best] || (dist[d] == dist[best] && d < best))
                    best = d;
            }
            n = best;
        }
    }
    out.equal = sliced == full;
    if (!out.equal)
    {
        std::ostringstream os;
        os << "target " << cfg.nodes()[target].str() << ": full run visits " << full.size() << ", sliced run "
           << sliced.size();
        out.detail = os.str();
    }
    return out;
}

namespace
{
std::optional<std::string> compare_states(const ExecState& cfg_view, const ExecState& es)
{
    if (cfg_view == es)
        return std::nullopt;
    std::ostringstream os;
    os << "pc " << es.pc << ":";
    if (cfg_view.gas != es.gas)
        os << " gas " << cfg_view.gas.dec() << " vs " << es.gas.dec();
    if (cfg_view.msize != es.msize)
        os << " msize " << cfg_view.msize.dec() << " vs " << es.msize.dec();
    if (cfg_view.memory != es.memory)
        os << " memory";
    if (cfg_view.vars != es.vars)
    {
        os << " stack";
        for (const auto& [id, v] : es.vars)
        {
            const auto it = cfg_view.vars.find(id);
            if (it == cfg_view.vars.end() || it->second != v)
                os << " s" << id << "=" << v.hex() << "/" << (it == cfg_view.vars.end() ? "-" : it->second.hex());
        }
    }
    if (cfg_view.storage != es.storage)
        os << " storage";
    if (!(cfg_view.world == es.world))
        os << " world";
    if (cfg_view.actor != es.actor || cfg_view.sender != es.sender || cfg_view.value != es.value)
        os << " frame";
    if (cfg_view.input != es.input || cfg_view.code != es.code)
        os << " input/code";
    return os.str();
}
}  // namespace

LockstepRun check_lockstep(const Cfg& cfg, const TxEnv& env, const ExecState& s0, uint64_t fuel)
{
    const Contract& c = cfg.contract();
    LockstepRun out;
    ExecState es = s0;
    es.pc = c.entry;
    CfgState cs = to_cfg(es, env);
    CfgNode node = cfg.entry();
    for (uint64_t k = 0; k < fuel; ++k)
    {
        const auto [view, venv] = to_evm(cs, node.pc);
        if (!(venv == env))
        {
            out.mismatch = "transaction environment differs at pc " + std::to_string(node.pc);
            return out;
        }
        if (auto m = compare_states(view, es))
        {
            out.mismatch = *m;
            return out;
        }
        for (const auto& [v, _] : cs.words)
            if (v.temporal)
            {
                out.mismatch = "temporal " + v.str() + " live at initial node " + node.str();
                return out;
            }
        if (cs.t_external)
        {
            out.mismatch = "T(External) live at initial node " + node.str();
            return out;
        }
        ++out.boundaries;

        const Pc at = es.pc;
        const StepResult r = step(c, env, es);
        if (r.cause == ExceptionCause::OutOfGas)
        {
            out.discarded = true;
            return out;
        }
        try
        {
            do
                node = cfg.step(node, cs);
            while (!node.is_sink() && node.sub != 0);
        }
        catch (const Error& e)
        {
            out.mismatch = std::string("CFG stuck after pc ") + std::to_string(at) + ": " + e.what();
            return out;
        }
        if (r.kind == FinalKind::Running)
        {
            if (node.is_sink() || node.pc != es.pc)
            {
                out.mismatch = "control diverged after pc " + std::to_string(at) + ": CFG at " + node.str() +
                               ", interpreter at " + std::to_string(es.pc);
                return out;
            }
            continue;
        }
        const CfgNode expect = r.kind == FinalKind::Halt ? CfgNode::halt() : CfgNode::exception();
        if (node != expect)
        {
            out.mismatch = "sink differs after pc " + std::to_string(at) + ": CFG " + node.str() + ", interpreter " +
                           to_string(r.kind) + "/" + to_string(r.cause);
            return out;
        }
        if (cs.storage() != es.storage)
            out.mismatch = "final storage differs";
        else if (!(cs.external == es.world))
            out.mismatch = "final world differs";
        return out;
    }
    out.discarded = true;
    return out;
}
}  // namespace depguard::prop
