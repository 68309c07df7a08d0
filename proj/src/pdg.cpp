#include "depguard/pdg.hpp"

#include <algorithm>
#include <deque>
#include <map>

namespace depguard
{
size_t FlowGraph::add_node(bool is_exit)
{
    succ.emplace_back();
    def.emplace_back();
    use.emplace_back();
    exit.push_back(is_exit);
    return succ.size() - 1;
}

FlowGraph flow_graph(const Cfg& cfg)
{
    FlowGraph g;
    for (const auto& n : cfg.nodes())
        g.add_node(n.is_sink());
    g.entry = cfg.index(cfg.entry());
    for (const auto& e : cfg.edges())
    {
        const size_t s = cfg.index(e.src);
        g.succ[s].push_back(cfg.index(e.dst));
        g.def[s].add(e.def);
        g.use[s].add(e.use);
    }
    return g;
}

namespace
{
/// Forward successors plus the links to the virtual exit `n`.
std::vector<std::vector<size_t>> augmented_succ(const FlowGraph& g)
{
    const size_t n = g.size();
    std::vector<std::vector<size_t>> pred(n);
    for (size_t v = 0; v < n; ++v)
        for (const size_t w : g.succ[v])
            pred[w].push_back(v);
    std::vector<bool> reaches(n, false);
    std::deque<size_t> work;
    for (size_t v = 0; v < n; ++v)
        if (g.exit[v])
        {
            reaches[v] = true;
            work.push_back(v);
        }
    while (!work.empty())
    {
        const size_t v = work.front();
        work.pop_front();
        for (const size_t p : pred[v])
            if (!reaches[p])
            {
                reaches[p] = true;
                work.push_back(p);
            }
    }
    auto succ = g.succ;
    succ.emplace_back();
    for (size_t v = 0; v < n; ++v)
        if (g.exit[v] || !reaches[v])
            succ[v].push_back(n);
    return succ;
}
}  // namespace

std::vector<size_t> postdominators(const FlowGraph& g)
{
    const size_t n = g.size();
    const size_t root = n;
    const auto succ = augmented_succ(g);
    std::vector<std::vector<size_t>> rsucc(n + 1);
    for (size_t v = 0; v <= n; ++v)
        for (const size_t w : succ[v])
            rsucc[w].push_back(v);

    // Postorder of the reverse graph from the virtual exit.
    std::vector<size_t> order;
    std::vector<size_t> po(n + 1, SIZE_MAX);
    std::vector<bool> seen(n + 1, false);
    std::vector<std::pair<size_t, size_t>> stack{{root, 0}};
    seen[root] = true;
    while (!stack.empty())
    {
        auto& [v, i] = stack.back();
        if (i < rsucc[v].size())
        {
            const size_t w = rsucc[v][i++];
            if (!seen[w])
            {
                seen[w] = true;
                stack.emplace_back(w, 0);
            }
            continue;
        }
        po[v] = order.size();
        order.push_back(v);
        stack.pop_back();
    }

    std::vector<size_t> idom(n + 1, SIZE_MAX);
    idom[root] = root;
    const auto intersect = [&](size_t a, size_t b) {
        while (a != b)
        {
            while (po[a] < po[b])
                a = idom[a];
            while (po[b] < po[a])
                b = idom[b];
        }
        return a;
    };
    for (bool changed = true; changed;)
    {
        changed = false;
        for (auto it = order.rbegin(); it != order.rend(); ++it)
        {
            const size_t v = *it;
            if (v == root)
                continue;
            size_t nd = SIZE_MAX;
            // Predecessors in the reverse graph are forward successors.
            for (const size_t p : succ[v])
            {
                if (idom[p] == SIZE_MAX)
                    continue;
                nd = nd == SIZE_MAX ? p : intersect(p, nd);
            }
            if (nd != idom[v])
            {
                idom[v] = nd;
                changed = true;
            }
        }
    }
    return idom;
}

std::vector<std::pair<size_t, size_t>> control_dependence(const FlowGraph& g)
{
    const size_t n = g.size();
    const auto ipdom = postdominators(g);
    const auto succ = augmented_succ(g);
    std::vector<std::pair<size_t, size_t>> out;
    for (size_t a = 0; a < n; ++a)
    {
        if (succ[a].size() < 2)
            continue;
        for (const size_t b : succ[a])
            for (size_t r = b; r != ipdom[a] && r != n && r != SIZE_MAX; r = ipdom[r])
                out.emplace_back(a, r);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::vector<std::pair<size_t, size_t>> data_dependence(const FlowGraph& g)
{
    const size_t n = g.size();
    struct Site
    {
        size_t node;
        VarAtom atom;
    };
    std::vector<Site> sites;
    std::map<std::pair<VarKind, bool>, std::vector<size_t>> by_kind;
    std::map<Var, std::vector<size_t>> singles;
    std::map<std::pair<VarKind, bool>, std::vector<size_t>> families;
    std::vector<std::vector<size_t>> gen(n);
    for (size_t v = 0; v < n; ++v)
        for (const auto& a : g.def[v])
        {
            const size_t id = sites.size();
            sites.push_back({v, a});
            gen[v].push_back(id);
            by_kind[{a.kind, a.temporal}].push_back(id);
            if (a.is_single())
                singles[a.var()].push_back(id);
            else
                families[{a.kind, a.temporal}].push_back(id);
        }

    const size_t words = (sites.size() + 63) / 64;
    using Bits = std::vector<uint64_t>;
    const auto set = [](Bits& b, size_t i) { b[i / 64] |= uint64_t{1} << (i % 64); };
    const auto test = [](const Bits& b, size_t i) { return (b[i / 64] >> (i % 64)) & 1; };

    // Exact single-variable definitions kill earlier definitions of the same variable.
    std::vector<Bits> kill(n, Bits(words, 0));
    std::vector<Bits> genb(n, Bits(words, 0));
    for (size_t v = 0; v < n; ++v)
    {
        for (const size_t id : gen[v])
        {
            set(genb[v], id);
            if (!sites[id].atom.is_single())
                continue;
            for (const size_t other : singles[sites[id].atom.var()])
                if (sites[other].node != v)
                    set(kill[v], other);
        }
    }

    std::vector<std::vector<size_t>> pred(n);
    for (size_t v = 0; v < n; ++v)
        for (const size_t w : g.succ[v])
            pred[w].push_back(v);

    std::vector<Bits> in(n, Bits(words, 0)), out(n, Bits(words, 0));
    std::deque<size_t> work;
    std::vector<bool> queued(n, true);
    for (size_t v = 0; v < n; ++v)
        work.push_back(v);
    while (!work.empty())
    {
        const size_t v = work.front();
        work.pop_front();
        queued[v] = false;
        Bits nin(words, 0);
        for (const size_t p : pred[v])
            for (size_t i = 0; i < words; ++i)
                nin[i] |= out[p][i];
        Bits nout(words, 0);
        for (size_t i = 0; i < words; ++i)
            nout[i] = genb[v][i] | (nin[i] & ~kill[v][i]);
        in[v] = std::move(nin);
        if (nout != out[v])
        {
            out[v] = std::move(nout);
            for (const size_t w : g.succ[v])
                if (!queued[w])
                {
                    queued[w] = true;
                    work.push_back(w);
                }
        }
    }

    std::vector<std::pair<size_t, size_t>> dd;
    for (size_t m = 0; m < n; ++m)
        for (const auto& u : g.use[m])
        {
            const auto visit = [&](const std::vector<size_t>& ids) {
                for (const size_t id : ids)
                    if (test(in[m], id) && overlaps(sites[id].atom, u))
                        dd.emplace_back(sites[id].node, m);
            };
            const std::pair<VarKind, bool> k{u.kind, u.temporal};
            if (!u.is_single())
            {
                if (const auto it = by_kind.find(k); it != by_kind.end())
                    visit(it->second);
                continue;
            }
            if (const auto it = singles.find(u.var()); it != singles.end())
                visit(it->second);
            if (const auto it = families.find(k); it != families.end())
                visit(it->second);
        }
    std::sort(dd.begin(), dd.end());
    dd.erase(std::unique(dd.begin(), dd.end()), dd.end());
    return dd;
}

Pdg build_pdg(const FlowGraph& g)
{
    Pdg p;
    p.cd = control_dependence(g);
    p.dd = data_dependence(g);
    p.preds.resize(g.size());
    for (const auto& [a, b] : p.cd)
        p.preds[b].push_back(a);
    for (const auto& [a, b] : p.dd)
        p.preds[b].push_back(a);
    return p;
}

std::vector<size_t> backward_slice(const Pdg& pdg, const std::vector<size_t>& targets)
{
    std::vector<bool> in(pdg.preds.size(), false);
    std::deque<size_t> work;
    for (const size_t t : targets)
        if (!in[t])
        {
            in[t] = true;
            work.push_back(t);
        }
    while (!work.empty())
    {
        const size_t v = work.front();
        work.pop_front();
        for (const size_t p : pdg.preds[v])
            if (!in[p])
            {
                in[p] = true;
                work.push_back(p);
            }
    }
    std::vector<size_t> out;
    for (size_t v = 0; v < in.size(); ++v)
        if (in[v])
            out.push_back(v);
    return out;
}
}  // namespace depguard
