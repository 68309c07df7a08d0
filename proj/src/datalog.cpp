#include "depguard/datalog.hpp"

#include "depguard/error.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <set>
#include <stdexcept>

namespace depguard::datalog
{
Tuple Relation::project(unsigned mask, const Tuple& t)
{
    Tuple k;
    for (size_t i = 0; i < kMaxArity; ++i)
        k[i] = (mask >> i) & 1 ? t[i] : kUnbound;
    return k;
}

bool Relation::insert(const Tuple& t)
{
    const auto [it, inserted] = set_.emplace(t, static_cast<uint32_t>(rows_.size()));
    if (!inserted)
        return false;
    const auto r = static_cast<uint32_t>(rows_.size());
    rows_.push_back(t);
    for (unsigned mask = 0; mask < indices_.size(); ++mask)
        if (indices_[mask])
            (*indices_[mask])[project(mask, t)].push_back(r);
    return true;
}

const std::vector<uint32_t>& Relation::lookup(unsigned mask, const Tuple& key)
{
    static const std::vector<uint32_t> empty;
    auto& idx = indices_[mask];
    if (!idx)
    {
        idx = std::make_unique<Index>();
        for (uint32_t r = 0; r < rows_.size(); ++r)
            (*idx)[project(mask, rows_[r])].push_back(r);
    }
    const auto it = idx->find(project(mask, key));
    return it == idx->end() ? empty : it->second;
}

uint32_t Engine::add_relation(std::string name, uint8_t arity)
{
    if (arity > kMaxArity)
        throw std::invalid_argument("relation arity above " + std::to_string(kMaxArity));
    rels_.push_back(std::make_unique<Relation>(std::move(name), arity));
    return static_cast<uint32_t>(rels_.size() - 1);
}

void Engine::add_rule(Rule r)
{
    std::set<uint32_t> bound;
    const auto check = [&](const Atom& a) {
        if (a.rel >= rels_.size() || a.terms.size() != rels_[a.rel]->arity())
            throw std::invalid_argument("rule " + r.name + ": arity mismatch");
    };
    for (const auto& a : r.body)
    {
        check(a);
        for (const auto& t : a.terms)
            if (t.is_var)
                bound.insert(t.id);
    }
    check(r.head);
    for (const auto& t : r.head.terms)
        if (t.is_var && !bound.contains(t.id))
            throw std::invalid_argument("rule " + r.name + ": head variable not bound by the body");
    rules_.push_back(std::move(r));
}

bool Engine::add_fact(uint32_t rel, const Tuple& t)
{
    return rels_.at(rel)->insert(t);
}

size_t Engine::total_facts() const noexcept
{
    size_t n = 0;
    for (const auto& r : rels_)
        n += r->size();
    return n;
}

/// Join order for one rule with an optional delta atom placed first.
struct Engine::Plan
{
    struct Step
    {
        size_t atom = 0;
        unsigned mask = 0;  ///< columns bound before this atom is visited
    };
    std::vector<Step> steps;
    uint32_t var_count = 0;

    static Plan make(const Rule& r, std::optional<size_t> delta)
    {
        Plan p;
        for (const auto& a : r.body)
            for (const auto& t : a.terms)
                if (t.is_var)
                    p.var_count = std::max(p.var_count, t.id + 1);
        for (const auto& t : r.head.terms)
            if (t.is_var)
                p.var_count = std::max(p.var_count, t.id + 1);

        std::vector<bool> bound(p.var_count, false), used(r.body.size(), false);
        const auto mask_of = [&](const Atom& a) {
            unsigned m = 0;
            for (size_t i = 0; i < a.terms.size(); ++i)
                if (!a.terms[i].is_var || bound[a.terms[i].id])
                    m |= 1u << i;
            return m;
        };
        const auto take = [&](size_t i) {
            p.steps.push_back({i, mask_of(r.body[i])});
            used[i] = true;
            for (const auto& t : r.body[i].terms)
                if (t.is_var)
                    bound[t.id] = true;
        };
        if (delta)
            take(*delta);
        while (p.steps.size() < r.body.size())
        {
            size_t best = SIZE_MAX;
            int best_score = -1;
            for (size_t i = 0; i < r.body.size(); ++i)
            {
                if (used[i])
                    continue;
                const int score = std::popcount(mask_of(r.body[i]));
                if (score > best_score)
                {
                    best = i;
                    best_score = score;
                }
            }
            take(best);
        }
        return p;
    }
};

class Engine::Evaluator
{
public:
    Evaluator(Engine& e, const Options& opt) : e_(e), opt_(opt), rng_(opt.seed) {}

    /// Evaluates a rule; when `delta` is set, that body atom ranges over rows [lo, hi) only.
    void eval(const Rule& r, std::optional<size_t> delta, size_t lo, size_t hi)
    {
        rule_ = &r;
        plan_ = Plan::make(r, delta);
        binding_.assign(plan_.var_count, kUnbound);
        lo_ = lo;
        hi_ = hi;
        has_delta_ = delta.has_value();
        visit(0);
    }

    std::vector<std::pair<uint32_t, Tuple>> pending;
    size_t derivations = 0;

private:
    void tick()
    {
        if ((++ticks_ & 0x3fff) != 0)
            return;
        if (opt_.deadline && std::chrono::steady_clock::now() > *opt_.deadline)
            throw Error(ErrorKind::Timeout, "fixpoint exceeded its time limit");
        if (pending.size() + e_.total_facts() > opt_.max_facts)
            throw Error(ErrorKind::BudgetExceeded, "fixpoint exceeded " + std::to_string(opt_.max_facts) + " facts");
    }

    Tuple key_of(const Atom& a) const
    {
        Tuple k;
        k.fill(kUnbound);
        for (size_t i = 0; i < a.terms.size(); ++i)
        {
            const Term& t = a.terms[i];
            k[i] = t.is_var ? binding_[t.id] : t.id;
        }
        return k;
    }

    /// Binds the atom's free variables to a row; false on a clash.
    bool bind(const Atom& a, const Tuple& row, std::vector<uint32_t>& newly)
    {
        for (size_t i = 0; i < a.terms.size(); ++i)
        {
            const Term& t = a.terms[i];
            if (!t.is_var)
            {
                if (row[i] != t.id)
                    return false;
                continue;
            }
            if (binding_[t.id] == kUnbound)
            {
                binding_[t.id] = row[i];
                newly.push_back(t.id);
            }
            else if (binding_[t.id] != row[i])
                return false;
        }
        return true;
    }

    void try_row(size_t step, const Atom& a, const Tuple& row)
    {
        tick();
        std::vector<uint32_t> newly;
        if (bind(a, row, newly))
            visit(step + 1);
        for (const uint32_t v : newly)
            binding_[v] = kUnbound;
    }

    void visit(size_t step)
    {
        if (step == plan_.steps.size())
        {
            emit();
            return;
        }
        const auto& s = plan_.steps[step];
        const Atom& a = rule_->body[s.atom];
        Relation& rel = e_.relation(a.rel);
        if (step == 0 && has_delta_)
        {
            std::vector<size_t> order(hi_ - lo_);
            std::iota(order.begin(), order.end(), lo_);
            if (opt_.seed != 0)
                std::shuffle(order.begin(), order.end(), rng_);
            for (const size_t r : order)
                try_row(step, a, rel.row(r));
            return;
        }
        const std::vector<uint32_t>& rows = rel.lookup(s.mask, key_of(a));
        for (const uint32_t r : rows)
            try_row(step, a, rel.row(r));
    }

    void emit()
    {
        const Atom& h = rule_->head;
        Tuple t;
        t.fill(kUnbound);
        for (size_t i = 0; i < h.terms.size(); ++i)
            t[i] = h.terms[i].is_var ? binding_[h.terms[i].id] : h.terms[i].id;
        ++derivations;
        if (!e_.relation(h.rel).contains(t))
            pending.emplace_back(h.rel, t);
    }

    Engine& e_;
    const Options& opt_;
    std::mt19937_64 rng_;
    const Rule* rule_ = nullptr;
    Plan plan_;
    std::vector<SymId> binding_;
    size_t lo_ = 0;
    size_t hi_ = 0;
    bool has_delta_ = false;
    uint64_t ticks_ = 0;
};

Stats Engine::solve(const Options& opt)
{
    Stats stats;
    unsigned strata = 0;
    for (const auto& r : rules_)
        strata = std::max(strata, r.stratum + 1);

    Evaluator ev(*this, opt);
    for (unsigned s = 0; s < strata; ++s)
    {
        std::vector<const Rule*> rules;
        std::vector<bool> idb(rels_.size(), false);
        for (const auto& r : rules_)
            if (r.stratum == s)
            {
                rules.push_back(&r);
                idb[r.head.rel] = true;
            }
        if (opt.seed != 0)
        {
            std::mt19937_64 rng(opt.seed * 0x9e3779b97f4a7c15ULL + s);
            std::shuffle(rules.begin(), rules.end(), rng);
        }

        std::vector<size_t> lo(rels_.size(), 0), hi(rels_.size(), 0);
        const auto commit = [&] {
            for (size_t i = 0; i < rels_.size(); ++i)
                lo[i] = hi[i] = rels_[i]->size();
            bool any = false;
            for (const auto& [rel, t] : ev.pending)
                any |= rels_[rel]->insert(t);
            ev.pending.clear();
            for (size_t i = 0; i < rels_.size(); ++i)
                hi[i] = rels_[i]->size();
            if (total_facts() > opt.max_facts)
                throw Error(ErrorKind::BudgetExceeded, "fixpoint exceeded " + std::to_string(opt.max_facts) + " facts");
            ++stats.rounds;
            return any;
        };

        for (const Rule* r : rules)
            ev.eval(*r, std::nullopt, 0, 0);
        while (commit())
        {
            for (const Rule* r : rules)
                for (size_t d = 0; d < r->body.size(); ++d)
                {
                    const uint32_t rel = r->body[d].rel;
                    if (idb[rel] && hi[rel] > lo[rel])
                        ev.eval(*r, d, lo[rel], hi[rel]);
                }
        }
    }
    stats.derivations = ev.derivations;
    return stats;
}
}  // namespace depguard::datalog
