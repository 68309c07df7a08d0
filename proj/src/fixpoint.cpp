#include "depguard/fixpoint.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace depguard
{
namespace
{
using datalog::Atom;
using datalog::Rule;
using datalog::SymId;
using datalog::Term;

struct RuleSpec
{
    const char* name;
    unsigned stratum;
    Pred head;
    std::vector<const char*> head_terms;
    std::vector<std::pair<Pred, std::vector<const char*>>> body;
};

using P = Pred;

// Terms are variable names, except "TOP" which is the unknown-location constant.
// clang-format off
const std::vector<RuleSpec>& specs()
{
    static const std::vector<RuleSpec> rules{
        {"mc-base", 0, P::MayControls, {"pc", "pcb", "xb"}, {{P::Controls, {"pcb", "pc"}}, {P::Cond, {"pcb", "xb"}}}},
        {"mc-trans", 0, P::MayControls, {"pc", "pcb", "xb"},
         {{P::Controls, {"pc2", "pc"}}, {P::MayControls, {"pc2", "pcb", "xb"}}}},

        {"var-source", 1, P::VarMayDependOn, {"y", "t"}, {{P::VarSource, {"pc", "y", "t"}}}},
        {"var-var", 1, P::VarMayDependOn, {"y", "t"}, {{P::VarVar, {"pc", "y", "x"}}, {P::VarMayDependOn, {"x", "t"}}}},
        {"var-mem", 1, P::VarMayDependOn, {"y", "t"},
         {{P::VarMem, {"pc", "y", "l"}}, {P::ReadMem, {"l", "l2"}}, {P::Succ, {"p", "pc"}},
          {P::MemMayDependOn, {"p", "l2", "t"}}}},
        {"var-stor", 1, P::VarMayDependOn, {"y", "t"},
         {{P::VarStor, {"pc", "y", "l"}}, {P::ReadStor, {"l", "l2"}}, {P::Succ, {"p", "pc"}},
          {P::StorMayDependOn, {"p", "l2", "t"}}}},
        {"var-gas", 1, P::VarMayDependOn, {"y", "t"},
         {{P::VarGas, {"pc", "y"}}, {P::Succ, {"p", "pc"}}, {P::GasDependOn, {"p", "t"}}}},
        {"var-msize", 1, P::VarMayDependOn, {"y", "t"},
         {{P::VarMsize, {"pc", "y"}}, {P::Succ, {"p", "pc"}}, {P::MsizeDependOn, {"p", "t"}}}},
        {"var-external", 1, P::VarMayDependOn, {"y", "t"},
         {{P::VarExternal, {"pc", "y"}}, {P::Succ, {"p", "pc"}}, {P::ExternalDependOn, {"p", "t"}}}},
        {"var-control", 1, P::VarMayDependOn, {"y", "t"},
         {{P::VarWrite, {"pc", "y"}}, {P::MayControls, {"pc", "pcb", "xb"}}, {P::VarMayDependOn, {"xb", "t"}}}},

        {"mem-source", 1, P::MemMayDependOn, {"pc", "l", "t"}, {{P::MemSource, {"pc", "l", "t"}}}},
        {"mem-var", 1, P::MemMayDependOn, {"pc", "l", "t"}, {{P::MemVar, {"pc", "l", "x"}}, {P::VarMayDependOn, {"x", "t"}}}},
        {"mem-frame", 1, P::MemMayDependOn, {"pc", "l", "t"},
         {{P::MemFrame, {"pc", "l"}}, {P::Succ, {"p", "pc"}}, {P::MemMayDependOn, {"p", "l", "t"}}}},
        {"mem-noreassign", 1, P::MemMayDependOn, {"pc", "l", "t"},
         {{P::NoReassignMem, {"pc"}}, {P::Succ, {"p", "pc"}}, {P::MemMayDependOn, {"p", "l", "t"}}}},
        {"mem-top", 1, P::MemMayDependOn, {"pc", "TOP", "t"},
         {{P::Succ, {"p", "pc"}}, {P::MemMayDependOn, {"p", "TOP", "t"}}}},
        {"mem-window", 1, P::MemMayDependOn, {"pc", "l", "t"},
         {{P::MemMem, {"pc", "l", "o", "s"}}, {P::IvlCell, {"o", "s", "l2"}}, {P::Succ, {"p", "pc"}},
          {P::MemMayDependOn, {"p", "l2", "t"}}}},
        {"mem-window-top", 1, P::MemMayDependOn, {"pc", "l", "t"},
         {{P::MemMem, {"pc", "l", "o", "s"}}, {P::IsConst, {"o"}}, {P::Succ, {"p", "pc"}},
          {P::MemMayDependOn, {"p", "TOP", "t"}}}},
        {"mem-any", 1, P::MemMayDependOn, {"pc", "l", "t"},
         {{P::MemMem, {"pc", "l", "TOP", "s"}}, {P::Succ, {"p", "pc"}}, {P::MemMayDependOn, {"p", "l2", "t"}}}},
        {"mem-stor", 1, P::MemMayDependOn, {"pc", "l", "t"},
         {{P::MemStore, {"pc", "l", "ls"}}, {P::ReadStor, {"ls", "l2"}}, {P::Succ, {"p", "pc"}},
          {P::StorMayDependOn, {"p", "l2", "t"}}}},
        {"mem-gas", 1, P::MemMayDependOn, {"pc", "l", "t"},
         {{P::MemGas, {"pc", "l"}}, {P::Succ, {"p", "pc"}}, {P::GasDependOn, {"p", "t"}}}},
        {"mem-msize", 1, P::MemMayDependOn, {"pc", "l", "t"},
         {{P::MemMsize, {"pc", "l"}}, {P::Succ, {"p", "pc"}}, {P::MsizeDependOn, {"p", "t"}}}},
        {"mem-external", 1, P::MemMayDependOn, {"pc", "l", "t"},
         {{P::MemExternal, {"pc", "l"}}, {P::Succ, {"p", "pc"}}, {P::ExternalDependOn, {"p", "t"}}}},
        {"mem-control", 1, P::MemMayDependOn, {"pc", "l", "t"},
         {{P::MemWrite, {"pc", "l"}}, {P::MayControls, {"pc", "pcb", "xb"}}, {P::VarMayDependOn, {"xb", "t"}}}},

        {"stor-var", 1, P::StorMayDependOn, {"pc", "l", "t"},
         {{P::StoreVar, {"pc", "l", "x"}}, {P::VarMayDependOn, {"x", "t"}}}},
        {"stor-frame", 1, P::StorMayDependOn, {"pc", "l", "t"},
         {{P::StorFrame, {"pc", "l"}}, {P::Succ, {"p", "pc"}}, {P::StorMayDependOn, {"p", "l", "t"}}}},
        {"stor-noreassign", 1, P::StorMayDependOn, {"pc", "l", "t"},
         {{P::NoReassignStor, {"pc"}}, {P::Succ, {"p", "pc"}}, {P::StorMayDependOn, {"p", "l", "t"}}}},
        {"stor-top", 1, P::StorMayDependOn, {"pc", "TOP", "t"},
         {{P::Succ, {"p", "pc"}}, {P::StorMayDependOn, {"p", "TOP", "t"}}}},
        {"stor-control", 1, P::StorMayDependOn, {"pc", "l", "t"},
         {{P::StorWrite, {"pc", "l"}}, {P::MayControls, {"pc", "pcb", "xb"}}, {P::VarMayDependOn, {"xb", "t"}}}},

        {"gas-source", 1, P::GasDependOn, {"pc", "t"}, {{P::GasSource, {"pc", "t"}}}},
        {"gas-var", 1, P::GasDependOn, {"pc", "t"}, {{P::GasVar, {"pc", "x"}}, {P::VarMayDependOn, {"x", "t"}}}},
        {"gas-mem", 1, P::GasDependOn, {"pc", "t"},
         {{P::GasMem, {"pc", "l"}}, {P::ReadMem, {"l", "l2"}}, {P::Succ, {"p", "pc"}},
          {P::MemMayDependOn, {"p", "l2", "t"}}}},
        {"gas-stor", 1, P::GasDependOn, {"pc", "t"},
         {{P::GasStore, {"pc", "l"}}, {P::ReadStor, {"l", "l2"}}, {P::Succ, {"p", "pc"}},
          {P::StorMayDependOn, {"p", "l2", "t"}}}},
        {"gas-msize", 1, P::GasDependOn, {"pc", "t"},
         {{P::GasMsize, {"pc"}}, {P::Succ, {"p", "pc"}}, {P::MsizeDependOn, {"p", "t"}}}},
        {"gas-external", 1, P::GasDependOn, {"pc", "t"},
         {{P::GasExternal, {"pc"}}, {P::Succ, {"p", "pc"}}, {P::ExternalDependOn, {"p", "t"}}}},
        {"gas-self", 1, P::GasDependOn, {"pc", "t"}, {{P::Succ, {"p", "pc"}}, {P::GasDependOn, {"p", "t"}}}},
        {"gas-control", 1, P::GasDependOn, {"pc", "t"},
         {{P::GasWrite, {"pc"}}, {P::MayControls, {"pc", "pcb", "xb"}}, {P::VarMayDependOn, {"xb", "t"}}}},

        {"msize-var", 1, P::MsizeDependOn, {"pc", "t"}, {{P::MsizeVar, {"pc", "x"}}, {P::VarMayDependOn, {"x", "t"}}}},
        {"msize-self", 1, P::MsizeDependOn, {"pc", "t"}, {{P::Succ, {"p", "pc"}}, {P::MsizeDependOn, {"p", "t"}}}},
        {"msize-control", 1, P::MsizeDependOn, {"pc", "t"},
         {{P::MsizeWrite, {"pc"}}, {P::MayControls, {"pc", "pcb", "xb"}}, {P::VarMayDependOn, {"xb", "t"}}}},

        {"ext-source", 1, P::ExternalDependOn, {"pc", "t"}, {{P::ExternalSource, {"pc", "t"}}}},
        {"ext-var", 1, P::ExternalDependOn, {"pc", "t"},
         {{P::ExternalVar, {"pc", "x"}}, {P::VarMayDependOn, {"x", "t"}}}},
        {"ext-mem", 1, P::ExternalDependOn, {"pc", "t"},
         {{P::ExternalMem, {"pc", "l"}}, {P::ReadMem, {"l", "l2"}}, {P::Succ, {"p", "pc"}},
          {P::MemMayDependOn, {"p", "l2", "t"}}}},
        {"ext-stor", 1, P::ExternalDependOn, {"pc", "t"},
         {{P::ExternalStore, {"pc", "l"}}, {P::ReadStor, {"l", "l2"}}, {P::Succ, {"p", "pc"}},
          {P::StorMayDependOn, {"p", "l2", "t"}}}},
        {"ext-gas", 1, P::ExternalDependOn, {"pc", "t"},
         {{P::ExternalGas, {"pc"}}, {P::Succ, {"p", "pc"}}, {P::GasDependOn, {"p", "t"}}}},
        {"ext-msize", 1, P::ExternalDependOn, {"pc", "t"},
         {{P::ExternalMsize, {"pc"}}, {P::Succ, {"p", "pc"}}, {P::MsizeDependOn, {"p", "t"}}}},
        {"ext-self", 1, P::ExternalDependOn, {"pc", "t"}, {{P::Succ, {"p", "pc"}}, {P::ExternalDependOn, {"p", "t"}}}},
        {"ext-control", 1, P::ExternalDependOn, {"pc", "t"},
         {{P::ExternalWrite, {"pc"}}, {P::MayControls, {"pc", "pcb", "xb"}}, {P::VarMayDependOn, {"xb", "t"}}}},

        {"inst", 1, P::InstMayDepOn, {"pc", "t"},
         {{P::MayControls, {"pc", "pcb", "xb"}}, {P::VarMayDependOn, {"xb", "t"}}}},
    };
    return rules;
}
// clang-format on

class SymTable
{
public:
    SymId intern(const Sym& s)
    {
        const auto [it, inserted] = ids_.emplace(s, static_cast<SymId>(syms_.size()));
        if (inserted)
            syms_.push_back(s);
        return it->second;
    }
    [[nodiscard]] const Sym& at(SymId id) const { return syms_[id]; }

private:
    std::map<Sym, SymId> ids_;
    std::vector<Sym> syms_;
};
}  // namespace

bool Lfp::contains(const DepFact& f) const
{
    return std::binary_search(facts.begin(), facts.end(), f);
}

std::vector<DepFact> Lfp::of(Pred p) const
{
    std::vector<DepFact> out;
    for (const auto& f : facts)
        if (f.pred == p)
            out.push_back(f);
    return out;
}

std::vector<std::string> rule_names()
{
    std::vector<std::string> out;
    for (const auto& r : specs())
        out.emplace_back(r.name);
    return out;
}

Lfp solve_fixpoint(const std::vector<DepFact>& facts, const std::vector<DepFact>& grounding,
                   const FixpointOptions& opt)
{
    datalog::Engine eng;
    SymTable syms;
    std::vector<uint32_t> rel(kPredCount);
    for (size_t p = 0; p < kPredCount; ++p)
    {
        const PredInfo& info = pred_info(static_cast<Pred>(p));
        rel[p] = eng.add_relation(std::string(info.name), info.arity);
    }
    const SymId top = syms.intern(Sym::top());

    for (const auto& spec : specs())
    {
        std::map<std::string, uint32_t> vars;
        const auto atom = [&](Pred p, const std::vector<const char*>& terms) {
            Atom a{rel[static_cast<size_t>(p)], {}};
            for (const char* t : terms)
            {
                const std::string name(t);
                if (name == "TOP")
                    a.terms.push_back(Term::constant(top));
                else
                    a.terms.push_back(Term::var(vars.emplace(name, static_cast<uint32_t>(vars.size())).first->second));
            }
            return a;
        };
        Rule r;
        r.name = spec.name;
        r.stratum = spec.stratum;
        for (const auto& [p, terms] : spec.body)
            r.body.push_back(atom(p, terms));
        r.head = atom(spec.head, spec.head_terms);
        eng.add_rule(std::move(r));
    }

    const auto load = [&](const DepFact& f) {
        const PredInfo& info = pred_info(f.pred);
        if (f.args.size() != info.arity)
            throw std::invalid_argument("fact " + f.str() + " has the wrong arity");
        datalog::Tuple t;
        t.fill(datalog::kUnbound);
        for (size_t i = 0; i < f.args.size(); ++i)
            t[i] = syms.intern(f.args[i]);
        eng.add_fact(rel[static_cast<size_t>(f.pred)], t);
    };
    for (const auto& f : facts)
        load(f);
    for (const auto& f : grounding)
        load(f);

    Lfp out;
    out.stats = eng.solve({opt.seed, opt.max_facts, opt.deadline});
    for (size_t p = 0; p < kPredCount; ++p)
    {
        if (!pred_info(static_cast<Pred>(p)).derived)
            continue;
        const auto& r = eng.relation(rel[p]);
        for (size_t i = 0; i < r.size(); ++i)
        {
            DepFact f{static_cast<Pred>(p), {}};
            for (size_t c = 0; c < r.arity(); ++c)
                f.args.push_back(syms.at(r.row(i)[c]));
            out.facts.push_back(std::move(f));
        }
    }
    std::sort(out.facts.begin(), out.facts.end());
    return out;
}
}  // namespace depguard
