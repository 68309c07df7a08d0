#include "depguard/analysis.hpp"
#include "depguard/error.hpp"
#include "depguard/fixpoint.hpp"
#include "support/generators.hpp"
#include "support/properties.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <random>

using namespace depguard;

namespace
{
Contract timestamp_chain(bool unknown_key)
{
    // m[cd[0]] = TIMESTAMP; if (m[0]) sstore(key, 1)
    gen::Assembler as;
    as.op(Op::TIMESTAMP).push(u256{0}).op(Op::CALLDATALOAD).op(Op::MSTORE);
    as.push(u256{0}).op(Op::MLOAD).op(Op::ISZERO).push_label("end").op(Op::JUMPI);
    as.push(u256{1});
    if (unknown_key)
        as.push(u256{32}).op(Op::CALLDATALOAD);
    else
        as.push(u256{0});
    as.op(Op::SSTORE);
    as.label("end").op(Op::STOP);
    return load_bytecode(as.bytes());
}

Pc first(const Contract& c, Op op)
{
    for (const auto& [pc, ins] : c.code)
        if (ins.op == op)
            return pc;
    throw std::logic_error("opcode not present");
}
}  // namespace

TEST(Fixpoint, NoFactsNoConsequences)
{
    EXPECT_TRUE(solve_fixpoint(std::vector<DepFact>{}, {}).facts.empty());
}

TEST(Fixpoint, NoSourcesNoDependencies)
{
    // Constant arithmetic into storage: nothing to depend on.
    const Analysis a = analyze(load_bytecode(parse_hex("6001600201600055600060005100")));
    EXPECT_TRUE(a.lfp.of(Pred::VarMayDependOn).empty());
    EXPECT_TRUE(a.lfp.of(Pred::StorMayDependOn).empty());
    EXPECT_TRUE(a.lfp.of(Pred::InstMayDepOn).empty());
}

TEST(Fixpoint, RuleNamesAreUnique)
{
    auto names = rule_names();
    EXPECT_FALSE(names.empty());
    std::sort(names.begin(), names.end());
    EXPECT_EQ(std::adjacent_find(names.begin(), names.end()), names.end());
}

TEST(Fixpoint, TimestampThroughUnknownStoreReachesStorage)
{
    const Contract c = timestamp_chain(true);
    const Analysis a = analyze(c);
    const Pc ss = first(c, Op::SSTORE);
    EXPECT_TRUE(a.lfp.contains({Pred::StorMayDependOn, {Sym::pc(ss), Sym::top(), Sym::tag(Op::TIMESTAMP)}}));
    EXPECT_TRUE(a.lfp.contains({Pred::InstMayDepOn, {Sym::pc(ss), Sym::tag(Op::TIMESTAMP)}}));
    const auto rep = prop::check_slice_inclusion(a);
    EXPECT_TRUE(rep.violations.empty()) << rep.violations.front();
}

TEST(Fixpoint, TimestampThroughUnknownStoreReachesKnownSlot)
{
    const Contract c = timestamp_chain(false);
    const Analysis a = analyze(c);
    const Pc ss = first(c, Op::SSTORE);
    EXPECT_TRUE(a.lfp.contains({Pred::StorMayDependOn, {Sym::pc(ss), Sym::loc(u256{0}), Sym::tag(Op::TIMESTAMP)}}));
}

TEST(Fixpoint, KnownStoreElsewhereDoesNotReachLoad)
{
    // m[0x20] = TIMESTAMP; sstore(0, m[0])
    const Contract c = load_bytecode(parse_hex("4260205260005160005500"));
    const Analysis a = analyze(c);
    EXPECT_TRUE(a.lfp.of(Pred::StorMayDependOn).empty());
    EXPECT_FALSE(a.lfp.contains({Pred::VarMayDependOn, {Sym::var(c.at(first(c, Op::MLOAD)).out_vars[0]), Sym::tag(Op::TIMESTAMP)}}));
}

TEST(Fixpoint, OverwriteAtKnownOffsetKillsDependency)
{
    // m[0] = TIMESTAMP; m[0] = 7; sstore(0, m[0])
    const Contract c = load_bytecode(parse_hex("42600052600760005260005160005500"));
    const Analysis a = analyze(c);
    EXPECT_TRUE(a.lfp.of(Pred::StorMayDependOn).empty());
}

TEST(Fixpoint, OrderIndependence)
{
    std::mt19937_64 rng(71);
    for (int i = 0; i < 25; ++i)
    {
        const Contract c = gen::random_contract(rng, {});
        const FactBase fb = generate_facts(Cfg::build(c));
        const Lfp ref = solve_fixpoint(fb);
        for (uint64_t seed = 1; seed <= 5; ++seed)
        {
            FixpointOptions opt;
            opt.seed = seed * 7919;
            std::vector<DepFact> shuffled = fb.facts;
            std::shuffle(shuffled.begin(), shuffled.end(), rng);
            ASSERT_EQ(solve_fixpoint(shuffled, fb.grounding, opt).facts, ref.facts) << "seed " << seed;
        }
    }
}

// NoReassignMem only lets dependencies through; removing it can only shrink the result.
TEST(Fixpoint, FrameFactsAreMonotone)
{
    std::mt19937_64 rng(72);
    for (int i = 0; i < 25; ++i)
    {
        const FactBase fb = generate_facts(Cfg::build(gen::random_contract(rng, {})));
        const Lfp full = solve_fixpoint(fb);
        std::vector<DepFact> fewer;
        for (const auto& f : fb.facts)
            if (f.pred != Pred::NoReassignMem || rng() % 2)
                fewer.push_back(f);
        const Lfp less = solve_fixpoint(fewer, fb.grounding);
        EXPECT_TRUE(std::includes(full.facts.begin(), full.facts.end(), less.facts.begin(), less.facts.end()));
    }
}

// Adding local facts never removes derived ones.
TEST(Fixpoint, MonotoneInLocalFacts)
{
    std::mt19937_64 rng(73);
    for (int i = 0; i < 25; ++i)
    {
        const FactBase fb = generate_facts(Cfg::build(gen::random_contract(rng, {})));
        const Lfp full = solve_fixpoint(fb);
        std::vector<DepFact> fewer;
        for (const auto& f : fb.facts)
            if (rng() % 4)
                fewer.push_back(f);
        const Lfp less = solve_fixpoint(fewer, fb.grounding);
        EXPECT_TRUE(std::includes(full.facts.begin(), full.facts.end(), less.facts.begin(), less.facts.end()));
    }
}

TEST(Fixpoint, BudgetIsEnforced)
{
    const FactBase fb = generate_facts(Cfg::build(timestamp_chain(true)));
    FixpointOptions opt;
    opt.max_facts = 3;
    EXPECT_THROW(solve_fixpoint(fb, opt), Error);
}

// Every tagged source in the backward slice of a variable or controlling guard is derived.
TEST(Fixpoint, SliceInclusionOnGeneratedContracts)
{
    std::mt19937_64 rng(74);
    size_t checks = 0;
    for (int i = 0; i < 40; ++i)
    {
        const Analysis a = analyze(gen::random_contract(rng, {.max_ops = 30}));
        const auto rep = prop::check_slice_inclusion(a);
        for (const auto& v : rep.violations)
            ADD_FAILURE() << v;
        checks += rep.var_checks + rep.inst_checks;
    }
    EXPECT_GT(checks, 200u);
}
