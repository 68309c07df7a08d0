#include "depguard/analysis.hpp"
#include "depguard/facts.hpp"
#include "support/generators.hpp"

#include <gtest/gtest.h>

#include <random>
#include <set>

using namespace depguard;

namespace
{
Contract hex(const std::string& h)
{
    return load_bytecode(parse_hex(h));
}

/// Printed local facts indexed at `pc`, markers left out.
std::set<std::string> local_at(const Contract& c, Pc pc)
{
    const FactBase fb = generate_facts(Cfg::build(c));
    std::set<std::string> out;
    for (const auto& f : fb.facts)
    {
        const PredInfo& info = pred_info(f.pred);
        if (!info.indexed || f.args.at(0) != Sym::pc(pc))
            continue;
        const std::string s = f.str();
        if (s.find("WRITE@") == std::string::npos)
            out.insert(s);
    }
    return out;
}

std::set<std::string> derived_of(const Analysis& a, Pred p)
{
    std::set<std::string> out;
    for (const auto& f : a.lfp.of(p))
        out.insert(f.str());
    return out;
}

// Instruction-level oracle. n postdominates m when every path from m to a halting instruction
// passes n; cd(a, b) when b postdominates a successor of a but not a itself.
bool escapes(const Contract& c, Pc from, Pc avoid)
{
    std::set<Pc> seen{from};
    std::vector<Pc> todo{from};
    while (!todo.empty())
    {
        const Pc v = todo.back();
        todo.pop_back();
        if (v == avoid)
            continue;
        const auto succ = c.successors(v);
        if (succ.empty())
            return true;
        for (const Pc w : succ)
            if (seen.insert(w).second)
                todo.push_back(w);
    }
    return false;
}

std::set<std::pair<Pc, Pc>> brute_controls(const Contract& c)
{
    std::set<std::pair<Pc, Pc>> cd;
    for (const auto& [a, ins] : c.code)
        for (const Pc s : c.successors(a))
            for (const auto& [b, unused] : c.code)
            {
                const bool pd_s = b == s || !escapes(c, s, b);
                const bool pd_a = b == a || !escapes(c, a, b);
                if (pd_s && !(b != a && pd_a))
                    cd.emplace(a, b);
            }
    return cd;
}

/// Transitive closure of cd from each JUMPI, printed as MayControls facts.
std::set<std::string> brute_may_controls(const Contract& c)
{
    const auto cd = brute_controls(c);
    std::set<std::string> out;
    for (const auto& [b, ins] : c.code)
    {
        if (ins.op != Op::JUMPI)
            continue;
        std::set<Pc> reach;
        std::vector<Pc> todo{b};
        while (!todo.empty())
        {
            const Pc v = todo.back();
            todo.pop_back();
            for (const auto& [x, y] : cd)
                if (x == v && reach.insert(y).second)
                    todo.push_back(y);
        }
        for (const Pc pc : reach)
            out.insert("MAYCONTROLS@" + std::to_string(pc) + "(" + std::to_string(b) + ",s" +
                       std::to_string(ins.in_vars[1]) + ")");
    }
    return out;
}
}  // namespace

TEST(LocalFacts, MloadUnknownOffset)
{
    // PUSH1 0 CALLDATALOAD MLOAD STOP
    const Contract c = hex("6000355100");
    EXPECT_EQ(local_at(c, 3),
              (std::set<std::string>{"VARMEM@3(s2,TOP)", "VARVAR@3(s2,s1)", "GASVAR@3(s1)", "MSIZEVAR@3(s1)", "GASMSIZE@3"}));
}

TEST(LocalFacts, MloadKnownOffset)
{
    const Contract c = hex("6000515000");
    EXPECT_EQ(local_at(c, 2), (std::set<std::string>{"VARMEM@2(s1,0x0)", "GASMSIZE@2"}));
}

TEST(LocalFacts, AddReadsBothOperands)
{
    const Contract c = hex("6000356001015000");
    EXPECT_EQ(local_at(c, 5), (std::set<std::string>{"VARVAR@5(s3,s1)", "VARVAR@5(s3,s2)"}));
}

TEST(LocalFacts, SourceOpcodesAreTagged)
{
    EXPECT_EQ(local_at(hex("425000"), 0), std::set<std::string>{"VARSOURCE@0(s0,TIMESTAMP)"});
    EXPECT_EQ(local_at(hex("335000"), 0), std::set<std::string>{"VARSOURCE@0(s0,CALLER)"});
}

TEST(LocalFacts, SstoreKnownKey)
{
    // TIMESTAMP PUSH1 0 SSTORE STOP
    const Contract c = hex("4260005500");
    const auto f = local_at(c, 3);
    EXPECT_TRUE(f.contains("STOREVAR@3(0x0,s0)"));
    EXPECT_TRUE(f.contains("GASVAR@3(s0)"));
    EXPECT_TRUE(f.contains("GASSTORE@3(0x0)"));
}

TEST(LocalFacts, NoReassignMarksNonWriters)
{
    const FactBase fb = generate_facts(Cfg::build(hex("6001600052600060005500")));
    std::set<std::string> s;
    for (const auto& f : fb.facts)
        s.insert(f.str());
    EXPECT_FALSE(s.contains("NOREASSIGNMEM(4)"));
    EXPECT_TRUE(s.contains("NOREASSIGNSTOR(4)"));
    EXPECT_FALSE(s.contains("NOREASSIGNSTOR(9)"));
    EXPECT_TRUE(s.contains("NOREASSIGNMEM(9)"));
}

TEST(LocalFacts, TimestampStoreDerivesStorageDependency)
{
    const Analysis a = analyze(hex("4260005500"));
    const auto dump = a.dump();
    EXPECT_NE(std::find(dump.begin(), dump.end(), "STORMAYDEPENDON@3(0x0,TIMESTAMP)"), dump.end());
    EXPECT_NE(std::find(dump.begin(), dump.end(), "VARMAYDEPENDON(s0,TIMESTAMP)"), dump.end());
}

TEST(MayControls, Diamond)
{
    // CALLDATALOAD(0) JUMPI L; SSTORE(0, 1); L: STOP
    const Analysis a = analyze(hex("600035600b5760016000555b00"));
    EXPECT_EQ(derived_of(a, Pred::MayControls),
              (std::set<std::string>{"MAYCONTROLS@6(5,s1)", "MAYCONTROLS@8(5,s1)", "MAYCONTROLS@10(5,s1)"}));
    EXPECT_EQ(derived_of(a, Pred::MayControls), brute_may_controls(a.contract()));
}

TEST(MayControls, NestedIfsCarryBothConditions)
{
    // if (cd[0]) { if (cd[32]) { SSTORE(0, 1) } }
    gen::Assembler as;
    as.push(u256{0}).op(Op::CALLDATALOAD).op(Op::ISZERO).push_label("end").op(Op::JUMPI);
    as.push(u256{32}).op(Op::CALLDATALOAD).op(Op::ISZERO).push_label("end").op(Op::JUMPI);
    as.push(u256{1}).push(u256{0}).op(Op::SSTORE);
    as.label("end").op(Op::STOP);
    const Analysis a = analyze(load_bytecode(as.bytes()));
    Pc sstore = 0;
    std::vector<Pc> jumpis;
    for (const auto& [pc, ins] : a.contract().code)
    {
        if (ins.op == Op::SSTORE)
            sstore = pc;
        if (ins.op == Op::JUMPI)
            jumpis.push_back(pc);
    }
    ASSERT_EQ(jumpis.size(), 2u);
    const auto mc = derived_of(a, Pred::MayControls);
    for (const Pc j : jumpis)
    {
        const std::string cond = "s" + std::to_string(a.contract().at(j).in_vars[1]);
        EXPECT_TRUE(mc.contains("MAYCONTROLS@" + std::to_string(sstore) + "(" + std::to_string(j) + "," + cond + ")"));
    }
    EXPECT_EQ(mc, brute_may_controls(a.contract()));
}

TEST(MayControls, MatchesInstructionLevelOracleOnCallFreeContracts)
{
    std::mt19937_64 rng(61);
    for (int i = 0; i < 80; ++i)
    {
        const Contract c = gen::random_contract(rng, {.max_ops = 50, .calls = false, .loops = true});
        const Analysis a = analyze(c);
        ASSERT_EQ(derived_of(a, Pred::MayControls), brute_may_controls(c)) << print_asm(c);
    }
}

TEST(Tags, SourceTagMapping)
{
    EXPECT_EQ(source_tag(Op::TIMESTAMP, Var::global(GlobalName::Timestamp)), Op::TIMESTAMP);
    EXPECT_EQ(source_tag(Op::CALL, Var::local(LocalName::Sender)), Op::CALLER);
    EXPECT_EQ(source_tag(Op::CALLDATACOPY, Var::local(LocalName::Input)), Op::CALLDATACOPY);
    EXPECT_EQ(source_tag(Op::CALL, Var::local(LocalName::Input)), Op::CALLDATALOAD);
    EXPECT_EQ(source_tag(Op::CALL, Var::local(LocalName::Actor)), Op::ADDRESS);
}

TEST(Facts, GenerationIsDeterministic)
{
    std::mt19937_64 rng(62);
    for (int i = 0; i < 20; ++i)
    {
        const Contract c = gen::random_contract(rng, {});
        const FactBase a = generate_facts(Cfg::build(c));
        const FactBase b = generate_facts(Cfg::build(c));
        EXPECT_EQ(a.facts, b.facts);
        EXPECT_EQ(a.grounding, b.grounding);
    }
}
