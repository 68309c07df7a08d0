#include "depguard/cfg.hpp"
#include "depguard/error.hpp"
#include "depguard/oracle.hpp"
#include "support/generators.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace depguard;
using gen::Assembler;

namespace
{
Cfg cfg_of(const std::string& hex)
{
    return Cfg::build(load_bytecode(parse_hex(hex)));
}

const CfgEdge& edge(const Cfg& g, Pc pc, const std::string& label)
{
    for (const size_t e : g.edges_of(pc))
        if (g.edges()[e].label == label)
            return g.edges()[e];
    throw std::runtime_error("no edge " + label + " at pc " + std::to_string(pc));
}
}  // namespace

TEST(CfgRules, AddHasGasValueAndMsizeEdges)
{
    const Cfg g = cfg_of("600560030100");
    const auto& gas = edge(g, 4, "gas");
    EXPECT_EQ(gas.src, (CfgNode{4, 0}));
    EXPECT_EQ(gas.dst, (CfgNode{4, 1}));
    EXPECT_EQ(gas.def, (VarSet{Var::gas(5)}));
    EXPECT_EQ(gas.use, (VarSet{Var::gas(4)}));
    const auto& val = edge(g, 4, "value");
    EXPECT_EQ(val.def, (VarSet{Var::stack(2)}));
    EXPECT_EQ(val.use, (VarSet{Var::stack(0), Var::stack(1)}));
}

TEST(CfgRules, AddSteps)
{
    const Cfg g = cfg_of("600560030100");
    CfgState s;
    s.set(Var::gas(4), u256{100});
    s.set(Var::stack(0), u256{2});
    s.set(Var::stack(1), u256{3});
    CfgNode n{4, 0};
    n = g.step(n, s);
    EXPECT_EQ(s.get(Var::gas(5)), u256{97});
    n = g.step(n, s);
    EXPECT_EQ(s.get(Var::stack(2)), u256{5});
}

TEST(CfgRules, JumpiGasAndGuards)
{
    // PUSH1 0 CALLDATALOAD PUSH1 7 JUMPI STOP JUMPDEST STOP
    const Cfg g = cfg_of("600035600757005b00");
    const auto& gas = edge(g, 5, "gas");
    CfgState s;
    s.set(Var::gas(5), u256{50});
    gas.apply(s);
    EXPECT_EQ(s.get(Var::gas(6)), u256{40});

    std::vector<const CfgEdge*> guards;
    for (const size_t e : g.edges_of(5))
        if (g.edges()[e].is_guard())
            guards.push_back(&g.edges()[e]);
    ASSERT_EQ(guards.size(), 2u);
    for (const auto* e : guards)
    {
        EXPECT_TRUE(e->def.empty());
        EXPECT_EQ(e->use, (VarSet{Var::stack(1)}));
    }
    CfgState zero;
    zero.set(Var::stack(1), u256{0});
    CfgState one;
    one.set(Var::stack(1), u256{7});
    const CfgNode at = guards[0]->src;
    EXPECT_EQ(g.step(at, zero), (CfgNode{6, 0}));
    EXPECT_EQ(g.step(at, one), (CfgNode{7, 0}));
}

TEST(CfgRules, StopAndInvalidSinks)
{
    const Cfg g = cfg_of("00");
    ASSERT_EQ(g.edges_of(0).size(), 1u);
    const auto& e = g.edges()[g.edges_of(0)[0]];
    EXPECT_EQ(e.dst, CfgNode::halt());
    EXPECT_TRUE(e.def.empty());
    EXPECT_TRUE(e.use.empty());

    const Cfg h = cfg_of("fe");
    EXPECT_EQ(h.edges()[h.edges_of(0)[0]].dst, CfgNode::exception());
}

TEST(CfgRules, MstoreKnownOffsetTwoLayers)
{
    const Cfg g = cfg_of("600760405200");  // MSTORE(0x40, 7)
    const auto& s = edge(g, 4, "mem.s");
    EXPECT_EQ(s.def, (VarSet{Var::mem_s(u256{0x40})}));
    EXPECT_EQ(s.use, (VarSet{Var::stack(0)}));
    const auto& d = edge(g, 4, "mem.d");
    EXPECT_EQ(d.def, (VarSet{Var::mem_d(u256{0x40})}));
    EXPECT_TRUE(d.use.empty());
}

TEST(CfgRules, MstoreUnknownOffsetWritesDynamicLayer)
{
    const Cfg g = cfg_of("60076000355200");  // MSTORE(CALLDATALOAD(0), 7)
    const auto& d = edge(g, 5, "mem.d");
    EXPECT_EQ(d.def, (VarSet{VarAtom::all(VarKind::MemD)}));
    EXPECT_TRUE(d.use.contains(Var::stack(0)));
    EXPECT_TRUE(d.use.contains(Var::stack(2)));
    EXPECT_TRUE(d.use.intersects(VarAtom::all(VarKind::MemD)));
    EXPECT_FALSE(d.def.contains(Var::mem_s(u256{0})));
}

TEST(CfgRules, MloadKnownOffsetReadsBothLayers)
{
    const Cfg g = cfg_of("6040515000");
    const auto& v = edge(g, 2, "value");
    EXPECT_EQ(v.use, (VarSet{Var::mem_s(u256{0x40}), Var::mem_d(u256{0x40})}));
}

TEST(CfgRules, CallerReadsSender)
{
    const Cfg g = cfg_of("335000");
    const auto& v = edge(g, 0, "value");
    EXPECT_EQ(v.def, (VarSet{Var::stack(0)}));
    EXPECT_EQ(v.use, (VarSet{Var::local(LocalName::Sender)}));
}

TEST(CfgRules, CallResultUsesWorldAndArguments)
{
    // CALL(gas 0x75ff, to 2, value 0, in [0x40, 0x60), out [0, 0))
    const Cfg g = cfg_of("6000600060206040600060026175fff15000");
    const auto& t = edge(g, 15, "call.tmp");
    for (VarId v = 0; v < 7; ++v)
        EXPECT_TRUE(t.use.contains(Var::stack(v)));
    EXPECT_TRUE(t.use.contains(Var::mem_s(u256{0x40})));
    EXPECT_TRUE(t.use.contains(Var::mem_d(u256{0x40})));
    EXPECT_TRUE(t.use.contains(Var::stor_s(u256{12345})));
    EXPECT_TRUE(t.use.contains(Var::gas(15)));
    EXPECT_TRUE(t.use.contains(Var::local(LocalName::Actor)));
    EXPECT_TRUE(t.use.contains(Var::external()));
    for (unsigned n = 0; n < kGlobalCount; ++n)
        EXPECT_TRUE(t.use.contains(Var::global(static_cast<GlobalName>(n))));
    EXPECT_TRUE(t.def.contains(Var::stack(7).temp()));
}

TEST(CfgRules, StoreReachableCallIsRejectedByBuilder)
{
    Contract c = load_bytecode(parse_hex("00"));
    c.code.at(0).op = Op::DELEGATECALL;
    try
    {
        Cfg::build(c);
        FAIL() << "expected UnsupportedOpcode";
    }
    catch (const Error& e)
    {
        EXPECT_EQ(e.kind(), ErrorKind::UnsupportedOpcode);
    }
}

TEST(CfgShape, SubIndicesContiguousAndInitialNodesPresent)
{
    std::mt19937_64 rng(31);
    for (int i = 0; i < 60; ++i)
    {
        const Cfg g = Cfg::build(gen::random_contract(rng, {}));
        std::map<Pc, std::vector<uint16_t>> subs;
        for (const auto& n : g.nodes())
            if (!n.is_sink())
                subs[n.pc].push_back(n.sub);
        for (const auto& [pc, ins] : g.contract().code)
            EXPECT_TRUE(subs.contains(pc)) << "missing initial node for pc " << pc;
        for (auto& [pc, v] : subs)
        {
            std::sort(v.begin(), v.end());
            for (size_t k = 0; k < v.size(); ++k)
                EXPECT_EQ(v[k], k) << "pc " << pc;
        }
        for (size_t n = 0; n < g.nodes().size(); ++n)
        {
            size_t guards = 0;
            for (const size_t e : g.out_edges(n))
            {
                guards += g.edges()[e].is_guard();
                if (g.edges()[e].is_guard())
                    EXPECT_TRUE(g.edges()[e].def.empty());
            }
            if (guards == 0 && !g.nodes()[n].is_sink())
                EXPECT_EQ(g.out_edges(n).size(), 1u);
            else
                EXPECT_EQ(guards, g.out_edges(n).size());
        }
    }
}

// From any node and any state exactly one outgoing edge is enabled.
TEST(CfgShape, GuardFansAreDeterministic)
{
    std::mt19937_64 rng(32);
    Sampler sampler(33);
    for (int i = 0; i < 60; ++i)
    {
        const Cfg g = Cfg::build(gen::random_contract(rng, {}));
        for (int k = 0; k < 20; ++k)
        {
            CfgState s = to_cfg(sampler.state(g.contract()), sampler.env());
            for (const auto& [pc, ins] : g.contract().code)
                for (const VarId v : ins.out_vars)
                    s.set(Var::stack(v), gen::random_word(rng));
            for (size_t n = 0; n < g.nodes().size(); ++n)
            {
                size_t enabled = 0, guards = 0;
                for (const size_t e : g.out_edges(n))
                    if (g.edges()[e].is_guard())
                    {
                        ++guards;
                        enabled += g.edges()[e].guard(s);
                    }
                if (guards > 0)
                    EXPECT_EQ(enabled, 1u) << g.nodes()[n].str();
            }
        }
    }
}

// MSTORE at known x after an unknown-offset store, then MLOAD x, returns the stored value.
TEST(CfgMemory, TwoLayerReadLawExhaustive)
{
    const Pc x_values[] = {0, 32, 64};
    const uint64_t deltas[] = {0, 1, 16, 31, 32, 33, 64};
    for (const Pc x : x_values)
        for (const uint64_t d : deltas)
            for (const bool below : {false, true})
            {
                if (below && d > x)
                    continue;
                const u256 unknown{below ? x - d : x + d};
                Assembler a;
                a.push(u256{0xaaaa}).push(u256{0}).op(Op::CALLDATALOAD).op(Op::MSTORE);
                a.push(u256{0xbbbb}).push(u256{x}).op(Op::MSTORE);
                a.push(u256{x}).op(Op::MLOAD).push(u256{0x100}).op(Op::MSTORE).op(Op::STOP);
                const Cfg g = Cfg::build(load_bytecode(a.bytes()));
                ExecState es;
                es.gas = u256{1'000'000};
                const auto kb = unknown.be_bytes();
                es.input.assign(kb.begin(), kb.end());
                CfgState s = to_cfg(es, TxEnv{});
                const CfgRun r = run_cfg(g, g.entry(), s, 10'000);
                EXPECT_EQ(r.final_node, CfgNode::halt());
                EXPECT_EQ(r.state.load_mem(u256{0x100}), u256{0xbbbb}) << "x=" << x << " unknown=" << unknown.dec();
            }
}

TEST(CfgMemory, UnknownStoreVisibleThroughDynamicLayer)
{
    Assembler a;
    a.push(u256{0xaaaa}).push(u256{0}).op(Op::CALLDATALOAD).op(Op::MSTORE);
    a.push(u256{0x20}).op(Op::MLOAD).push(u256{0x100}).op(Op::MSTORE).op(Op::STOP);
    const Cfg g = Cfg::build(load_bytecode(a.bytes()));
    ExecState es;
    es.gas = u256{1'000'000};
    es.input = Bytes(32, 0);
    es.input[31] = 0x20;
    const CfgRun r = run_cfg(g, g.entry(), to_cfg(es, TxEnv{}), 10'000);
    EXPECT_EQ(r.state.load_mem(u256{0x100}), u256{0xaaaa});
}

TEST(CfgRun, FuelExhaustionIsReported)
{
    // JUMPDEST PUSH1 0 JUMP: spins forever.
    const Cfg g = cfg_of("5b600056");
    CfgState s;
    s.set(Var::gas(0), u256{1'000'000});
    try
    {
        run_cfg(g, g.entry(), s, 100);
        FAIL() << "expected FuelExhausted";
    }
    catch (const Error& e)
    {
        EXPECT_EQ(e.kind(), ErrorKind::FuelExhausted);
    }
}

TEST(CfgExport, DotListsEveryEdge)
{
    const Cfg g = cfg_of("600560030100");
    const std::string dot = g.to_dot();
    EXPECT_EQ(dot.rfind("digraph cfg {", 0), 0u);
    size_t arrows = 0;
    for (size_t p = dot.find("->"); p != std::string::npos; p = dot.find("->", p + 1))
        ++arrows;
    EXPECT_EQ(arrows, g.edges().size());
}
