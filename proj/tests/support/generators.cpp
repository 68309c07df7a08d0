#include "support/generators.hpp"

#include "depguard/error.hpp"
#include "depguard/pdg.hpp"

#include <algorithm>
#include <stdexcept>

namespace depguard::gen
{
Assembler& Assembler::op(Op o)
{
    code_.push_back(static_cast<uint8_t>(o));
    ++ops_;
    return *this;
}

Assembler& Assembler::push(const u256& v)
{
    const unsigned width = std::max(1u, byte_length(v));
    code_.push_back(static_cast<uint8_t>(static_cast<unsigned>(Op::PUSH1) + width - 1));
    const auto be = v.be_bytes();
    code_.insert(code_.end(), be.end() - width, be.end());
    ++ops_;
    return *this;
}

Assembler& Assembler::push_label(const std::string& name)
{
    code_.push_back(static_cast<uint8_t>(static_cast<unsigned>(Op::PUSH1) + 1));
    fixups_.emplace_back(code_.size(), name);
    code_.push_back(0);
    code_.push_back(0);
    ++ops_;
    return *this;
}

Assembler& Assembler::label(const std::string& name)
{
    labels_[name] = code_.size();
    return op(Op::JUMPDEST);
}

Bytes Assembler::bytes() const
{
    Bytes out = code_;
    for (const auto& [at, name] : fixups_)
    {
        const auto it = labels_.find(name);
        if (it == labels_.end())
            throw std::logic_error("unbound label " + name);
        out[at] = static_cast<uint8_t>(it->second >> 8);
        out[at + 1] = static_cast<uint8_t>(it->second & 0xff);
    }
    return out;
}

u256 random_word(std::mt19937_64& rng)
{
    switch (rng() % 6)
    {
    case 0: return u256{rng() % 4};
    case 1: return u256{rng() % 256};
    case 2: return u256::max() - u256{rng() % 3};
    case 3: return u256{1} << static_cast<unsigned>(rng() % 256);
    case 4: return u256{rng()};
    default: return u256{rng(), rng(), rng(), rng()};
    }
}

namespace
{
constexpr Op kEnvLeaves[] = {
    Op::TIMESTAMP, Op::CALLER,   Op::NUMBER,       Op::CALLVALUE, Op::ORIGIN,         Op::GASPRICE,
    Op::COINBASE,  Op::GASLIMIT, Op::DIFFICULTY,   Op::ADDRESS,   Op::CALLDATASIZE,   Op::CODESIZE,
    Op::GAS,       Op::MSIZE,    Op::SELFBALANCE,  Op::PC,        Op::RETURNDATASIZE,
};
constexpr Op kBinary[] = {
    Op::ADD, Op::SUB, Op::MUL,  Op::DIV, Op::MOD, Op::LT,  Op::GT,  Op::EQ,  Op::AND,        Op::OR,
    Op::XOR, Op::SHR, Op::SHL,  Op::SAR, Op::BYTE, Op::SLT, Op::SGT, Op::SDIV, Op::SMOD, Op::SIGNEXTEND,
};
constexpr Op kUnaryEnv[] = {Op::BALANCE, Op::BLOCKHASH, Op::EXTCODESIZE, Op::EXTCODEHASH};

class ProgramGen
{
public:
    ProgramGen(std::mt19937_64& rng, const ProgramOptions& opt) : rng_(rng), opt_(opt) {}

    Bytes run()
    {
        // Terminator needs at most 4 ops.
        while (a_.ops() + 16 < opt_.max_ops)
            stmt(0);
        terminator();
        return a_.bytes();
    }

    [[nodiscard]] size_t ops() const { return a_.ops(); }

private:
    size_t pick(size_t n) { return static_cast<size_t>(rng_() % n); }
    bool coin(unsigned pct) { return pick(100) < pct; }
    size_t room() const { return a_.ops() + 4 < opt_.max_ops ? opt_.max_ops - a_.ops() - 4 : 0; }

    u256 aligned() { return u256{32 * pick(6)}; }

    /// Pushes one value. Depth bounds nesting.
    void expr(unsigned depth)
    {
        const size_t r = depth >= 2 ? pick(4) : pick(10);
        switch (r)
        {
        case 0: a_.push(u256{pick(4) == 0 ? rng_() : pick(40)}); return;
        case 1: a_.op(kEnvLeaves[pick(std::size(kEnvLeaves))]); return;
        case 2: a_.push(u256{pick(3) * 32}).op(Op::CALLDATALOAD); return;
        case 3:
            if (coin(50))
                a_.push(aligned()).op(Op::MLOAD);
            else
                a_.push(u256{pick(8)}).op(Op::SLOAD);
            return;
        case 4:
            expr(depth + 1);
            a_.op(coin(50) ? Op::ISZERO : Op::NOT);
            return;
        case 5:
            // Runtime-aligned memory read: AND 0x60 keeps the offset in {0, 32, 64, 96}.
            expr(depth + 1);
            a_.push(u256{0x60}).op(Op::AND).op(Op::MLOAD);
            return;
        case 6:
            expr(depth + 1);
            if (coin(50))
                a_.push(u256{7}).op(Op::AND).op(Op::SLOAD);
            else
                a_.op(kUnaryEnv[pick(std::size(kUnaryEnv))]);
            return;
        case 7:
            expr(depth + 1);
            expr(depth + 1);
            a_.op(kBinary[pick(std::size(kBinary))]);
            return;
        case 8:
            if (coin(50))
            {
                a_.push(u256{pick(4)});
                expr(depth + 1);
                a_.op(Op::EXP);
            }
            else
            {
                expr(depth + 1);
                expr(depth + 1);
                expr(depth + 1);
                a_.op(coin(50) ? Op::ADDMOD : Op::MULMOD);
            }
            return;
        default: a_.push(u256{32 * pick(3)}).push(aligned()).op(Op::SHA3); return;
        }
    }

    void mem_offset()
    {
        if (coin(70))
            a_.push(aligned());
        else
        {
            expr(2);
            a_.push(u256{0x60}).op(Op::AND);
        }
    }

    void stmt(unsigned depth)
    {
        const size_t r = pick(depth == 0 ? 12 : 10);
        switch (r)
        {
        case 0:
        case 1:
            expr(0);
            mem_offset();
            a_.op(Op::MSTORE);
            return;
        case 2:
        case 3:
            expr(0);
            if (coin(60))
                a_.push(u256{pick(8)});
            else
            {
                expr(1);
                a_.push(u256{7}).op(Op::AND);
            }
            a_.op(Op::SSTORE);
            return;
        case 4: {
            const Op copy = std::array{Op::CALLDATACOPY, Op::CODECOPY, Op::RETURNDATACOPY}[pick(3)];
            a_.push(u256{std::array<uint64_t, 4>{0, 32, 40, 64}[pick(4)]}).push(u256{pick(40)});
            mem_offset();
            a_.op(copy);
            return;
        }
        case 5: {
            const unsigned topics = static_cast<unsigned>(pick(3));
            for (unsigned i = 0; i < topics; ++i)
                expr(1);
            a_.push(u256{32 * pick(3)}).push(aligned());
            a_.op(static_cast<Op>(static_cast<unsigned>(Op::LOG0) + topics));
            return;
        }
        case 6:
            if (branches_ < opt_.branches && room() > 10)
            {
                ++branches_;
                const std::string skip = a_.fresh("skip");
                expr(1);
                a_.op(Op::ISZERO).push_label(skip).op(Op::JUMPI);
                const size_t end = a_.ops() + std::min<size_t>(room() / 2, 12);
                do
                    stmt(depth + 1);
                while (a_.ops() < end && coin(40));
                a_.label(skip);
                return;
            }
            break;
        case 7:
            if (opt_.early_exits && room() > 8)
            {
                const std::string go = a_.fresh("go");
                expr(1);
                a_.op(Op::ISZERO).push_label(go).op(Op::JUMPI);
                terminator();
                a_.label(go);
                return;
            }
            break;
        case 8:
        case 9:
            if (opt_.calls)
            {
                call();
                return;
            }
            break;
        case 10:
            if (opt_.loops && room() > 24)
            {
                loop(depth);
                return;
            }
            break;
        default: break;
        }
        expr(0);
        a_.push(aligned()).op(Op::MSTORE);
    }

    void call()
    {
        const size_t kind = pick(4);
        if (kind == 3)
        {
            a_.push(u256{32 * pick(2)}).push(aligned()).push(u256{pick(3)}).op(Op::CREATE);
        }
        else
        {
            a_.push(u256{32 * pick(3)});  // out size
            mem_offset();
            a_.push(u256{32 * pick(3)}).push(aligned());  // in size, in offset
            if (kind != 2)
                a_.push(u256{pick(3) == 0 ? 0 : pick(1000)});  // value
            if (coin(50))
                a_.op(Op::CALLER);
            else
                a_.push(u256{1 + pick(8)});
            if (coin(50))
                a_.op(Op::GAS);
            else
                a_.push(u256{pick(100000)});
            a_.op(kind == 2 ? Op::STATICCALL : Op::CALL);
        }
        if (coin(50))
            a_.op(Op::POP);
        else
            a_.push(aligned()).op(Op::MSTORE);
    }

    void loop(unsigned depth)
    {
        // Counter in its own memory word, bounded by a small constant.
        const u256 slot{depth == 0 ? 0xc0u : 0xe0u};
        const std::string head = a_.fresh("head");
        const std::string done = a_.fresh("done");
        a_.push(u256{0}).push(slot).op(Op::MSTORE);
        a_.label(head);
        a_.push(u256{1 + pick(3)}).push(slot).op(Op::MLOAD).op(Op::LT).op(Op::ISZERO);
        a_.push_label(done).op(Op::JUMPI);
        if (depth < 1)
            stmt(depth + 1);
        else
        {
            expr(1);
            a_.push(aligned()).op(Op::MSTORE);
        }
        a_.push(u256{1}).push(slot).op(Op::MLOAD).op(Op::ADD).push(slot).op(Op::MSTORE);
        a_.push_label(head).op(Op::JUMP);
        a_.label(done);
    }

    void terminator()
    {
        switch (pick(6))
        {
        case 0: a_.push(u256{32}).push(aligned()).op(Op::RETURN); return;
        case 1: a_.push(u256{32 * pick(2)}).push(u256{0}).op(Op::REVERT); return;
        case 2: a_.op(Op::INVALID); return;
        case 3: a_.push(u256{1 + pick(4)}).op(Op::SELFDESTRUCT); return;
        default: a_.op(Op::STOP); return;
        }
    }

    std::mt19937_64& rng_;
    ProgramOptions opt_;
    Assembler a_;
    unsigned branches_ = 0;
};

enum class Role
{
    Off,
    Size,
    Val,
    Addr,
    Gas,
    Key,
    Small,
};

std::vector<Role> roles(Op op)
{
    using R = Role;
    switch (op)
    {
    case Op::MLOAD: return {R::Off};
    case Op::MSTORE:
    case Op::MSTORE8: return {R::Off, R::Val};
    case Op::SHA3:
    case Op::RETURN:
    case Op::REVERT: return {R::Off, R::Size};
    case Op::CALLDATACOPY:
    case Op::CODECOPY:
    case Op::RETURNDATACOPY: return {R::Off, R::Small, R::Size};
    case Op::EXTCODECOPY: return {R::Addr, R::Off, R::Small, R::Size};
    case Op::LOG0: return {R::Off, R::Size};
    case Op::LOG1: return {R::Off, R::Size, R::Val};
    case Op::LOG2: return {R::Off, R::Size, R::Val, R::Val};
    case Op::LOG3: return {R::Off, R::Size, R::Val, R::Val, R::Val};
    case Op::LOG4: return {R::Off, R::Size, R::Val, R::Val, R::Val, R::Val};
    case Op::CALL:
    case Op::CALLCODE: return {R::Gas, R::Addr, R::Small, R::Off, R::Size, R::Off, R::Size};
    case Op::STATICCALL:
    case Op::DELEGATECALL: return {R::Gas, R::Addr, R::Off, R::Size, R::Off, R::Size};
    case Op::CREATE: return {R::Small, R::Off, R::Size};
    case Op::CREATE2: return {R::Small, R::Off, R::Size, R::Val};
    case Op::SLOAD: return {R::Key};
    case Op::SSTORE: return {R::Key, R::Val};
    case Op::BALANCE:
    case Op::EXTCODESIZE:
    case Op::EXTCODEHASH:
    case Op::SELFDESTRUCT: return {R::Addr};
    case Op::EXP: return {R::Val, R::Small};
    default: return std::vector<R>(op_info(op).pops, R::Val);
    }
}

void emit_arg(Assembler& a, Role r, size_t i, bool constant)
{
    if (constant)
    {
        switch (r)
        {
        case Role::Off: a.push(u256{0x40}); return;
        case Role::Size: a.push(u256{32}); return;
        case Role::Val: a.push(u256{0x1234 + i}); return;
        case Role::Addr: a.push(u256{2}); return;
        case Role::Gas: a.push(u256{30000}); return;
        case Role::Key: a.push(u256{1}); return;
        case Role::Small: a.push(u256{2}); return;
        }
    }
    a.push(u256{32 * i}).op(Op::CALLDATALOAD);
    switch (r)
    {
    case Role::Off: a.push(u256{0xe0}).op(Op::AND); return;
    case Role::Size: a.push(u256{0x3f}).op(Op::AND); return;
    case Role::Addr: a.push(u256{0xf}).op(Op::AND); return;
    case Role::Gas: a.push(u256{0xffff}).op(Op::AND); return;
    case Role::Key: a.push(u256{7}).op(Op::AND); return;
    case Role::Small: a.push(u256{3}).op(Op::AND); return;
    case Role::Val: return;
    }
}
}  // namespace

Bytes random_program(std::mt19937_64& rng, const ProgramOptions& opt)
{
    for (;;)
    {
        ProgramGen g(rng, opt);
        Bytes code = g.run();
        if (g.ops() <= opt.max_ops)
            return code;
    }
}

Contract random_contract(std::mt19937_64& rng, const ProgramOptions& opt)
{
    for (;;)
    {
        const Bytes code = random_program(rng, opt);
        try
        {
            return load_bytecode(code);
        }
        catch (const Error&)
        {
        }
    }
}

Bytes single_op_program(Op op, bool constant_args)
{
    Assembler a;
    if (op == Op::JUMP)
    {
        a.push_label("t").op(Op::JUMP).op(Op::INVALID).label("t").op(Op::STOP);
        return a.bytes();
    }
    if (op == Op::JUMPI)
    {
        emit_arg(a, Role::Val, 0, constant_args);
        a.push_label("t").op(Op::JUMPI).op(Op::STOP).label("t").op(Op::STOP);
        return a.bytes();
    }
    const auto rs = roles(op);
    for (size_t i = rs.size(); i-- > 0;)
        emit_arg(a, rs[i], i, constant_args);
    a.op(op);
    for (unsigned i = 0; i < op_info(op).pushes; ++i)
        a.push(u256{0x80 + 32 * i}).op(Op::MSTORE);
    if (!is_halting(op))
        a.op(Op::STOP);
    return a.bytes();
}

std::vector<Op> modeled_ops()
{
    std::vector<Op> out;
    for (unsigned b = 0; b < 256; ++b)
    {
        const Op op = static_cast<Op>(b);
        if (op_info(op).support != OpSupport::Supported || is_push(op) || is_dup(op) || is_swap(op) ||
            op == Op::POP || op == Op::PUSH0)
            continue;
        out.push_back(op);
    }
    return out;
}

Cfg random_cfg(std::mt19937_64& rng, size_t nodes, size_t vars)
{
    const auto pick = [&](size_t n) { return static_cast<size_t>(rng() % n); };
    for (;;)
    {
        Cfg cfg;
        for (size_t i = 0; i < nodes; ++i)
            cfg.intern(CfgNode{static_cast<Pc>(i), 0});
        cfg.intern(CfgNode::halt());
        const auto target = [&](size_t i) {
            // Mostly forward so that most runs terminate; halt is reachable from the last node.
            if (i + 1 == nodes || pick(8) == 0)
                return CfgNode::halt();
            if (pick(5) == 0)
                return CfgNode{static_cast<Pc>(pick(i + 1)), 0};
            return CfgNode{static_cast<Pc>(i + 1 + pick(nodes - i - 1)), 0};
        };
        for (size_t i = 0; i < nodes; ++i)
        {
            const CfgNode src{static_cast<Pc>(i), 0};
            if (pick(3) == 0)
            {
                const Var c = Var::stack(static_cast<VarId>(pick(vars)));
                const CfgNode t = target(i);
                const CfgNode e = target(i);
                const u256 k{1 + pick(3)};
                cfg.add_edge({src, t, "guard", {}, VarSet{c}, {}, [c, k](const CfgState& s) {
                                  return (s.get(c) % k).is_zero();
                              }});
                cfg.add_edge({src, e, "guard", {}, VarSet{c}, {}, [c, k](const CfgState& s) {
                                  return !(s.get(c) % k).is_zero();
                              }});
            }
            else
            {
                const Var d = Var::stack(static_cast<VarId>(pick(vars)));
                const Var x = Var::stack(static_cast<VarId>(pick(vars)));
                const Var y = Var::stack(static_cast<VarId>(pick(vars)));
                const u256 k{pick(7)};
                const size_t f = pick(3);
                VarSet use{x};
                if (f != 2)
                    use.add(y);
                cfg.add_edge({src, target(i), "assign", VarSet{d}, use,
                              [d, x, y, k, f](CfgState& s) {
                                  const u256 a = s.get(x);
                                  if (f == 0)
                                      s.set(d, a + s.get(y) + k);
                                  else if (f == 1)
                                      s.set(d, a * u256{3} - s.get(y));
                                  else
                                      s.set(d, a + k);
                              },
                              {}});
            }
        }
        // Keep graphs whose every node reaches halt.
        const FlowGraph g = flow_graph(cfg);
        std::vector<bool> reach(g.size(), false);
        bool changed = true;
        for (size_t v = 0; v < g.size(); ++v)
            reach[v] = g.exit[v];
        while (changed)
        {
            changed = false;
            for (size_t v = 0; v < g.size(); ++v)
                if (!reach[v])
                    for (const size_t w : g.succ[v])
                        if (reach[w])
                        {
                            reach[v] = true;
                            changed = true;
                            break;
                        }
        }
        if (std::all_of(reach.begin(), reach.end(), [](bool b) { return b; }))
            return cfg;
    }
}
}  // namespace depguard::gen
