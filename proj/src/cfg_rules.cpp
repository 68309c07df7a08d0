#include "depguard/cfg.hpp"
#include "depguard/error.hpp"
#include "depguard/evm.hpp"
#include "depguard/keccak.hpp"
#include "depguard/world.hpp"

#include <algorithm>

namespace depguard
{
namespace
{
struct Step
{
    std::string label;
    VarSet def;
    VarSet use;
    StateFn apply;
};

uint64_t window_len(const u256& size)
{
    return std::min<uint64_t>(size.clamp64(), kMaxWindowBytes);
}

/// Memory window [off, off+size). Components fixed by preprocessing are used as constants and
/// drop out of the Use set; the others are read from their stack variables.
struct Window
{
    std::optional<u256> off_c;
    std::optional<u256> size_c;
    Var off_v;
    Var size_v;

    [[nodiscard]] u256 off(const CfgState& s) const { return off_c ? *off_c : s.get(off_v); }
    [[nodiscard]] u256 size(const CfgState& s) const { return size_c ? *size_c : s.get(size_v); }

    [[nodiscard]] bool exact() const
    {
        return off_c && size_c && size_c->fits_u64() && !(*off_c + *size_c < *off_c);
    }

    [[nodiscard]] VarSet vars() const
    {
        VarSet out;
        if (!off_c)
            out.add(off_v);
        if (!size_c)
            out.add(size_v);
        return out;
    }

    /// Cells of both memory layers that a read of this window may touch.
    [[nodiscard]] VarSet cells() const
    {
        VarSet out;
        if (exact())
        {
            out.add(VarAtom::range(VarKind::MemS, *off_c, *off_c + *size_c));
            out.add(VarAtom::range(VarKind::MemD, *off_c, *off_c + *size_c));
        }
        else
        {
            out.add(VarAtom::all(VarKind::MemS));
            out.add(VarAtom::all(VarKind::MemD));
        }
        return out;
    }

    [[nodiscard]] Bytes read(const CfgState& s) const { return s.mem_bytes(off(s), window_len(size(s))); }
};

Window fixed_window(const Instruction& ins, size_t off_slot, size_t size_slot)
{
    return {ins.pre[off_slot], ins.pre[size_slot], Var::stack(ins.in_vars[off_slot]),
            Var::stack(ins.in_vars[size_slot])};
}

Window word_window(const Instruction& ins)
{
    return {ins.pre[0], u256{32}, Var::stack(ins.in_vars[0]), Var{}};
}

Window runtime_window(const Instruction& ins, size_t off_slot, size_t size_slot)
{
    return {std::nullopt, std::nullopt, Var::stack(ins.in_vars[off_slot]), Var::stack(ins.in_vars[size_slot])};
}

VarSet all_mem()
{
    return {VarAtom::all(VarKind::MemS), VarAtom::all(VarKind::MemD)};
}

VarSet all_stor()
{
    return {VarAtom::all(VarKind::StorS), VarAtom::all(VarKind::StorD)};
}

VarSet all_globals()
{
    VarSet out;
    for (unsigned g = 0; g < kGlobalCount; ++g)
        out.add(Var::global(static_cast<GlobalName>(g)));
    return out;
}

VarSet join(VarSet a, const VarSet& b)
{
    a.add(b);
    return a;
}

void erase_matching(CfgState& s, const VarSet& set)
{
    std::erase_if(s.words, [&](const auto& kv) { return set.contains(kv.first); });
    if (set.contains(Var::external().temp()))
        s.t_external.reset();
}

Bytes slice_padded(const Bytes& src, const u256& from, uint64_t len)
{
    Bytes out(len, 0);
    if (!from.fits_u64() || from.low64() >= src.size())
        return out;
    const uint64_t start = from.low64();
    const uint64_t n = std::min<uint64_t>(len, src.size() - start);
    std::copy_n(src.begin() + static_cast<std::ptrdiff_t>(start), n, out.begin());
    return out;
}

/// Everything an external call or creation computes from the pre-call state.
struct CallOutcome
{
    CallResult res;
    u256 gas_after;
    u256 msize_after;
    u256 out_off;
    uint64_t out_len = 0;  ///< bytes of output copied into memory
};

struct CallShape
{
    Op op;
    size_t value_slot = 0;  ///< SIZE_MAX when the op transfers no value
    size_t to_slot = 0;
    Window in;
    std::optional<Window> out;
};

CallShape call_shape(const Instruction& ins)
{
    switch (ins.op)
    {
    case Op::CALL:
        return {ins.op, 2, 1, fixed_window(ins, 3, 4), fixed_window(ins, 5, 6)};
    case Op::STATICCALL:
        return {ins.op, SIZE_MAX, 1, fixed_window(ins, 2, 3), fixed_window(ins, 4, 5)};
    case Op::CREATE:
        return {ins.op, 0, SIZE_MAX, fixed_window(ins, 1, 2), std::nullopt};
    default:
        return {ins.op, 0, 3, fixed_window(ins, 1, 2), std::nullopt};
    }
}

CallOutcome compute_call(const Instruction& ins, const CallShape& shape, const CfgState& s)
{
    const auto arg = [&](size_t slot) {
        return slot == SIZE_MAX ? u256{} : s.get(Var::stack(ins.in_vars[slot]));
    };
    const World& world = s.external;
    const u256 actor = s.get(Var::local(LocalName::Actor));
    const u256 value = arg(shape.value_slot);
    const u256 to = arg(shape.to_slot);

    const u256 msize = s.get(Var::msize(ins.pc));
    u256 after = memext(msize, shape.in.off(s), shape.in.size(s));
    if (shape.out)
        after = memext(after, shape.out->off(s), shape.out->size(s));
    u256 cost = call_base_cost(world, ins.op, to, value) + memcost(msize, after);
    if (ins.op == Op::CREATE2)
        cost += u256{6} * word_count(shape.in.size(s));

    CallRequest req;
    req.op = ins.op;
    req.actor = actor;
    req.gas_arg = is_call_family(ins.op) && ins.op != Op::CREATE && ins.op != Op::CREATE2 ? arg(0) : u256{};
    req.to = to;
    req.value = value;
    req.input = shape.in.read(s);
    req.available_gas = s.get(Var::gas(ins.pc)) - cost;
    req.storage_digest = storage_digest(s.storage());

    CallOutcome o;
    o.res = simulate_call(world, req);
    o.gas_after = req.available_gas - o.res.gas_used;
    o.msize_after = after;
    if (shape.out)
    {
        o.out_off = shape.out->off(s);
        o.out_len = std::min<uint64_t>(window_len(shape.out->size(s)), o.res.output.size());
    }
    return o;
}

class Builder
{
public:
    Builder(Cfg& g, const Instruction& ins)
      : g_(g), ins_(ins), pc_(ins.pc), pn_(ins.pc_next), gas_in_(Var::gas(pc_)), gas_out_(Var::gas(pn_)),
        ms_in_(Var::msize(pc_)), ms_out_(Var::msize(pn_))
    {}

    void build();

private:
    [[nodiscard]] Var x(size_t i) const { return Var::stack(ins_.in_vars[i]); }
    [[nodiscard]] Var y() const { return Var::stack(ins_.out_vars[0]); }
    [[nodiscard]] CfgNode next() const { return {pn_, 0}; }

    void chain(std::vector<Step> steps, CfgNode dst)
    {
        for (size_t i = 0; i < steps.size(); ++i)
        {
            CfgEdge e;
            e.src = {pc_, static_cast<uint16_t>(i)};
            e.dst = i + 1 < steps.size() ? CfgNode{pc_, static_cast<uint16_t>(i + 1)} : dst;
            e.label = std::move(steps[i].label);
            e.def = std::move(steps[i].def);
            e.use = std::move(steps[i].use);
            e.apply = std::move(steps[i].apply);
            g_.add_edge(std::move(e));
        }
    }

    Step gas(std::function<u256(const CfgState&)> cost, VarSet extra = {}) const
    {
        const Var in = gas_in_, out = gas_out_;
        return {"gas", {out}, join({in}, extra), [in, out, cost](CfgState& s) { s.set(out, s.get(in) - cost(s)); }};
    }

    Step static_gas_step() const
    {
        const u256 c{static_gas(ins_.op)};
        return gas([c](const CfgState&) { return c; });
    }

    /// Static cost plus memory expansion over a window.
    Step mem_gas(const Window& w, std::function<u256(const CfgState&)> extra = {}) const
    {
        const Var ms = ms_in_;
        const u256 base{static_gas(ins_.op)};
        return gas(
            [=](const CfgState& s) {
                const u256 i = s.get(ms);
                u256 c = base + memcost(i, memext(i, w.off(s), w.size(s)));
                if (extra)
                    c += extra(s);
                return c;
            },
            join({ms_in_}, w.vars()));
    }

    Step carry() const
    {
        const Var in = ms_in_, out = ms_out_;
        return {"msize", {out}, {in}, [in, out](CfgState& s) { s.set(out, s.get(in)); }};
    }

    Step msize_ext(const Window& w) const
    {
        const Var in = ms_in_, out = ms_out_;
        return {"msize", {out}, join({in}, w.vars()),
                [=](CfgState& s) { s.set(out, memext(s.get(in), w.off(s), w.size(s))); }};
    }

    Step value(VarSet use, std::function<u256(const CfgState&)> f) const
    {
        const Var out = y();
        return {"value", {out}, std::move(use), [out, f](CfgState& s) { s.set(out, f(s)); }};
    }

    /// Gas, one value edge, msize carry: the shape of most word-producing instructions.
    void simple(VarSet use, std::function<u256(const CfgState&)> f)
    {
        chain({static_gas_step(), value(std::move(use), std::move(f)), carry()}, next());
    }

    void env(const Var& v)
    {
        simple({v}, [v](const CfgState& s) { return s.get(v); });
    }

    void jumpi();
    void pure();
    void mload();
    void mstore();
    void sload();
    void sstore();
    void sha3();
    void copy(Op op);
    void log();
    void ret(CfgNode sink);
    void selfdestruct();
    void call();

    Cfg& g_;
    const Instruction& ins_;
    Pc pc_;
    Pc pn_;
    Var gas_in_;
    Var gas_out_;
    Var ms_in_;
    Var ms_out_;
};

void Builder::build()
{
    const Op op = ins_.op;
    if (op == Op::ASSIGN)
    {
        const u256 imm = ins_.imm;
        return simple({}, [imm](const CfgState&) { return imm; });
    }
    if (is_pure(op))
        return pure();
    if (is_log(op))
        return log();
    switch (op)
    {
    case Op::STOP:
        return chain({{"halt", {}, {}, [](CfgState&) {}}}, CfgNode::halt());
    case Op::INVALID:
        return chain({{"halt", {}, {}, [](CfgState&) {}}}, CfgNode::exception());
    case Op::JUMPDEST:
    case Op::JUMP:
        return chain({static_gas_step(), carry()}, next());
    case Op::JUMPI:
        return jumpi();
    case Op::ADDRESS:
        return env(Var::local(LocalName::Actor));
    case Op::CALLER:
        return env(Var::local(LocalName::Sender));
    case Op::CALLVALUE:
        return env(Var::local(LocalName::Value));
    case Op::ORIGIN:
        return env(Var::global(GlobalName::Origin));
    case Op::GASPRICE:
        return env(Var::global(GlobalName::Prize));
    case Op::COINBASE:
        return env(Var::global(GlobalName::Beneficiary));
    case Op::TIMESTAMP:
        return env(Var::global(GlobalName::Timestamp));
    case Op::NUMBER:
        return env(Var::global(GlobalName::Number));
    case Op::DIFFICULTY:
        return env(Var::global(GlobalName::Difficulty));
    case Op::GASLIMIT:
        return env(Var::global(GlobalName::Gaslimit));
    case Op::CALLDATASIZE:
        return simple({Var::local(LocalName::Input)}, [](const CfgState& s) { return u256{s.input.size()}; });
    case Op::CODESIZE:
        return simple({Var::local(LocalName::Code)}, [](const CfgState& s) { return u256{s.code.size()}; });
    case Op::CALLDATALOAD:
    {
        const Var a = x(0);
        return simple({Var::local(LocalName::Input), a}, [a](const CfgState& s) {
            const Bytes w = slice_padded(s.input, s.get(a), 32);
            return u256::from_be(w.data(), 32);
        });
    }
    case Op::BALANCE:
    {
        const Var a = x(0);
        return simple({Var::external(), a},
                      [a](const CfgState& s) { return s.external.balance(to_address(s.get(a))); });
    }
    case Op::EXTCODESIZE:
    {
        const Var a = x(0);
        return simple({Var::external(), a},
                      [a](const CfgState& s) { return u256{s.external.code(to_address(s.get(a))).size()}; });
    }
    case Op::EXTCODEHASH:
    {
        const Var a = x(0);
        return simple({Var::external(), a}, [a](const CfgState& s) {
            const u256 addr = to_address(s.get(a));
            return s.external.exists(addr) ? keccak256_word(s.external.code(addr)) : u256{};
        });
    }
    case Op::RETURNDATASIZE:
        return simple({Var::external()}, [](const CfgState& s) { return u256{s.external.returndata.size()}; });
    case Op::SELFBALANCE:
    {
        const Var actor = Var::local(LocalName::Actor);
        return simple({Var::external(), actor},
                      [actor](const CfgState& s) { return s.external.balance(s.get(actor)); });
    }
    case Op::BLOCKHASH:
    {
        const Var a = x(0);
        const Var parent = Var::global(GlobalName::Parent);
        return simple({parent, a}, [a, parent](const CfgState& s) {
            Bytes buf;
            const auto p = s.get(parent).be_bytes();
            const auto n = s.get(a).be_bytes();
            buf.insert(buf.end(), p.begin(), p.end());
            buf.insert(buf.end(), n.begin(), n.end());
            return keccak256_word(buf);
        });
    }
    case Op::PC:
    {
        const u256 here{pc_};
        return simple({}, [here](const CfgState&) { return here; });
    }
    case Op::MSIZE:
    {
        const Var ms = ms_in_;
        return simple({ms}, [ms](const CfgState& s) { return u256{32} * s.get(ms); });
    }
    case Op::GAS:
    {
        const Var g = gas_in_;
        const u256 c{static_gas(Op::GAS)};
        return simple({g}, [g, c](const CfgState& s) { return s.get(g) - c; });
    }
    case Op::MLOAD:
        return mload();
    case Op::MSTORE:
        return mstore();
    case Op::SLOAD:
        return sload();
    case Op::SSTORE:
        return sstore();
    case Op::SHA3:
        return sha3();
    case Op::CALLDATACOPY:
    case Op::CODECOPY:
    case Op::RETURNDATACOPY:
    case Op::EXTCODECOPY:
        return copy(op);
    case Op::RETURN:
        return ret(CfgNode::halt());
    case Op::REVERT:
        return ret(CfgNode::exception());
    case Op::SELFDESTRUCT:
        return selfdestruct();
    case Op::CALL:
    case Op::STATICCALL:
    case Op::CREATE:
    case Op::CREATE2:
        return call();
    default:
        throw Error(ErrorKind::UnsupportedOpcode, std::string(op_name(op)), pc_);
    }
}

void Builder::jumpi()
{
    const Pc ft = pn_;
    const Pc dest = ins_.jump_target();
    const Var g = gas_in_, gf = Var::gas(ft), gd = Var::gas(dest);
    const Var m = ms_in_, mf = Var::msize(ft), md = Var::msize(dest);
    const u256 c{static_gas(Op::JUMPI)};
    chain({{"gas", {gf, gd}, {g},
            [=](CfgState& s) {
                const u256 v = s.get(g) - c;
                s.set(gf, v);
                s.set(gd, v);
            }},
           {"msize", {mf, md}, {m},
            [=](CfgState& s) {
                const u256 v = s.get(m);
                s.set(mf, v);
                s.set(md, v);
            }}},
          {pc_, 2});
    const Var cond = x(1);
    CfgEdge fall{{pc_, 2}, {ft, 0}, "guard", {}, {cond}, {}, [cond](const CfgState& s) { return s.get(cond).is_zero(); }};
    CfgEdge taken{{pc_, 2}, {dest, 0}, "guard", {}, {cond}, {}, [cond](const CfgState& s) { return !s.get(cond).is_zero(); }};
    g_.add_edge(std::move(fall));
    g_.add_edge(std::move(taken));
}

void Builder::pure()
{
    std::vector<Var> args;
    VarSet use;
    for (size_t i = 0; i < ins_.in_vars.size(); ++i)
    {
        args.push_back(x(i));
        use.add(x(i));
    }
    const Op op = ins_.op;
    auto f = [op, args](const CfgState& s) {
        std::vector<u256> vals;
        vals.reserve(args.size());
        for (const auto& a : args)
            vals.push_back(s.get(a));
        return *eval_pure(op, vals);
    };
    if (op == Op::EXP)
    {
        const Var e = x(1);
        chain({gas([e](const CfgState& s) { return exp_gas(s.get(e)); }, {e}), value(use, f), carry()}, next());
        return;
    }
    simple(use, f);
}

void Builder::mload()
{
    const Window w = word_window(ins_);
    if (w.off_c)
    {
        const u256 v = *w.off_c;
        chain({mem_gas(w),
               value({Var::mem_s(v), Var::mem_d(v)}, [v](const CfgState& s) { return s.load_mem(v); }),
               msize_ext(w)},
              next());
        return;
    }
    const Var a = x(0);
    chain({mem_gas(w), value(join({a}, all_mem()), [a](const CfgState& s) { return s.load_mem(s.get(a)); }),
           msize_ext(w)},
          next());
}

void Builder::mstore()
{
    const Window w = word_window(ins_);
    const Var val = x(1);
    if (w.off_c)
    {
        const Var cs = Var::mem_s(*w.off_c), cd = Var::mem_d(*w.off_c);
        chain({mem_gas(w), {"mem.s", {cs}, {val}, [=](CfgState& s) { s.set(cs, s.get(val)); }},
               {"mem.d", {cd}, {}, [=](CfgState& s) { s.erase(cd); }}, msize_ext(w)},
              next());
        return;
    }
    const Var a = x(0);
    VarSet use = join({a, val}, {VarAtom::all(VarKind::MemD)});
    chain({mem_gas(w),
           {"mem.d", {VarAtom::all(VarKind::MemD)}, std::move(use),
            [=](CfgState& s) { s.set(Var::mem_d(s.get(a)), s.get(val)); }},
           msize_ext(w)},
          next());
}

void Builder::sload()
{
    if (const auto key = ins_.pre[0])
    {
        const u256 v = *key;
        simple({Var::stor_s(v), Var::stor_d(v)}, [v](const CfgState& s) { return s.load_stor(v); });
        return;
    }
    const Var a = x(0);
    simple(join({a}, all_stor()), [a](const CfgState& s) { return s.load_stor(s.get(a)); });
}

void Builder::sstore()
{
    const Var val = x(1);
    const std::optional<u256> key = ins_.pre[0];
    const Var a = x(0);
    auto cost = [=](const CfgState& s) {
        const u256 k = key ? *key : s.get(a);
        return u256{s.load_stor(k).is_zero() && !s.get(val).is_zero() ? kSstoreSetGas : kSstoreResetGas};
    };
    if (key)
    {
        const Var cs = Var::stor_s(*key), cd = Var::stor_d(*key);
        chain({gas(cost, {val, cs, cd}), {"stor.s", {cs}, {val}, [=](CfgState& s) { s.set(cs, s.get(val)); }},
               {"stor.d", {cd}, {}, [=](CfgState& s) { s.erase(cd); }}, carry()},
              next());
        return;
    }
    VarSet use = join({a, val}, {VarAtom::all(VarKind::StorD)});
    chain({gas(cost, join({a, val}, all_stor())),
           {"stor.d", {VarAtom::all(VarKind::StorD)}, std::move(use),
            [=](CfgState& s) { s.set(Var::stor_d(s.get(a)), s.get(val)); }},
           carry()},
          next());
}

void Builder::sha3()
{
    const Window w = fixed_window(ins_, 0, 1);
    const auto words = [w](const CfgState& s) { return u256{6} * word_count(w.size(s)); };
    chain({mem_gas(w, words), value(join(w.vars(), w.cells()), [w](const CfgState& s) { return keccak256_word(w.read(s)); }),
           msize_ext(w)},
          next());
}

void Builder::copy(Op op)
{
    const size_t base = op == Op::EXTCODECOPY ? 1 : 0;
    const Window w = runtime_window(ins_, base, base + 2);
    const Var src = x(base + 1);
    VarSet source;
    std::function<const Bytes&(const CfgState&)> data;
    switch (op)
    {
    case Op::CALLDATACOPY:
        source.add(Var::local(LocalName::Input));
        data = [](const CfgState& s) -> const Bytes& { return s.input; };
        break;
    case Op::CODECOPY:
        source.add(Var::local(LocalName::Code));
        data = [](const CfgState& s) -> const Bytes& { return s.code; };
        break;
    case Op::RETURNDATACOPY:
        source.add(Var::external());
        data = [](const CfgState& s) -> const Bytes& { return s.external.returndata; };
        break;
    default:
    {
        const Var addr = x(0);
        source.add(Var::external());
        source.add(addr);
        data = [addr](const CfgState& s) -> const Bytes& { return s.external.code(to_address(s.get(addr))); };
        break;
    }
    }
    const auto words = [w](const CfgState& s) { return u256{3} * word_count(w.size(s)); };
    VarSet use = join(join(join(w.vars(), source), all_mem()), {src});
    chain({mem_gas(w, words),
           {"mem.d", {VarAtom::all(VarKind::MemD)}, std::move(use),
            [=](CfgState& s) {
                const Bytes bytes = slice_padded(data(s), s.get(src), window_len(w.size(s)));
                write_words(
                    w.off(s), bytes, [&](const u256& k) { return s.load_mem(k); },
                    [&](const u256& k, const u256& v) { s.set(Var::mem_d(k), v); });
            }},
           msize_ext(w)},
          next());
}

void Builder::log()
{
    const Window w = runtime_window(ins_, 0, 1);
    const auto bytes = [w](const CfgState& s) { return u256{8} * w.size(s); };
    chain({mem_gas(w, bytes), msize_ext(w)}, next());
}

void Builder::ret(CfgNode sink)
{
    const Window w = runtime_window(ins_, 0, 1);
    chain({mem_gas(w), msize_ext(w)}, sink);
}

void Builder::selfdestruct()
{
    const Var b = x(0);
    const Var actor = Var::local(LocalName::Actor);
    const Var ext = Var::external();
    chain({gas([b](const CfgState& s) { return selfdestruct_cost(s.external, s.get(b)); }, {ext, b}),
           {"effect", {ext}, {ext, b, actor},
            [=](CfgState& s) { s.external = apply_selfdestruct(s.external, s.get(actor), s.get(b)); }}},
          CfgNode::halt());
}

void Builder::call()
{
    const CallShape shape = call_shape(ins_);
    const Instruction ins = ins_;

    VarSet u_call = {gas_in_, ms_in_, Var::external(), Var::local(LocalName::Actor)};
    u_call.add(all_globals());
    u_call.add(all_stor());
    for (size_t i = 0; i < ins.in_vars.size(); ++i)
        u_call.add(x(i));
    u_call.add(shape.in.cells());

    const Var ty = y().temp();
    const Var text = Var::external().temp();
    const Var tgas = gas_out_.temp();
    const Var tms = ms_out_.temp();
    const Var yv = y();
    const Var gas_out = gas_out_, ms_out = ms_out_;

    std::vector<Step> steps;
    steps.push_back({"call.tmp", {ty, text}, u_call, [=](CfgState& s) {
                         auto o = compute_call(ins, shape, s);
                         s.set(ty, o.res.result);
                         s.t_external = std::move(o.res.world);
                     }});
    steps.push_back({"call.gas", {tgas}, u_call, [=](CfgState& s) { s.set(tgas, compute_call(ins, shape, s).gas_after); }});
    {
        const Var ms = ms_in_;
        VarSet use = join({ms}, shape.in.vars());
        if (shape.out)
            use.add(shape.out->vars());
        steps.push_back({"call.msize", {tms}, std::move(use), [=](CfgState& s) {
                             u256 a = memext(s.get(ms), shape.in.off(s), shape.in.size(s));
                             if (shape.out)
                                 a = memext(a, shape.out->off(s), shape.out->size(s));
                             s.set(tms, a);
                         }});
    }

    VarSet temps = {ty, text, tgas, tms};
    std::vector<Step> copy_mem;
    if (shape.out)
    {
        const Window out = *shape.out;
        const bool per_cell = out.exact() && word_count(*out.size_c) <= u256{64};
        if (per_cell)
        {
            const uint64_t n = word_count(*out.size_c).low64();
            VarSet tds, cb_def, cb_use;
            for (uint64_t k = 0; k < n; ++k)
            {
                const u256 c = *out.off_c + u256{32 * k};
                const Var ts = Var::mem_s(c).temp();
                steps.push_back({"call.mem.s", {ts}, join(u_call, {Var::mem_s(c), Var::mem_d(c)}),
                                 [=](CfgState& s) {
                                     const auto o = compute_call(ins, shape, s);
                                     u256 word = s.load_mem(c);
                                     const Bytes written(o.res.output.begin(),
                                                         o.res.output.begin() + static_cast<std::ptrdiff_t>(o.out_len));
                                     write_words(
                                         o.out_off, written, [&](const u256& key) { return s.load_mem(key); },
                                         [&](const u256& key, const u256& v) {
                                             if (key == c)
                                                 word = v;
                                         });
                                     s.set(ts, word);
                                 }});
                tds.add(Var::mem_d(c).temp());
                cb_def.add(Var::mem_s(c));
                cb_def.add(Var::mem_d(c));
                cb_use.add(ts);
                cb_use.add(Var::mem_d(c).temp());
                temps.add(ts);
                temps.add(Var::mem_d(c).temp());
            }
            if (n > 0)
            {
                steps.push_back({"call.mem.d", tds, {}, [=](CfgState& s) { erase_matching(s, tds); }});
                copy_mem.push_back({"call.copy.mem", cb_def, cb_use, [=](CfgState& s) {
                                        for (const auto& a : cb_def)
                                        {
                                            const Var v = a.var();
                                            s.set_opt(v, s.get_opt(v.temp()));
                                        }
                                    }});
            }
        }
        else
        {
            const VarAtom tdall = VarAtom::all(VarKind::MemD, true);
            steps.push_back({"call.mem.d", {tdall}, join(u_call, all_mem()), [=](CfgState& s) {
                                 erase_matching(s, {tdall});
                                 const auto o = compute_call(ins, shape, s);
                                 const Bytes written(o.res.output.begin(),
                                                     o.res.output.begin() + static_cast<std::ptrdiff_t>(o.out_len));
                                 std::vector<std::pair<u256, u256>> cells;
                                 write_words(
                                     o.out_off, written, [&](const u256& key) { return s.load_mem(key); },
                                     [&](const u256& key, const u256& v) { cells.emplace_back(key, v); });
                                 for (const auto& [key, v] : cells)
                                     s.set(Var::mem_d(key).temp(), v);
                             }});
            temps.add(tdall);
            const VarAtom dall = VarAtom::all(VarKind::MemD);
            copy_mem.push_back({"call.copy.mem", {dall}, {tdall, dall}, [](CfgState& s) {
                                    std::vector<std::pair<Var, u256>> moved;
                                    for (const auto& [v, val] : s.words)
                                        if (v.kind == VarKind::MemD && v.temporal)
                                            moved.emplace_back(v.base(), val);
                                    for (const auto& [v, val] : moved)
                                        s.set(v, val);
                                }});
        }
    }

    steps.push_back({"call.copy", {yv, Var::external()}, {ty, text}, [=](CfgState& s) {
                         s.set_opt(yv, s.get_opt(ty));
                         s.external = s.t_external.value_or(World{});
                     }});
    steps.push_back({"call.copy.gas", {gas_out}, {tgas}, [=](CfgState& s) { s.set_opt(gas_out, s.get_opt(tgas)); }});
    steps.push_back({"call.copy.msize", {ms_out}, {tms}, [=](CfgState& s) { s.set_opt(ms_out, s.get_opt(tms)); }});
    for (auto& st : copy_mem)
        steps.push_back(std::move(st));
    steps.push_back({"call.clear", temps, {}, [=](CfgState& s) { erase_matching(s, temps); }});
    chain(std::move(steps), next());
}
}  // namespace

Cfg Cfg::build(Contract contract)
{
    Cfg g;
    g.contract_ = std::move(contract);
    g.intern(g.entry());
    for (const auto& [pc, ins] : g.contract_.code)
        Builder(g, ins).build();
    g.intern(CfgNode::halt());
    g.intern(CfgNode::exception());
    return g;
}
}  // namespace depguard
