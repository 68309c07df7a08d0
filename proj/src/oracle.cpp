#include "depguard/oracle.hpp"

#include "depguard/error.hpp"
#include "depguard/evm.hpp"
#include "depguard/keccak.hpp"
#include "depguard/world.hpp"

#include <algorithm>

namespace depguard
{
namespace
{
// Memory beyond this many words is treated as unaffordable; its fee alone exceeds 2^40 gas.
constexpr uint64_t kMaxMemWords = 1u << 22;

struct OutOfGas
{
};
struct BadJump
{
};

u256 words_for(const u256& bytes)
{
    return (bytes + u256{31}) / u256{32};
}

u256 fee(const u256& words)
{
    return u256{3} * words + words * words / u256{512};
}

class Machine
{
public:
    Machine(const Contract& c, const TxEnv& env, ExecState& s) : c_(c), env_(env), s_(s) {}

    StepResult exec(const Instruction& ins, Bytes* output);

private:
    u256 arg(const Instruction& ins, size_t i) const
    {
        const auto it = s_.vars.find(ins.in_vars[i]);
        return it == s_.vars.end() ? u256{} : it->second;
    }
    void put(const Instruction& ins, const u256& v) { s_.vars[ins.out_vars[0]] = v; }

    void charge(const u256& cost)
    {
        if (s_.gas < cost)
            throw OutOfGas{};
        s_.gas -= cost;
    }

    /// Word count after touching [off, off+size); throws OutOfGas for unaddressable windows.
    u256 grown(const u256& words, const u256& off, const u256& size) const
    {
        if (size.is_zero())
            return words;
        const u256 end = off + size;
        if (end < off || !end.fits_u64() || words_for(end) > u256{kMaxMemWords})
            throw OutOfGas{};
        const u256 need = words_for(end);
        return need > words ? need : words;
    }

    u256 expansion_fee(const u256& after) const { return fee(after) - fee(s_.msize); }

    void expand(const u256& words)
    {
        s_.msize = words;
        s_.memory.resize(32 * words.low64(), 0);
    }

    Bytes read(const u256& off, const u256& size) const
    {
        if (size.is_zero())
            return {};
        const auto begin = s_.memory.begin() + static_cast<std::ptrdiff_t>(off.low64());
        return Bytes(begin, begin + static_cast<std::ptrdiff_t>(size.low64()));
    }

    void write(const u256& off, const Bytes& data)
    {
        std::copy(data.begin(), data.end(), s_.memory.begin() + static_cast<std::ptrdiff_t>(off.low64()));
    }

    static Bytes padded(const Bytes& src, const u256& from, uint64_t len)
    {
        Bytes out(len, 0);
        if (!from.fits_u64() || from.low64() >= src.size())
            return out;
        const uint64_t n = std::min<uint64_t>(len, src.size() - from.low64());
        std::copy_n(src.begin() + static_cast<std::ptrdiff_t>(from.low64()), n, out.begin());
        return out;
    }

    /// Static cost plus expansion over one window, then grows memory.
    void mem_op(Op op, const u256& off, const u256& size, const u256& extra = {})
    {
        const u256 after = grown(s_.msize, off, size);
        charge(u256{static_gas(op)} + expansion_fee(after) + extra);
        expand(after);
    }

    u256 sload(const u256& k) const
    {
        const auto it = s_.storage.find(k);
        return it == s_.storage.end() ? u256{} : it->second;
    }

    u256 env_word(Op op) const;
    void call(const Instruction& ins);
    Pc jump_dest(const u256& dest) const;

    const Contract& c_;
    const TxEnv& env_;
    ExecState& s_;
};

u256 Machine::env_word(Op op) const
{
    switch (op)
    {
    case Op::ADDRESS:
        return s_.actor;
    case Op::CALLER:
        return s_.sender;
    case Op::CALLVALUE:
        return s_.value;
    case Op::ORIGIN:
        return env_.origin;
    case Op::GASPRICE:
        return env_.gasprice;
    case Op::COINBASE:
        return env_.beneficiary;
    case Op::TIMESTAMP:
        return env_.timestamp;
    case Op::NUMBER:
        return env_.number;
    case Op::DIFFICULTY:
        return env_.difficulty;
    default:
        return env_.gaslimit;
    }
}

Pc Machine::jump_dest(const u256& dest) const
{
    if (!dest.fits_u64() || dest.low64() > UINT32_MAX)
        throw BadJump{};
    const auto it = c_.code.find(static_cast<Pc>(dest.low64()));
    if (it == c_.code.end() || it->second.op != Op::JUMPDEST)
        throw BadJump{};
    return it->first;
}

void Machine::call(const Instruction& ins)
{
    const Op op = ins.op;
    u256 gas_arg, to, value, in_off, in_size, out_off, out_size;
    bool has_out = true;
    switch (op)
    {
    case Op::CALL:
        gas_arg = arg(ins, 0), to = arg(ins, 1), value = arg(ins, 2);
        in_off = arg(ins, 3), in_size = arg(ins, 4), out_off = arg(ins, 5), out_size = arg(ins, 6);
        break;
    case Op::STATICCALL:
        gas_arg = arg(ins, 0), to = arg(ins, 1);
        in_off = arg(ins, 2), in_size = arg(ins, 3), out_off = arg(ins, 4), out_size = arg(ins, 5);
        break;
    case Op::CREATE:
        value = arg(ins, 0), in_off = arg(ins, 1), in_size = arg(ins, 2);
        has_out = false;
        break;
    default:
        value = arg(ins, 0), in_off = arg(ins, 1), in_size = arg(ins, 2), to = arg(ins, 3);
        has_out = false;
        break;
    }

    u256 after = grown(s_.msize, in_off, in_size);
    if (has_out)
        after = grown(after, out_off, out_size);
    u256 cost = call_base_cost(s_.world, op, to, value) + expansion_fee(after);
    if (op == Op::CREATE2)
        cost += u256{6} * words_for(in_size);
    charge(cost);
    expand(after);

    CallRequest req;
    req.op = op;
    req.actor = s_.actor;
    req.gas_arg = gas_arg;
    req.to = to;
    req.value = value;
    req.input = read(in_off, in_size);
    req.available_gas = s_.gas;
    req.storage_digest = storage_digest(s_.storage);

    CallResult res = simulate_call(s_.world, req);
    s_.gas -= res.gas_used;
    s_.world = std::move(res.world);
    put(ins, res.result);
    if (has_out && !out_size.is_zero())
    {
        const size_t n = std::min<size_t>(res.output.size(), out_size.low64());
        write(out_off, Bytes(res.output.begin(), res.output.begin() + static_cast<std::ptrdiff_t>(n)));
    }
}

StepResult Machine::exec(const Instruction& ins, Bytes* output)
{
    const Op op = ins.op;
    Pc next = ins.pc_next;
    const StepResult running{};

    if (op == Op::ASSIGN)
    {
        charge(u256{static_gas(op)});
        put(ins, ins.imm);
    }
    else if (is_pure(op))
    {
        std::vector<u256> args;
        for (size_t i = 0; i < ins.in_vars.size(); ++i)
            args.push_back(arg(ins, i));
        charge(op == Op::EXP ? exp_gas(args[1]) : u256{static_gas(op)});
        put(ins, *eval_pure(op, args));
    }
    else if (is_log(op))
    {
        const u256 size = arg(ins, 1);
        mem_op(op, arg(ins, 0), size, u256{8} * size);
    }
    else
    {
        switch (op)
        {
        case Op::STOP:
            return {FinalKind::Halt, ExceptionCause::None};
        case Op::INVALID:
            return {FinalKind::Exception, ExceptionCause::Invalid};
        case Op::JUMPDEST:
            charge(u256{static_gas(op)});
            break;
        case Op::JUMP:
            charge(u256{static_gas(op)});
            next = jump_dest(arg(ins, 0));
            break;
        case Op::JUMPI:
            charge(u256{static_gas(op)});
            if (!arg(ins, 1).is_zero())
                next = jump_dest(arg(ins, 0));
            break;
        case Op::ADDRESS:
        case Op::CALLER:
        case Op::CALLVALUE:
        case Op::ORIGIN:
        case Op::GASPRICE:
        case Op::COINBASE:
        case Op::TIMESTAMP:
        case Op::NUMBER:
        case Op::DIFFICULTY:
        case Op::GASLIMIT:
            charge(u256{static_gas(op)});
            put(ins, env_word(op));
            break;
        case Op::CALLDATASIZE:
            charge(u256{static_gas(op)});
            put(ins, u256{s_.input.size()});
            break;
        case Op::CODESIZE:
            charge(u256{static_gas(op)});
            put(ins, u256{s_.code.size()});
            break;
        case Op::CALLDATALOAD:
        {
            charge(u256{static_gas(op)});
            const Bytes w = padded(s_.input, arg(ins, 0), 32);
            put(ins, u256::from_be(w.data(), 32));
            break;
        }
        case Op::BALANCE:
            charge(u256{static_gas(op)});
            put(ins, s_.world.balance(to_address(arg(ins, 0))));
            break;
        case Op::EXTCODESIZE:
            charge(u256{static_gas(op)});
            put(ins, u256{s_.world.code(to_address(arg(ins, 0))).size()});
            break;
        case Op::EXTCODEHASH:
        {
            charge(u256{static_gas(op)});
            const u256 a = to_address(arg(ins, 0));
            put(ins, s_.world.exists(a) ? keccak256_word(s_.world.code(a)) : u256{});
            break;
        }
        case Op::RETURNDATASIZE:
            charge(u256{static_gas(op)});
            put(ins, u256{s_.world.returndata.size()});
            break;
        case Op::SELFBALANCE:
            charge(u256{static_gas(op)});
            put(ins, s_.world.balance(s_.actor));
            break;
        case Op::BLOCKHASH:
        {
            charge(u256{static_gas(op)});
            Bytes buf;
            for (const u256& w : {env_.parent, arg(ins, 0)})
            {
                const auto b = w.be_bytes();
                buf.insert(buf.end(), b.begin(), b.end());
            }
            put(ins, keccak256_word(buf));
            break;
        }
        case Op::PC:
            charge(u256{static_gas(op)});
            put(ins, u256{ins.pc});
            break;
        case Op::MSIZE:
            charge(u256{static_gas(op)});
            put(ins, u256{32} * s_.msize);
            break;
        case Op::GAS:
            charge(u256{static_gas(op)});
            put(ins, s_.gas);
            break;
        case Op::MLOAD:
        {
            const u256 off = arg(ins, 0);
            mem_op(op, off, u256{32});
            const Bytes w = read(off, u256{32});
            put(ins, u256::from_be(w.data(), 32));
            break;
        }
        case Op::MSTORE:
        {
            const u256 off = arg(ins, 0);
            mem_op(op, off, u256{32});
            const auto b = arg(ins, 1).be_bytes();
            write(off, Bytes(b.begin(), b.end()));
            break;
        }
        case Op::SLOAD:
            charge(u256{static_gas(op)});
            put(ins, sload(arg(ins, 0)));
            break;
        case Op::SSTORE:
        {
            const u256 k = arg(ins, 0), v = arg(ins, 1);
            charge(u256{sload(k).is_zero() && !v.is_zero() ? kSstoreSetGas : kSstoreResetGas});
            if (v.is_zero())
                s_.storage.erase(k);
            else
                s_.storage[k] = v;
            break;
        }
        case Op::SHA3:
        {
            const u256 off = arg(ins, 0), size = arg(ins, 1);
            mem_op(op, off, size, u256{6} * words_for(size));
            put(ins, keccak256_word(read(off, size)));
            break;
        }
        case Op::CALLDATACOPY:
        case Op::CODECOPY:
        case Op::RETURNDATACOPY:
        case Op::EXTCODECOPY:
        {
            const size_t b = op == Op::EXTCODECOPY ? 1 : 0;
            const u256 off = arg(ins, b), src = arg(ins, b + 1), size = arg(ins, b + 2);
            mem_op(op, off, size, u256{3} * words_for(size));
            const Bytes& data = op == Op::CALLDATACOPY     ? s_.input
                                : op == Op::CODECOPY       ? s_.code
                                : op == Op::RETURNDATACOPY ? s_.world.returndata
                                                           : s_.world.code(to_address(arg(ins, 0)));
            write(off, padded(data, src, size.low64()));
            break;
        }
        case Op::RETURN:
        case Op::REVERT:
        {
            const u256 off = arg(ins, 0), size = arg(ins, 1);
            mem_op(op, off, size);
            if (output)
                *output = read(off, size);
            if (op == Op::RETURN)
                return {FinalKind::Halt, ExceptionCause::None};
            return {FinalKind::Exception, ExceptionCause::Revert};
        }
        case Op::SELFDESTRUCT:
        {
            const u256 b = arg(ins, 0);
            charge(selfdestruct_cost(s_.world, b));
            s_.world = apply_selfdestruct(s_.world, s_.actor, b);
            return {FinalKind::Halt, ExceptionCause::None};
        }
        case Op::CALL:
        case Op::STATICCALL:
        case Op::CREATE:
        case Op::CREATE2:
            call(ins);
            break;
        default:
            throw Error(ErrorKind::UnsupportedOpcode, std::string(op_name(op)), ins.pc);
        }
    }
    s_.pc = next;
    return running;
}
}  // namespace

const char* to_string(FinalKind k) noexcept
{
    switch (k)
    {
    case FinalKind::Running:
        return "running";
    case FinalKind::Halt:
        return "halt";
    case FinalKind::Exception:
        return "exception";
    case FinalKind::FuelExhausted:
        return "fuel-exhausted";
    }
    return "?";
}

const char* to_string(ExceptionCause c) noexcept
{
    switch (c)
    {
    case ExceptionCause::None:
        return "none";
    case ExceptionCause::Invalid:
        return "invalid";
    case ExceptionCause::Revert:
        return "revert";
    case ExceptionCause::OutOfGas:
        return "out-of-gas";
    case ExceptionCause::BadJump:
        return "bad-jump";
    }
    return "?";
}

namespace
{
StepResult step_impl(const Contract& c, const TxEnv& env, ExecState& s, Trace* trace, Bytes* output)
{
    const auto it = c.code.find(s.pc);
    if (it == c.code.end())
        return {FinalKind::Exception, ExceptionCause::BadJump};
    const Instruction& ins = it->second;
    if (trace)
    {
        TraceEntry e{ins.pc, ins.op, {}};
        for (const VarId v : ins.in_vars)
        {
            const auto vi = s.vars.find(v);
            e.args.push_back(vi == s.vars.end() ? u256{} : vi->second);
        }
        trace->push_back(std::move(e));
    }
    try
    {
        return Machine(c, env, s).exec(ins, output);
    }
    catch (const OutOfGas&)
    {
        return {FinalKind::Exception, ExceptionCause::OutOfGas};
    }
    catch (const BadJump&)
    {
        return {FinalKind::Exception, ExceptionCause::BadJump};
    }
}
}  // namespace

StepResult step(const Contract& c, const TxEnv& env, ExecState& s, Trace* trace)
{
    return step_impl(c, env, s, trace, nullptr);
}

RunResult run(const Contract& c, const TxEnv& env, ExecState s0, uint64_t fuel)
{
    RunResult r;
    r.state = std::move(s0);
    while (true)
    {
        if (r.steps >= fuel)
        {
            r.kind = FinalKind::FuelExhausted;
            return r;
        }
        const StepResult st = step_impl(c, env, r.state, &r.trace, &r.output);
        ++r.steps;
        if (st.kind != FinalKind::Running)
        {
            r.kind = st.kind;
            r.cause = st.cause;
            return r;
        }
    }
}

Trace project_trace(const Trace& t, const OpSet& f)
{
    Trace out;
    std::copy_if(t.begin(), t.end(), std::back_inserter(out), [&](const TraceEntry& e) { return f.contains(e.op); });
    return out;
}

CfgState to_cfg(const ExecState& s, const TxEnv& env)
{
    CfgState st;
    for (const auto& [id, v] : s.vars)
        st.set(Var::stack(id), v);
    for (size_t k = 0; k * 32 < s.memory.size(); ++k)
    {
        const u256 w = u256::from_be(s.memory.data() + 32 * k, 32);
        if (!w.is_zero())
            st.set(Var::mem_s(u256{32 * k}), w);
    }
    for (const auto& [k, v] : s.storage)
        if (!v.is_zero())
            st.set(Var::stor_s(k), v);
    st.set(Var::gas(s.pc), s.gas);
    st.set(Var::msize(s.pc), s.msize);
    st.set(Var::local(LocalName::Actor), s.actor);
    st.set(Var::local(LocalName::Sender), s.sender);
    st.set(Var::local(LocalName::Value), s.value);
    st.input = s.input;
    st.code = s.code;
    const std::pair<GlobalName, u256> globals[] = {
        {GlobalName::Origin, env.origin},         {GlobalName::Prize, env.gasprice},
        {GlobalName::Parent, env.parent},         {GlobalName::Beneficiary, env.beneficiary},
        {GlobalName::Difficulty, env.difficulty}, {GlobalName::Number, env.number},
        {GlobalName::Gaslimit, env.gaslimit},     {GlobalName::Timestamp, env.timestamp},
    };
    for (const auto& [g, v] : globals)
        st.set(Var::global(g), v);
    st.external = s.world;
    return st;
}

std::pair<ExecState, TxEnv> to_evm(const CfgState& st, Pc pc)
{
    ExecState s;
    s.pc = pc;
    s.gas = st.get(Var::gas(pc));
    s.msize = st.get(Var::msize(pc));
    s.memory = st.mem_bytes(u256{}, 32 * s.msize.clamp64());
    for (const auto& [v, val] : st.words)
        if (v.kind == VarKind::Stack && !v.temporal)
            s.vars[v.stack_id()] = val;
    s.storage = st.storage();
    s.actor = st.get(Var::local(LocalName::Actor));
    s.sender = st.get(Var::local(LocalName::Sender));
    s.value = st.get(Var::local(LocalName::Value));
    s.input = st.input;
    s.code = st.code;
    s.world = st.external;

    TxEnv env;
    env.origin = st.get(Var::global(GlobalName::Origin));
    env.gasprice = st.get(Var::global(GlobalName::Prize));
    env.parent = st.get(Var::global(GlobalName::Parent));
    env.beneficiary = st.get(Var::global(GlobalName::Beneficiary));
    env.difficulty = st.get(Var::global(GlobalName::Difficulty));
    env.number = st.get(Var::global(GlobalName::Number));
    env.gaslimit = st.get(Var::global(GlobalName::Gaslimit));
    env.timestamp = st.get(Var::global(GlobalName::Timestamp));
    return {std::move(s), env};
}

namespace
{
/// lcm(1..40): divisible by every small modulus a contract is likely to test against.
const u256 kRound = *u256::parse("5342931457063200");
}  // namespace

u256 Sampler::word()
{
    std::array<uint8_t, 32> b{};
    switch (rng_() % 4)
    {
    case 0:
        return u256{rng_() % 257};
    case 1:
        return kRound * u256{1 + rng_() % 1000};
    case 2:
        return u256{rng_() % 2'000'000'000};
    default:
        for (auto& x : b)
            x = static_cast<uint8_t>(rng_());
        return u256::from_be(b.data(), 32);
    }
}

u256 Sampler::address()
{
    std::array<uint8_t, 20> b{};
    for (auto& x : b)
        x = static_cast<uint8_t>(rng_());
    return u256::from_be(b.data(), 20);
}

TxEnv Sampler::env()
{
    TxEnv e;
    e.origin = address();
    e.gasprice = u256{1 + rng_() % 100'000'000'000ULL};
    e.parent = word();
    e.beneficiary = address();
    e.difficulty = word();
    e.number = u256{rng_() % 20'000'000};
    e.gaslimit = u256{8'000'000 + rng_() % 4'000'000};
    e.timestamp = word();
    return e;
}

ExecState Sampler::state(const Contract& c)
{
    ExecState s;
    s.pc = c.entry;
    s.gas = u256{200'000 + rng_() % 3'000'000};
    s.actor = address();
    s.sender = rng_() % 4 == 0 ? address() : u256{1 + rng_() % 8};
    s.value = rng_() % 2 == 0 ? u256{} : u256{rng_() % 1'000'000};
    s.input.resize(rng_() % 100);
    for (auto& x : s.input)
        x = static_cast<uint8_t>(rng_() % 3 == 0 ? 0 : rng_());
    s.code = c.bytecode;
    for (int i = rng_() % 5; i > 0; --i)
        s.storage[u256{rng_() % 8}] = word();
    std::erase_if(s.storage, [](const auto& kv) { return kv.second.is_zero(); });

    s.world.seed = word();
    Account& self = s.world.accounts[s.actor];
    self.balance = u256{rng_() % 10'000'000};
    self.code = s.code;
    for (int i = rng_() % 4; i > 0; --i)
    {
        Account& a = s.world.accounts[rng_() % 2 == 0 ? address() : u256{1 + rng_() % 8}];
        a.balance = u256{rng_() % 10'000'000};
        a.nonce = u256{rng_() % 3};
        a.code.resize(rng_() % 40);
        for (auto& x : a.code)
            x = static_cast<uint8_t>(rng_());
    }
    return s;
}

u256 Sampler::mutate_word(const u256& v)
{
    switch (rng_() % 3)
    {
    case 0:
        return v + u256{1};
    case 1:
        return v - u256{1};
    default:
    {
        u256 w = word();
        return w == v ? w + u256{1} : w;
    }
    }
}

std::pair<TxEnv, ExecState> Sampler::mutate(const TxEnv& env, const ExecState& s, const std::vector<Component>& z)
{
    TxEnv e = env;
    ExecState t = s;
    for (const auto& comp : z)
    {
        switch (comp.kind)
        {
        case Component::Kind::Global:
            switch (static_cast<GlobalName>(comp.index.low64()))
            {
            case GlobalName::Parent:
                e.parent = mutate_word(e.parent);
                break;
            case GlobalName::Beneficiary:
                e.beneficiary = to_address(mutate_word(e.beneficiary));
                break;
            case GlobalName::Difficulty:
                e.difficulty = mutate_word(e.difficulty);
                break;
            case GlobalName::Number:
                e.number = mutate_word(e.number);
                break;
            case GlobalName::Gaslimit:
                e.gaslimit = mutate_word(e.gaslimit);
                break;
            case GlobalName::Timestamp:
                e.timestamp = mutate_word(e.timestamp);
                break;
            case GlobalName::Origin:
                e.origin = to_address(mutate_word(e.origin));
                break;
            case GlobalName::Prize:
                e.gasprice = mutate_word(e.gasprice);
                break;
            }
            break;
        case Component::Kind::Local:
            switch (static_cast<LocalName>(comp.index.low64()))
            {
            case LocalName::Actor:
                t.actor = to_address(mutate_word(t.actor));
                break;
            case LocalName::Sender:
                t.sender = to_address(mutate_word(t.sender));
                break;
            case LocalName::Value:
                t.value = mutate_word(t.value);
                break;
            case LocalName::Input:
                if (t.input.empty() || rng_() % 2 == 0)
                    t.input.push_back(static_cast<uint8_t>(rng_()));
                else
                    t.input[rng_() % t.input.size()] ^= static_cast<uint8_t>(1 + rng_() % 255);
                break;
            case LocalName::Code:
                t.code.push_back(static_cast<uint8_t>(rng_()));
                break;
            }
            break;
        case Component::Kind::Stack:
            t.vars[static_cast<VarId>(comp.index.low64())] = mutate_word(t.vars[static_cast<VarId>(comp.index.low64())]);
            break;
        case Component::Kind::Storage:
        {
            const u256 v = mutate_word(t.storage[comp.index]);
            if (v.is_zero())
                t.storage.erase(comp.index);
            else
                t.storage[comp.index] = v;
            break;
        }
        case Component::Kind::Memory:
        case Component::Kind::Other:
            // Initial memory is empty and other accounts are shared through the world seed;
            // varying them needs a richer initial configuration than the sampler builds.
            break;
        }
    }
    return {e, t};
}

DiffReport differential_test(const Contract& c, const std::vector<Component>& z, const OpSet& f, size_t trials,
                             uint64_t seed, uint64_t fuel)
{
    DiffReport rep;
    Sampler smp(seed);
    for (size_t i = 0; i < trials; ++i)
    {
        ++rep.trials;
        const TxEnv env = smp.env();
        const ExecState s0 = smp.state(c);
        auto [env_b, s0_b] = smp.mutate(env, s0, z);
        const RunResult a = run(c, env, s0, fuel);
        const RunResult b = run(c, env_b, s0_b, fuel);
        const auto unusable = [](const RunResult& r) {
            return r.kind == FinalKind::FuelExhausted || r.cause == ExceptionCause::OutOfGas;
        };
        if (unusable(a) || unusable(b))
        {
            ++rep.discarded;
            continue;
        }
        ++rep.compared;
        Trace ta = project_trace(a.trace, f), tb = project_trace(b.trace, f);
        if (ta != tb)
            rep.counterexamples.push_back({env, env_b, s0, s0_b, std::move(ta), std::move(tb)});
    }
    return rep;
}
}  // namespace depguard
