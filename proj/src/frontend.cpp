#include "depguard/frontend.hpp"

#include "depguard/error.hpp"
#include "depguard/evm.hpp"
#include "depguard/keccak.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <fstream>
#include <sstream>
#include <unordered_map>

namespace depguard
{
Pc Instruction::jump_target() const
{
    if (pre.empty() || !pre[0] || !pre[0]->fits_u64() || pre[0]->low64() >= kExitPc)
        throw Error(ErrorKind::DynamicJump, "jump destination is not a constant", pc);
    return static_cast<Pc>(pre[0]->low64());
}

const Instruction& Contract::at(Pc pc) const
{
    const auto it = code.find(pc);
    if (it == code.end())
        throw Error(ErrorKind::Parse, "no instruction at pc " + std::to_string(pc), pc);
    return it->second;
}

std::vector<Pc> Contract::successors(Pc pc) const
{
    const auto& ins = at(pc);
    std::vector<Pc> out;
    if (is_halting(ins.op))
        return out;
    if (ins.pc_next != kExitPc)
        out.push_back(ins.pc_next);
    if (ins.op == Op::JUMPI)
    {
        const Pc t = ins.jump_target();
        if (std::find(out.begin(), out.end(), t) == out.end())
            out.push_back(t);
    }
    return out;
}

VarId Contract::var_count() const
{
    VarId n = 0;
    for (const auto& [pc, ins] : code)
    {
        for (const auto v : ins.out_vars)
            n = std::max(n, v + 1);
        for (const auto v : ins.in_vars)
            n = std::max(n, v + 1);
    }
    return n;
}

Bytes parse_hex(std::string_view text)
{
    std::string digits;
    digits.reserve(text.size());
    for (size_t i = 0; i < text.size(); ++i)
    {
        const char c = text[i];
        if (std::isspace(static_cast<unsigned char>(c)))
            continue;
        if (c == '0' && i + 1 < text.size() && (text[i + 1] == 'x' || text[i + 1] == 'X') &&
            digits.empty())
        {
            ++i;
            continue;
        }
        if (!std::isxdigit(static_cast<unsigned char>(c)))
            throw Error(ErrorKind::Parse, std::string("invalid hex character '") + c + "'");
        digits.push_back(c);
    }
    if (digits.empty())
        throw Error(ErrorKind::Parse, "empty bytecode");
    if (digits.size() % 2 != 0)
        throw Error(ErrorKind::Parse, "odd number of hex digits");
    Bytes out(digits.size() / 2);
    for (size_t i = 0; i < out.size(); ++i)
        out[i] = static_cast<uint8_t>(std::stoi(digits.substr(2 * i, 2), nullptr, 16));
    return out;
}

std::string to_hex(const Bytes& bytes)
{
    static constexpr char d[] = "0123456789abcdef";
    std::string out;
    out.reserve(bytes.size() * 2);
    for (const auto b : bytes)
    {
        out.push_back(d[b >> 4]);
        out.push_back(d[b & 0xf]);
    }
    return out;
}

std::vector<RawInstruction> decode(const Bytes& bytes, std::vector<std::string>* warnings)
{
    std::vector<RawInstruction> out;
    for (size_t pc = 0; pc < bytes.size();)
    {
        RawInstruction ri;
        ri.pc = static_cast<Pc>(pc);
        ri.opcode = bytes[pc];
        const auto& info = op_info(ri.opcode);
        if (info.support == OpSupport::Unknown && warnings)
            warnings->push_back("unknown opcode 0x" + to_hex({ri.opcode}) + " at pc " +
                                std::to_string(pc) + " decoded as INVALID");
        const size_t width = info.immediate;
        if (width > 0)
        {
            const size_t avail = std::min(width, bytes.size() - pc - 1);
            ri.immediate.assign(bytes.begin() + static_cast<std::ptrdiff_t>(pc + 1),
                bytes.begin() + static_cast<std::ptrdiff_t>(pc + 1 + avail));
            if (avail < width)
            {
                ri.immediate.resize(width, 0);
                if (warnings)
                    warnings->push_back("truncated PUSH immediate at pc " + std::to_string(pc));
            }
        }
        out.push_back(std::move(ri));
        pc += 1 + width;
    }
    return out;
}

Bytes encode(const std::vector<RawInstruction>& instrs)
{
    Bytes out;
    for (const auto& ri : instrs)
    {
        out.push_back(ri.opcode);
        out.insert(out.end(), ri.immediate.begin(), ri.immediate.end());
    }
    return out;
}

namespace
{
constexpr size_t kMaxStack = 1024;

struct Slot
{
    VarId id;
    std::optional<u256> value;  ///< push-derived constant, used to resolve jumps

    friend bool operator==(const Slot& a, const Slot& b) { return a.id == b.id; }
};

using AbstractStack = std::vector<Slot>;  // back() is the top

class Linearizer
{
public:
    Linearizer(const std::vector<RawInstruction>& raw, const Bytes& bytecode) : raw_(raw)
    {
        for (size_t i = 0; i < raw.size(); ++i)
            index_.emplace(raw[i].pc, i);
        c_.bytecode = bytecode;
        end_pc_ = raw.empty() ? 0 : raw.back().pc + 1 + static_cast<Pc>(raw.back().immediate.size());
    }

    Contract run()
    {
        work_.push_back({0, {}});
        while (!work_.empty())
        {
            auto [pc, stack] = std::move(work_.front());
            work_.pop_front();
            walk(pc, std::move(stack));
        }
        c_.entry = 0;
        return std::move(c_);
    }

private:
    struct Pending
    {
        Pc pc;
        AbstractStack stack;
    };

    /// Registers the stack at a block entry; returns false if already visited.
    bool enter(Pc pc, const AbstractStack& stack)
    {
        const auto it = seen_.find(pc);
        if (it == seen_.end())
        {
            seen_.emplace(pc, stack);
            return true;
        }
        if (it->second != stack)
        {
            throw Error(ErrorKind::StackHeightMismatch,
                "stack shapes differ at join (" + std::to_string(it->second.size()) + " vs " +
                    std::to_string(stack.size()) + " slots)",
                pc);
        }
        return false;
    }

    void link(Instruction* prev, Pc pc)
    {
        if (prev)
            prev->pc_next = pc;
    }

    Instruction& emit(Pc pc, Op op, const std::vector<VarId>& in, size_t pushes)
    {
        Instruction ins;
        ins.pc = pc;
        ins.op = op;
        ins.in_vars = in;
        ins.pre.assign(in.size(), std::nullopt);
        for (size_t i = 0; i < pushes; ++i)
            ins.out_vars.push_back(next_id_++);
        auto [it, inserted] = c_.code.emplace(pc, std::move(ins));
        return it->second;
    }

    void synth_stop(Instruction* prev)
    {
        link(prev, end_pc_);
        if (!c_.code.contains(end_pc_))
        {
            Instruction ins;
            ins.pc = end_pc_;
            ins.op = Op::STOP;
            c_.code.emplace(end_pc_, std::move(ins));
        }
    }

    Pc checked_target(const Slot& s, Pc pc)
    {
        if (!s.value || !s.value->fits_u64() || s.value->low64() >= end_pc_)
            throw Error(ErrorKind::DynamicJump, "destination not a resolvable constant", pc);
        const auto t = static_cast<Pc>(s.value->low64());
        const auto it = index_.find(t);
        if (it == index_.end() || raw_[it->second].opcode != static_cast<uint8_t>(Op::JUMPDEST))
            throw Error(ErrorKind::DynamicJump, "destination " + std::to_string(t) + " is not a JUMPDEST",
                pc);
        return t;
    }

    void walk(Pc pc, AbstractStack stack)
    {
        Instruction* prev = nullptr;
        for (;;)
        {
            const auto idx = index_.find(pc);
            if (idx == index_.end())
            {
                synth_stop(prev);
                return;
            }
            if (!enter(pc, stack))
            {
                link(prev, pc);
                return;
            }
            const auto& ri = raw_[idx->second];
            const Op op = static_cast<Op>(ri.opcode);
            const auto& info = op_info(op);
            const Pc fall = pc + 1 + static_cast<Pc>(ri.immediate.size());

            if (info.support == OpSupport::Unsupported)
                throw Error(ErrorKind::UnsupportedOpcode, std::string(info.name), pc);

            const bool underflow = info.support == OpSupport::Supported && stack.size() < info.pops;
            if (info.support == OpSupport::Unknown || underflow)
            {
                if (underflow)
                    c_.warnings.push_back("stack underflow at pc " + std::to_string(pc) + " (" +
                                          std::string(info.name) + ") treated as INVALID");
                link(prev, pc);
                emit(pc, Op::INVALID, {}, 0);
                return;
            }

            auto pop_ids = [&](size_t n) {
                std::vector<VarId> ids;
                for (size_t i = 0; i < n; ++i)
                {
                    ids.push_back(stack.back().id);
                    stack.pop_back();
                }
                return ids;
            };

            if (is_dup(op))
            {
                const size_t n = static_cast<size_t>(op) - static_cast<size_t>(Op::DUP1) + 1;
                stack.push_back(stack[stack.size() - n]);
            }
            else if (is_swap(op))
            {
                const size_t n = static_cast<size_t>(op) - static_cast<size_t>(Op::SWAP1) + 1;
                std::swap(stack.back(), stack[stack.size() - 1 - n]);
            }
            else if (op == Op::POP)
            {
                stack.pop_back();
            }
            else if (is_push(op) || op == Op::PUSH0)
            {
                link(prev, pc);
                auto& ins = emit(pc, Op::ASSIGN, {}, 1);
                ins.imm = u256::from_be(ri.immediate.data(), ri.immediate.size());
                stack.push_back({ins.out_vars[0], ins.imm});
                prev = &ins;
            }
            else
            {
                // Constants needed for jump targets are resolved before popping.
                std::vector<Slot> args(stack.rbegin(), stack.rbegin() + info.pops);
                link(prev, pc);
                auto in = pop_ids(info.pops);
                auto& ins = emit(pc, op, in, info.pushes);
                std::optional<u256> folded;
                if (is_pure(op))
                {
                    std::vector<u256> vals;
                    for (const auto& a : args)
                        if (a.value)
                            vals.push_back(*a.value);
                    if (vals.size() == args.size())
                        folded = eval_pure(op, vals);
                }
                for (const auto v : ins.out_vars)
                    stack.push_back({v, folded});
                prev = &ins;

                if (op == Op::JUMP)
                {
                    const Pc t = checked_target(args[0], pc);
                    ins.pre[0] = u256{t};
                    ins.pc_next = t;
                    work_.push_back({t, stack});
                    return;
                }
                if (op == Op::JUMPI)
                {
                    const Pc t = checked_target(args[0], pc);
                    ins.pre[0] = u256{t};
                    work_.push_back({t, stack});
                }
                if (is_halting(op))
                {
                    ins.pc_next = kExitPc;
                    return;
                }
            }
            if (stack.size() > kMaxStack)
                throw Error(ErrorKind::UnboundedStack, "abstract stack exceeds 1024 slots", pc);
            pc = fall;
        }
    }

    const std::vector<RawInstruction>& raw_;
    std::unordered_map<Pc, size_t> index_;
    std::unordered_map<Pc, AbstractStack> seen_;
    std::deque<Pending> work_;
    Contract c_;
    VarId next_id_ = 0;
    Pc end_pc_ = 0;
};
}  // namespace

Contract linearize(const std::vector<RawInstruction>& raw, const Bytes& bytecode)
{
    Contract c = Linearizer(raw, bytecode).run();
    c.source_hash = keccak256_word(bytecode).hex();
    return c;
}

Contract load_bytecode(const Bytes& bytes)
{
    std::vector<std::string> warnings;
    const auto raw = decode(bytes, &warnings);
    Contract c = linearize(raw, bytes);
    c.warnings.insert(c.warnings.begin(), warnings.begin(), warnings.end());
    return preprocess(std::move(c));
}

Contract load_contract_text(std::string_view text)
{
    const bool is_asm = text.find(':') != std::string_view::npos;
    if (!is_asm)
        return load_bytecode(parse_hex(text));
    Contract c = parse_asm(text);
    c.source_hash = keccak256_word(Bytes(text.begin(), text.end())).hex();
    return preprocess(std::move(c));
}

Contract load_contract_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error(ErrorKind::Parse, "cannot read " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return load_contract_text(ss.str());
}
}  // namespace depguard
