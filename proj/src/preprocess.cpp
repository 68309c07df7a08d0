#include "depguard/evm.hpp"
#include "depguard/frontend.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <unordered_map>

namespace depguard
{
std::vector<size_t> pre_slots(Op op)
{
    switch (op)
    {
    case Op::MLOAD:
    case Op::MSTORE:
    case Op::SLOAD:
    case Op::SSTORE:
    case Op::JUMP:
    case Op::JUMPI:
        return {0};
    case Op::SHA3:
        return {0, 1};
    case Op::CALL:
        return {3, 4, 5, 6};
    case Op::STATICCALL:
        return {2, 3, 4, 5};
    case Op::CREATE:
    case Op::CREATE2:
        return {1, 2};
    default:
        return {};
    }
}

namespace
{
/// Word-level knowledge about memory at a program point.
struct MemFacts
{
    std::map<u256, u256> known;  ///< exact 32-byte words at constant offsets
    /// Byte ranges [lo,hi) written with possibly unknown data; only meaningful while `zero`.
    std::vector<std::pair<u256, u256>> written;
    /// Every byte outside `written` still holds its initial zero.
    bool zero = true;

    friend bool operator==(const MemFacts&, const MemFacts&) = default;

    static MemFacts top() { return MemFacts{{}, {}, false}; }

    void clobber_all()
    {
        known.clear();
        written.clear();
        zero = false;
    }

    void clobber(const u256& lo, const u256& hi)
    {
        if (hi <= lo)
            return;
        for (auto it = known.begin(); it != known.end();)
        {
            const u256 end = it->first + u256{32};
            if (it->first < hi && lo < end)
                it = known.erase(it);
            else
                ++it;
        }
        if (zero)
            written.emplace_back(lo, hi);
    }

    [[nodiscard]] std::optional<u256> read(const u256& c) const
    {
        if (const auto it = known.find(c); it != known.end())
            return it->second;
        if (!zero)
            return std::nullopt;
        const u256 end = c + u256{32};
        if (end < c)
            return std::nullopt;
        for (const auto& [lo, hi] : written)
            if (lo < end && c < hi)
                return std::nullopt;
        return u256{};
    }

    static MemFacts meet(const MemFacts& a, const MemFacts& b)
    {
        MemFacts r;
        for (const auto& [k, v] : a.known)
            if (const auto it = b.known.find(k); it != b.known.end() && it->second == v)
                r.known.emplace(k, v);
        r.zero = a.zero && b.zero;
        if (r.zero)
        {
            r.written = a.written;
            for (const auto& w : b.written)
                if (std::find(r.written.begin(), r.written.end(), w) == r.written.end())
                    r.written.push_back(w);
        }
        return r;
    }
};

/// Lattice value for an SSA variable: unvisited (optimistic), constant, or varying.
struct VarVal
{
    enum Kind : uint8_t
    {
        Unvisited,
        Const,
        Varying
    } kind = Unvisited;
    u256 value;
};

class ConstProp
{
public:
    explicit ConstProp(const Contract& c) : c_(c) {}

    void run()
    {
        for (const auto& [pc, ins] : c_.code)
            for (const auto v : ins.in_vars)
                users_[v].push_back(pc);
        in_[c_.entry] = MemFacts{};
        enqueue(c_.entry);
        while (!work_.empty())
        {
            const Pc pc = work_.front();
            work_.pop_front();
            queued_.erase(pc);
            const auto out = transfer(c_.at(pc), in_.at(pc));
            for (const Pc s : c_.successors(pc))
            {
                if (!c_.code.contains(s))
                    continue;
                auto it = in_.find(s);
                bool changed = false;
                if (it == in_.end())
                {
                    in_.emplace(s, out);
                    changed = true;
                }
                else
                {
                    MemFacts m = MemFacts::meet(it->second, out);
                    if (!(m == it->second))
                    {
                        // Widen after two refinements of the same join.
                        if (++visits_[s] > 2)
                            m = MemFacts::top();
                        changed = !(m == it->second);
                        it->second = std::move(m);
                    }
                }
                if (changed)
                    enqueue(s);
            }
        }
    }

    [[nodiscard]] std::optional<u256> value(VarId v) const
    {
        const auto it = vars_.find(v);
        if (it == vars_.end() || it->second.kind != VarVal::Const)
            return std::nullopt;
        return it->second.value;
    }

private:
    void define(VarId v, std::optional<u256> value)
    {
        auto& slot = vars_[v];
        VarVal next = slot;
        if (!value)
            next.kind = VarVal::Varying;
        else if (slot.kind == VarVal::Unvisited)
            next = {VarVal::Const, *value};
        else if (slot.kind == VarVal::Const && slot.value != *value)
            next.kind = VarVal::Varying;
        if (next.kind != slot.kind || next.value != slot.value)
        {
            slot = next;
            // Users that already ran saw the old value.
            for (const Pc u : users_[v])
                if (in_.contains(u))
                    enqueue(u);
        }
    }

    /// Value of an input: nullopt if varying or not yet known.
    [[nodiscard]] std::optional<u256> arg(const Instruction& ins, size_t i) const
    {
        return value(ins.in_vars[i]);
    }

    MemFacts transfer(const Instruction& ins, MemFacts m)
    {
        const Op op = ins.op;
        if (op == Op::ASSIGN)
        {
            define(ins.out_vars[0], ins.imm);
            return m;
        }
        if (is_pure(op))
        {
            std::vector<u256> vals;
            for (size_t i = 0; i < ins.in_vars.size(); ++i)
            {
                const auto v = arg(ins, i);
                if (!v)
                    break;
                vals.push_back(*v);
            }
            define(ins.out_vars[0],
                vals.size() == ins.in_vars.size() ? eval_pure(op, vals) : std::nullopt);
            return m;
        }
        switch (op)
        {
        case Op::PC:
            define(ins.out_vars[0], u256{ins.pc});
            return m;
        case Op::MLOAD:
        {
            const auto a = arg(ins, 0);
            define(ins.out_vars[0], a ? m.read(*a) : std::nullopt);
            return m;
        }
        case Op::MSTORE:
        {
            const auto a = arg(ins, 0);
            if (!a || *a + u256{32} < *a)
            {
                m.clobber_all();
                return m;
            }
            m.clobber(*a, *a + u256{32});
            if (const auto v = arg(ins, 1))
                m.known[*a] = *v;
            return m;
        }
        case Op::CALLDATACOPY:
        case Op::CODECOPY:
        case Op::RETURNDATACOPY:
        case Op::EXTCODECOPY:
        {
            const size_t base = op == Op::EXTCODECOPY ? 1 : 0;
            window_write(m, arg(ins, base), arg(ins, base + 2));
            break;
        }
        case Op::CALL:
            window_write(m, arg(ins, 5), arg(ins, 6));
            break;
        case Op::STATICCALL:
            window_write(m, arg(ins, 4), arg(ins, 5));
            break;
        default:
            break;
        }
        for (const auto v : ins.out_vars)
            define(v, std::nullopt);
        return m;
    }

    static void window_write(MemFacts& m, std::optional<u256> off, std::optional<u256> size)
    {
        if (size && size->is_zero())
            return;
        if (!off || !size || *off + *size < *off)
        {
            m.clobber_all();
            return;
        }
        m.clobber(*off, *off + *size);
    }

    void enqueue(Pc pc)
    {
        if (queued_.insert(pc).second)
            work_.push_back(pc);
    }

    const Contract& c_;
    std::deque<Pc> work_;
    std::set<Pc> queued_;
    std::unordered_map<VarId, std::vector<Pc>> users_;
    std::unordered_map<Pc, MemFacts> in_;
    std::unordered_map<Pc, unsigned> visits_;
    std::unordered_map<VarId, VarVal> vars_;
};
}  // namespace

Contract preprocess(Contract c)
{
    ConstProp cp(c);
    cp.run();
    for (auto& [pc, ins] : c.code)
    {
        const auto jump = (ins.op == Op::JUMP || ins.op == Op::JUMPI) ? ins.pre[0] : std::nullopt;
        ins.pre.assign(ins.in_vars.size(), std::nullopt);
        for (const size_t i : pre_slots(ins.op))
            if (i < ins.in_vars.size())
                ins.pre[i] = cp.value(ins.in_vars[i]);
        // Jump targets were resolved structurally by linearization and stay authoritative.
        if (jump)
            ins.pre[0] = jump;
    }
    return c;
}
}  // namespace depguard
