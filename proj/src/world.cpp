#include "depguard/world.hpp"

#include "depguard/evm.hpp"
#include "depguard/keccak.hpp"

namespace depguard
{
namespace
{
void append_word(Bytes& buf, const u256& v)
{
    const auto b = v.be_bytes();
    buf.insert(buf.end(), b.begin(), b.end());
}

u256 request_hash(const World& w, const CallRequest& req)
{
    Bytes buf;
    append_word(buf, w.seed);
    append_word(buf, u256{static_cast<uint64_t>(req.op)});
    append_word(buf, req.actor);
    append_word(buf, req.to);
    append_word(buf, req.value);
    append_word(buf, req.storage_digest);
    buf.insert(buf.end(), req.input.begin(), req.input.end());
    return keccak256_word(buf);
}

u256 all_but_64th(const u256& g)
{
    return g - g / u256{64};
}

u256 min(const u256& a, const u256& b)
{
    return a < b ? a : b;
}
}  // namespace

u256 call_base_cost(const World& w, Op op, const u256& to, const u256& value)
{
    if (op == Op::CREATE || op == Op::CREATE2)
        return u256{kCreateGas};
    u256 cost{kCallGas};
    if (op == Op::CALL && !value.is_zero())
    {
        cost += u256{kCallValueGas};
        if (!w.exists(to_address(to)))
            cost += u256{kCallNewAccountGas};
    }
    return cost;
}

CallResult simulate_call(const World& w, const CallRequest& req)
{
    const u256 h = request_hash(w, req);
    const bool create = req.op == Op::CREATE || req.op == Op::CREATE2;
    const u256 cap = all_but_64th(req.available_gas);
    const u256 forwarded = create ? cap : min(req.gas_arg, cap);
    const bool funded = w.balance(req.actor) >= req.value;
    const bool coin = (h.low64() & 3) != 0;

    CallResult r;
    r.world = w;
    r.world.seed = keccak256_word([&] {
        Bytes b;
        append_word(b, w.seed);
        append_word(b, h);
        return b;
    }());
    r.world.returndata.clear();

    if (create)
    {
        Account& self = r.world.accounts[req.actor];
        Bytes buf;
        if (req.op == Op::CREATE)
        {
            append_word(buf, req.actor);
            append_word(buf, self.nonce);
        }
        else
        {
            buf.push_back(0xff);
            append_word(buf, req.actor);
            append_word(buf, req.to);
            append_word(buf, keccak256_word(req.input));
        }
        const u256 addr = to_address(keccak256_word(buf));
        self.nonce += u256{1};
        const bool ok = coin && funded && !w.exists(addr);
        if (!ok)
        {
            r.gas_used = forwarded;
            return r;
        }
        const u256 spent{2000 + (h >> 8).low64() % 30000};
        r.gas_used = min(forwarded, spent);
        self.balance -= req.value;
        Account& created = r.world.accounts[addr];
        created.balance = req.value;
        created.nonce = u256{1};
        const auto code = keccak256(req.input.data(), req.input.size());
        created.code.assign(code.begin(), code.end());
        r.result = addr;
        return r;
    }

    const u256 callee = to_address(req.to);
    const bool ok = forwarded > u256{kCallStipendThreshold} && coin && funded;
    if (!ok)
    {
        r.gas_used = forwarded;
        return r;
    }
    const u256 spent{kCallStipendThreshold + (h >> 8).low64() % 5000};
    r.gas_used = min(forwarded, spent);
    r.result = u256{1};

    const size_t out_words = (h >> 40).low64() % 3;
    u256 word = h;
    for (size_t i = 0; i < out_words; ++i)
    {
        const auto wb = word.be_bytes();
        word = keccak256_word(Bytes(wb.begin(), wb.end()));
        append_word(r.output, word);
    }
    r.world.returndata = r.output;

    if (req.op == Op::CALL)
    {
        if (!req.value.is_zero())
        {
            r.world.accounts[req.actor].balance -= req.value;
            r.world.accounts[callee].balance += req.value;
        }
        Account& target = r.world.accounts[callee];
        target.storage[h >> 128] = h;
    }
    return r;
}

u256 selfdestruct_cost(const World& w, const u256& beneficiary)
{
    return u256{w.exists(to_address(beneficiary)) ? kSelfdestructGas : kSelfdestructNewAccountGas};
}

World apply_selfdestruct(const World& w, const u256& actor, const u256& beneficiary)
{
    World out = w;
    const u256 to = to_address(beneficiary);
    const u256 amount = out.balance(actor);
    out.accounts.erase(actor);
    if (to != actor)
        out.accounts[to].balance += amount;
    return out;
}
}  // namespace depguard
