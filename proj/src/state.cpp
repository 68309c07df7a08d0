#include "depguard/state.hpp"

#include "depguard/keccak.hpp"

#include <algorithm>

namespace depguard
{
u256 World::balance(const u256& addr) const
{
    const auto it = accounts.find(addr);
    return it == accounts.end() ? u256{} : it->second.balance;
}

const Bytes& World::code(const u256& addr) const
{
    static const Bytes empty;
    const auto it = accounts.find(addr);
    return it == accounts.end() ? empty : it->second.code;
}

u256 CfgState::get(const Var& v) const
{
    const auto it = words.find(v);
    return it == words.end() ? u256{} : it->second;
}

std::optional<u256> CfgState::get_opt(const Var& v) const
{
    const auto it = words.find(v);
    if (it == words.end())
        return std::nullopt;
    return it->second;
}

void CfgState::set(const Var& v, const u256& value)
{
    words[v] = value;
}

void CfgState::set_opt(const Var& v, const std::optional<u256>& value)
{
    if (value)
        words[v] = *value;
    else
        words.erase(v);
}

u256 CfgState::load_mem(const u256& loc) const
{
    if (const auto d = get_opt(Var::mem_d(loc)))
        return *d;
    return get(Var::mem_s(loc));
}

u256 CfgState::load_stor(const u256& loc) const
{
    if (const auto d = get_opt(Var::stor_d(loc)))
        return *d;
    return get(Var::stor_s(loc));
}

Bytes CfgState::mem_bytes(const u256& offset, uint64_t size) const
{
    Bytes out(size, 0);
    if (size == 0)
        return out;
    const u256 lo = offset < u256{31} ? u256{} : offset - u256{31};
    const u256 hi = offset + u256{size};
    std::vector<u256> keys;
    for (const auto kind : {VarKind::MemS, VarKind::MemD})
    {
        auto it = words.lower_bound(Var{kind, false, lo});
        for (; it != words.end() && it->first.kind == kind && !it->first.temporal && it->first.key < hi; ++it)
            keys.push_back(it->first.key);
    }
    std::sort(keys.begin(), keys.end());
    keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
    for (const auto& key : keys)
    {
        const auto word = load_mem(key).be_bytes();
        for (size_t b = 0; b < 32; ++b)
        {
            const u256 pos = key + u256{b};
            if (pos >= offset && pos < hi)
                out[(pos - offset).low64()] = word[b];
        }
    }
    return out;
}

std::map<u256, u256> CfgState::storage() const
{
    std::map<u256, u256> out;
    for (const auto kind : {VarKind::StorS, VarKind::StorD})
    {
        auto it = words.lower_bound(Var{kind, false, u256{}});
        for (; it != words.end() && it->first.kind == kind && !it->first.temporal; ++it)
        {
            const u256 v = load_stor(it->first.key);
            if (!v.is_zero())
                out[it->first.key] = v;
        }
    }
    return out;
}

void CfgState::clear_temporals()
{
    std::erase_if(words, [](const auto& kv) { return kv.first.temporal; });
    t_external.reset();
}

u256 storage_digest(const std::map<u256, u256>& storage)
{
    Bytes buf;
    buf.reserve(storage.size() * 64);
    for (const auto& [k, v] : storage)
    {
        if (v.is_zero())
            continue;
        const auto kb = k.be_bytes();
        const auto vb = v.be_bytes();
        buf.insert(buf.end(), kb.begin(), kb.end());
        buf.insert(buf.end(), vb.begin(), vb.end());
    }
    return keccak256_word(buf);
}
}  // namespace depguard
