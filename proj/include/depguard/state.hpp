#pragma once

#include "depguard/u256.hpp"
#include "depguard/variable.hpp"

#include <map>
#include <optional>

namespace depguard
{
struct Account
{
    u256 balance;
    u256 nonce;
    Bytes code;
    std::map<u256, u256> storage;

    friend bool operator==(const Account&, const Account&) = default;
};

/// Everything outside the running contract: other accounts, the actor's balance and code,
/// the last call's return data and the seed driving the world stub.
struct World
{
    std::map<u256, Account> accounts;
    Bytes returndata;
    u256 seed;

    [[nodiscard]] bool exists(const u256& addr) const { return accounts.contains(addr); }
    [[nodiscard]] u256 balance(const u256& addr) const;
    [[nodiscard]] const Bytes& code(const u256& addr) const;

    friend bool operator==(const World&, const World&) = default;
};

/// Concrete state of the abstract CFG semantics. Word-valued variables live in `words`;
/// an absent MemD/StorD entry is None, absent MemS/StorS entries read as zero.
struct CfgState
{
    std::map<Var, u256> words;
    Bytes input;  ///< Local(input)
    Bytes code;   ///< Local(code)
    World external;
    std::optional<World> t_external;  ///< T(External)

    [[nodiscard]] u256 get(const Var& v) const;
    [[nodiscard]] std::optional<u256> get_opt(const Var& v) const;
    void set(const Var& v, const u256& value);
    void set_opt(const Var& v, const std::optional<u256>& value);
    void erase(const Var& v) { words.erase(v); }

    /// Two-layer read: D unless None, else S.
    [[nodiscard]] u256 load_mem(const u256& loc) const;
    [[nodiscard]] u256 load_stor(const u256& loc) const;

    /// Bytes [offset, offset+size) reconstructed from memory cells in ascending key order.
    [[nodiscard]] Bytes mem_bytes(const u256& offset, uint64_t size) const;

    /// Effective actor storage (non-zero entries only).
    [[nodiscard]] std::map<u256, u256> storage() const;

    /// Erases every temporal variable.
    void clear_temporals();

    friend bool operator==(const CfgState&, const CfgState&) = default;
};

/// Keccak digest over a storage map's (key, value) pairs; feeds the world stub's callback.
u256 storage_digest(const std::map<u256, u256>& storage);

/// Overlays `data` onto 32-byte words starting at `offset`, calling
/// `store(key, new_word)` for each touched word; `old(key)` supplies the previous word.
template <typename Old, typename Store>
void write_words(const u256& offset, const Bytes& data, Old old, Store store)
{
    for (size_t k = 0; k * 32 < data.size(); ++k)
    {
        const u256 key = offset + u256{32 * k};
        auto word = old(key).be_bytes();
        for (size_t b = 0; b < 32 && 32 * k + b < data.size(); ++b)
            word[b] = data[32 * k + b];
        store(key, u256::from_be(word.data(), 32));
    }
}
}  // namespace depguard
