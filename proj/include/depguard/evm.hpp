#pragma once

#include "depguard/opcode.hpp"
#include "depguard/u256.hpp"

#include <optional>
#include <span>

namespace depguard
{
/// Opcodes whose result is a function of their stack arguments only.
bool is_pure(Op op) noexcept;

/// Evaluates a pure opcode; args are top-of-stack first. nullopt if op is not pure.
std::optional<u256> eval_pure(Op op, std::span<const u256> args) noexcept;

/// Static part of the gas cost. Dynamic parts (memory, EXP, copies, SSTORE, calls) are
/// added by the callers that know the operands.
uint64_t static_gas(Op op) noexcept;

/// Active-word count after touching [offset, offset+size); size 0 leaves it unchanged.
u256 memext(const u256& active_words, const u256& offset, const u256& size) noexcept;

/// Quadratic memory fee for a number of active words: 3a + a^2/512.
u256 memfee(const u256& active_words) noexcept;

/// Fee for growing memory from `before` to `after` active words.
inline u256 memcost(const u256& before, const u256& after) noexcept
{
    return memfee(after) - memfee(before);
}

/// ceil(size / 32) saturating at 2^64-1.
u256 word_count(const u256& size) noexcept;

/// EXP cost: 10 + 10 * (1 + floor(log256(exponent))), or 10 for a zero exponent.
u256 exp_gas(const u256& exponent) noexcept;

constexpr uint64_t kSstoreSetGas = 20000;
constexpr uint64_t kSstoreResetGas = 5000;
constexpr uint64_t kSelfdestructGas = 5000;
constexpr uint64_t kSelfdestructNewAccountGas = 37000;
constexpr uint64_t kCallGas = 700;
constexpr uint64_t kCallValueGas = 9000;
constexpr uint64_t kCallNewAccountGas = 25000;
constexpr uint64_t kCallStipendThreshold = 2300;
constexpr uint64_t kCreateGas = 32000;
}  // namespace depguard
