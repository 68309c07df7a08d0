#pragma once

#include "depguard/u256.hpp"

#include <cstddef>
#include <cstdint>

namespace depguard
{
/// Keccak-256 (original padding, as used by the EVM SHA3 opcode).
std::array<uint8_t, 32> keccak256(const uint8_t* data, size_t len) noexcept;

inline u256 keccak256_word(const Bytes& data) noexcept
{
    const auto h = keccak256(data.data(), data.size());
    return u256::from_be(h.data(), h.size());
}
}  // namespace depguard
