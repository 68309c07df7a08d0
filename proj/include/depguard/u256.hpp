#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace depguard
{
using Bytes = std::vector<uint8_t>;

/// 256-bit unsigned integer with wrapping arithmetic (EVM word).
/// Limbs are little-endian: w[0] holds the least significant 64 bits.
struct u256
{
    std::array<uint64_t, 4> w{};

    constexpr u256() noexcept = default;
    constexpr u256(uint64_t v) noexcept : w{v, 0, 0, 0} {}  // NOLINT(implicit)
    constexpr u256(uint64_t w3, uint64_t w2, uint64_t w1, uint64_t w0) noexcept
      : w{w0, w1, w2, w3}
    {}

    static constexpr u256 max() noexcept { return {~0ULL, ~0ULL, ~0ULL, ~0ULL}; }

    [[nodiscard]] constexpr bool is_zero() const noexcept
    {
        return (w[0] | w[1] | w[2] | w[3]) == 0;
    }
    [[nodiscard]] constexpr bool fits_u64() const noexcept { return (w[1] | w[2] | w[3]) == 0; }
    [[nodiscard]] constexpr bool is_negative() const noexcept { return (w[3] >> 63) != 0; }
    [[nodiscard]] constexpr uint64_t low64() const noexcept { return w[0]; }

    /// Value clamped to uint64 (saturating), for sizes and offsets.
    [[nodiscard]] constexpr uint64_t clamp64() const noexcept { return fits_u64() ? w[0] : ~0ULL; }

    /// Number of significant bits.
    [[nodiscard]] unsigned bit_width() const noexcept;

    explicit constexpr operator bool() const noexcept { return !is_zero(); }

    friend constexpr bool operator==(const u256&, const u256&) noexcept = default;
    friend constexpr std::strong_ordering operator<=>(const u256& a, const u256& b) noexcept
    {
        for (int i = 3; i >= 0; --i)
            if (a.w[static_cast<size_t>(i)] != b.w[static_cast<size_t>(i)])
                return a.w[static_cast<size_t>(i)] <=> b.w[static_cast<size_t>(i)];
        return std::strong_ordering::equal;
    }

    /// Lowercase hex with 0x prefix and no leading zeros ("0x0" for zero).
    [[nodiscard]] std::string hex() const;
    /// Decimal rendering.
    [[nodiscard]] std::string dec() const;

    /// Parses "0x..." hex or plain decimal. Returns nullopt on malformed input or overflow.
    static std::optional<u256> parse(std::string_view s);

    /// Big-endian 32-byte encoding.
    [[nodiscard]] std::array<uint8_t, 32> be_bytes() const noexcept;
    /// Interprets up to 32 bytes as a big-endian number.
    static u256 from_be(const uint8_t* data, size_t len) noexcept;
};

u256 operator+(const u256& a, const u256& b) noexcept;
u256 operator-(const u256& a, const u256& b) noexcept;
u256 operator*(const u256& a, const u256& b) noexcept;
/// Unsigned division; division by zero yields zero (EVM convention).
u256 operator/(const u256& a, const u256& b) noexcept;
u256 operator%(const u256& a, const u256& b) noexcept;
u256 operator&(const u256& a, const u256& b) noexcept;
u256 operator|(const u256& a, const u256& b) noexcept;
u256 operator^(const u256& a, const u256& b) noexcept;
u256 operator~(const u256& a) noexcept;
u256 operator<<(const u256& a, unsigned shift) noexcept;
u256 operator>>(const u256& a, unsigned shift) noexcept;

inline u256& operator+=(u256& a, const u256& b) noexcept { return a = a + b; }
inline u256& operator-=(u256& a, const u256& b) noexcept { return a = a - b; }

struct DivMod
{
    u256 quot;
    u256 rem;
};
DivMod divmod(const u256& a, const u256& b) noexcept;

u256 sdiv(const u256& a, const u256& b) noexcept;
u256 smod(const u256& a, const u256& b) noexcept;
u256 addmod(const u256& a, const u256& b, const u256& m) noexcept;
u256 mulmod(const u256& a, const u256& b, const u256& m) noexcept;
u256 exp(u256 base, u256 exponent) noexcept;
u256 signextend(const u256& k, const u256& x) noexcept;
/// BYTE(i, x): i-th byte of x counting from the most significant end.
u256 byte_at(const u256& i, const u256& x) noexcept;
u256 shl(const u256& shift, const u256& x) noexcept;
u256 shr(const u256& shift, const u256& x) noexcept;
u256 sar(const u256& shift, const u256& x) noexcept;
bool slt(const u256& a, const u256& b) noexcept;
bool sgt(const u256& a, const u256& b) noexcept;

/// Number of bytes needed to represent x (0 for zero).
unsigned byte_length(const u256& x) noexcept;

/// Address truncation (mod 2^160).
u256 to_address(const u256& x) noexcept;

struct U256Hash
{
    size_t operator()(const u256& v) const noexcept;
};
}  // namespace depguard
