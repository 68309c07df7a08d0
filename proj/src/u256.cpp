#include "depguard/u256.hpp"

#include <algorithm>

namespace depguard
{
namespace
{
using u128 = unsigned __int128;

u256 negate(const u256& a) noexcept
{
    return ~a + u256{1};
}

u256 abs_signed(const u256& a) noexcept
{
    return a.is_negative() ? negate(a) : a;
}

/// 512-bit product helper for mulmod.
struct u512
{
    std::array<uint64_t, 8> w{};
};

u512 mul_full(const u256& a, const u256& b) noexcept
{
    u512 r;
    for (size_t i = 0; i < 4; ++i)
    {
        uint64_t carry = 0;
        for (size_t j = 0; j < 4; ++j)
        {
            const u128 t = static_cast<u128>(a.w[i]) * b.w[j] + r.w[i + j] + carry;
            r.w[i + j] = static_cast<uint64_t>(t);
            carry = static_cast<uint64_t>(t >> 64);
        }
        r.w[i + 4] = carry;
    }
    return r;
}

/// Remainder of a 512-bit value by a 256-bit modulus, via bitwise long division.
u256 mod512(const u512& n, const u256& m) noexcept
{
    u256 rem;
    for (int bit = 511; bit >= 0; --bit)
    {
        const bool top = rem.is_negative();
        rem = rem << 1;
        if ((n.w[static_cast<size_t>(bit / 64)] >> (bit % 64)) & 1)
            rem.w[0] |= 1;
        if (top || rem >= m)
            rem = rem - m;
    }
    return rem;
}
}  // namespace

unsigned u256::bit_width() const noexcept
{
    for (int i = 3; i >= 0; --i)
    {
        const uint64_t v = w[static_cast<size_t>(i)];
        if (v != 0)
            return static_cast<unsigned>(i) * 64 + (64 - static_cast<unsigned>(__builtin_clzll(v)));
    }
    return 0;
}

std::string u256::hex() const
{
    static constexpr char digits[] = "0123456789abcdef";
    std::string out;
    bool started = false;
    for (int i = 3; i >= 0; --i)
    {
        for (int nib = 15; nib >= 0; --nib)
        {
            const auto d = (w[static_cast<size_t>(i)] >> (nib * 4)) & 0xf;
            if (d != 0)
                started = true;
            if (started)
                out.push_back(digits[d]);
        }
    }
    if (out.empty())
        out = "0";
    return "0x" + out;
}

std::string u256::dec() const
{
    if (is_zero())
        return "0";
    std::string out;
    u256 v = *this;
    const u256 ten{10};
    while (!v.is_zero())
    {
        const auto [q, r] = divmod(v, ten);
        out.push_back(static_cast<char>('0' + r.w[0]));
        v = q;
    }
    std::reverse(out.begin(), out.end());
    return out;
}

std::optional<u256> u256::parse(std::string_view s)
{
    if (s.empty())
        return std::nullopt;
    u256 v;
    if (s.size() > 2 && s[0] == '0' && (s[1] == 'x' || s[1] == 'X'))
    {
        s.remove_prefix(2);
        if (s.empty() || s.size() > 64)
            return std::nullopt;
        for (const char c : s)
        {
            unsigned d = 0;
            if (c >= '0' && c <= '9')
                d = static_cast<unsigned>(c - '0');
            else if (c >= 'a' && c <= 'f')
                d = static_cast<unsigned>(c - 'a' + 10);
            else if (c >= 'A' && c <= 'F')
                d = static_cast<unsigned>(c - 'A' + 10);
            else
                return std::nullopt;
            v = (v << 4) | u256{d};
        }
        return v;
    }
    const u256 ten{10};
    for (const char c : s)
    {
        if (c < '0' || c > '9')
            return std::nullopt;
        const u256 next = v * ten + u256{static_cast<uint64_t>(c - '0')};
        if (next / ten != v)
            return std::nullopt;
        v = next;
    }
    return v;
}

std::array<uint8_t, 32> u256::be_bytes() const noexcept
{
    std::array<uint8_t, 32> out{};
    for (size_t i = 0; i < 32; ++i)
        out[31 - i] = static_cast<uint8_t>(w[i / 8] >> ((i % 8) * 8));
    return out;
}

u256 u256::from_be(const uint8_t* data, size_t len) noexcept
{
    u256 v;
    len = std::min<size_t>(len, 32);
    for (size_t i = 0; i < len; ++i)
    {
        const size_t pos = len - 1 - i;  // byte significance
        v.w[pos / 8] |= static_cast<uint64_t>(data[i]) << ((pos % 8) * 8);
    }
    return v;
}

u256 operator+(const u256& a, const u256& b) noexcept
{
    u256 r;
    uint64_t carry = 0;
    for (size_t i = 0; i < 4; ++i)
    {
        const u128 t = static_cast<u128>(a.w[i]) + b.w[i] + carry;
        r.w[i] = static_cast<uint64_t>(t);
        carry = static_cast<uint64_t>(t >> 64);
    }
    return r;
}

u256 operator-(const u256& a, const u256& b) noexcept
{
    u256 r;
    uint64_t borrow = 0;
    for (size_t i = 0; i < 4; ++i)
    {
        const u128 t = static_cast<u128>(a.w[i]) - b.w[i] - borrow;
        r.w[i] = static_cast<uint64_t>(t);
        borrow = static_cast<uint64_t>(t >> 64) & 1;
    }
    return r;
}

u256 operator*(const u256& a, const u256& b) noexcept
{
    u256 r;
    for (size_t i = 0; i < 4; ++i)
    {
        uint64_t carry = 0;
        for (size_t j = 0; i + j < 4; ++j)
        {
            const u128 t = static_cast<u128>(a.w[i]) * b.w[j] + r.w[i + j] + carry;
            r.w[i + j] = static_cast<uint64_t>(t);
            carry = static_cast<uint64_t>(t >> 64);
        }
    }
    return r;
}

DivMod divmod(const u256& a, const u256& b) noexcept
{
    if (b.is_zero())
        return {};
    if (a.fits_u64() && b.fits_u64())
        return {u256{a.w[0] / b.w[0]}, u256{a.w[0] % b.w[0]}};
    if (a < b)
        return {u256{}, a};
    u256 q;
    u256 rem;
    for (int bit = static_cast<int>(a.bit_width()) - 1; bit >= 0; --bit)
    {
        const bool top = rem.is_negative();
        rem = rem << 1;
        if ((a.w[static_cast<size_t>(bit / 64)] >> (bit % 64)) & 1)
            rem.w[0] |= 1;
        if (top || rem >= b)
        {
            rem = rem - b;
            q.w[static_cast<size_t>(bit / 64)] |= 1ULL << (bit % 64);
        }
    }
    return {q, rem};
}

u256 operator/(const u256& a, const u256& b) noexcept
{
    return divmod(a, b).quot;
}

u256 operator%(const u256& a, const u256& b) noexcept
{
    return divmod(a, b).rem;
}

u256 operator&(const u256& a, const u256& b) noexcept
{
    return {a.w[3] & b.w[3], a.w[2] & b.w[2], a.w[1] & b.w[1], a.w[0] & b.w[0]};
}

u256 operator|(const u256& a, const u256& b) noexcept
{
    return {a.w[3] | b.w[3], a.w[2] | b.w[2], a.w[1] | b.w[1], a.w[0] | b.w[0]};
}

u256 operator^(const u256& a, const u256& b) noexcept
{
    return {a.w[3] ^ b.w[3], a.w[2] ^ b.w[2], a.w[1] ^ b.w[1], a.w[0] ^ b.w[0]};
}

u256 operator~(const u256& a) noexcept
{
    return {~a.w[3], ~a.w[2], ~a.w[1], ~a.w[0]};
}

u256 operator<<(const u256& a, unsigned shift) noexcept
{
    if (shift >= 256)
        return {};
    u256 r;
    const unsigned limbs = shift / 64;
    const unsigned bits = shift % 64;
    for (size_t i = 3 + 1; i-- > limbs;)
    {
        uint64_t v = a.w[i - limbs] << bits;
        if (bits != 0 && i - limbs > 0)
            v |= a.w[i - limbs - 1] >> (64 - bits);
        r.w[i] = v;
    }
    return r;
}

u256 operator>>(const u256& a, unsigned shift) noexcept
{
    if (shift >= 256)
        return {};
    u256 r;
    const unsigned limbs = shift / 64;
    const unsigned bits = shift % 64;
    for (size_t i = 0; i + limbs < 4; ++i)
    {
        uint64_t v = a.w[i + limbs] >> bits;
        if (bits != 0 && i + limbs + 1 < 4)
            v |= a.w[i + limbs + 1] << (64 - bits);
        r.w[i] = v;
    }
    return r;
}

u256 sdiv(const u256& a, const u256& b) noexcept
{
    if (b.is_zero())
        return {};
    const u256 q = abs_signed(a) / abs_signed(b);
    return a.is_negative() != b.is_negative() ? negate(q) : q;
}

u256 smod(const u256& a, const u256& b) noexcept
{
    if (b.is_zero())
        return {};
    const u256 r = abs_signed(a) % abs_signed(b);
    return a.is_negative() ? negate(r) : r;
}

u256 addmod(const u256& a, const u256& b, const u256& m) noexcept
{
    if (m.is_zero())
        return {};
    u512 n;
    const u256 s = a + b;
    for (size_t i = 0; i < 4; ++i)
        n.w[i] = s.w[i];
    if (s < a)  // carry out of 256 bits
        n.w[4] = 1;
    return mod512(n, m);
}

u256 mulmod(const u256& a, const u256& b, const u256& m) noexcept
{
    if (m.is_zero())
        return {};
    return mod512(mul_full(a, b), m);
}

u256 exp(u256 base, u256 exponent) noexcept
{
    u256 result{1};
    while (!exponent.is_zero())
    {
        if (exponent.w[0] & 1)
            result = result * base;
        base = base * base;
        exponent = exponent >> 1;
    }
    return result;
}

u256 signextend(const u256& k, const u256& x) noexcept
{
    if (!k.fits_u64() || k.w[0] >= 31)
        return x;
    const unsigned sign_bit = static_cast<unsigned>(k.w[0]) * 8 + 7;
    const u256 mask = (u256{1} << sign_bit) - u256{1};
    const bool neg = !((x >> sign_bit) & u256{1}).is_zero();
    return neg ? (x | ~mask) : (x & mask);
}

u256 byte_at(const u256& i, const u256& x) noexcept
{
    if (!i.fits_u64() || i.w[0] >= 32)
        return {};
    const unsigned shift = static_cast<unsigned>(31 - i.w[0]) * 8;
    return (x >> shift) & u256{0xff};
}

u256 shl(const u256& shift, const u256& x) noexcept
{
    return shift.fits_u64() && shift.w[0] < 256 ? x << static_cast<unsigned>(shift.w[0]) : u256{};
}

u256 shr(const u256& shift, const u256& x) noexcept
{
    return shift.fits_u64() && shift.w[0] < 256 ? x >> static_cast<unsigned>(shift.w[0]) : u256{};
}

u256 sar(const u256& shift, const u256& x) noexcept
{
    const bool neg = x.is_negative();
    if (!shift.fits_u64() || shift.w[0] >= 256)
        return neg ? u256::max() : u256{};
    const auto s = static_cast<unsigned>(shift.w[0]);
    u256 r = x >> s;
    if (neg && s > 0)
        r = r | ~(u256::max() >> s);
    return r;
}

bool slt(const u256& a, const u256& b) noexcept
{
    if (a.is_negative() != b.is_negative())
        return a.is_negative();
    return a < b;
}

bool sgt(const u256& a, const u256& b) noexcept
{
    return slt(b, a);
}

unsigned byte_length(const u256& x) noexcept
{
    return (x.bit_width() + 7) / 8;
}

u256 to_address(const u256& x) noexcept
{
    return {0, x.w[2] & 0xffffffffULL, x.w[1], x.w[0]};
}

size_t U256Hash::operator()(const u256& v) const noexcept
{
    size_t h = 0x9e3779b97f4a7c15ULL;
    for (const auto limb : v.w)
        h ^= std::hash<uint64_t>{}(limb) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    return h;
}
}  // namespace depguard
