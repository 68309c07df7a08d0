#include "depguard/keccak.hpp"

#include <cstring>

namespace depguard
{
namespace
{
constexpr uint64_t round_constants[24] = {
    0x0000000000000001ULL, 0x0000000000008082ULL, 0x800000000000808aULL, 0x8000000080008000ULL,
    0x000000000000808bULL, 0x0000000080000001ULL, 0x8000000080008081ULL, 0x8000000000008009ULL,
    0x000000000000008aULL, 0x0000000000000088ULL, 0x0000000080008009ULL, 0x000000008000000aULL,
    0x000000008000808bULL, 0x800000000000008bULL, 0x8000000000008089ULL, 0x8000000000008003ULL,
    0x8000000000008002ULL, 0x8000000000000080ULL, 0x000000000000800aULL, 0x800000008000000aULL,
    0x8000000080008081ULL, 0x8000000000008080ULL, 0x0000000080000001ULL, 0x8000000080008008ULL};

constexpr unsigned rotations[25] = {
    0, 1, 62, 28, 27, 36, 44, 6, 55, 20, 3, 10, 43, 25, 39, 41, 45, 15, 21, 8, 18, 2, 61, 56, 14};

inline uint64_t rotl(uint64_t x, unsigned n) noexcept
{
    return n == 0 ? x : (x << n) | (x >> (64 - n));
}

void keccak_f1600(uint64_t st[25]) noexcept
{
    for (const auto rc : round_constants)
    {
        uint64_t c[5];
        for (int x = 0; x < 5; ++x)
            c[x] = st[x] ^ st[x + 5] ^ st[x + 10] ^ st[x + 15] ^ st[x + 20];
        for (int x = 0; x < 5; ++x)
        {
            const uint64_t d = c[(x + 4) % 5] ^ rotl(c[(x + 1) % 5], 1);
            for (int y = 0; y < 25; y += 5)
                st[y + x] ^= d;
        }
        uint64_t b[25];
        for (int x = 0; x < 5; ++x)
            for (int y = 0; y < 5; ++y)
                b[y + 5 * ((2 * x + 3 * y) % 5)] = rotl(st[x + 5 * y], rotations[x + 5 * y]);
        for (int y = 0; y < 25; y += 5)
            for (int x = 0; x < 5; ++x)
                st[y + x] = b[y + x] ^ (~b[y + (x + 1) % 5] & b[y + (x + 2) % 5]);
        st[0] ^= rc;
    }
}
}  // namespace

std::array<uint8_t, 32> keccak256(const uint8_t* data, size_t len) noexcept
{
    constexpr size_t rate = 136;
    uint64_t st[25] = {};
    auto absorb = [&](const uint8_t* block) {
        for (size_t i = 0; i < rate / 8; ++i)
        {
            uint64_t lane = 0;
            for (size_t b = 0; b < 8; ++b)
                lane |= static_cast<uint64_t>(block[i * 8 + b]) << (8 * b);
            st[i] ^= lane;
        }
        keccak_f1600(st);
    };
    while (len >= rate)
    {
        absorb(data);
        data += rate;
        len -= rate;
    }
    uint8_t last[rate] = {};
    if (len != 0)
        std::memcpy(last, data, len);
    last[len] ^= 0x01;
    last[rate - 1] ^= 0x80;
    absorb(last);

    std::array<uint8_t, 32> out{};
    for (size_t i = 0; i < 32; ++i)
        out[i] = static_cast<uint8_t>(st[i / 8] >> (8 * (i % 8)));
    return out;
}
}  // namespace depguard
