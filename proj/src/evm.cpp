#include "depguard/evm.hpp"

namespace depguard
{
bool is_pure(Op op) noexcept
{
    switch (op)
    {
    case Op::ADD:
    case Op::MUL:
    case Op::SUB:
    case Op::DIV:
    case Op::SDIV:
    case Op::MOD:
    case Op::SMOD:
    case Op::ADDMOD:
    case Op::MULMOD:
    case Op::EXP:
    case Op::SIGNEXTEND:
    case Op::LT:
    case Op::GT:
    case Op::SLT:
    case Op::SGT:
    case Op::EQ:
    case Op::ISZERO:
    case Op::AND:
    case Op::OR:
    case Op::XOR:
    case Op::NOT:
    case Op::BYTE:
    case Op::SHL:
    case Op::SHR:
    case Op::SAR:
        return true;
    default:
        return false;
    }
}

std::optional<u256> eval_pure(Op op, std::span<const u256> a) noexcept
{
    auto b2 = [](bool v) { return v ? u256{1} : u256{}; };
    switch (op)
    {
    case Op::ADD:
        return a[0] + a[1];
    case Op::MUL:
        return a[0] * a[1];
    case Op::SUB:
        return a[0] - a[1];
    case Op::DIV:
        return a[0] / a[1];
    case Op::SDIV:
        return sdiv(a[0], a[1]);
    case Op::MOD:
        return a[0] % a[1];
    case Op::SMOD:
        return smod(a[0], a[1]);
    case Op::ADDMOD:
        return addmod(a[0], a[1], a[2]);
    case Op::MULMOD:
        return mulmod(a[0], a[1], a[2]);
    case Op::EXP:
        return exp(a[0], a[1]);
    case Op::SIGNEXTEND:
        return signextend(a[0], a[1]);
    case Op::LT:
        return b2(a[0] < a[1]);
    case Op::GT:
        return b2(a[0] > a[1]);
    case Op::SLT:
        return b2(slt(a[0], a[1]));
    case Op::SGT:
        return b2(sgt(a[0], a[1]));
    case Op::EQ:
        return b2(a[0] == a[1]);
    case Op::ISZERO:
        return b2(a[0].is_zero());
    case Op::AND:
        return a[0] & a[1];
    case Op::OR:
        return a[0] | a[1];
    case Op::XOR:
        return a[0] ^ a[1];
    case Op::NOT:
        return ~a[0];
    case Op::BYTE:
        return byte_at(a[0], a[1]);
    case Op::SHL:
        return shl(a[0], a[1]);
    case Op::SHR:
        return shr(a[0], a[1]);
    case Op::SAR:
        return sar(a[0], a[1]);
    default:
        return std::nullopt;
    }
}

uint64_t static_gas(Op op) noexcept
{
    switch (op)
    {
    case Op::STOP:
    case Op::RETURN:
    case Op::REVERT:
    case Op::INVALID:
        return 0;
    case Op::ADD:
    case Op::SUB:
    case Op::LT:
    case Op::GT:
    case Op::SLT:
    case Op::SGT:
    case Op::EQ:
    case Op::ISZERO:
    case Op::AND:
    case Op::OR:
    case Op::XOR:
    case Op::NOT:
    case Op::BYTE:
    case Op::SHL:
    case Op::SHR:
    case Op::SAR:
    case Op::CALLDATALOAD:
    case Op::MLOAD:
    case Op::MSTORE:
    case Op::ASSIGN:
        return 3;
    case Op::MUL:
    case Op::DIV:
    case Op::SDIV:
    case Op::MOD:
    case Op::SMOD:
    case Op::SIGNEXTEND:
    case Op::SELFBALANCE:
        return 5;
    case Op::ADDMOD:
    case Op::MULMOD:
    case Op::JUMP:
        return 8;
    case Op::JUMPI:
    case Op::EXP:
        return 10;
    case Op::SHA3:
        return 30;
    case Op::ADDRESS:
    case Op::ORIGIN:
    case Op::CALLER:
    case Op::CALLVALUE:
    case Op::CALLDATASIZE:
    case Op::CODESIZE:
    case Op::GASPRICE:
    case Op::RETURNDATASIZE:
    case Op::COINBASE:
    case Op::TIMESTAMP:
    case Op::NUMBER:
    case Op::DIFFICULTY:
    case Op::GASLIMIT:
    case Op::POP:
    case Op::PC:
    case Op::MSIZE:
    case Op::GAS:
        return 2;
    case Op::CALLDATACOPY:
    case Op::CODECOPY:
    case Op::RETURNDATACOPY:
        return 3;
    case Op::BALANCE:
    case Op::EXTCODEHASH:
        return 400;
    case Op::EXTCODESIZE:
    case Op::EXTCODECOPY:
        return 700;
    case Op::BLOCKHASH:
        return 20;
    case Op::SLOAD:
        return 200;
    case Op::JUMPDEST:
        return 1;
    case Op::LOG0:
    case Op::LOG1:
    case Op::LOG2:
    case Op::LOG3:
    case Op::LOG4:
        return 375 + 375 * (static_cast<uint64_t>(op) - static_cast<uint64_t>(Op::LOG0));
    case Op::CREATE:
    case Op::CREATE2:
        return kCreateGas;
    case Op::CALL:
    case Op::STATICCALL:
        return kCallGas;
    default:
        return 0;
    }
}

u256 word_count(const u256& size) noexcept
{
    if (!size.fits_u64() || size.low64() > (~0ULL - 31))
        return u256{~0ULL / 32 + 1};
    return u256{(size.low64() + 31) / 32};
}

u256 memext(const u256& active_words, const u256& offset, const u256& size) noexcept
{
    if (size.is_zero())
        return active_words;
    const u256 end = offset + size;
    // Overflowing windows saturate; such accesses run out of gas in the oracle anyway.
    const u256 words = end < offset ? u256::max() / u256{32} : word_count(end) ;
    return words > active_words ? words : active_words;
}

u256 memfee(const u256& a) noexcept
{
    return u256{3} * a + (a * a) / u256{512};
}

u256 exp_gas(const u256& exponent) noexcept
{
    if (exponent.is_zero())
        return u256{10};
    return u256{10 + 10 * static_cast<uint64_t>(byte_length(exponent))};
}
}  // namespace depguard
