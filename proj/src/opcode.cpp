#include "depguard/error.hpp"
#include "depguard/opcode.hpp"

#include <array>
#include <string>
#include <unordered_map>

namespace depguard
{
const char* to_string(ErrorKind kind) noexcept
{
    switch (kind)
    {
    case ErrorKind::Parse:
        return "ParseError";
    case ErrorKind::StackHeightMismatch:
        return "StackHeightMismatch";
    case ErrorKind::UnboundedStack:
        return "UnboundedStack";
    case ErrorKind::DynamicJump:
        return "DynamicJump";
    case ErrorKind::UnsupportedOpcode:
        return "UnsupportedOpcode";
    case ErrorKind::Stuck:
        return "Stuck";
    case ErrorKind::BudgetExceeded:
        return "BudgetExceeded";
    case ErrorKind::Timeout:
        return "Timeout";
    case ErrorKind::FuelExhausted:
        return "FuelExhausted";
    }
    return "Error";
}

Error::Error(ErrorKind kind, std::string message, std::optional<uint32_t> pc)
  : std::runtime_error(std::string(to_string(kind)) + (pc ? "(pc=" + std::to_string(*pc) + ")" : "") +
                       ": " + message),
    kind_(kind),
    pc_(pc)
{}

namespace
{
struct Table
{
    std::array<OpInfo, 0x101> info{};
    std::array<std::string, 0x101> names{};
    std::unordered_map<std::string_view, Op> by_name;

    void set(unsigned code, std::string name, uint8_t pops, uint8_t pushes,
        OpSupport support = OpSupport::Supported, uint8_t imm = 0)
    {
        names[code] = std::move(name);
        info[code] = OpInfo{names[code], pops, pushes, imm, support};
    }

    Table()
    {
        set(0x00, "STOP", 0, 0);
        set(0x01, "ADD", 2, 1);
        set(0x02, "MUL", 2, 1);
        set(0x03, "SUB", 2, 1);
        set(0x04, "DIV", 2, 1);
        set(0x05, "SDIV", 2, 1);
        set(0x06, "MOD", 2, 1);
        set(0x07, "SMOD", 2, 1);
        set(0x08, "ADDMOD", 3, 1);
        set(0x09, "MULMOD", 3, 1);
        set(0x0a, "EXP", 2, 1);
        set(0x0b, "SIGNEXTEND", 2, 1);
        set(0x10, "LT", 2, 1);
        set(0x11, "GT", 2, 1);
        set(0x12, "SLT", 2, 1);
        set(0x13, "SGT", 2, 1);
        set(0x14, "EQ", 2, 1);
        set(0x15, "ISZERO", 1, 1);
        set(0x16, "AND", 2, 1);
        set(0x17, "OR", 2, 1);
        set(0x18, "XOR", 2, 1);
        set(0x19, "NOT", 1, 1);
        set(0x1a, "BYTE", 2, 1);
        set(0x1b, "SHL", 2, 1);
        set(0x1c, "SHR", 2, 1);
        set(0x1d, "SAR", 2, 1);
        set(0x20, "SHA3", 2, 1);
        set(0x30, "ADDRESS", 0, 1);
        set(0x31, "BALANCE", 1, 1);
        set(0x32, "ORIGIN", 0, 1);
        set(0x33, "CALLER", 0, 1);
        set(0x34, "CALLVALUE", 0, 1);
        set(0x35, "CALLDATALOAD", 1, 1);
        set(0x36, "CALLDATASIZE", 0, 1);
        set(0x37, "CALLDATACOPY", 3, 0);
        set(0x38, "CODESIZE", 0, 1);
        set(0x39, "CODECOPY", 3, 0);
        set(0x3a, "GASPRICE", 0, 1);
        set(0x3b, "EXTCODESIZE", 1, 1);
        set(0x3c, "EXTCODECOPY", 4, 0);
        set(0x3d, "RETURNDATASIZE", 0, 1);
        set(0x3e, "RETURNDATACOPY", 3, 0);
        set(0x3f, "EXTCODEHASH", 1, 1);
        set(0x40, "BLOCKHASH", 1, 1);
        set(0x41, "COINBASE", 0, 1);
        set(0x42, "TIMESTAMP", 0, 1);
        set(0x43, "NUMBER", 0, 1);
        set(0x44, "DIFFICULTY", 0, 1);
        set(0x45, "GASLIMIT", 0, 1);
        set(0x46, "CHAINID", 0, 1, OpSupport::Unsupported);
        set(0x47, "SELFBALANCE", 0, 1);
        set(0x48, "BASEFEE", 0, 1, OpSupport::Unsupported);
        set(0x50, "POP", 1, 0);
        set(0x51, "MLOAD", 1, 1);
        set(0x52, "MSTORE", 2, 0);
        set(0x53, "MSTORE8", 2, 0, OpSupport::Unsupported);
        set(0x54, "SLOAD", 1, 1);
        set(0x55, "SSTORE", 2, 0);
        set(0x56, "JUMP", 1, 0);
        set(0x57, "JUMPI", 2, 0);
        set(0x58, "PC", 0, 1);
        set(0x59, "MSIZE", 0, 1);
        set(0x5a, "GAS", 0, 1);
        set(0x5b, "JUMPDEST", 0, 0);
        set(0x5f, "PUSH0", 0, 1);
        for (unsigned n = 1; n <= 32; ++n)
            set(0x5f + n, "PUSH" + std::to_string(n), 0, 1, OpSupport::Supported, static_cast<uint8_t>(n));
        for (unsigned n = 1; n <= 16; ++n)
        {
            set(0x7f + n, "DUP" + std::to_string(n), static_cast<uint8_t>(n), static_cast<uint8_t>(n + 1));
            set(0x8f + n, "SWAP" + std::to_string(n), static_cast<uint8_t>(n + 1),
                static_cast<uint8_t>(n + 1));
        }
        for (unsigned n = 0; n <= 4; ++n)
            set(0xa0 + n, "LOG" + std::to_string(n), static_cast<uint8_t>(2 + n), 0);
        set(0xf0, "CREATE", 3, 1);
        set(0xf1, "CALL", 7, 1);
        set(0xf2, "CALLCODE", 7, 1, OpSupport::Unsupported);
        set(0xf3, "RETURN", 2, 0);
        set(0xf4, "DELEGATECALL", 6, 1, OpSupport::Unsupported);
        set(0xf5, "CREATE2", 4, 1);
        set(0xfa, "STATICCALL", 6, 1);
        set(0xfd, "REVERT", 2, 0);
        set(0xfe, "INVALID", 0, 0);
        set(0xff, "SELFDESTRUCT", 1, 0);
        set(0x100, "ASSIGN", 0, 1);
        for (unsigned code = 0; code < info.size(); ++code)
            if (info[code].support != OpSupport::Unknown)
                by_name.emplace(info[code].name, static_cast<Op>(code));
    }
};

const Table& table()
{
    static const Table t;
    return t;
}
}  // namespace

const OpInfo& op_info(Op op) noexcept
{
    const auto code = static_cast<unsigned>(op);
    static const OpInfo unknown{"UNKNOWN", 0, 0, 0, OpSupport::Unknown};
    return code < table().info.size() && table().info[code].support != OpSupport::Unknown ?
               table().info[code] :
               unknown;
}

std::string_view op_name(Op op) noexcept
{
    return op_info(op).name;
}

std::optional<Op> op_from_name(std::string_view name) noexcept
{
    const auto& m = table().by_name;
    if (const auto it = m.find(name); it != m.end())
        return it->second;
    return std::nullopt;
}
}  // namespace depguard
