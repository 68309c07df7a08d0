#pragma once

#include "depguard/opcode.hpp"
#include "depguard/u256.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace depguard
{
using VarId = uint32_t;
using Pc = uint32_t;

/// Successor marker for halting instructions.
constexpr Pc kExitPc = 0xffffffffu;

/// One decoded byte-level instruction.
struct RawInstruction
{
    Pc pc = 0;
    uint8_t opcode = 0;
    Bytes immediate;  ///< PUSH payload, zero-padded to the PUSH width

    friend bool operator==(const RawInstruction&, const RawInstruction&) = default;
};

/// A linearized instruction: op(out; in) -> pc_next with preprocessing info.
struct Instruction
{
    Pc pc = 0;
    Op op = Op::STOP;
    std::vector<VarId> out_vars;
    std::vector<VarId> in_vars;  ///< top of stack first
    Pc pc_next = kExitPc;        ///< JUMP: destination; JUMPI: fall-through
    std::vector<std::optional<u256>> pre;  ///< one slot per in_var
    u256 imm;                              ///< ASSIGN payload

    /// JUMPI destination (pre[0]).
    [[nodiscard]] Pc jump_target() const;

    friend bool operator==(const Instruction&, const Instruction&) = default;
};

struct Contract
{
    std::map<Pc, Instruction> code;
    Pc entry = 0;
    Bytes bytecode;  ///< original bytes (empty for assembly input)
    std::string source_hash;
    std::vector<std::string> warnings;

    [[nodiscard]] const Instruction& at(Pc pc) const;
    /// Successor pcs at instruction level (exit excluded).
    [[nodiscard]] std::vector<Pc> successors(Pc pc) const;
    /// One past the largest SSA id in use.
    [[nodiscard]] VarId var_count() const;
};

/// Parses hex text: optional 0x prefix, whitespace anywhere. Throws Error(Parse).
Bytes parse_hex(std::string_view text);
std::string to_hex(const Bytes& bytes);

/// Byte-level decoding. Unknown bytes are kept (and later linearized as INVALID).
std::vector<RawInstruction> decode(const Bytes& bytes, std::vector<std::string>* warnings = nullptr);
Bytes encode(const std::vector<RawInstruction>& instrs);

/// Abstract-stack simulation into SSA form.
/// Throws StackHeightMismatch, UnboundedStack, DynamicJump, UnsupportedOpcode.
Contract linearize(const std::vector<RawInstruction>& raw, const Bytes& bytecode);

/// Fills pre slots with constants provable on all paths (forward must-analysis).
Contract preprocess(Contract c);

/// Indices of in_vars whose pre slot is populated by preprocess for this opcode.
std::vector<size_t> pre_slots(Op op);

/// Text assembly: `<pc>: OP(out..; in..) -> <pc_next> ; pre=[v|_,...]`.
std::string format_instruction(const Instruction& ins);
std::string print_asm(const Contract& c);
/// Inverse of print_asm. Throws Error(Parse) with the offending line.
Contract parse_asm(std::string_view text);

/// decode + linearize + preprocess for hex bytecode.
Contract load_bytecode(const Bytes& bytes);
/// Reads a file holding hex bytecode or assembly text and runs the frontend.
Contract load_contract_file(const std::string& path);
/// Same, for in-memory text.
Contract load_contract_text(std::string_view text);
}  // namespace depguard
