#pragma once

#include "depguard/cfg.hpp"
#include "depguard/frontend.hpp"
#include "depguard/patterns.hpp"
#include "depguard/state.hpp"

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace depguard
{
/// Transaction and block environment.
struct TxEnv
{
    u256 origin;
    u256 gasprice;
    u256 parent;
    u256 beneficiary;
    u256 difficulty;
    u256 number;
    u256 gaslimit;
    u256 timestamp;

    friend bool operator==(const TxEnv&, const TxEnv&) = default;
};

/// Configuration of the running call frame plus the world around it. Actor storage is kept
/// here (zero values omitted); the actor's balance lives in `world`.
struct ExecState
{
    u256 gas;
    Pc pc = 0;
    Bytes memory;  ///< always 32 * msize bytes
    u256 msize;    ///< active memory words
    std::map<VarId, u256> vars;
    u256 actor;
    u256 sender;
    u256 value;
    Bytes input;
    Bytes code;
    std::map<u256, u256> storage;
    World world;

    friend bool operator==(const ExecState&, const ExecState&) = default;
};

struct TraceEntry
{
    Pc pc = 0;
    Op op = Op::STOP;
    std::vector<u256> args;  ///< in_var values, top of stack first

    /// Traces compare instructions by opcode and arguments only.
    friend bool operator==(const TraceEntry& a, const TraceEntry& b) { return a.op == b.op && a.args == b.args; }
};
using Trace = std::vector<TraceEntry>;

enum class FinalKind : uint8_t
{
    Running,
    Halt,
    Exception,
    FuelExhausted,
};

enum class ExceptionCause : uint8_t
{
    None,
    Invalid,
    Revert,
    OutOfGas,
    BadJump,
};

const char* to_string(FinalKind k) noexcept;
const char* to_string(ExceptionCause c) noexcept;

struct StepResult
{
    FinalKind kind = FinalKind::Running;
    ExceptionCause cause = ExceptionCause::None;
};

/// Executes the instruction at s.pc. Records it in `trace` when given.
/// Throws Error(UnsupportedOpcode) for instructions outside the modeled set.
StepResult step(const Contract& c, const TxEnv& env, ExecState& s, Trace* trace = nullptr);

struct RunResult
{
    FinalKind kind = FinalKind::Halt;
    ExceptionCause cause = ExceptionCause::None;
    ExecState state;
    Trace trace;
    Bytes output;  ///< RETURN/REVERT data
    uint64_t steps = 0;
};

constexpr uint64_t kDefaultFuel = 1'000'000;

RunResult run(const Contract& c, const TxEnv& env, ExecState s0, uint64_t fuel = kDefaultFuel);

/// Order-preserving filter.
Trace project_trace(const Trace& t, const OpSet& f);

/// Abstract CFG state for a configuration at an instruction boundary. Memory becomes MemS
/// cells at 32-byte aligned offsets; storage becomes StorS cells.
CfgState to_cfg(const ExecState& s, const TxEnv& env);

/// Inverse view of a CFG state at node (pc, 0). Temporaries are ignored.
std::pair<ExecState, TxEnv> to_evm(const CfgState& st, Pc pc);

/// Samplers for environments and initial configurations.
class Sampler
{
public:
    explicit Sampler(uint64_t seed) : rng_(seed) {}

    /// Mix of small values, multiples of lcm(1..40) and full-width values.
    u256 word();
    u256 address();
    TxEnv env();
    ExecState state(const Contract& c);
    /// Copy of (env, s) that differs at most in the components of z.
    std::pair<TxEnv, ExecState> mutate(const TxEnv& env, const ExecState& s, const std::vector<Component>& z);

    std::mt19937_64& rng() { return rng_; }

private:
    u256 mutate_word(const u256& v);
    std::mt19937_64 rng_;
};

struct Counterexample
{
    TxEnv env_a;
    TxEnv env_b;
    ExecState state_a;
    ExecState state_b;
    Trace trace_a;  ///< projected
    Trace trace_b;
};

struct DiffReport
{
    size_t trials = 0;
    size_t compared = 0;   ///< pairs where both runs ended without running out of gas or fuel
    size_t discarded = 0;
    std::vector<Counterexample> counterexamples;
};

/// Runs `trials` pairs of configurations equal up to Z and compares their f-projected traces.
DiffReport differential_test(const Contract& c, const std::vector<Component>& z, const OpSet& f, size_t trials,
                             uint64_t seed, uint64_t fuel = kDefaultFuel);
}  // namespace depguard
