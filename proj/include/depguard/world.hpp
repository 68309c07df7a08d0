#pragma once

#include "depguard/opcode.hpp"
#include "depguard/state.hpp"

namespace depguard
{
/// Inputs to an external call or contract creation, already extracted from the caller state.
struct CallRequest
{
    Op op = Op::CALL;  ///< CALL, STATICCALL, CREATE or CREATE2
    u256 actor;
    u256 gas_arg;  ///< requested gas (CALL family only)
    u256 to;       ///< callee (CALL family) or salt (CREATE2)
    u256 value;
    Bytes input;          ///< call input or init code
    u256 available_gas;   ///< caller gas after the base and memory cost
    u256 storage_digest;  ///< caller storage, observable through reentrant callbacks
};

struct CallResult
{
    u256 result;  ///< success flag or created address (0 on failure)
    Bytes output;
    u256 gas_used;  ///< gas charged beyond the base cost
    World world;    ///< world after the call
};

/// Base cost charged before any gas is forwarded (excluding memory expansion).
u256 call_base_cost(const World& w, Op op, const u256& to, const u256& value);

/// Deterministic stand-in for the rest of the chain. The outcome is a keccak-derived function of
/// the world seed and the request, so the CFG semantics and the reference interpreter agree.
CallResult simulate_call(const World& w, const CallRequest& req);

/// SELFDESTRUCT: transfers the actor's balance and removes the actor account.
World apply_selfdestruct(const World& w, const u256& actor, const u256& beneficiary);
u256 selfdestruct_cost(const World& w, const u256& beneficiary);
}  // namespace depguard
