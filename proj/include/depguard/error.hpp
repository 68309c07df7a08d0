#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace depguard
{
enum class ErrorKind
{
    Parse,
    StackHeightMismatch,
    UnboundedStack,
    DynamicJump,
    UnsupportedOpcode,
    Stuck,
    BudgetExceeded,
    Timeout,
    FuelExhausted,
};

const char* to_string(ErrorKind kind) noexcept;

/// Pipeline error. Carries the program counter when one is relevant.
class Error : public std::runtime_error
{
public:
    Error(ErrorKind kind, std::string message, std::optional<uint32_t> pc = std::nullopt);

    [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }
    [[nodiscard]] std::optional<uint32_t> pc() const noexcept { return pc_; }

private:
    ErrorKind kind_;
    std::optional<uint32_t> pc_;
};
}  // namespace depguard
