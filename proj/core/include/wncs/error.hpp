#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace wncs {

enum class ErrorKind {
    Domain,
    DegenerateMapping,
    Configuration,
    PoleOnAxis,
    DegenerateRange,
    SingularRegressor,
    DegenerateNorm,
    NonPhysicalPole,
    DegenerateController,
    InfeasibleSpec,
    Protocol,
    OrphanFrame,
    NoGainCrossover,
    MarginalCase,
    Parse,
};

std::string_view to_string(ErrorKind kind);

/// Every failure raised by the library carries a kind so callers and tests
/// can branch on the category without parsing messages.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what);

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

}  // namespace wncs
