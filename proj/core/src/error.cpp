#include "wncs/error.hpp"

namespace wncs {

std::string_view to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::Domain: return "domain error";
        case ErrorKind::DegenerateMapping: return "degenerate mapping";
        case ErrorKind::Configuration: return "configuration error";
        case ErrorKind::PoleOnAxis: return "pole on axis";
        case ErrorKind::DegenerateRange: return "degenerate range";
        case ErrorKind::SingularRegressor: return "singular regressor";
        case ErrorKind::DegenerateNorm: return "degenerate norm";
        case ErrorKind::NonPhysicalPole: return "non-physical pole";
        case ErrorKind::DegenerateController: return "degenerate controller";
        case ErrorKind::InfeasibleSpec: return "infeasible specification";
        case ErrorKind::Protocol: return "protocol error";
        case ErrorKind::OrphanFrame: return "orphan frame";
        case ErrorKind::NoGainCrossover: return "no gain crossover";
        case ErrorKind::MarginalCase: return "marginal case";
        case ErrorKind::Parse: return "parse error";
    }
    return "unknown error";
}

Error::Error(ErrorKind kind, const std::string& what)
    : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

}  // namespace wncs
