#pragma once

#include <array>
#include <optional>
#include <span>
#include <string_view>

#include "wncs/lti.hpp"

namespace wncs {

/// Second-order rational approximants of exp(-tau s).
enum class ApproxKind { Pade2, Marshall, Product, Laguerre, Paynter, DFR };

inline constexpr std::array<ApproxKind, 6> kAllApproxKinds{ApproxKind::Pade2,    ApproxKind::Marshall,
                                                           ApproxKind::Product,  ApproxKind::Laguerre,
                                                           ApproxKind::Paynter,  ApproxKind::DFR};

std::string_view to_string(ApproxKind kind);
/// Accepts the names printed by to_string() case-insensitively, plus "pade".
std::optional<ApproxKind> parse_approx_kind(std::string_view name);

/// True when the magnitude is one at every frequency (not Paynter, and not Marshall whose form is even in s).
bool is_all_pass(ApproxKind kind);

/// Rational approximant of exp(-tau s); tau = 0 gives the constant 1.
ContinuousTf series_ctf(ApproxKind kind, double tau);

/// Bilinear discretization of series_ctf(kind, tau).
DiscreteTf discretize_series(ApproxKind kind, double tau, double sample_time);

struct IseReport {
    ApproxKind kind = ApproxKind::Pade2;
    double tau = 0.0;
    double ise = 0.0;
    double horizon = 0.0;
    double dt = 0.0;
};

/// Default ISE horizon: max(5 s, 10 tau).
double default_ise_horizon(double tau);

/**
 * Sum of squared error times dt between a response sampled at dt on [0, horizon]
 * and the unit step delayed by round(tau/dt) samples.
 */
double ise_against_delayed_step(std::span<const double> response, double tau, double dt);

/**
 * Integral squared error between the step response of the approximant
 * (bilinear-discretized at dt) and the exactly delayed unit step.
 * horizon <= 0 selects default_ise_horizon(tau).
 */
IseReport ise_vs_true_delay(ApproxKind kind, double tau, double horizon = 0.0, double dt = 1e-3);

}  // namespace wncs
