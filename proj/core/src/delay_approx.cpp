#include "wncs/delay_approx.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <string>

#include "wncs/error.hpp"

namespace wncs {

namespace {

// c0 + c1 x + c2 x^2 with x = tau s.
struct Quadratic {
    double c0, c1, c2;
};

struct SeriesCoeffs {
    Quadratic num;
    Quadratic den;
};

SeriesCoeffs coefficients(ApproxKind kind) {
    switch (kind) {
        case ApproxKind::Pade2: return {{1.0, -0.5, 1.0 / 12.0}, {1.0, 0.5, 1.0 / 12.0}};
        case ApproxKind::Marshall: return {{1.0, 0.0, -0.0625}, {1.0, 0.0, 0.0625}};
        case ApproxKind::Product: return {{1.0, -0.5, 0.125}, {1.0, 0.5, 0.125}};
        case ApproxKind::Laguerre: return {{1.0, -0.5, 0.0625}, {1.0, 0.5, 0.0625}};
        case ApproxKind::Paynter: return {{1.0, 0.0, 0.0}, {1.0, 1.0, 0.405}};
        case ApproxKind::DFR: return {{1.0, -0.49, 0.0954}, {1.0, 0.49, 0.0954}};
    }
    throw Error(ErrorKind::Domain, "unknown approximation kind");
}

}  // namespace

std::string_view to_string(ApproxKind kind) {
    switch (kind) {
        case ApproxKind::Pade2: return "Pade2";
        case ApproxKind::Marshall: return "Marshall";
        case ApproxKind::Product: return "Product";
        case ApproxKind::Laguerre: return "Laguerre";
        case ApproxKind::Paynter: return "Paynter";
        case ApproxKind::DFR: return "DFR";
    }
    return "unknown";
}

std::optional<ApproxKind> parse_approx_kind(std::string_view name) {
    std::string lower(name);
    std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
    if (lower == "pade") return ApproxKind::Pade2;
    for (ApproxKind k : kAllApproxKinds) {
        std::string candidate(to_string(k));
        std::transform(candidate.begin(), candidate.end(), candidate.begin(),
                       [](unsigned char c) { return std::tolower(c); });
        if (candidate == lower) return k;
    }
    return std::nullopt;
}

bool is_all_pass(ApproxKind kind) { return kind != ApproxKind::Paynter && kind != ApproxKind::Marshall; }

ContinuousTf series_ctf(ApproxKind kind, double tau) {
    if (!(tau >= 0.0) || !std::isfinite(tau)) throw Error(ErrorKind::Domain, "delay must be non-negative");
    const auto c = coefficients(kind);
    const double t2 = tau * tau;
    return ContinuousTf({c.num.c0, c.num.c1 * tau, c.num.c2 * t2}, {c.den.c0, c.den.c1 * tau, c.den.c2 * t2});
}

DiscreteTf discretize_series(ApproxKind kind, double tau, double sample_time) {
    return bilinear_discretize(series_ctf(kind, tau), sample_time);
}

double default_ise_horizon(double tau) { return std::max(5.0, 10.0 * tau); }

double ise_against_delayed_step(std::span<const double> response, double tau, double dt) {
    const auto shift = static_cast<std::size_t>(std::llround(tau / dt));
    double sum = 0.0;
    for (std::size_t k = 0; k < response.size(); ++k) {
        const double reference = k >= shift ? 1.0 : 0.0;
        const double e = response[k] - reference;
        sum += e * e;
    }
    return sum * dt;
}

IseReport ise_vs_true_delay(ApproxKind kind, double tau, double horizon, double dt) {
    if (!(tau >= 0.0)) throw Error(ErrorKind::Domain, "delay must be non-negative");
    if (horizon <= 0.0) horizon = default_ise_horizon(tau);
    if (!(dt > 0.0) || !(dt <= tau / 10.0 || dt <= 1e-3 + 1e-15)) {
        throw Error(ErrorKind::Configuration, "ISE step must satisfy dt <= tau/10 or dt <= 1 ms");
    }
    if (horizon < 6.0 * tau) throw Error(ErrorKind::Configuration, "ISE horizon must cover at least 6 tau");

    const auto samples = static_cast<std::size_t>(std::llround(horizon / dt)) + 1;
    const auto response = step_response(discretize_series(kind, tau, dt), samples);
    return IseReport{kind, tau, ise_against_delayed_step(response, tau, dt), horizon, dt};
}

}  // namespace wncs
