#include "wncs/stability.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "wncs/error.hpp"

namespace wncs {

namespace {

constexpr double kRadToDeg = 180.0 / std::numbers::pi;

double magnitude(const ContinuousTf& rational, double omega) {
    return std::abs(freq_response(rational, omega));
}

ContinuousTf rational_part(const ContinuousTf& ctf) { return ctf.with_dead_time(0.0); }

void append_log_space(std::vector<double>& out, double lo, double hi, std::size_t n) {
    const double a = std::log10(lo);
    const double b = std::log10(hi);
    for (std::size_t i = 0; i < n; ++i) {
        out.push_back(std::pow(10.0, a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1)));
    }
}

}  // namespace

double gain_crossover(const ContinuousTf& ctf) {
    const ContinuousTf g = rational_part(ctf);
    if (!(magnitude(g, 0.0) > 1.0)) {
        throw Error(ErrorKind::NoGainCrossover, "|G(0)| <= 1, loop gain never crosses unity");
    }
    double lo = 0.0;
    double hi = 1.0;
    while (magnitude(g, hi) >= 1.0) {
        lo = hi;
        hi *= 2.0;
        if (hi > 1e12) throw Error(ErrorKind::NoGainCrossover, "|G(jw)| stays above 1");
    }
    for (int i = 0; i < 200 && hi - lo > 1e-15 * hi; ++i) {
        const double mid = 0.5 * (lo + hi);
        (magnitude(g, mid) >= 1.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

MarginReport phase_margin(const ContinuousTf& ctf, double tau_d) {
    if (!(tau_d >= 0.0)) throw Error(ErrorKind::Domain, "delay must be non-negative");
    const ContinuousTf g = rational_part(ctf);
    MarginReport r;
    r.gain_crossover_omega = gain_crossover(g);
    const double phase = std::arg(freq_response(g, r.gain_crossover_omega)) * kRadToDeg;
    r.phase_margin_deg = 180.0 + phase - r.gain_crossover_omega * tau_d * kRadToDeg;
    r.stable = r.phase_margin_deg > 0.0;
    return r;
}

std::vector<double> default_omega_grid(const ContinuousTf& ctf) {
    std::vector<double> grid;
    append_log_space(grid, 1e-3, 1e3, 1000);
    try {
        const double wg = gain_crossover(ctf);
        // The base grid has ~166 points per decade; the dense patch spans
        // wg/2..2wg at ten times that.
        append_log_space(grid, wg / 2.0, wg * 2.0, 1000);
    } catch (const Error&) {
    }
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    return grid;
}

NyquistLocus nyquist_locus(const ContinuousTf& ctf, double tau_d, std::span<const double> omegas) {
    for (std::size_t i = 0; i < omegas.size(); ++i) {
        if (!(omegas[i] > 0.0) || (i > 0 && !(omegas[i] > omegas[i - 1]))) {
            throw Error(ErrorKind::Domain, "frequency grid must be positive and ascending");
        }
    }
    const ContinuousTf g = ctf.with_dead_time(tau_d);
    NyquistLocus locus;
    locus.omegas.assign(omegas.begin(), omegas.end());
    locus.points.reserve(omegas.size());
    for (double w : omegas) locus.points.push_back(freq_response(g, w));
    return locus;
}

int encirclements(const NyquistLocus& locus) {
    if (locus.points.empty()) return 0;
    const ComplexPoint critical{-1.0, 0.0};

    // Negative frequencies (conjugates, in increasing w from -wmax) then positive ones.
    std::vector<ComplexPoint> contour;
    contour.reserve(2 * locus.points.size());
    for (auto it = locus.points.rbegin(); it != locus.points.rend(); ++it) contour.push_back(std::conj(*it));
    contour.insert(contour.end(), locus.points.begin(), locus.points.end());

    for (const auto& p : contour) {
        if (std::abs(p - critical) < 1e-9) {
            throw Error(ErrorKind::MarginalCase, "locus passes through -1");
        }
    }

    double winding = 0.0;
    for (std::size_t i = 0; i < contour.size(); ++i) {
        const ComplexPoint a = contour[i] - critical;
        const ComplexPoint b = contour[(i + 1) % contour.size()] - critical;
        winding += std::arg(b / a);
    }
    // arg accumulates counter-clockwise; report clockwise turns.
    return -static_cast<int>(std::lround(winding / (2.0 * std::numbers::pi)));
}

}  // namespace wncs
