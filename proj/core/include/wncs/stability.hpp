#pragma once

#include <optional>
#include <span>
#include <vector>

#include "wncs/lti.hpp"

namespace wncs {

struct MarginReport {
    double gain_crossover_omega = 0.0;  // rad/s
    double phase_margin_deg = 0.0;
    bool stable = false;                // phase margin > 0
};

struct NyquistLocus {
    std::vector<double> omegas;
    std::vector<ComplexPoint> points;
};

/// Frequency where |G(jw)| = 1, found by bisection. Needs |G(0)| > 1.
double gain_crossover(const ContinuousTf& ctf);

/// 180 + angle G(j wg) - wg tau_d, in degrees. The delay in `ctf` itself is ignored.
MarginReport phase_margin(const ContinuousTf& ctf, double tau_d);

/// 1000 log-spaced points over [1e-3, 1e3] rad/s, ten times denser around the
/// gain crossover when one exists.
std::vector<double> default_omega_grid(const ContinuousTf& ctf);

/// G(jw) exp(-jw tau_d) at each grid frequency (positive frequencies only).
NyquistLocus nyquist_locus(const ContinuousTf& ctf, double tau_d, std::span<const double> omegas);

/**
 * Net clockwise encirclements of -1 by the closed contour: mirrored negative
 * frequencies, the given positive branch, and a straight closure between the
 * two ends. Clockwise is positive, matching Z = N + P.
 */
int encirclements(const NyquistLocus& locus);

}  // namespace wncs
