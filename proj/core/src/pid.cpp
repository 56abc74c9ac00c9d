#include "wncs/pid.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "wncs/error.hpp"

namespace wncs {

namespace {

constexpr double kPi = std::numbers::pi;

double wrap_degrees(double deg) {
    deg = std::fmod(deg + 180.0, 360.0);
    if (deg < 0.0) deg += 360.0;
    return deg - 180.0;
}

double angle_deg(ComplexPoint z) { return std::arg(z) * 180.0 / kPi; }

}  // namespace

void PiGains::validate() const {
    if (!(sample_time > 0.0)) throw Error(ErrorKind::Domain, "PI sample time must be positive");
    if (!std::isfinite(kp) || !std::isfinite(ki)) throw Error(ErrorKind::Domain, "PI gains must be finite");
}

PiGains default_pi_gains() { return PiGains{1.69, 7.44, 0.02}; }

ActuatorLimits ActuatorLimits::for_gains(const PiGains& gains) {
    ActuatorLimits limits;
    const double ki_t = gains.integral_gain();
    limits.integral_threshold = ki_t > 0.0 ? limits.max_duty / ki_t : 0.0;
    return limits;
}

int pi_step(const PiGains& gains, PiState& state, const ActuatorLimits& limits, double error) {
    state.integral_sum += error;
    double u = gains.kp * error + gains.integral_gain() * state.integral_sum;
    state.saturated_last = false;
    if (u > limits.max_duty) {
        u = limits.max_duty;
        state.integral_sum = limits.integral_threshold;
        state.saturated_last = true;
    }
    if (u < limits.min_duty) u = limits.min_duty;
    return static_cast<int>(std::trunc(u));
}

PiGains map_continuous_gains(double kc, double ti, double sample_time) {
    if (!(ti > 0.0)) throw Error(ErrorKind::Domain, "integral time must be positive");
    PiGains g{kc - kc * sample_time / (2.0 * ti), kc / ti, sample_time};
    g.validate();
    return g;
}

PiGains map_position_gains(double kp, double ti, double sample_time) {
    if (!(ti > 0.0)) throw Error(ErrorKind::Domain, "integral time must be positive");
    PiGains g{kp, kp / ti, sample_time};
    g.validate();
    return g;
}

DiscreteTf pi_pulse_tf(const PiGains& gains) {
    gains.validate();
    const double ki_t = gains.integral_gain();
    const double k = gains.kp + ki_t;
    if (k == 0.0) throw Error(ErrorKind::DegenerateController, "K = kp + ki T is zero");
    if (ki_t == 0.0) {
        throw Error(ErrorKind::DegenerateController, "ki T = 0 cancels the integrator pole; use a static gain");
    }
    return DiscreteTf({k, -gains.kp}, {1.0, -1.0}, gains.sample_time);
}

ComplexPoint dominant_pole(double zeta, double wd_over_ws) {
    if (!(zeta > 0.0 && zeta < 1.0)) throw Error(ErrorKind::Domain, "damping ratio must be in (0, 1)");
    if (!(wd_over_ws > 0.0 && wd_over_ws < 0.5)) {
        throw Error(ErrorKind::Domain, "wd/ws must be in (0, 0.5)");
    }
    const double radius = std::exp(-2.0 * kPi * zeta / std::sqrt(1.0 - zeta * zeta) * wd_over_ws);
    return std::polar(radius, 2.0 * kPi * wd_over_ws);
}

RootLocusDesign design_pi_root_locus(const DiscreteTf& plant, double zeta, double wd_over_ws) {
    const auto& num = plant.num();
    const auto& den = plant.den();
    if (num.size() != 2 || num[0] != 0.0 || den.size() != 2) {
        throw Error(ErrorKind::Domain, "root-locus design expects a first-order plant b z^-1/(1 - p z^-1)");
    }
    const double b = num[1];
    const double p = -den[1];
    const ComplexPoint z = dominant_pole(zeta, wd_over_ws);

    // Open loop K (z - c) b / ((z - 1)(z - p)); the zero must supply the angle
    // deficiency so the total is -180 degrees.
    const double pole_angles = angle_deg(z - 1.0) + angle_deg(z - p);
    const double zero_angle = wrap_degrees(-180.0 + pole_angles - (b < 0.0 ? 180.0 : 0.0));
    if (!(zero_angle > 0.0 && zero_angle < 180.0)) {
        throw Error(ErrorKind::InfeasibleSpec,
                    "required zero angle " + std::to_string(zero_angle) + " deg is unreachable from the real axis");
    }
    const double c = z.real() - z.imag() / std::tan(zero_angle * kPi / 180.0);
    const double k = std::abs(z - 1.0) * std::abs(z - p) / (std::abs(b) * std::abs(z - c));

    RootLocusDesign d;
    d.pole = z;
    d.zero = c;
    d.loop_gain = k;
    d.gains = PiGains{k * c, k * (1.0 - c) / plant.sample_time(), plant.sample_time()};

    const ComplexPoint open_loop = k * (z - c) * b / ((z - 1.0) * (z - p));
    d.angle_residual_deg = wrap_degrees(angle_deg(open_loop) - 180.0);
    d.magnitude_residual = std::abs(open_loop) - 1.0;
    return d;
}

}  // namespace wncs
