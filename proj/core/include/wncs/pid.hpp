#pragma once

#include <cstdint>

#include "wncs/lti.hpp"

namespace wncs {

/// Discrete PI gains. The integral term is ki * sample_time * sum(e).
struct PiGains {
    double kp = 0.0;
    double ki = 0.0;  // 1/s
    double sample_time = 0.0;

    double integral_gain() const noexcept { return ki * sample_time; }
    void validate() const;
};

/// Gains from the wired-loop tuning; used as the default controller.
PiGains default_pi_gains();

struct PiState {
    double integral_sum = 0.0;
    bool saturated_last = false;
};

/// 8-bit PWM actuator range plus the anti-windup reset value.
struct ActuatorLimits {
    int min_duty = 0;
    int max_duty = 255;
    double integral_threshold = 0.0;

    /// Threshold that alone drives the output to max_duty: max_duty / (ki * T).
    static ActuatorLimits for_gains(const PiGains& gains);
};

/**
 * One tick of the position-form PI with anti-windup.
 *
 * integral_sum += e; u = kp e + ki T integral_sum. Above max_duty the output is
 * clamped and integral_sum is reset to integral_threshold. Below min_duty the
 * output is clamped with no reset. The result is truncated to an integer count.
 */
int pi_step(const PiGains& gains, PiState& state, const ActuatorLimits& limits, double error);

/// kc (1 + T/(ti (1 - z^-1))) mapped to the position form: kp = kc - kc T/(2 ti), ki = kc/ti.
PiGains map_continuous_gains(double kc, double ti, double sample_time);

/// Position-form reading kp (e + sum(e)/ti): ki = kp/ti.
PiGains map_position_gains(double kp, double ti, double sample_time);

/// K (z - kp/K)/(z - 1) with K = kp + ki T, as (K - kp z^-1)/(1 - z^-1).
DiscreteTf pi_pulse_tf(const PiGains& gains);

/// z-plane location for damping zeta at wd/ws samples-per-cycle ratio.
ComplexPoint dominant_pole(double zeta, double wd_over_ws);

struct RootLocusDesign {
    PiGains gains;
    ComplexPoint pole;           // dominant closed-loop pole that was placed
    double zero = 0.0;           // PI zero kp/K
    double loop_gain = 0.0;      // K = kp + ki T
    double angle_residual_deg = 0.0;
    double magnitude_residual = 0.0;
};

/**
 * Places the PI zero by the angle criterion at the dominant pole and takes K
 * from the magnitude criterion. The plant must be b z^-1/(1 - p z^-1).
 */
RootLocusDesign design_pi_root_locus(const DiscreteTf& plant, double zeta, double wd_over_ws);

}  // namespace wncs
