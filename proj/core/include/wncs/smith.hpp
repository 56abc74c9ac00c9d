#pragma once

#include <cstddef>
#include <deque>
#include <optional>
#include <variant>

#include "wncs/delay_approx.hpp"
#include "wncs/lti.hpp"
#include "wncs/netchan.hpp"
#include "wncs/pid.hpp"

namespace wncs {

/// Nominal plant used inside the predictor: 0.0832 z^-1/(1 - 0.92 z^-1).
DiscreteTf smith_nominal_plant();

/// Delay model identified from the point-to-point link (roughly a 3-sample shift).
/// Kept as a reference constant; the predictor itself uses an exact shift.
DiscreteTf identified_link_delay();

/// Fixed modeled delay realized as an exact shift of round(tau_m / T) samples.
struct ClassicalMode {
    double tau_m = 0.0;  // s
};

/// Delay model regenerated from the online estimate through a rational approximant.
struct AdaptiveMode {
    ApproxKind kind = ApproxKind::DFR;
    /// Exponential smoothing of incoming estimates, 0 disables it.
    double smoothing = 0.0;
};

using SmithMode = std::variant<ClassicalMode, AdaptiveMode>;

struct SmithConfig {
    SmithMode mode = ClassicalMode{};
    DiscreteTf nominal_plant = smith_nominal_plant();
};

/**
 * Digital Smith predictor in the minor-loop form: the controller sees
 * e = r - (y + c) with c = (1 - G_dm) G^ u.
 *
 * Call order per sample: read feedback(), compute u, then smith_correction(u),
 * which returns (and stores) the feedback for the next sample. The nominal plant
 * must be strictly proper so that the next correction is known before the next
 * control value.
 */
class SmithPredictor {
public:
    explicit SmithPredictor(SmithConfig config);

    double feedback() const noexcept { return feedback_; }

    double smith_correction(double u);

    /// Adaptive mode only: rebuild G_dm for the new estimate (milliseconds).
    /// History windows are kept and reinterpreted under the new coefficients.
    void adaptive_update(Millis tau_estimate_ms);

    const SmithConfig& config() const noexcept { return config_; }
    bool adaptive() const noexcept { return std::holds_alternative<AdaptiveMode>(config_.mode); }

    /// Classical: shift length. Adaptive: 0.
    std::size_t delay_samples() const noexcept { return shift_length_; }
    /// Delay currently modeled, in seconds.
    double modeled_delay() const noexcept { return tau_; }
    /// Adaptive mode: current delay model. Classical mode: z^-d as a tf.
    DiscreteTf delay_model() const;

private:
    SmithConfig config_;
    DifferenceEqState plant_model_;
    std::size_t shift_length_ = 0;
    std::deque<double> shift_;
    std::optional<DifferenceEqState> series_;
    double tau_ = 0.0;
    bool tau_seen_ = false;
    double feedback_ = 0.0;
};

/**
 * Runs the Smith loop with true delay d and the delay-free loop, both linear
 * (no quantization or saturation), for a unit setpoint step. Returns the max
 * |y_smith(k) - y_free(k - d)|, which is zero when the model is exact.
 * `model` defaults to `plant`.
 */
double predictor_identity_check(const PiGains& controller, const DiscreteTf& plant, std::size_t delay_samples,
                                const std::optional<DiscreteTf>& model = std::nullopt, std::size_t samples = 300);

}  // namespace wncs
