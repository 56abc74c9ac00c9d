#include "wncs/smith.hpp"

#include <algorithm>
#include <cmath>

#include "wncs/error.hpp"

namespace wncs {

DiscreteTf smith_nominal_plant() { return DiscreteTf({0.0, 0.0832}, {1.0, -0.92}, 0.02); }

DiscreteTf identified_link_delay() {
    return DiscreteTf({0.0, 0.0006313, 0.000636, 0.9971}, {1.0, -0.0006345, -0.000633, 0.00007223}, 0.02);
}

SmithPredictor::SmithPredictor(SmithConfig config)
    : config_(std::move(config)), plant_model_(config_.nominal_plant) {
    if (!config_.nominal_plant.strictly_proper()) {
        throw Error(ErrorKind::Configuration, "Smith nominal plant must be strictly proper");
    }
    const double t = config_.nominal_plant.sample_time();
    if (const auto* c = std::get_if<ClassicalMode>(&config_.mode)) {
        if (!(c->tau_m >= 0.0)) throw Error(ErrorKind::Configuration, "modeled delay must be non-negative");
        shift_length_ = static_cast<std::size_t>(std::llround(c->tau_m / t));
        shift_.assign(shift_length_, 0.0);
        tau_ = c->tau_m;
    } else {
        const auto& a = std::get<AdaptiveMode>(config_.mode);
        if (!(a.smoothing >= 0.0 && a.smoothing < 1.0)) {
            throw Error(ErrorKind::Configuration, "smoothing must be in [0, 1)");
        }
        // Second-order windows from the start so later retunes never need to grow them.
        series_.emplace(discretize_series(a.kind, 0.0, t).padded(3, 3));
    }
}

double SmithPredictor::smith_correction(double u) {
    plant_model_.step(u);
    const double predicted = plant_model_.predict();
    double delayed = predicted;
    if (series_) {
        delayed = series_->step(predicted);
    } else if (shift_length_ > 0) {
        shift_.push_back(predicted);
        delayed = shift_.front();
        shift_.pop_front();
    }
    feedback_ = predicted - delayed;
    return feedback_;
}

void SmithPredictor::adaptive_update(Millis tau_estimate_ms) {
    const auto* a = std::get_if<AdaptiveMode>(&config_.mode);
    if (a == nullptr) throw Error(ErrorKind::Configuration, "adaptive_update on a classical predictor");
    const double incoming = std::max<Millis>(tau_estimate_ms, 0) / 1000.0;
    tau_ = tau_seen_ ? a->smoothing * tau_ + (1.0 - a->smoothing) * incoming : incoming;
    tau_seen_ = true;
    series_->retune(discretize_series(a->kind, tau_, config_.nominal_plant.sample_time()));
}

DiscreteTf SmithPredictor::delay_model() const {
    if (series_) return series_->tf();
    std::vector<double> num(shift_length_ + 1, 0.0);
    num.back() = 1.0;
    return DiscreteTf(std::move(num), {1.0}, config_.nominal_plant.sample_time());
}

double predictor_identity_check(const PiGains& controller, const DiscreteTf& plant, std::size_t delay_samples,
                                const std::optional<DiscreteTf>& model, std::size_t samples) {
    if (!plant.strictly_proper()) throw Error(ErrorKind::Configuration, "plant must be strictly proper");
    const DiscreteTf pi = pi_pulse_tf(controller);
    const double tau = static_cast<double>(delay_samples) * plant.sample_time();

    DifferenceEqState ctrl(pi);
    DifferenceEqState process(plant);
    SmithPredictor smith(SmithConfig{ClassicalMode{tau}, model.value_or(plant)});
    std::deque<double> line(delay_samples, 0.0);

    DifferenceEqState ctrl_free(pi);
    DifferenceEqState process_free(plant);

    constexpr double setpoint = 1.0;
    std::vector<double> y_smith;
    std::vector<double> y_free;
    y_smith.reserve(samples);
    y_free.reserve(samples);
    for (std::size_t k = 0; k < samples; ++k) {
        const double y = process.predict();
        const double u = ctrl.step(setpoint - y - smith.feedback());
        smith.smith_correction(u);
        line.push_back(u);
        process.step(line.front());
        line.pop_front();
        y_smith.push_back(y);

        const double yf = process_free.predict();
        process_free.step(ctrl_free.step(setpoint - yf));
        y_free.push_back(yf);
    }

    double worst = 0.0;
    for (std::size_t k = 0; k < samples; ++k) {
        const double reference = k >= delay_samples ? y_free[k - delay_samples] : 0.0;
        worst = std::max(worst, std::abs(y_smith[k] - reference));
    }
    return worst;
}

}  // namespace wncs
