#include "wncs/plant.hpp"

#include <algorithm>
#include <cmath>

#include "wncs/error.hpp"

namespace wncs {

ContinuousTf identified_motor_ct() { return ContinuousTf::first_order(4.159, 3.888); }

DiscreteTf identified_motor_dt(double sample_time) {
    return zoh_discretize_first_order(4.159, 3.888, sample_time);
}

DiscreteTf published_motor_dt() { return DiscreteTf({0.0, 0.0831}, {1.0, -0.92}, 0.02); }

MotorModel::MotorModel(DiscreteTf dynamics, double input_scale, double output_scale)
    : state_(std::move(dynamics)), input_scale_(input_scale), output_scale_(output_scale) {
    if (!state_.tf().strictly_proper()) {
        throw Error(ErrorKind::Configuration, "motor dynamics must be strictly proper");
    }
    if (!(input_scale_ > 0.0) || !(output_scale_ > 0.0)) {
        throw Error(ErrorKind::Configuration, "motor scales must be positive");
    }
}

double MotorModel::motor_step(std::uint8_t duty) {
    state_.step(duty * input_scale_);
    return speed();
}

double MotorModel::speed() const { return state_.predict() * output_scale_; }

void EncoderConfig::validate() const {
    if (slots <= 0 || !(window > 0.0)) throw Error(ErrorKind::Configuration, "encoder needs slots > 0 and window > 0");
}

namespace {

std::uint8_t to_byte(double transitions, double resolution) {
    const double rps = std::round(transitions * resolution);
    return static_cast<std::uint8_t>(std::clamp(rps, 0.0, 255.0));
}

}  // namespace

std::uint8_t encoder_read(const EncoderConfig& config, double true_speed) {
    const double x = std::floor(std::max(true_speed, 0.0) / config.resolution());
    return to_byte(x, config.resolution());
}

Encoder::Encoder(EncoderConfig config, std::optional<std::uint64_t> jitter_seed) : config_(config) {
    config_.validate();
    if (jitter_seed) jitter_.emplace(*jitter_seed);
}

std::uint8_t Encoder::read(double true_speed) {
    double x = std::floor(std::max(true_speed, 0.0) / config_.resolution());
    if (jitter_) {
        // Three-way draw: -1, 0 or +1 transition.
        const auto r = static_cast<int>((*jitter_)() % 3) - 1;
        x = std::max(0.0, x + r);
    }
    return to_byte(x, config_.resolution());
}

}  // namespace wncs
