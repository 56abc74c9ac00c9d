#pragma once

#include <cstdint>
#include <optional>
#include <random>

#include "wncs/lti.hpp"

namespace wncs {

/// Identified motor model: 4.159/(s + 3.888) in normalized units.
ContinuousTf identified_motor_ct();
/// ZOH equivalent of identified_motor_ct() at the given sample time.
DiscreteTf identified_motor_dt(double sample_time = 0.02);
/// The rounded published pulse transfer function 0.0831 z^-1/(1 - 0.92 z^-1).
DiscreteTf published_motor_dt();

/// DC motor driven by an 8-bit PWM duty, speed in revolutions per second.
class MotorModel {
public:
    /// `dynamics` maps normalized duty to normalized speed and must be strictly proper.
    explicit MotorModel(DiscreteTf dynamics = published_motor_dt(), double input_scale = 1.0 / 255.0,
                        double output_scale = 200.0);

    /// Holds `duty` for one sample period and returns the speed at the end of it.
    double motor_step(std::uint8_t duty);

    /// Speed at the current sample.
    double speed() const;

    double input_scale() const noexcept { return input_scale_; }
    double output_scale() const noexcept { return output_scale_; }
    const DiscreteTf& dynamics() const noexcept { return state_.tf(); }

private:
    DifferenceEqState state_;
    double input_scale_;
    double output_scale_;
};

/// Slotted-disc encoder counting transitions over a fixed window.
struct EncoderConfig {
    int slots = 20;
    double window = 0.02;  // s

    /// rps represented by one counted transition: 1 / (slots * window).
    double resolution() const { return 1.0 / (slots * window); }
    void validate() const;
};

/// floor(speed / resolution) transitions, scaled back and rounded to a byte.
std::uint8_t encoder_read(const EncoderConfig& config, double true_speed);

/// Encoder with optional seeded +/-1 transition jitter.
class Encoder {
public:
    explicit Encoder(EncoderConfig config = {}, std::optional<std::uint64_t> jitter_seed = std::nullopt);

    std::uint8_t read(double true_speed);
    const EncoderConfig& config() const noexcept { return config_; }

private:
    EncoderConfig config_;
    std::optional<std::mt19937_64> jitter_;
};

}  // namespace wncs
