#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "wncs/delay_approx.hpp"
#include "wncs/delay_est.hpp"
#include "wncs/netchan.hpp"
#include "wncs/pid.hpp"
#include "wncs/plant.hpp"

namespace wncs {

enum class SetpointProfile { Step, Square };

struct SetpointConfig {
    double value = 100.0;  // rps
    double start_s = 0.0;
    SetpointProfile profile = SetpointProfile::Step;
    double period_s = 10.0;  // square wave only
    double low = 0.0;        // level before the step / lower square level

    double at(double t_s) const;
};

enum class PlantModelKind {
    Published,   // 0.0831 z^-1/(1 - 0.92 z^-1), T = 0.02 s only
    Identified,  // ZOH of 4.159/(s + 3.888) at the scenario sample time
    Custom,      // b z^-1/(1 - pole z^-1) from the config
};

struct PlantConfig {
    PlantModelKind model = PlantModelKind::Published;
    double b = 0.0831;
    double pole = 0.92;
    double output_span_rps = 200.0;
    EncoderConfig encoder;
    bool encoder_jitter = false;
};

/// What the controller node does on a vacant tick.
enum class VacantPolicy { Recompute, Hold };

struct ControllerConfig {
    PiGains gains = default_pi_gains();
    int min_duty = 0;
    int max_duty = 255;
    /// Defaults to max_duty / (ki T).
    std::optional<double> integral_threshold;
    VacantPolicy vacant_policy = VacantPolicy::Recompute;
};

struct ChannelConfig {
    DelayPolicy uplink = FixedDelay{0};    // plant -> controller
    DelayPolicy downlink = FixedDelay{0};  // controller -> plant
};

enum class SmithModeKind { Off, Classical, Adaptive };

struct SmithSettings {
    SmithModeKind mode = SmithModeKind::Off;
    ApproxKind kind = ApproxKind::DFR;  // adaptive only
    double tau_ms = 60.0;               // classical only
    double smoothing = 0.0;             // adaptive only
};

struct ScenarioConfig {
    std::string name = "custom";
    double sample_time = 0.02;  // s, must be a whole number of ms
    double duration = 25.0;     // s
    std::uint64_t seed = 0;
    SetpointConfig setpoint;
    PlantConfig plant;
    ControllerConfig controller;
    ChannelConfig channel;
    SmithSettings smith;

    /// Throws Configuration with a description of the first inconsistency.
    void validate() const;
};

/// One plant tick.
struct RunRow {
    Millis t_ms = 0;
    double setpoint = 0.0;
    int speed_meas = 0;      // byte sent by the plant node
    double speed_true = 0.0;
    int duty = 0;            // duty applied from this tick on
    Millis tm_ms = 0;        // controller-side delay estimate at this tick
    FrameEvent event = FrameEvent::VacantSampling;
};

struct ChannelStats {
    std::uint64_t sent = 0;
    std::uint64_t delivered = 0;
    std::uint64_t in_flight = 0;
};

struct RunRecord {
    double sample_time = 0.02;
    std::vector<RunRow> rows;
    std::vector<DelayEstimate> estimates;
    ExchangeLog exchange;  // controller-side sends and accepted echoes
    ChannelStats uplink;
    ChannelStats downlink;
    bool conservation_held = true;  // sent == delivered + in flight at every tick
    std::size_t controller_activations = 0;
};

/**
 * Deterministic closed-loop run. Each millisecond the controller node may react;
 * every sample period the plant node:
 *   1. reads the encoder and sends the speed byte (echoing the last applied control id),
 *   2. lets the controller react to anything delivered up to now,
 *   3. applies the most recent delivered duty and advances the motor.
 * The controller computes on every delivery, and on a vacant period (no delivery
 * for one sample period) it recomputes on the last measurement and resends.
 */
RunRecord run_closed_loop(const ScenarioConfig& config);

struct Metrics {
    std::optional<double> overshoot_pct;
    std::optional<double> settling_time_s;  // 2% band
    double steady_state_error = 0.0;        // setpoint - mean of the last 10% of samples
    double ise = 0.0;                       // sum (setpoint - measured)^2 T
    double trailing_half_ise = 0.0;
};

/**
 * ISE terms use each row's setpoint. Overshoot, settling time (counted from the
 * start of the segment) and steady-state error refer to the last setpoint
 * segment, with overshoot and the 2% band taken relative to that step's size.
 */
Metrics compute_metrics(const RunRecord& record);

/// Step metrics for a bare trace sampled at `sample_time`, stepping from `initial` to `setpoint` at k = 0.
Metrics compute_metrics(std::span<const double> measured, double setpoint, double sample_time, double initial = 0.0);

// Presets ------------------------------------------------------------------

/// Channel presets: wired, p2p-80ms, p2p-60ms, intermediate-uniform, intermediate-trace.
/// Smith presets: none, classical-60ms, adaptive-dfr, adaptive-pade.
ScenarioConfig make_preset(std::string_view channel, std::string_view smith = "none");
std::vector<std::string> channel_preset_names();
std::vector<std::string> smith_preset_names();

/// Fixed round trip split evenly between the two directions.
ChannelConfig fixed_rtt_channel(Millis rtt_ms);

// Config file I/O ----------------------------------------------------------

/// Parses a JSON scenario document. Missing keys keep their defaults; unknown keys are rejected.
ScenarioConfig parse_scenario(std::string_view json_text);
ScenarioConfig load_scenario(const std::filesystem::path& path);
std::string scenario_to_json(const ScenarioConfig& config);

// Outputs ------------------------------------------------------------------

/// Header `t_ms,setpoint,speed_meas,speed_true,duty,tm_ms,event`.
void write_run_csv(std::ostream& out, const RunRecord& record);
void write_metrics_csv(std::ostream& out, const Metrics& metrics);

/// Writes run.csv, metrics.csv, estimates.csv, config.json and plot.gp into `dir`.
void write_outputs(const std::filesystem::path& dir, const ScenarioConfig& config, const RunRecord& record);

}  // namespace wncs
