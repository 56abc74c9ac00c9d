#include "wncs/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "wncs/error.hpp"
#include "wncs/smith.hpp"

namespace wncs {

using nlohmann::json;

namespace {

// splitmix64 finalizer, used to derive independent stream seeds from the scenario seed.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

Millis to_millis(double seconds) { return static_cast<Millis>(std::llround(seconds * 1000.0)); }

bool whole_millis(double seconds) { return std::abs(seconds * 1000.0 - std::round(seconds * 1000.0)) < 1e-6; }

[[noreturn]] void config_error(const std::string& what) { throw Error(ErrorKind::Configuration, what); }

DelayPolicy seeded(DelayPolicy policy, std::uint64_t seed) {
    if (auto* u = std::get_if<UniformDelay>(&policy)) u->seed = seed;
    return policy;
}

void validate_policy(const DelayPolicy& policy, const char* direction) {
    const std::string dir = direction;
    if (const auto* f = std::get_if<FixedDelay>(&policy)) {
        if (f->delay_ms < 0) config_error(dir + " fixed delay must be non-negative");
    } else if (const auto* u = std::get_if<UniformDelay>(&policy)) {
        if (u->lo_ms < 0 || u->hi_ms < u->lo_ms) config_error(dir + " uniform delay needs 0 <= lo_ms <= hi_ms");
    } else {
        const auto& t = std::get<TraceDelay>(policy);
        if (t.delays_ms.empty()) config_error(dir + " trace is empty");
        if (std::any_of(t.delays_ms.begin(), t.delays_ms.end(), [](Millis d) { return d < 0; })) {
            config_error(dir + " trace has a negative delay");
        }
    }
}

DiscreteTf plant_dynamics(const ScenarioConfig& c) {
    switch (c.plant.model) {
        case PlantModelKind::Published: return published_motor_dt();
        case PlantModelKind::Identified: return identified_motor_dt(c.sample_time);
        case PlantModelKind::Custom: return DiscreteTf({0.0, c.plant.b}, {1.0, -c.plant.pole}, c.sample_time);
    }
    return published_motor_dt();
}

// Model inside the predictor. The rounded published coefficients only exist at 20 ms.
DiscreteTf smith_model(const ScenarioConfig& c) {
    if (whole_millis(c.sample_time) && to_millis(c.sample_time) == 20) return smith_nominal_plant();
    return identified_motor_dt(c.sample_time);
}

// Built-in one-way delay trace for the intermediate-node preset, in ms.
// Synthetic values in the 80-200 ms band of a store-and-forward hop.
const std::vector<Millis>& builtin_intermediate_trace() {
    static const std::vector<Millis> trace{95,  120, 160, 180, 140, 110, 90,  130, 175, 195, 150, 100, 85,
                                           125, 165, 190, 145, 105, 115, 170, 185, 135, 98,  155, 178};
    return trace;
}

// JSON helpers -------------------------------------------------------------

void check_keys(const json& obj, std::initializer_list<std::string_view> allowed, const std::string& where) {
    if (!obj.is_object()) config_error(where + " must be an object");
    for (const auto& [key, value] : obj.items()) {
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
            config_error("unknown key '" + key + "' in " + where);
        }
    }
}

template <typename T>
void read_if(const json& obj, const char* key, T& out, const std::string& where) {
    if (!obj.contains(key)) return;
    try {
        out = obj.at(key).get<T>();
    } catch (const json::exception&) {
        config_error("bad value for '" + std::string(key) + "' in " + where);
    }
}

DelayPolicy parse_policy(const json& obj, const std::string& where, const std::filesystem::path& base_dir) {
    check_keys(obj, {"type", "delay_ms", "lo_ms", "hi_ms", "delays_ms", "file", "direction"}, where);
    std::string type;
    read_if(obj, "type", type, where);
    if (type == "fixed") {
        FixedDelay f;
        read_if(obj, "delay_ms", f.delay_ms, where);
        return f;
    }
    if (type == "uniform") {
        UniformDelay u;
        read_if(obj, "lo_ms", u.lo_ms, where);
        read_if(obj, "hi_ms", u.hi_ms, where);
        return u;
    }
    if (type == "trace") {
        TraceDelay t;
        if (obj.contains("file")) {
            std::string file;
            std::string direction = "up";
            read_if(obj, "file", file, where);
            read_if(obj, "direction", direction, where);
            std::filesystem::path path = file;
            if (path.is_relative()) path = base_dir / path;
            const DelayTrace trace = read_delay_trace(path);
            if (direction == "up" || direction == "uplink") {
                t.delays_ms = trace.uplink;
            } else if (direction == "down" || direction == "downlink") {
                t.delays_ms = trace.downlink;
            } else {
                config_error("direction must be up or down in " + where);
            }
        } else {
            read_if(obj, "delays_ms", t.delays_ms, where);
        }
        return t;
    }
    config_error("channel type must be fixed, uniform or trace in " + where);
}

json policy_json(const DelayPolicy& policy) {
    if (const auto* f = std::get_if<FixedDelay>(&policy)) return {{"type", "fixed"}, {"delay_ms", f->delay_ms}};
    if (const auto* u = std::get_if<UniformDelay>(&policy)) {
        return {{"type", "uniform"}, {"lo_ms", u->lo_ms}, {"hi_ms", u->hi_ms}};
    }
    return {{"type", "trace"}, {"delays_ms", std::get<TraceDelay>(policy).delays_ms}};
}

std::string fmt(const char* spec, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, spec, v);
    return buf;
}

std::string optional_cell(const std::optional<double>& v) { return v ? fmt("%.6g", *v) : std::string{}; }

}  // namespace

double SetpointConfig::at(double t_s) const {
    if (t_s < start_s) return low;
    if (profile == SetpointProfile::Step) return value;
    const double half = period_s / 2.0;
    const auto phase = static_cast<long long>(std::floor((t_s - start_s) / half + 1e-9));
    return phase % 2 == 0 ? value : low;
}

void ScenarioConfig::validate() const {
    if (!(sample_time > 0.0) || !whole_millis(sample_time) || to_millis(sample_time) <= 0) {
        config_error("sample_time must be a positive whole number of milliseconds");
    }
    if (!(duration > 0.0)) config_error("duration must be positive");
    if (!(setpoint.period_s > 0.0)) config_error("setpoint period_s must be positive");
    if (!std::isfinite(setpoint.value) || !std::isfinite(setpoint.low) || !std::isfinite(setpoint.start_s)) {
        config_error("setpoint values must be finite");
    }
    for (double v : {setpoint.value, setpoint.low}) {
        if (v < 0.0 || v > 200.0) config_error("setpoint levels must be within [0, 200] rps");
    }
    if (plant.model == PlantModelKind::Published && to_millis(sample_time) != 20) {
        config_error("the published plant model is only defined at a 20 ms sample time");
    }
    if (plant.model == PlantModelKind::Custom && !(std::abs(plant.pole) < 1.0 && plant.b != 0.0)) {
        config_error("custom plant needs |pole| < 1 and b != 0");
    }
    if (!(plant.output_span_rps > 0.0)) config_error("output_span_rps must be positive");
    plant.encoder.validate();
    controller.gains.validate();
    if (std::abs(controller.gains.sample_time - sample_time) > 1e-12) {
        config_error("controller sample_time must match the scenario sample_time");
    }
    if (controller.min_duty < 0 || controller.max_duty > 255 || controller.min_duty >= controller.max_duty) {
        config_error("duty range must satisfy 0 <= min_duty < max_duty <= 255");
    }
    if (controller.integral_threshold && !std::isfinite(*controller.integral_threshold)) {
        config_error("integral_threshold must be finite");
    }
    validate_policy(channel.uplink, "uplink");
    validate_policy(channel.downlink, "downlink");
    if (smith.mode == SmithModeKind::Classical && !(smith.tau_ms >= 0.0)) {
        config_error("smith tau_ms must be non-negative");
    }
    if (smith.mode == SmithModeKind::Adaptive && !(smith.smoothing >= 0.0 && smith.smoothing < 1.0)) {
        config_error("smith smoothing must be in [0, 1)");
    }
}

RunRecord run_closed_loop(const ScenarioConfig& config) {
    config.validate();
    const Millis period = to_millis(config.sample_time);
    const auto ticks = static_cast<Millis>(std::llround(config.duration / config.sample_time));
    const Millis end_ms = ticks * period;

    Channel uplink(seeded(config.channel.uplink, mix_seed(config.seed, 0)));
    Channel downlink(seeded(config.channel.downlink, mix_seed(config.seed, 1)));
    MotorModel motor(plant_dynamics(config), 1.0 / 255.0, config.plant.output_span_rps);
    Encoder encoder(config.plant.encoder,
                    config.plant.encoder_jitter ? std::optional(mix_seed(config.seed, 2)) : std::nullopt);

    const PiGains& gains = config.controller.gains;
    ActuatorLimits limits = ActuatorLimits::for_gains(gains);
    limits.min_duty = config.controller.min_duty;
    limits.max_duty = config.controller.max_duty;
    limits.integral_threshold = config.controller.integral_threshold.value_or(
        static_cast<double>(limits.max_duty) / gains.integral_gain());
    PiState pi;
    DelayEstimator estimator(period);

    std::optional<SmithPredictor> smith;
    if (config.smith.mode == SmithModeKind::Classical) {
        smith.emplace(SmithConfig{ClassicalMode{config.smith.tau_ms / 1000.0}, smith_model(config)});
    } else if (config.smith.mode == SmithModeKind::Adaptive) {
        smith.emplace(SmithConfig{AdaptiveMode{config.smith.kind, config.smith.smoothing}, smith_model(config)});
    }

    RunRecord rec;
    rec.sample_time = config.sample_time;
    rec.rows.reserve(static_cast<std::size_t>(ticks));
    rec.estimates.reserve(static_cast<std::size_t>(ticks));

    // Plant node.
    std::uint8_t applied = 0;
    std::optional<FrameId> applied_id;
    FrameId plant_seq = 0;
    int last_sent_meas = 0;
    double last_true = 0.0;

    // Controller node.
    double last_meas = 0.0;
    std::optional<Millis> last_activation;
    FrameId ctrl_seq = 0;
    int last_duty = 0;
    Millis tm = 0;

    for (Millis t = 0; t < end_ms; ++t) {
        const bool tick = t % period == 0;
        const double now_s = static_cast<double>(t) / 1000.0;

        if (tick) {
            last_true = motor.speed();
            last_sent_meas = encoder.read(last_true);
            uplink.send(static_cast<std::uint8_t>(last_sent_meas), t, plant_seq++, applied_id);
        }

        const PollResult up = uplink.poll(t);
        bool activate = false;
        if (up.latest) {
            last_meas = up.latest->payload;
            if (up.latest->echo && estimator.is_pending(*up.latest->echo)) {
                estimator.on_receive(*up.latest->echo, t);
                rec.exchange.receives.push_back({*up.latest->echo, t});
            }
            activate = true;
        } else if (!last_activation || t - *last_activation >= period) {
            activate = true;
        }

        if (activate) {
            if (smith && smith->adaptive()) {
                // One period of the round trip is the plant's own sample delay, already in the model.
                smith->adaptive_update(std::max<Millis>(0, tm - period));
            }
            int duty = last_duty;
            if (up.latest || config.controller.vacant_policy == VacantPolicy::Recompute || !last_activation) {
                const double correction = smith ? smith->feedback() * config.plant.output_span_rps : 0.0;
                const double error = config.setpoint.at(now_s) - (last_meas + correction);
                duty = pi_step(gains, pi, limits, error);
            }
            if (smith) smith->smith_correction(static_cast<double>(duty) / 255.0);
            const FrameId id = ctrl_seq++;
            downlink.send(static_cast<std::uint8_t>(duty), t, id);
            estimator.on_send(id, t);
            rec.exchange.sends.push_back({id, t});
            last_activation = t;
            last_duty = duty;
            ++rec.controller_activations;
        }

        if (tick) {
            const DelayEstimate est = estimator.estimate_at_sample(t);
            tm = est.tm_ms;
            rec.estimates.push_back(est);

            const PollResult down = downlink.poll(t);
            if (down.latest) {
                applied = down.latest->payload;
                applied_id = down.latest->id;
            }
            motor.motor_step(applied);

            rec.rows.push_back(RunRow{t, config.setpoint.at(now_s), last_sent_meas, last_true, applied, tm, est.event});
        }

        if (uplink.sent() != uplink.delivered() + uplink.in_flight() ||
            downlink.sent() != downlink.delivered() + downlink.in_flight()) {
            rec.conservation_held = false;
        }
    }

    rec.uplink = {uplink.sent(), uplink.delivered(), uplink.in_flight()};
    rec.downlink = {downlink.sent(), downlink.delivered(), downlink.in_flight()};
    return rec;
}

Metrics compute_metrics(std::span<const double> y, double setpoint, double sample_time, double initial) {
    if (y.empty()) throw Error(ErrorKind::Domain, "empty trace");
    if (!(sample_time > 0.0)) throw Error(ErrorKind::Domain, "sample_time must be positive");
    Metrics m;
    const std::size_t n = y.size();
    for (std::size_t k = 0; k < n; ++k) {
        const double e = setpoint - y[k];
        m.ise += e * e * sample_time;
        if (k >= n / 2) m.trailing_half_ise += e * e * sample_time;
    }
    const std::size_t tail = std::max<std::size_t>(1, n / 10);
    const double tail_mean = std::accumulate(y.end() - static_cast<std::ptrdiff_t>(tail), y.end(), 0.0) /
                             static_cast<double>(tail);
    m.steady_state_error = setpoint - tail_mean;

    const double step = setpoint - initial;
    if (step != 0.0) {
        const double extreme = step > 0.0 ? *std::max_element(y.begin(), y.end()) : *std::min_element(y.begin(), y.end());
        m.overshoot_pct = std::max(0.0, (extreme - setpoint) / step * 100.0);
        const double band = 0.02 * std::abs(step);
        std::size_t k = n;
        while (k > 0 && std::abs(y[k - 1] - setpoint) <= band) --k;
        if (k < n) m.settling_time_s = static_cast<double>(k) * sample_time;
    }
    return m;
}

Metrics compute_metrics(const RunRecord& record) {
    const auto& rows = record.rows;
    if (rows.empty()) throw Error(ErrorKind::Domain, "empty run");
    std::size_t segment = 0;
    for (std::size_t k = 1; k < rows.size(); ++k) {
        if (rows[k].setpoint != rows[k - 1].setpoint) segment = k;
    }
    std::vector<double> y;
    y.reserve(rows.size() - segment);
    for (std::size_t k = segment; k < rows.size(); ++k) y.push_back(rows[k].speed_meas);
    const double initial = segment == 0 ? 0.0 : rows[segment - 1].setpoint;
    Metrics m = compute_metrics(y, rows.back().setpoint, record.sample_time, initial);

    m.ise = 0.0;
    m.trailing_half_ise = 0.0;
    const std::size_t n = rows.size();
    for (std::size_t k = 0; k < n; ++k) {
        const double e = rows[k].setpoint - rows[k].speed_meas;
        m.ise += e * e * record.sample_time;
        if (k >= n / 2) m.trailing_half_ise += e * e * record.sample_time;
    }
    return m;
}

// Presets ------------------------------------------------------------------

ChannelConfig fixed_rtt_channel(Millis rtt_ms) {
    if (rtt_ms < 0) config_error("round trip must be non-negative");
    return ChannelConfig{FixedDelay{rtt_ms / 2}, FixedDelay{rtt_ms - rtt_ms / 2}};
}

std::vector<std::string> channel_preset_names() {
    return {"wired", "p2p-80ms", "p2p-60ms", "intermediate-uniform", "intermediate-trace"};
}

std::vector<std::string> smith_preset_names() { return {"none", "classical-60ms", "adaptive-dfr", "adaptive-pade"}; }

ScenarioConfig make_preset(std::string_view channel, std::string_view smith) {
    ScenarioConfig c;
    c.name = std::string(channel);
    if (channel == "wired") {
        c.channel = fixed_rtt_channel(0);
    } else if (channel == "p2p-80ms") {
        c.channel = fixed_rtt_channel(80);
    } else if (channel == "p2p-60ms") {
        c.channel = fixed_rtt_channel(60);
    } else if (channel == "intermediate-uniform") {
        c.channel = ChannelConfig{UniformDelay{80, 200, 0}, UniformDelay{80, 200, 0}};
    } else if (channel == "intermediate-trace") {
        c.channel = ChannelConfig{TraceDelay{builtin_intermediate_trace()}, TraceDelay{builtin_intermediate_trace()}};
        // Offset the downlink so the two directions are not in lockstep.
        auto& down = std::get<TraceDelay>(c.channel.downlink).delays_ms;
        std::rotate(down.begin(), down.begin() + static_cast<std::ptrdiff_t>(down.size() / 2), down.end());
    } else {
        config_error("unknown channel preset '" + std::string(channel) + "'");
    }

    if (smith == "none") {
        c.smith.mode = SmithModeKind::Off;
    } else if (smith == "classical-60ms") {
        c.smith.mode = SmithModeKind::Classical;
        c.smith.tau_ms = 60.0;
    } else if (smith == "adaptive-dfr") {
        c.smith.mode = SmithModeKind::Adaptive;
        c.smith.kind = ApproxKind::DFR;
    } else if (smith == "adaptive-pade") {
        c.smith.mode = SmithModeKind::Adaptive;
        c.smith.kind = ApproxKind::Pade2;
    } else {
        config_error("unknown smith preset '" + std::string(smith) + "'");
    }
    if (smith != "none") c.name += "+" + std::string(smith);
    return c;
}

// Config file I/O ----------------------------------------------------------

namespace {

ScenarioConfig parse_document(const json& doc, const std::filesystem::path& base_dir) {
    ScenarioConfig c;
    check_keys(doc, {"name", "sample_time", "duration", "seed", "setpoint", "plant", "controller", "channel", "smith"},
               "scenario");
    read_if(doc, "name", c.name, "scenario");
    read_if(doc, "sample_time", c.sample_time, "scenario");
    read_if(doc, "duration", c.duration, "scenario");
    read_if(doc, "seed", c.seed, "scenario");
    c.controller.gains.sample_time = c.sample_time;

    if (doc.contains("setpoint")) {
        const json& s = doc.at("setpoint");
        check_keys(s, {"value", "start_s", "profile", "period_s", "low"}, "setpoint");
        read_if(s, "value", c.setpoint.value, "setpoint");
        read_if(s, "start_s", c.setpoint.start_s, "setpoint");
        read_if(s, "period_s", c.setpoint.period_s, "setpoint");
        read_if(s, "low", c.setpoint.low, "setpoint");
        std::string profile = "step";
        read_if(s, "profile", profile, "setpoint");
        if (profile == "step") {
            c.setpoint.profile = SetpointProfile::Step;
        } else if (profile == "square") {
            c.setpoint.profile = SetpointProfile::Square;
        } else {
            config_error("setpoint profile must be step or square");
        }
    }

    if (doc.contains("plant")) {
        const json& p = doc.at("plant");
        check_keys(p, {"model", "b", "pole", "output_span_rps", "encoder_slots", "encoder_window", "encoder_jitter"},
                   "plant");
        std::string model = "published";
        read_if(p, "model", model, "plant");
        if (model == "published") {
            c.plant.model = PlantModelKind::Published;
        } else if (model == "identified") {
            c.plant.model = PlantModelKind::Identified;
        } else if (model == "custom") {
            c.plant.model = PlantModelKind::Custom;
        } else {
            config_error("plant model must be published, identified or custom");
        }
        read_if(p, "b", c.plant.b, "plant");
        read_if(p, "pole", c.plant.pole, "plant");
        read_if(p, "output_span_rps", c.plant.output_span_rps, "plant");
        read_if(p, "encoder_slots", c.plant.encoder.slots, "plant");
        read_if(p, "encoder_window", c.plant.encoder.window, "plant");
        read_if(p, "encoder_jitter", c.plant.encoder_jitter, "plant");
    }

    if (doc.contains("controller")) {
        const json& k = doc.at("controller");
        check_keys(k, {"kp", "ki", "min_duty", "max_duty", "integral_threshold", "vacant_policy"}, "controller");
        read_if(k, "kp", c.controller.gains.kp, "controller");
        read_if(k, "ki", c.controller.gains.ki, "controller");
        read_if(k, "min_duty", c.controller.min_duty, "controller");
        read_if(k, "max_duty", c.controller.max_duty, "controller");
        if (k.contains("integral_threshold")) {
            double v = 0.0;
            read_if(k, "integral_threshold", v, "controller");
            c.controller.integral_threshold = v;
        }
        std::string vacant = "recompute";
        read_if(k, "vacant_policy", vacant, "controller");
        if (vacant == "recompute") {
            c.controller.vacant_policy = VacantPolicy::Recompute;
        } else if (vacant == "hold") {
            c.controller.vacant_policy = VacantPolicy::Hold;
        } else {
            config_error("vacant_policy must be recompute or hold");
        }
    }

    if (doc.contains("channel")) {
        const json& ch = doc.at("channel");
        check_keys(ch, {"uplink", "downlink"}, "channel");
        if (ch.contains("uplink")) c.channel.uplink = parse_policy(ch.at("uplink"), "channel.uplink", base_dir);
        if (ch.contains("downlink")) c.channel.downlink = parse_policy(ch.at("downlink"), "channel.downlink", base_dir);
    }

    if (doc.contains("smith")) {
        const json& s = doc.at("smith");
        check_keys(s, {"mode", "kind", "tau_ms", "smoothing"}, "smith");
        std::string mode = "off";
        read_if(s, "mode", mode, "smith");
        if (mode == "off") {
            c.smith.mode = SmithModeKind::Off;
        } else if (mode == "classical") {
            c.smith.mode = SmithModeKind::Classical;
        } else if (mode == "adaptive") {
            c.smith.mode = SmithModeKind::Adaptive;
        } else {
            config_error("smith mode must be off, classical or adaptive");
        }
        if (s.contains("kind")) {
            std::string kind;
            read_if(s, "kind", kind, "smith");
            const auto parsed = parse_approx_kind(kind);
            if (!parsed) config_error("unknown delay approximation '" + kind + "'");
            c.smith.kind = *parsed;
        }
        read_if(s, "tau_ms", c.smith.tau_ms, "smith");
        read_if(s, "smoothing", c.smith.smoothing, "smith");
    }

    c.validate();
    return c;
}

}  // namespace

ScenarioConfig parse_scenario(std::string_view json_text) {
    json doc;
    try {
        doc = json::parse(json_text.begin(), json_text.end());
    } catch (const json::parse_error& e) {
        throw Error(ErrorKind::Parse, std::string("scenario JSON: ") + e.what());
    }
    return parse_document(doc, std::filesystem::current_path());
}

ScenarioConfig load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::Configuration, "cannot open " + path.string());
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw Error(ErrorKind::Parse, path.string() + ": " + e.what());
    }
    return parse_document(doc, path.parent_path());
}

std::string scenario_to_json(const ScenarioConfig& c) {
    json doc;
    doc["name"] = c.name;
    doc["sample_time"] = c.sample_time;
    doc["duration"] = c.duration;
    doc["seed"] = c.seed;
    doc["setpoint"] = {{"value", c.setpoint.value},
                       {"start_s", c.setpoint.start_s},
                       {"profile", c.setpoint.profile == SetpointProfile::Step ? "step" : "square"},
                       {"period_s", c.setpoint.period_s},
                       {"low", c.setpoint.low}};
    const char* model = c.plant.model == PlantModelKind::Published    ? "published"
                        : c.plant.model == PlantModelKind::Identified ? "identified"
                                                                      : "custom";
    doc["plant"] = {{"model", model},
                    {"b", c.plant.b},
                    {"pole", c.plant.pole},
                    {"output_span_rps", c.plant.output_span_rps},
                    {"encoder_slots", c.plant.encoder.slots},
                    {"encoder_window", c.plant.encoder.window},
                    {"encoder_jitter", c.plant.encoder_jitter}};
    json ctrl = {{"kp", c.controller.gains.kp},
                 {"ki", c.controller.gains.ki},
                 {"min_duty", c.controller.min_duty},
                 {"max_duty", c.controller.max_duty},
                 {"vacant_policy", c.controller.vacant_policy == VacantPolicy::Recompute ? "recompute" : "hold"}};
    if (c.controller.integral_threshold) ctrl["integral_threshold"] = *c.controller.integral_threshold;
    doc["controller"] = ctrl;
    doc["channel"] = {{"uplink", policy_json(c.channel.uplink)}, {"downlink", policy_json(c.channel.downlink)}};
    const char* mode = c.smith.mode == SmithModeKind::Off         ? "off"
                       : c.smith.mode == SmithModeKind::Classical ? "classical"
                                                                  : "adaptive";
    doc["smith"] = {{"mode", mode},
                    {"kind", std::string(to_string(c.smith.kind))},
                    {"tau_ms", c.smith.tau_ms},
                    {"smoothing", c.smith.smoothing}};
    return doc.dump(2);
}

// Outputs ------------------------------------------------------------------

void write_run_csv(std::ostream& out, const RunRecord& record) {
    out << "t_ms,setpoint,speed_meas,speed_true,duty,tm_ms,event\n";
    for (const auto& r : record.rows) {
        out << r.t_ms << ',' << fmt("%.6g", r.setpoint) << ',' << r.speed_meas << ',' << fmt("%.6f", r.speed_true)
            << ',' << r.duty << ',' << r.tm_ms << ',' << to_string(r.event) << '\n';
    }
}

void write_metrics_csv(std::ostream& out, const Metrics& m) {
    out << "overshoot_pct,settling_time_s,steady_state_error,ise,trailing_half_ise\n";
    out << optional_cell(m.overshoot_pct) << ',' << optional_cell(m.settling_time_s) << ','
        << fmt("%.6g", m.steady_state_error) << ',' << fmt("%.6g", m.ise) << ',' << fmt("%.6g", m.trailing_half_ise)
        << '\n';
}

void write_outputs(const std::filesystem::path& dir, const ScenarioConfig& config, const RunRecord& record) {
    std::filesystem::create_directories(dir);
    auto open = [&](const char* name) {
        std::ofstream f(dir / name);
        if (!f) throw Error(ErrorKind::Configuration, "cannot write " + (dir / name).string());
        return f;
    };
    {
        auto f = open("run.csv");
        write_run_csv(f, record);
    }
    {
        auto f = open("metrics.csv");
        write_metrics_csv(f, compute_metrics(record));
    }
    {
        auto f = open("estimates.csv");
        write_estimate_csv(f, record.estimates);
    }
    {
        auto f = open("config.json");
        f << scenario_to_json(config) << '\n';
    }
    {
        auto f = open("plot.gp");
        f << "set datafile separator ','\n"
             "set key autotitle columnhead\n"
             "set xlabel 'time (ms)'\n"
             "set multiplot layout 3,1 title '"
          << config.name
          << "'\n"
             "set ylabel 'speed (rps)'\n"
             "plot 'run.csv' using 1:2 with lines, '' using 1:3 with steps, '' using 1:4 with lines\n"
             "set ylabel 'duty'\n"
             "plot 'run.csv' using 1:5 with steps\n"
             "set ylabel 'delay estimate (ms)'\n"
             "plot 'run.csv' using 1:6 with steps\n"
             "unset multiplot\n";
    }
}

}  // namespace wncs
