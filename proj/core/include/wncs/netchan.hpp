#pragma once

#include <cstdint>
#include <deque>
#include <filesystem>
#include <istream>
#include <optional>
#include <random>
#include <string_view>
#include <variant>
#include <vector>

namespace wncs {

/// Simulation clock, integer milliseconds.
using Millis = std::int64_t;
using FrameId = std::uint32_t;

/**
 * One byte on the wire plus simulation bookkeeping. `id` is unique per sender;
 * `echo` carries the id of the last control frame the plant node applied, which
 * is how the controller node closes its round-trip measurement.
 */
struct Frame {
    std::uint8_t payload = 0;
    FrameId id = 0;
    std::optional<FrameId> echo;
    Millis send_time = 0;
    Millis deliver_time = 0;
};

struct FixedDelay {
    Millis delay_ms = 0;
};

/// Inclusive [lo_ms, hi_ms].
struct UniformDelay {
    Millis lo_ms = 0;
    Millis hi_ms = 0;
    std::uint64_t seed = 0;
};

/// Replays the listed delays in order, wrapping around at the end.
struct TraceDelay {
    std::vector<Millis> delays_ms;
};

using DelayPolicy = std::variant<FixedDelay, UniformDelay, TraceDelay>;

struct PollResult {
    std::optional<Frame> latest;
    std::size_t drained = 0;
};

/**
 * One direction of a lossless serial link. Frames are never dropped or
 * reordered: a sampled delay that would overtake the previous frame is raised
 * to that frame's delivery time.
 */
class Channel {
public:
    explicit Channel(DelayPolicy policy);

    /// Enqueues and returns the frame with its delivery time filled in.
    Frame send(std::uint8_t payload, Millis now, FrameId id = 0, std::optional<FrameId> echo = std::nullopt);

    /// Latest frame with deliver_time <= now; older deliverable frames are dropped and counted.
    PollResult poll(Millis now);

    std::uint64_t sent() const noexcept { return sent_; }
    std::uint64_t delivered() const noexcept { return delivered_; }
    std::uint64_t in_flight() const noexcept { return queue_.size(); }
    const DelayPolicy& policy() const noexcept { return policy_; }

private:
    Millis sample_delay();

    DelayPolicy policy_;
    std::mt19937_64 rng_;
    std::size_t trace_pos_ = 0;
    std::deque<Frame> queue_;
    Millis last_deliver_ = 0;
    std::uint64_t sent_ = 0;
    std::uint64_t delivered_ = 0;
};

/// Plant node is clock driven; the controller node reacts to arrivals.
struct NodeClocking {
    Millis plant_period_ms = 20;
    bool controller_event_driven = true;
};

enum class FrameEvent { NormalTransmission, VacantSampling, MessageRejection, DelayedTransmission };

std::string_view to_string(FrameEvent e);

struct EventContext {
    std::optional<Millis> rtt_ms;
    std::size_t drained = 0;
    Millis period_ms = 20;
};

FrameEvent classify(const EventContext& ctx);

/// sample_rate * bit_depth * channels, in bit/s.
double bit_rate(double sample_rate_hz, int bit_depth, int channels);

struct DelayTrace {
    std::vector<Millis> uplink;
    std::vector<Millis> downlink;
};

/// CSV with header `direction,delay_ms`; direction is `up` or `down`.
DelayTrace read_delay_trace(std::istream& in);
DelayTrace read_delay_trace(const std::filesystem::path& path);

}  // namespace wncs
