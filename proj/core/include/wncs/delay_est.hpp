#pragma once

#include <deque>
#include <optional>
#include <ostream>
#include <span>
#include <utility>
#include <vector>

#include "wncs/netchan.hpp"

namespace wncs {

/// A control frame whose echo came back: sent at t1, echo received at t2.
struct Arrival {
    FrameId id = 0;
    Millis t1 = 0;
    Millis t2 = 0;

    Millis rtt() const noexcept { return t2 - t1; }
};

struct DelayEstimate {
    Millis sample_ms = 0;
    FrameEvent event = FrameEvent::VacantSampling;
    std::optional<Millis> rtt_ms;        // RTT of the accepted arrival, if any
    Millis tm_ms = 0;                    // estimated delay
    std::size_t arrivals = 0;            // echoes received during the period
    std::optional<Millis> formula_tm_ms; // closed-form sum of send intervals for the accepted arrival
};

/**
 * Round-trip delay estimator living on the controller node.
 *
 * Sends and echo receptions are reported as they happen; once per sampling
 * tick estimate_at_sample() applies the four rules to the echoes received in
 * (sample - period, sample]:
 *   - none received:         previous estimate + one period (vacant sampling)
 *   - one, RTT < period:     that RTT (normal transmission)
 *   - one, RTT >= period:    that RTT (delayed transmission)
 *   - two or more:           RTT of the most recent, others dropped (message rejection)
 * Before any frame was sent the estimate stays at 0.
 */
class DelayEstimator {
public:
    explicit DelayEstimator(Millis period_ms = 20);

    /// Registers a sent frame. A duplicate pending id is a protocol error.
    void on_send(FrameId id, Millis t1);

    /// Matches an echo to its pending send and returns the RTT. Pending frames sent
    /// before `id` are discarded: on a FIFO link their echoes can no longer arrive.
    Millis on_receive(FrameId id, Millis t2);

    bool is_pending(FrameId id) const;
    std::span<const std::pair<FrameId, Millis>> pending() const noexcept { return pending_; }

    /// Consumes the echoes recorded by on_receive() since the previous tick.
    DelayEstimate estimate_at_sample(Millis sample_ms);

    /// Same rules applied to an explicit list of arrivals in time order.
    DelayEstimate estimate_at_sample(Millis sample_ms, std::span<const Arrival> arrivals);

    /**
     * Closed form of the estimate for a frame sent at t1 and echoed at t2: the
     * present difference t2 - (last send <= t2) plus the past send-to-send
     * differences back to t1. Returns the sum and the number of past terms.
     */
    std::pair<Millis, std::size_t> interval_sum(Millis t1, Millis t2) const;

    Millis period_ms() const noexcept { return period_; }
    Millis last_estimate() const noexcept { return last_estimate_; }
    std::optional<Millis> last_rtt() const noexcept { return last_rtt_; }

private:
    void prune_history();

    Millis period_;
    std::vector<std::pair<FrameId, Millis>> pending_;  // send order
    std::vector<Arrival> period_arrivals_;
    std::deque<Millis> send_times_;
    std::optional<Millis> first_send_;
    std::optional<Millis> last_rtt_;
    Millis last_estimate_ = 0;
};

struct ExchangeEvent {
    FrameId id = 0;
    Millis t = 0;
};

/// Timestamped sends and echo receptions seen by the controller node.
struct ExchangeLog {
    std::vector<ExchangeEvent> sends;
    std::vector<ExchangeEvent> receives;
};

/// The worked RTT example: nine bytes (50..130) with their send and echo times.
ExchangeLog reference_exchange();

/**
 * Feeds a log through a fresh estimator in time order (receptions, then sends,
 * then the sampling tick at equal timestamps) and returns one estimate per tick
 * at 0, period, 2*period, ... up to and including last_sample_ms.
 */
std::vector<DelayEstimate> replay(const ExchangeLog& log, Millis period_ms, Millis last_sample_ms);

/// CSV `sample_ms,event,rtt_ms,tm_ms`; rtt_ms is empty on vacant ticks.
void write_estimate_csv(std::ostream& out, std::span<const DelayEstimate> estimates);

}  // namespace wncs
