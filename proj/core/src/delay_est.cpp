#include "wncs/delay_est.hpp"

#include <algorithm>
#include <string>

#include "wncs/error.hpp"

namespace wncs {

DelayEstimator::DelayEstimator(Millis period_ms) : period_(period_ms) {
    if (period_ <= 0) throw Error(ErrorKind::Configuration, "estimator period must be positive");
}

void DelayEstimator::on_send(FrameId id, Millis t1) {
    if (is_pending(id)) throw Error(ErrorKind::Protocol, "frame id " + std::to_string(id) + " is already pending");
    pending_.emplace_back(id, t1);
    send_times_.push_back(t1);
    if (!first_send_) first_send_ = t1;
}

Millis DelayEstimator::on_receive(FrameId id, Millis t2) {
    const auto it = std::find_if(pending_.begin(), pending_.end(), [id](const auto& p) { return p.first == id; });
    if (it == pending_.end()) throw Error(ErrorKind::OrphanFrame, "no pending frame with id " + std::to_string(id));
    const Arrival a{id, it->second, t2};
    pending_.erase(pending_.begin(), it + 1);
    period_arrivals_.push_back(a);
    return a.rtt();
}

bool DelayEstimator::is_pending(FrameId id) const {
    return std::any_of(pending_.begin(), pending_.end(), [id](const auto& p) { return p.first == id; });
}

DelayEstimate DelayEstimator::estimate_at_sample(Millis sample_ms) {
    const auto arrivals = std::move(period_arrivals_);
    period_arrivals_.clear();
    return estimate_at_sample(sample_ms, arrivals);
}

DelayEstimate DelayEstimator::estimate_at_sample(Millis sample_ms, std::span<const Arrival> arrivals) {
    DelayEstimate est;
    est.sample_ms = sample_ms;
    est.arrivals = arrivals.size();

    if (arrivals.empty()) {
        const bool traffic = first_send_ && *first_send_ < sample_ms;
        est.tm_ms = traffic ? last_estimate_ + period_ : last_estimate_;
    } else {
        const Arrival& accepted = arrivals.back();
        est.rtt_ms = accepted.rtt();
        est.tm_ms = accepted.rtt();
        est.formula_tm_ms = interval_sum(accepted.t1, accepted.t2).first;
        last_rtt_ = accepted.rtt();
    }
    est.event = classify(EventContext{est.rtt_ms, arrivals.size(), period_});
    last_estimate_ = est.tm_ms;
    prune_history();
    return est;
}

std::pair<Millis, std::size_t> DelayEstimator::interval_sum(Millis t1, Millis t2) const {
    // Send instants inside [t1, t2]; the last one anchors the present difference.
    std::vector<Millis> stamps;
    for (Millis s : send_times_) {
        if (s >= t1 && s <= t2) stamps.push_back(s);
    }
    if (stamps.empty()) return {t2 - t1, 0};
    Millis total = t2 - stamps.back();
    std::size_t past = 0;
    if (stamps.front() != t1) {
        total += stamps.front() - t1;
        ++past;
    }
    for (std::size_t i = 1; i < stamps.size(); ++i) {
        total += stamps[i] - stamps[i - 1];
        ++past;
    }
    return {total, past};
}

void DelayEstimator::prune_history() {
    Millis keep_from = send_times_.empty() ? 0 : send_times_.back();
    for (const auto& p : pending_) keep_from = std::min(keep_from, p.second);
    while (!send_times_.empty() && send_times_.front() < keep_from) send_times_.pop_front();
}

ExchangeLog reference_exchange() {
    ExchangeLog log;
    log.sends = {{50, 0}, {60, 23}, {70, 45}, {80, 74}, {90, 83}, {100, 108}, {110, 124}, {120, 143}, {130, 167}};
    log.receives = {{50, 74}, {60, 83}, {70, 108}, {80, 124}, {90, 143}, {100, 167}, {110, 184}};
    return log;
}

std::vector<DelayEstimate> replay(const ExchangeLog& log, Millis period_ms, Millis last_sample_ms) {
    enum class Kind { Receive = 0, Send = 1, Sample = 2 };
    struct Event {
        Millis t;
        Kind kind;
        FrameId id;
    };
    std::vector<Event> events;
    for (const auto& r : log.receives) events.push_back({r.t, Kind::Receive, r.id});
    for (const auto& s : log.sends) events.push_back({s.t, Kind::Send, s.id});
    for (Millis t = 0; t <= last_sample_ms; t += period_ms) events.push_back({t, Kind::Sample, 0});
    std::stable_sort(events.begin(), events.end(), [](const Event& a, const Event& b) {
        return a.t != b.t ? a.t < b.t : static_cast<int>(a.kind) < static_cast<int>(b.kind);
    });

    DelayEstimator est(period_ms);
    std::vector<DelayEstimate> out;
    for (const auto& e : events) {
        switch (e.kind) {
            case Kind::Receive: est.on_receive(e.id, e.t); break;
            case Kind::Send: est.on_send(e.id, e.t); break;
            case Kind::Sample: out.push_back(est.estimate_at_sample(e.t)); break;
        }
    }
    return out;
}

void write_estimate_csv(std::ostream& out, std::span<const DelayEstimate> estimates) {
    out << "sample_ms,event,rtt_ms,tm_ms\n";
    for (const auto& e : estimates) {
        out << e.sample_ms << ',' << to_string(e.event) << ',';
        if (e.rtt_ms) out << *e.rtt_ms;
        out << ',' << e.tm_ms << '\n';
    }
}

}  // namespace wncs
