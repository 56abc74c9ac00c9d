#include "wncs/netchan.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <string>

#include "wncs/error.hpp"

namespace wncs {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void validate(const DelayPolicy& policy) {
    std::visit(overloaded{
                   [](const FixedDelay& p) {
                       if (p.delay_ms < 0) throw Error(ErrorKind::Configuration, "negative fixed delay");
                   },
                   [](const UniformDelay& p) {
                       if (p.lo_ms < 0 || p.hi_ms < p.lo_ms) {
                           throw Error(ErrorKind::Configuration, "uniform delay needs 0 <= lo <= hi");
                       }
                   },
                   [](const TraceDelay& p) {
                       if (p.delays_ms.empty()) throw Error(ErrorKind::Configuration, "empty delay trace");
                       if (std::any_of(p.delays_ms.begin(), p.delays_ms.end(), [](Millis d) { return d < 0; })) {
                           throw Error(ErrorKind::Configuration, "negative delay in trace");
                       }
                   },
               },
               policy);
}

std::uint64_t seed_of(const DelayPolicy& policy) {
    if (const auto* u = std::get_if<UniformDelay>(&policy)) return u->seed;
    return 0;
}

}  // namespace

Channel::Channel(DelayPolicy policy) : policy_(std::move(policy)), rng_(seed_of(policy_)) { validate(policy_); }

Millis Channel::sample_delay() {
    return std::visit(overloaded{
                          [](const FixedDelay& p) { return p.delay_ms; },
                          [this](const UniformDelay& p) {
                              // Modulo mapping instead of std::uniform_int_distribution so that
                              // seeded sequences are identical across standard libraries.
                              const auto span = static_cast<std::uint64_t>(p.hi_ms - p.lo_ms) + 1;
                              return p.lo_ms + static_cast<Millis>(rng_() % span);
                          },
                          [this](const TraceDelay& p) {
                              const Millis d = p.delays_ms[trace_pos_];
                              trace_pos_ = (trace_pos_ + 1) % p.delays_ms.size();
                              return d;
                          },
                      },
                      policy_);
}

Frame Channel::send(std::uint8_t payload, Millis now, FrameId id, std::optional<FrameId> echo) {
    Frame f{payload, id, echo, now, now + sample_delay()};
    if (sent_ > 0) f.deliver_time = std::max(f.deliver_time, last_deliver_);
    last_deliver_ = f.deliver_time;
    queue_.push_back(f);
    ++sent_;
    return f;
}

PollResult Channel::poll(Millis now) {
    PollResult r;
    while (!queue_.empty() && queue_.front().deliver_time <= now) {
        r.latest = queue_.front();
        queue_.pop_front();
        ++r.drained;
    }
    delivered_ += r.drained;
    return r;
}

std::string_view to_string(FrameEvent e) {
    switch (e) {
        case FrameEvent::NormalTransmission: return "normal";
        case FrameEvent::VacantSampling: return "vacant";
        case FrameEvent::MessageRejection: return "rejection";
        case FrameEvent::DelayedTransmission: return "delayed";
    }
    return "unknown";
}

FrameEvent classify(const EventContext& ctx) {
    if (ctx.drained == 0) return FrameEvent::VacantSampling;
    if (ctx.drained >= 2) return FrameEvent::MessageRejection;
    if (ctx.rtt_ms && *ctx.rtt_ms < ctx.period_ms) return FrameEvent::NormalTransmission;
    return FrameEvent::DelayedTransmission;
}

double bit_rate(double sample_rate_hz, int bit_depth, int channels) {
    if (!(sample_rate_hz > 0.0) || bit_depth <= 0 || channels <= 0) {
        throw Error(ErrorKind::Domain, "bit rate inputs must be positive");
    }
    return sample_rate_hz * bit_depth * channels;
}

DelayTrace read_delay_trace(std::istream& in) {
    DelayTrace trace;
    std::string line;
    std::size_t line_no = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++line_no;
        line.erase(std::remove_if(line.begin(), line.end(), [](unsigned char c) { return std::isspace(c); }),
                   line.end());
        if (line.empty()) continue;
        if (!header_seen) {
            if (line != "direction,delay_ms") {
                throw Error(ErrorKind::Parse, "line " + std::to_string(line_no) + ": expected header 'direction,delay_ms'");
            }
            header_seen = true;
            continue;
        }
        const auto comma = line.find(',');
        if (comma == std::string::npos) {
            throw Error(ErrorKind::Parse, "line " + std::to_string(line_no) + ": expected 2 fields");
        }
        const std::string dir = line.substr(0, comma);
        const std::string value = line.substr(comma + 1);
        Millis delay = 0;
        try {
            std::size_t used = 0;
            delay = std::stoll(value, &used);
            if (used != value.size()) throw std::invalid_argument(value);
        } catch (const std::exception&) {
            throw Error(ErrorKind::Parse, "line " + std::to_string(line_no) + ": bad delay '" + value + "'");
        }
        if (delay < 0) throw Error(ErrorKind::Parse, "line " + std::to_string(line_no) + ": negative delay");
        if (dir == "up" || dir == "uplink") {
            trace.uplink.push_back(delay);
        } else if (dir == "down" || dir == "downlink") {
            trace.downlink.push_back(delay);
        } else {
            throw Error(ErrorKind::Parse, "line " + std::to_string(line_no) + ": unknown direction '" + dir + "'");
        }
    }
    if (!header_seen) throw Error(ErrorKind::Parse, "empty trace file");
    return trace;
}

DelayTrace read_delay_trace(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::Parse, "cannot open " + path.string());
    return read_delay_trace(in);
}

}  // namespace wncs
