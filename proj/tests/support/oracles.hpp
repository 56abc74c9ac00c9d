#pragma once

// Reference computations written independently of the library code paths.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace oracle {

/// First n impulse-response terms of num/den (ascending z^-1) by polynomial long division.
inline std::vector<double> impulse_by_division(const std::vector<double>& num, const std::vector<double>& den,
                                               std::size_t n) {
    std::vector<double> rem(n + num.size(), 0.0);
    std::copy(num.begin(), num.end(), rem.begin());
    std::vector<double> h(n, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
        h[k] = rem[k] / den[0];
        for (std::size_t j = 0; j < den.size() && k + j < rem.size(); ++j) rem[k + j] -= h[k] * den[j];
    }
    return h;
}

/// Bilinear-discretized DFR approximant at T = 0.02 as (num, den) in ascending z^-1,
/// built from the z-domain coefficients c, d, e and normalized so den[0] = 1.
struct Quadratic {
    std::vector<double> num;
    std::vector<double> den;
};

inline Quadratic dfr_closed_form(double tau) {
    const double c = 1.0 + 100.0 * tau * (9.54 * tau - 0.49);
    const double d = 2.0 - 1908.0 * tau * tau;
    const double e = 1.0 + 100.0 * tau * (9.54 * tau + 0.49);
    return {{c / e, d / e, e / e}, {1.0, d / e, c / e}};
}

/// Second-order Pade (12 - 6x + x^2)/(12 + 6x + x^2), x = s tau, hand-substituted with A = 100 tau.
inline Quadratic pade2_closed_form(double tau) {
    const double a = 100.0 * tau;
    const double lo = 12.0 - 6.0 * a + a * a;
    const double mid = 24.0 - 2.0 * a * a;
    const double hi = 12.0 + 6.0 * a + a * a;
    return {{lo / hi, mid / hi, hi / hi}, {1.0, mid / hi, lo / hi}};
}

struct LoggedEvent {
    std::uint32_t id;
    std::int64_t t;
};

struct OracleEstimate {
    std::int64_t sample_ms;
    std::string event;  // normal, vacant, rejection, delayed
    std::optional<std::int64_t> rtt_ms;
    std::int64_t tm_ms;
};

/**
 * Applies the four estimation rules directly to a logged exchange:
 * for each tick s, take the echoes received in (s - T, s]; none -> previous + T
 * (or 0 before the first send), one -> its RTT, several -> RTT of the newest.
 * Echo RTT is t2 minus the send time of the echoed id.
 */
inline std::vector<OracleEstimate> estimate_by_rules(const std::vector<LoggedEvent>& sends,
                                                     const std::vector<LoggedEvent>& receives, std::int64_t period,
                                                     std::int64_t last_sample) {
    std::map<std::uint32_t, std::int64_t> sent_at;
    for (const auto& s : sends) sent_at[s.id] = s.t;

    std::vector<OracleEstimate> out;
    std::int64_t tm = 0;
    for (std::int64_t s = 0; s <= last_sample; s += period) {
        std::vector<LoggedEvent> window;
        for (const auto& r : receives) {
            if (r.t > s - period && r.t <= s) window.push_back(r);
        }
        OracleEstimate e{s, "", std::nullopt, 0};
        if (window.empty()) {
            const bool any_sent_before =
                std::any_of(sends.begin(), sends.end(), [&](const LoggedEvent& x) { return x.t < s; });
            tm = any_sent_before ? tm + period : 0;
            e.event = "vacant";
        } else {
            const LoggedEvent& last = window.back();
            const std::int64_t rtt = last.t - sent_at.at(last.id);
            tm = rtt;
            e.rtt_ms = rtt;
            if (window.size() > 1) {
                e.event = "rejection";
            } else {
                e.event = rtt < period ? "normal" : "delayed";
            }
        }
        e.tm_ms = tm;
        out.push_back(e);
    }
    return out;
}

}  // namespace oracle
