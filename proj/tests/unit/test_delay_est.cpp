#include <doctest.h>

#include <sstream>

#include "oracles.hpp"
#include "wncs/delay_est.hpp"
#include "wncs/error.hpp"
#include "wncs/scenario.hpp"

using namespace wncs;

namespace {

std::vector<oracle::LoggedEvent> to_oracle(const std::vector<ExchangeEvent>& events) {
    std::vector<oracle::LoggedEvent> out;
    for (const auto& e : events) out.push_back({e.id, e.t});
    return out;
}

}  // namespace

TEST_CASE("sends become pending and duplicates are refused") {
    DelayEstimator est;
    est.on_send(50, 0);
    CHECK(est.is_pending(50));
    est.on_send(60, 23);
    CHECK(est.pending().size() == 2);
    try {
        est.on_send(60, 30);
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Protocol);
    }
}

TEST_CASE("receives return the round trip") {
    DelayEstimator est;
    est.on_send(50, 0);
    est.on_send(60, 23);
    CHECK(est.on_receive(50, 74) == 74);
    CHECK(est.on_receive(60, 83) == 60);
    est.on_send(70, 100);
    CHECK(est.on_receive(70, 100) == 0);
    try {
        est.on_receive(99, 120);
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::OrphanFrame);
    }
}

TEST_CASE("a receive supersedes older pending frames") {
    DelayEstimator est;
    est.on_send(1, 0);
    est.on_send(2, 20);
    est.on_send(3, 40);
    est.on_receive(2, 60);
    CHECK_FALSE(est.is_pending(1));
    CHECK_FALSE(est.is_pending(2));
    CHECK(est.is_pending(3));
}

TEST_CASE("reference exchange reproduces the estimate column") {
    const auto estimates = replay(reference_exchange(), 20, 160);
    const std::vector<Millis> expected{0, 20, 40, 60, 74, 60, 63, 50, 60};
    REQUIRE(estimates.size() == expected.size());
    for (std::size_t i = 0; i < expected.size(); ++i) {
        CHECK(estimates[i].sample_ms == static_cast<Millis>(20 * i));
        CHECK(estimates[i].tm_ms == expected[i]);
    }
    CHECK(estimates[3].event == FrameEvent::VacantSampling);
    CHECK(estimates[4].event == FrameEvent::DelayedTransmission);
}

TEST_CASE("closed form over the first vacant run sums the send intervals") {
    const auto estimates = replay(reference_exchange(), 20, 160);
    REQUIRE(estimates[4].formula_tm_ms);
    CHECK(*estimates[4].formula_tm_ms == 23 + 22 + 29);
    CHECK(*estimates[4].formula_tm_ms == estimates[4].tm_ms);

    DelayEstimator est;
    for (const auto& s : reference_exchange().sends) est.on_send(static_cast<FrameId>(s.id), s.t);
    const auto [sum, past] = est.interval_sum(0, 74);
    CHECK(sum == 74);
    CHECK(past == 3);
}

TEST_CASE("closed form agrees with the measured round trip on every arrival") {
    const auto estimates = replay(reference_exchange(), 20, 160);
    for (const auto& e : estimates) {
        if (e.rtt_ms) CHECK(e.formula_tm_ms == e.rtt_ms);
    }
}

TEST_CASE("short round trips are normal transmissions") {
    ExchangeLog log;
    for (FrameId i = 0; i < 10; ++i) {
        log.sends.push_back({i, static_cast<Millis>(20 * i)});
        log.receives.push_back({i, static_cast<Millis>(20 * i + 5 + i)});
    }
    const auto estimates = replay(log, 20, 200);
    for (std::size_t k = 1; k < 10; ++k) {
        CHECK(estimates[k].event == FrameEvent::NormalTransmission);
        CHECK(estimates[k].tm_ms == static_cast<Millis>(5 + k - 1));
    }
}

TEST_CASE("estimate grows by one period per vacant tick and never goes negative") {
    ExchangeLog log;
    log.sends.push_back({0, 0});
    log.receives.push_back({0, 130});
    const auto estimates = replay(log, 20, 300);
    for (std::size_t k = 1; k < estimates.size(); ++k) {
        CHECK(estimates[k].tm_ms >= 0);
        if (estimates[k].event == FrameEvent::VacantSampling) {
            CHECK(estimates[k].tm_ms == estimates[k - 1].tm_ms + 20);
        }
    }
    CHECK(estimates[7].tm_ms == 130);
}

TEST_CASE("no traffic keeps the estimate at zero") {
    DelayEstimator est;
    CHECK(est.estimate_at_sample(0).tm_ms == 0);
    CHECK(est.estimate_at_sample(20).tm_ms == 0);
}

TEST_CASE("several echoes in one period keep the newest") {
    DelayEstimator est;
    est.on_send(1, 0);
    est.on_send(2, 5);
    est.on_receive(1, 22);
    est.on_receive(2, 30);
    const DelayEstimate e = est.estimate_at_sample(40);
    CHECK(e.event == FrameEvent::MessageRejection);
    CHECK(e.tm_ms == 25);
    CHECK(e.arrivals == 2);
}

TEST_CASE("closed-loop exchanges agree with the rule oracle") {
    for (std::uint64_t seed = 1; seed <= 40; ++seed) {
        ScenarioConfig cfg = make_preset("intermediate-uniform");
        if (seed % 2 == 0) cfg.channel = ChannelConfig{UniformDelay{0, 30, 0}, UniformDelay{0, 30, 0}};
        cfg.seed = seed;
        cfg.duration = 3.0;
        const RunRecord rec = run_closed_loop(cfg);
        const Millis last = rec.rows.back().t_ms;
        const auto expected =
            oracle::estimate_by_rules(to_oracle(rec.exchange.sends), to_oracle(rec.exchange.receives), 20, last);
        REQUIRE(expected.size() == rec.estimates.size());
        for (std::size_t k = 0; k < expected.size(); ++k) {
            CHECK(rec.estimates[k].tm_ms == expected[k].tm_ms);
            CHECK(to_string(rec.estimates[k].event) == expected[k].event);
        }
    }
}

TEST_CASE("estimate csv layout") {
    std::ostringstream out;
    const auto estimates = replay(reference_exchange(), 20, 80);
    write_estimate_csv(out, estimates);
    const std::string s = out.str();
    CHECK(s.rfind("sample_ms,event,rtt_ms,tm_ms\n", 0) == 0);
    CHECK(s.find("0,vacant,,0\n") != std::string::npos);
    CHECK(s.find("80,delayed,74,74\n") != std::string::npos);
}
