#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "wncs/delay_est.hpp"
#include "wncs/error.hpp"
#include "wncs/plant.hpp"
#include "wncs/smith.hpp"

using namespace wncs;

namespace {

// Impulse response of 0.0832 z^-1/(1 - 0.92 z^-1).
double g_hat(long j) { return j >= 1 ? 0.0832 * std::pow(0.92, static_cast<double>(j - 1)) : 0.0; }

SmithPredictor classical(double tau) { return SmithPredictor(SmithConfig{ClassicalMode{tau}, smith_nominal_plant()}); }

SmithPredictor adaptive(ApproxKind kind, double smoothing = 0.0) {
    return SmithPredictor(SmithConfig{AdaptiveMode{kind, smoothing}, smith_nominal_plant()});
}

}  // namespace

TEST_CASE("zero modeled delay gives no correction") {
    SmithPredictor s = classical(0.0);
    CHECK(s.delay_samples() == 0);
    for (double u : {1.0, -3.0, 0.25, 9.0}) CHECK(s.smith_correction(u) == 0.0);
}

TEST_CASE("impulse through a three-sample model") {
    SmithPredictor s = classical(0.06);
    CHECK(s.delay_samples() == 3);
    CHECK(s.feedback() == 0.0);
    for (long k = 0; k < 40; ++k) {
        const double c = s.smith_correction(k == 0 ? 1.0 : 0.0);
        // Returned value feeds the next sample, k + 1.
        CHECK(c == doctest::Approx(g_hat(k + 1) - g_hat(k + 1 - 3)).epsilon(1e-12));
    }
}

TEST_CASE("step correction rises then returns to zero") {
    SmithPredictor s = classical(0.08);
    double peak = 0.0;
    double last = 0.0;
    for (int k = 0; k < 400; ++k) {
        last = s.smith_correction(1.0);
        peak = std::max(peak, last);
    }
    CHECK(peak > 0.1);
    CHECK(std::abs(last) < 1e-9);
}

TEST_CASE("identity with the delay-free loop under an exact model") {
    const PiGains gains = default_pi_gains();
    CHECK(predictor_identity_check(gains, published_motor_dt(), 4) < 1e-9);
    CHECK(predictor_identity_check(gains, published_motor_dt(), 0) == 0.0);
    CHECK(predictor_identity_check(gains, smith_nominal_plant(), 12) < 1e-9);
}

TEST_CASE("model mismatch breaks the identity") {
    const DiscreteTf wrong({0.0, 0.0831}, {1.0, -0.90}, 0.02);
    CHECK(predictor_identity_check(default_pi_gains(), published_motor_dt(), 4, wrong) > 1e-3);
}

TEST_CASE("adaptive model follows a constant estimate") {
    SmithPredictor s = adaptive(ApproxKind::DFR);
    s.adaptive_update(240);
    CHECK(s.modeled_delay() == doctest::Approx(0.24));
    const DiscreteTf m = s.delay_model();
    const oracle::Quadratic q = oracle::dfr_closed_form(0.24);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(std::abs(m.num()[i] - q.num[i]) < 1e-12);
        CHECK(std::abs(m.den()[i] - q.den[i]) < 1e-12);
    }
}

TEST_CASE("adaptive model with zero estimate is transparent") {
    SmithPredictor s = adaptive(ApproxKind::DFR);
    s.adaptive_update(0);
    for (int k = 0; k < 50; ++k) CHECK(std::abs(s.smith_correction(1.0)) < 1e-12);
}

TEST_CASE("adaptive correction path has zero dc gain") {
    for (ApproxKind kind : {ApproxKind::DFR, ApproxKind::Pade2, ApproxKind::Product}) {
        SmithPredictor s = adaptive(kind);
        s.adaptive_update(300);
        double c = 1.0;
        for (int k = 0; k < 3000; ++k) c = s.smith_correction(1.0);
        CHECK(std::abs(c) < 1e-9);
    }
}

TEST_CASE("adaptive coefficients track the reference estimate stream") {
    const auto estimates = replay(reference_exchange(), 20, 160);
    SmithPredictor s = adaptive(ApproxKind::DFR);
    for (const auto& e : estimates) {
        s.adaptive_update(e.tm_ms);
        s.smith_correction(1.0);
        const double tau = static_cast<double>(e.tm_ms) / 1000.0;
        const DiscreteTf m = s.delay_model();
        if (tau == 0.0) {
            CHECK(m.num()[0] == doctest::Approx(1.0));
            continue;
        }
        const oracle::Quadratic q = oracle::dfr_closed_form(tau);
        for (std::size_t i = 0; i < 3; ++i) {
            CHECK(std::abs(m.num()[i] - q.num[i]) < 1e-12);
            CHECK(std::abs(m.den()[i] - q.den[i]) < 1e-12);
        }
    }
}

TEST_CASE("smoothing blends successive estimates") {
    SmithPredictor s = adaptive(ApproxKind::Pade2, 0.5);
    s.adaptive_update(100);
    CHECK(s.modeled_delay() == doctest::Approx(0.1));
    s.adaptive_update(300);
    CHECK(s.modeled_delay() == doctest::Approx(0.2));
    s.adaptive_update(-40);  // negative estimates count as zero
    CHECK(s.modeled_delay() == doctest::Approx(0.1));
}

TEST_CASE("mode and configuration errors") {
    SmithPredictor s = classical(0.04);
    CHECK_THROWS_AS(s.adaptive_update(40), Error);
    CHECK_THROWS_AS(classical(-0.02), Error);
    CHECK_THROWS_AS(adaptive(ApproxKind::DFR, 1.0), Error);
    CHECK_THROWS_AS(SmithPredictor(SmithConfig{ClassicalMode{0.0}, DiscreteTf({0.5, 0.1}, {1.0, -0.9}, 0.02)}),
                    Error);
}

TEST_CASE("identified link delay is roughly a three-sample shift") {
    const DiscreteTf d = identified_link_delay();
    CHECK(d.num()[3] == doctest::Approx(0.9971));
    CHECK(d.dc_gain() == doctest::Approx(1.0).epsilon(0.01));
}
