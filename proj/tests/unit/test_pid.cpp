#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "wncs/error.hpp"
#include "wncs/pid.hpp"
#include "wncs/plant.hpp"

using namespace wncs;

namespace {

ActuatorLimits wide_limits() { return ActuatorLimits{-1000000, 1000000, 1e12}; }

double deg(std::complex<double> z) { return std::arg(z) * 180.0 / std::numbers::pi; }

}  // namespace

TEST_CASE("default gains give the published difference equation") {
    const PiGains g = default_pi_gains();
    CHECK(g.kp == 1.69);
    CHECK(g.integral_gain() == doctest::Approx(0.1488).epsilon(1e-12));
}

TEST_CASE("two errors of 10 give duty 19") {
    const PiGains g = default_pi_gains();
    const ActuatorLimits lim = ActuatorLimits::for_gains(g);
    PiState s;
    CHECK(pi_step(g, s, lim, 10.0) == 18);  // 16.9 + 1.488
    CHECK(pi_step(g, s, lim, 10.0) == 19);  // 16.9 + 2.976 = 19.876
    CHECK(s.integral_sum == 20.0);
}

TEST_CASE("zero error from rest gives zero duty") {
    PiState s;
    CHECK(pi_step(default_pi_gains(), s, ActuatorLimits::for_gains(default_pi_gains()), 0.0) == 0);
}

TEST_CASE("upper saturation clamps and resets the integral") {
    const PiGains g = default_pi_gains();
    const ActuatorLimits lim = ActuatorLimits::for_gains(g);
    CHECK(lim.integral_threshold == doctest::Approx(255.0 / 0.1488));
    PiState s;
    CHECK(pi_step(g, s, lim, 500.0) == 255);
    CHECK(s.integral_sum == lim.integral_threshold);
    CHECK(s.saturated_last);
}

TEST_CASE("lower saturation clamps without reset") {
    const PiGains g = default_pi_gains();
    PiState s;
    CHECK(pi_step(g, s, ActuatorLimits::for_gains(g), -50.0) == 0);
    CHECK(s.integral_sum == -50.0);
}

TEST_CASE("pi output always lies in the actuator range") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> err(-400.0, 400.0);
    const PiGains g = default_pi_gains();
    const ActuatorLimits lim = ActuatorLimits::for_gains(g);
    PiState s;
    for (int i = 0; i < 5000; ++i) {
        const int u = pi_step(g, s, lim, err(rng));
        CHECK(u >= 0);
        CHECK(u <= 255);
    }
}

TEST_CASE("continuous gain mapping") {
    const PiGains a = map_continuous_gains(2.0, 0.1, 0.02);
    CHECK(a.kp == doctest::Approx(1.8));
    CHECK(a.ki == doctest::Approx(20.0));

    const PiGains p = map_continuous_gains(1.0, 1e300, 0.02);
    CHECK(p.kp == doctest::Approx(1.0));
    CHECK(p.ki == doctest::Approx(0.0));

    // K = kc (1 + T/(2 ti)), zero = (1 - T/(2 ti))/(1 + T/(2 ti)).
    const double kc = 3.0, ti = 0.25, t = 0.02;
    const PiGains m = map_continuous_gains(kc, ti, t);
    const double k = m.kp + m.integral_gain();
    CHECK(k == doctest::Approx(kc * (1.0 + t / (2.0 * ti))));
    CHECK(m.kp / k == doctest::Approx((1.0 - t / (2.0 * ti)) / (1.0 + t / (2.0 * ti))));

    const PiGains q = map_position_gains(2.0, 0.5, 0.02);
    CHECK(q.ki == doctest::Approx(4.0));
    CHECK_THROWS_AS(map_continuous_gains(1.0, 0.0, 0.02), Error);
}

TEST_CASE("pulse transfer function zero and gain") {
    const PiGains g{10.7, 9.13 / 0.02, 0.02};
    const DiscreteTf tf = pi_pulse_tf(g);
    CHECK(tf.num()[0] == doctest::Approx(19.83));
    CHECK(-tf.num()[1] / tf.num()[0] == doctest::Approx(10.7 / 19.83));
    CHECK(std::abs(10.7 / 19.83 - 0.5396) < 1e-4);
    CHECK(tf.den()[1] == -1.0);
}

TEST_CASE("pulse transfer function rejects a vanishing integral term") {
    try {
        pi_pulse_tf(PiGains{1.0, 0.0, 0.02});
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::DegenerateController);
    }
}

TEST_CASE("pulse transfer function step equals unsaturated pi_step") {
    const PiGains g = default_pi_gains();
    const auto y = step_response(pi_pulse_tf(g), 30);
    PiState s;
    for (std::size_t k = 0; k < 30; ++k) {
        const int u = pi_step(g, s, wide_limits(), 1.0);
        CHECK(u == static_cast<int>(std::trunc(y[k] + 1e-9)));
    }
}

TEST_CASE("dominant pole for zeta 0.94 at a tenth of the sampling rate") {
    const auto z = dominant_pole(0.94, 0.1);
    CHECK(std::abs(z) == doctest::Approx(std::exp(-1.7312)).epsilon(1e-4));
    CHECK(std::abs(std::abs(z) - 0.17706) < 5e-5);
    CHECK(deg(z) == doctest::Approx(36.0));
    CHECK(std::abs(z.real() - 0.143) < 0.002);
    CHECK(std::abs(z.imag() - 0.104) < 0.002);
    CHECK(std::abs(dominant_pole(1e-9, 0.2)) == doctest::Approx(1.0).epsilon(1e-6));
    CHECK_THROWS_AS(dominant_pole(1.0, 0.1), Error);
    CHECK_THROWS_AS(dominant_pole(0.5, 0.5), Error);
}

TEST_CASE("root locus design on the published plant") {
    const RootLocusDesign d = design_pi_root_locus(published_motor_dt(), 0.94, 0.1);

    // Independent recomputation with complex arithmetic.
    const std::complex<double> z = d.pole;
    const double zero_angle = -180.0 + deg(z - 1.0) + deg(z - 0.92);
    const double c = z.real() - z.imag() / std::tan(zero_angle * std::numbers::pi / 180.0);
    const double k = std::abs(z - 1.0) * std::abs(z - 0.92) / (0.0831 * std::abs(z - c));
    CHECK(d.zero == doctest::Approx(c).epsilon(1e-12));
    CHECK(d.loop_gain == doctest::Approx(k).epsilon(1e-12));

    CHECK(std::abs(d.zero - 0.54) <= 0.01);
    CHECK(std::abs(d.loop_gain - 19.83) <= 0.2);
    CHECK(d.gains.kp == doctest::Approx(d.loop_gain * d.zero));
    CHECK(d.gains.integral_gain() == doctest::Approx(d.loop_gain * (1.0 - d.zero)));
    CHECK(std::abs(d.angle_residual_deg) < 0.01);
    CHECK(std::abs(d.magnitude_residual) < 1e-9);

    // Evaluating at the rounded pole and zero lands on the rounded gain.
    const std::complex<double> zr{0.143, 0.104};
    const double k_rounded = std::abs(zr - 1.0) * std::abs(zr - 0.92) / (0.0831 * std::abs(zr - 0.54));
    CHECK(std::abs(k_rounded - 19.83) < 0.02);
}

TEST_CASE("unreachable zero angle is an infeasible spec") {
    try {
        design_pi_root_locus(published_motor_dt(), 0.3, 0.01);
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::InfeasibleSpec);
    }
    CHECK_THROWS_AS(design_pi_root_locus(DiscreteTf({0.0, 1.0, 0.5}, {1.0, -0.5}, 0.02), 0.9, 0.1), Error);
}

TEST_CASE("gains validation") {
    CHECK_THROWS_AS((PiGains{1.0, 1.0, 0.0}.validate()), Error);
    CHECK_THROWS_AS((PiGains{NAN, 1.0, 0.02}.validate()), Error);
    CHECK_NOTHROW(default_pi_gains().validate());
}
