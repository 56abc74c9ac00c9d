#include <doctest.h>

#include <cmath>
#include <numbers>

#include "wncs/error.hpp"
#include "wncs/plant.hpp"
#include "wncs/stability.hpp"

using namespace wncs;

namespace {

const double kWg = std::sqrt(4.159 * 4.159 - 3.888 * 3.888);

double analytic_margin(double tau) {
    return 180.0 - std::atan(kWg / 3.888) * 180.0 / std::numbers::pi - kWg * tau * 180.0 / std::numbers::pi;
}

}  // namespace

TEST_CASE("gain crossover closed forms") {
    CHECK(std::abs(gain_crossover(identified_motor_ct()) - kWg) < 1e-9);
    CHECK(std::abs(gain_crossover(ContinuousTf::first_order(2.0, 1.0)) - std::sqrt(3.0)) < 1e-9);
    try {
        gain_crossover(ContinuousTf::first_order(0.5, 1.0));
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::NoGainCrossover);
    }
}

TEST_CASE("phase margin matches the analytic expression") {
    const ContinuousTf g = identified_motor_ct();
    const MarginReport m0 = phase_margin(g, 0.0);
    CHECK(m0.phase_margin_deg == doctest::Approx(analytic_margin(0.0)).epsilon(1e-10));
    CHECK(std::abs(m0.phase_margin_deg - 159.19) < 0.02);
    CHECK(m0.stable);

    const MarginReport m1 = phase_margin(g, 1.0);
    CHECK(std::abs(m1.phase_margin_deg - 74.53) < 2.5);
    const MarginReport m2 = phase_margin(g, 2.0);
    CHECK(m2.phase_margin_deg < 0.0);
    CHECK(std::abs(m2.phase_margin_deg - (-10.11)) < 2.5);
    CHECK_FALSE(m2.stable);
    CHECK_THROWS_AS(phase_margin(g, -1.0), Error);
}

TEST_CASE("published margins table") {
    const double taus[] = {0, 0.04, 0.12, 0.18, 0.24, 0.3, 0.4, 0.6, 1, 2};
    const double published[] = {159.19, 156.68, 148.73, 144.83, 139.30, 134.02, 126.31, 106, 74.53, -10.11};
    for (int i = 0; i < 10; ++i) {
        CHECK(std::abs(phase_margin(identified_motor_ct(), taus[i]).phase_margin_deg - published[i]) <= 2.5);
    }
}

TEST_CASE("phase margin is affine in the delay") {
    const ContinuousTf g = identified_motor_ct();
    const double a = phase_margin(g, 0.1).phase_margin_deg;
    const double b = phase_margin(g, 0.5).phase_margin_deg;
    const double c = phase_margin(g, 1.7).phase_margin_deg;
    CHECK(std::abs((b - a) / 0.4 - (c - b) / 1.2) < 1e-9);
    CHECK((b - a) / 0.4 == doctest::Approx(-kWg * 180.0 / std::numbers::pi).epsilon(1e-9));
}

TEST_CASE("delay keeps unit magnitude at the crossover") {
    const ContinuousTf g = identified_motor_ct();
    for (double tau : {0.0, 0.3, 1.0, 2.0}) {
        const double w[] = {kWg};
        const NyquistLocus l = nyquist_locus(g, tau, w);
        CHECK(std::abs(std::abs(l.points[0]) - 1.0) < 1e-9);
    }
}

TEST_CASE("crossover point approaches -180 degrees as delay grows") {
    const ContinuousTf g = identified_motor_ct();
    const double w[] = {kWg};
    double previous = 1e9;
    for (double tau : {0.0, 0.2, 0.5, 0.9, 1.5}) {
        const auto p = nyquist_locus(g, tau, w).points[0];
        double phase = std::arg(p) * 180.0 / std::numbers::pi;
        while (phase > 0.0) phase -= 360.0;
        const double distance = std::abs(phase + 180.0);
        CHECK(distance < previous);
        previous = distance;
    }
}

TEST_CASE("encirclements agree with the phase margin sign") {
    const ContinuousTf g = identified_motor_ct();
    const auto grid = default_omega_grid(g);
    CHECK(grid.size() > 1000);
    for (double tau : {0.0, 0.3, 2.0}) {
        const int n = encirclements(nyquist_locus(g, tau, grid));
        if (phase_margin(g, tau).stable) {
            CHECK(n == 0);
        } else {
            CHECK(n >= 1);
        }
    }
}

TEST_CASE("two second delay crosses the real axis left of -1") {
    const ContinuousTf g = identified_motor_ct();
    const auto grid = default_omega_grid(g);
    const NyquistLocus l = nyquist_locus(g, 2.0, grid);
    bool found = false;
    for (std::size_t i = 1; i < l.points.size() && !found; ++i) {
        const auto a = l.points[i - 1];
        const auto b = l.points[i];
        if (a.imag() < 0.0 && b.imag() >= 0.0 && a.real() < 0.0) {
            found = true;
            CHECK(0.5 * (a.real() + b.real()) < -1.0);
        }
    }
    CHECK(found);
}

TEST_CASE("first-order locus without delay stays in the right half") {
    const ContinuousTf g = identified_motor_ct();
    const NyquistLocus l = nyquist_locus(g, 0.0, default_omega_grid(g));
    for (const auto& p : l.points) {
        CHECK(p.real() >= 0.0);
        CHECK(p.imag() <= 0.0);
    }
    CHECK(encirclements(l) == 0);
}

TEST_CASE("degenerate loci") {
    const double w[] = {0.1, 1.0, 10.0};
    CHECK(encirclements(nyquist_locus(ContinuousTf::gain(0.5), 0.0, w)) == 0);

    NyquistLocus through;
    through.omegas = {1.0};
    through.points = {{-1.0, 0.0}};
    try {
        encirclements(through);
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::MarginalCase);
    }

    const double bad[] = {1.0, 0.5};
    CHECK_THROWS_AS(nyquist_locus(ContinuousTf::gain(1.0), 0.0, bad), Error);
}
