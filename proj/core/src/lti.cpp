#include "wncs/lti.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "wncs/error.hpp"

namespace wncs {

namespace {

void trim_trailing_zeros(std::vector<double>& c) {
    while (c.size() > 1 && c.back() == 0.0) c.pop_back();
}

bool all_finite(const std::vector<double>& c) {
    return std::all_of(c.begin(), c.end(), [](double v) { return std::isfinite(v); });
}

void require_sample_time(double t) {
    if (!(t > 0.0) || !std::isfinite(t)) {
        throw Error(ErrorKind::Domain, "sample time must be positive, got " + std::to_string(t));
    }
}

bool same_sample_time(double a, double b) {
    return std::abs(a - b) <= 1e-12 * std::max(std::abs(a), std::abs(b));
}

}  // namespace

namespace poly {

std::vector<double> multiply(std::span<const double> a, std::span<const double> b) {
    if (a.empty() || b.empty()) return {};
    std::vector<double> out(a.size() + b.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
    }
    return out;
}

std::vector<double> add(std::span<const double> a, std::span<const double> b) {
    std::vector<double> out(std::max(a.size(), b.size()), 0.0);
    for (std::size_t i = 0; i < a.size(); ++i) out[i] += a[i];
    for (std::size_t i = 0; i < b.size(); ++i) out[i] += b[i];
    return out;
}

ComplexPoint evaluate(std::span<const double> coeffs, ComplexPoint x) {
    // Horner from the highest power down.
    ComplexPoint acc{0.0, 0.0};
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * x + *it;
    return acc;
}

}  // namespace poly

// ---------------------------------------------------------------------------
// ContinuousTf

ContinuousTf::ContinuousTf(std::vector<double> num, std::vector<double> den, double dead_time)
    : num_(std::move(num)), den_(std::move(den)), dead_time_(dead_time) {
    if (num_.empty()) num_.push_back(0.0);
    if (den_.empty()) throw Error(ErrorKind::Domain, "continuous tf needs a denominator");
    if (!all_finite(num_) || !all_finite(den_)) {
        throw Error(ErrorKind::Domain, "continuous tf coefficients must be finite");
    }
    trim_trailing_zeros(num_);
    trim_trailing_zeros(den_);
    if (den_.back() == 0.0) throw Error(ErrorKind::Domain, "denominator is identically zero");
    if (num_.size() > den_.size()) {
        throw Error(ErrorKind::Domain, "continuous tf must be proper (deg num <= deg den)");
    }
    if (!(dead_time_ >= 0.0) || !std::isfinite(dead_time_)) {
        throw Error(ErrorKind::Domain, "dead time must be finite and non-negative");
    }
}

ContinuousTf ContinuousTf::gain(double k) { return ContinuousTf({k}, {1.0}); }

ContinuousTf ContinuousTf::first_order(double gain, double pole) {
    return ContinuousTf({gain}, {pole, 1.0});
}

ComplexPoint ContinuousTf::evaluate(ComplexPoint s) const {
    return poly::evaluate(num_, s) / poly::evaluate(den_, s);
}

double ContinuousTf::dc_gain() const {
    if (den_.front() == 0.0) throw Error(ErrorKind::PoleOnAxis, "pole at s = 0");
    return num_.front() / den_.front();
}

ContinuousTf ContinuousTf::with_dead_time(double tau) const { return ContinuousTf(num_, den_, tau); }

// ---------------------------------------------------------------------------
// DiscreteTf

DiscreteTf::DiscreteTf(std::vector<double> num, std::vector<double> den, double sample_time)
    : num_(std::move(num)), den_(std::move(den)), sample_time_(sample_time) {
    require_sample_time(sample_time_);
    if (num_.empty()) num_.push_back(0.0);
    if (den_.empty() || den_.front() == 0.0) {
        throw Error(ErrorKind::Domain, "discrete tf needs den[0] != 0 to be causal");
    }
    if (!all_finite(num_) || !all_finite(den_)) {
        throw Error(ErrorKind::Domain, "discrete tf coefficients must be finite");
    }
    const double a0 = den_.front();
    if (a0 != 1.0) {
        for (double& v : num_) v /= a0;
        for (double& v : den_) v /= a0;
    }
}

DiscreteTf DiscreteTf::gain(double k, double sample_time) { return DiscreteTf({k}, {1.0}, sample_time); }

double DiscreteTf::dc_gain() const {
    double n = 0.0;
    double d = 0.0;
    for (double v : num_) n += v;
    for (double v : den_) d += v;
    if (d == 0.0) throw Error(ErrorKind::PoleOnAxis, "pole at z = 1");
    return n / d;
}

DiscreteTf DiscreteTf::padded(std::size_t num_len, std::size_t den_len) const {
    auto n = num_;
    auto d = den_;
    if (n.size() < num_len) n.resize(num_len, 0.0);
    if (d.size() < den_len) d.resize(den_len, 0.0);
    return DiscreteTf(std::move(n), std::move(d), sample_time_);
}

// ---------------------------------------------------------------------------
// DifferenceEqState

DifferenceEqState::DifferenceEqState(DiscreteTf tf)
    : tf_(std::move(tf)),
      past_u_(tf_.num().size() - 1, 0.0),
      past_y_(tf_.den().size() - 1, 0.0) {}

double DifferenceEqState::predict() const {
    const auto& b = tf_.num();
    const auto& a = tf_.den();
    double acc = 0.0;
    for (std::size_t i = 1; i < b.size(); ++i) acc += b[i] * past_u_[i - 1];
    for (std::size_t i = 1; i < a.size(); ++i) acc -= a[i] * past_y_[i - 1];
    return acc;
}

double DifferenceEqState::step(double input) {
    const double y = tf_.num().front() * input + predict();
    if (!past_u_.empty()) {
        std::copy_backward(past_u_.begin(), past_u_.end() - 1, past_u_.end());
        past_u_.front() = input;
    }
    if (!past_y_.empty()) {
        std::copy_backward(past_y_.begin(), past_y_.end() - 1, past_y_.end());
        past_y_.front() = y;
    }
    return y;
}

void DifferenceEqState::retune(const DiscreteTf& tf) {
    if (tf.num().size() > past_u_.size() + 1 || tf.den().size() > past_y_.size() + 1) {
        throw Error(ErrorKind::Configuration, "retune would need a longer history window");
    }
    if (!same_sample_time(tf.sample_time(), tf_.sample_time())) {
        throw Error(ErrorKind::Configuration, "retune cannot change the sample time");
    }
    tf_ = tf.padded(past_u_.size() + 1, past_y_.size() + 1);
}

void DifferenceEqState::reset() {
    std::fill(past_u_.begin(), past_u_.end(), 0.0);
    std::fill(past_y_.begin(), past_y_.end(), 0.0);
}

// ---------------------------------------------------------------------------
// Discretization and analysis

DiscreteTf zoh_discretize_first_order(double gain, double pole, double sample_time) {
    if (!(pole > 0.0)) throw Error(ErrorKind::Domain, "first-order ZOH needs pole a > 0");
    require_sample_time(sample_time);
    const double p = std::exp(-pole * sample_time);
    const double b = gain / pole * (1.0 - p);
    return DiscreteTf({0.0, b}, {1.0, -p}, sample_time);
}

DiscreteTf bilinear_discretize(const ContinuousTf& ctf, double sample_time) {
    require_sample_time(sample_time);
    if (ctf.dead_time() != 0.0) {
        throw Error(ErrorKind::Domain, "approximate the dead time before bilinear discretization");
    }
    // With q = z^-1, (z-1)/(z+1) = (1-q)/(1+q). Clearing (1+q)^N from numerator and
    // denominator turns s^i into c^i (1-q)^i (1+q)^(N-i).
    const std::size_t n_order = ctf.order();
    const double c = 2.0 / sample_time;
    const std::vector<double> minus_q{1.0, -1.0};
    const std::vector<double> plus_q{1.0, 1.0};

    auto map = [&](const std::vector<double>& coeffs) {
        std::vector<double> out(n_order + 1, 0.0);
        for (std::size_t i = 0; i < coeffs.size(); ++i) {
            std::vector<double> term{coeffs[i] * std::pow(c, static_cast<double>(i))};
            for (std::size_t k = 0; k < i; ++k) term = poly::multiply(term, minus_q);
            for (std::size_t k = i; k < n_order; ++k) term = poly::multiply(term, plus_q);
            out = poly::add(out, term);
        }
        return out;
    };

    auto num = map(ctf.num());
    auto den = map(ctf.den());
    double scale = 0.0;
    for (double v : den) scale = std::max(scale, std::abs(v));
    if (std::abs(den.front()) <= 1e-14 * scale) {
        throw Error(ErrorKind::DegenerateMapping, "bilinear map produced a zero leading denominator");
    }
    return DiscreteTf(std::move(num), std::move(den), sample_time);
}

ComplexPoint freq_response(const ContinuousTf& ctf, double omega) {
    if (!(omega >= 0.0)) throw Error(ErrorKind::Domain, "frequency must be non-negative");
    const ComplexPoint jw{0.0, omega};
    const ComplexPoint den = poly::evaluate(ctf.den(), jw);
    double scale = 0.0;
    for (double v : ctf.den()) scale = std::max(scale, std::abs(v));
    if (std::abs(den) <= 1e-13 * scale) {
        throw Error(ErrorKind::PoleOnAxis, "denominator vanishes at w = " + std::to_string(omega));
    }
    const ComplexPoint rational = poly::evaluate(ctf.num(), jw) / den;
    return rational * std::polar(1.0, -omega * ctf.dead_time());
}

DiscreteTf series_connect(const DiscreteTf& a, const DiscreteTf& b) {
    if (!same_sample_time(a.sample_time(), b.sample_time())) {
        throw Error(ErrorKind::Configuration, "series connection of different sample times");
    }
    return DiscreteTf(poly::multiply(a.num(), b.num()), poly::multiply(a.den(), b.den()), a.sample_time());
}

DiscreteTf feedback_unity(const DiscreteTf& g) {
    auto den = poly::add(g.den(), g.num());
    if (den.front() == 0.0) {
        throw Error(ErrorKind::DegenerateMapping, "closed loop is not causal (1 + b0 == 0)");
    }
    return DiscreteTf(g.num(), std::move(den), g.sample_time());
}

std::vector<double> simulate(const DiscreteTf& tf, std::span<const double> input) {
    DifferenceEqState state(tf);
    std::vector<double> out;
    out.reserve(input.size());
    for (double u : input) out.push_back(state.step(u));
    return out;
}

std::vector<double> step_response(const DiscreteTf& tf, std::size_t n) {
    const std::vector<double> ones(n, 1.0);
    return simulate(tf, ones);
}

}  // namespace wncs
