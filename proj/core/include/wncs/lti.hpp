#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace wncs {

using ComplexPoint = std::complex<double>;

/**
 * Rational transfer function in s with an optional pure delay e^(-dead_time*s).
 *
 * Coefficients are stored in ascending powers of s: {b0, b1, ...} means
 * b0 + b1*s + ... The delay is carried symbolically and only applied by
 * freq_response().
 */
class ContinuousTf {
public:
    ContinuousTf(std::vector<double> num, std::vector<double> den, double dead_time = 0.0);

    /// Constant gain with no dynamics.
    static ContinuousTf gain(double k);
    /// K/(s + a).
    static ContinuousTf first_order(double gain, double pole);

    const std::vector<double>& num() const noexcept { return num_; }
    const std::vector<double>& den() const noexcept { return den_; }
    double dead_time() const noexcept { return dead_time_; }
    std::size_t order() const noexcept { return den_.size() - 1; }

    /// Rational part only, the delay factor is ignored.
    ComplexPoint evaluate(ComplexPoint s) const;
    double dc_gain() const;

    ContinuousTf with_dead_time(double tau) const;

private:
    std::vector<double> num_;
    std::vector<double> den_;
    double dead_time_;
};

/**
 * Rational transfer function in z^-1, normalized so den[0] == 1.
 *
 * num = {b0, b1, ...} and den = {1, a1, ...} describe
 * (b0 + b1 z^-1 + ...)/(1 + a1 z^-1 + ...).
 */
class DiscreteTf {
public:
    DiscreteTf(std::vector<double> num, std::vector<double> den, double sample_time);

    static DiscreteTf gain(double k, double sample_time);

    const std::vector<double>& num() const noexcept { return num_; }
    const std::vector<double>& den() const noexcept { return den_; }
    double sample_time() const noexcept { return sample_time_; }

    double dc_gain() const;
    /// True when b0 == 0, i.e. the output at k does not depend on the input at k.
    bool strictly_proper() const noexcept { return num_.front() == 0.0; }

    /// Copy with both coefficient vectors zero-padded to at least the given lengths.
    DiscreteTf padded(std::size_t num_len, std::size_t den_len) const;

private:
    std::vector<double> num_;
    std::vector<double> den_;
    double sample_time_;
};

/// Runnable realization of a DiscreteTf. Starts relaxed (all-zero history).
class DifferenceEqState {
public:
    explicit DifferenceEqState(DiscreteTf tf);

    const DiscreteTf& tf() const noexcept { return tf_; }
    std::span<const double> past_inputs() const noexcept { return past_u_; }
    std::span<const double> past_outputs() const noexcept { return past_y_; }

    /// y(k) = sum b_i u(k-i) - sum_{i>=1} a_i y(k-i); advances both windows.
    double step(double input);

    /// The part of the next output that does not depend on the next input.
    /// For a strictly proper tf this is the next output itself.
    double predict() const;

    /// Swap in new coefficients while keeping the stored history. The new tf is
    /// zero-padded to the current window sizes; it must not need longer ones.
    void retune(const DiscreteTf& tf);

    void reset();

private:
    DiscreteTf tf_;
    std::vector<double> past_u_;  // u(k-1), u(k-2), ...
    std::vector<double> past_y_;  // y(k-1), y(k-2), ...
};

/// Exact ZOH equivalent of K/(s+a): (K/a)(1-p) z^-1 / (1 - p z^-1), p = exp(-a T).
DiscreteTf zoh_discretize_first_order(double gain, double pole, double sample_time);

/// Tustin substitution s <- (2/T)(z-1)/(z+1). The tf must carry no dead time.
DiscreteTf bilinear_discretize(const ContinuousTf& ctf, double sample_time);

/// num(jw)/den(jw) * exp(-jw*dead_time).
ComplexPoint freq_response(const ContinuousTf& ctf, double omega);

DiscreteTf series_connect(const DiscreteTf& a, const DiscreteTf& b);

/// G/(1+G).
DiscreteTf feedback_unity(const DiscreteTf& g);

/// Response of a relaxed realization to the given input sequence.
std::vector<double> simulate(const DiscreteTf& tf, std::span<const double> input);

/// Unit-step response over n samples.
std::vector<double> step_response(const DiscreteTf& tf, std::size_t n);

namespace poly {

/// Product of two ascending-order coefficient vectors.
std::vector<double> multiply(std::span<const double> a, std::span<const double> b);
std::vector<double> add(std::span<const double> a, std::span<const double> b);
ComplexPoint evaluate(std::span<const double> coeffs, ComplexPoint x);

}  // namespace poly

}  // namespace wncs
