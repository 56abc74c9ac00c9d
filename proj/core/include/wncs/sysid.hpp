#pragma once

#include <cstddef>
#include <filesystem>
#include <istream>
#include <span>
#include <vector>

#include "wncs/lti.hpp"

namespace wncs {

/// Paired input/output samples taken at a fixed step.
struct SampleSeries {
    double sample_time = 0.0;
    std::vector<double> inputs;
    std::vector<double> outputs;

    /// Throws Domain when the lengths differ, are shorter than 4 or the step is not positive.
    void validate() const;
};

/**
 * ARX structure A(q) y(k) = B(q) u(k - nk) + e(k) with
 * A(q) = 1 + a1 q^-1 + ... + a_na q^-na and
 * B(q) = b1 + b2 q^-1 + ... + b_nb q^-(nb-1).
 */
struct ArxModel {
    std::vector<double> a_coeffs;
    std::vector<double> b_coeffs;
    std::size_t delay_nk = 1;
    double sample_time = 0.0;

    /// Same model as a pulse transfer function in z^-1.
    DiscreteTf to_discrete_tf() const;
};

struct ArxFit {
    ArxModel model;
    double residual_sum_squares = 0.0;
    std::size_t rows = 0;
};

/// Min-max scaling of each channel onto [0, 1].
SampleSeries normalize(const SampleSeries& series);

/// Linear least-squares ARX estimate; the regressor is solved by column-pivoted QR.
ArxFit fit_arx(const SampleSeries& series, std::size_t na, std::size_t nb, std::size_t nk);

/// 100 * (1 - |y_model - y_actual| / |y_actual - mean(y_actual)|), 2-norms.
double percent_fit(std::span<const double> y_model, std::span<const double> y_actual);

/// Continuous K/(s+a) whose ZOH equivalent is the given ARX(1,1,1) model.
ContinuousTf arx_to_first_order_ct(const ArxModel& model);

/// One-step-free simulation of the model driven by the given inputs.
std::vector<double> simulate_arx(const ArxModel& model, std::span<const double> inputs);

/// Reads `t,u,y` CSV. The step must be fixed; errors name the offending line.
SampleSeries read_sample_csv(std::istream& in);
SampleSeries read_sample_csv(const std::filesystem::path& path);

}  // namespace wncs
