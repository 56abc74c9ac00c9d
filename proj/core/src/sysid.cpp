#include "wncs/sysid.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <string>

#include "wncs/error.hpp"

namespace wncs {

namespace {

std::vector<double> min_max_scale(const std::vector<double>& x, const char* channel) {
    const auto [lo, hi] = std::minmax_element(x.begin(), x.end());
    const double span = *hi - *lo;
    if (!(span > 0.0)) {
        throw Error(ErrorKind::DegenerateRange, std::string(channel) + " channel is constant");
    }
    std::vector<double> out(x.size());
    const double min = *lo;
    std::transform(x.begin(), x.end(), out.begin(), [&](double v) { return (v - min) / span; });
    return out;
}

std::string trim(std::string s) {
    const auto not_space = [](unsigned char c) { return !std::isspace(c); };
    s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
    s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
    return s;
}

double parse_number(const std::string& field, std::size_t line) {
    try {
        std::size_t used = 0;
        const double v = std::stod(field, &used);
        if (used != field.size() || !std::isfinite(v)) throw std::invalid_argument(field);
        return v;
    } catch (const std::exception&) {
        throw Error(ErrorKind::Parse, "line " + std::to_string(line) + ": not a number: '" + field + "'");
    }
}

}  // namespace

void SampleSeries::validate() const {
    if (!(sample_time > 0.0)) throw Error(ErrorKind::Domain, "sample time must be positive");
    if (inputs.size() != outputs.size()) {
        throw Error(ErrorKind::Domain, "input and output lengths differ");
    }
    if (inputs.size() < 4) throw Error(ErrorKind::Domain, "need at least 4 samples");
}

DiscreteTf ArxModel::to_discrete_tf() const {
    std::vector<double> num(delay_nk, 0.0);
    num.insert(num.end(), b_coeffs.begin(), b_coeffs.end());
    std::vector<double> den{1.0};
    den.insert(den.end(), a_coeffs.begin(), a_coeffs.end());
    return DiscreteTf(std::move(num), std::move(den), sample_time);
}

SampleSeries normalize(const SampleSeries& series) {
    series.validate();
    return SampleSeries{series.sample_time, min_max_scale(series.inputs, "input"),
                        min_max_scale(series.outputs, "output")};
}

ArxFit fit_arx(const SampleSeries& series, std::size_t na, std::size_t nb, std::size_t nk) {
    series.validate();
    if (nb < 1 || nk < 1) throw Error(ErrorKind::Domain, "ARX needs nb >= 1 and nk >= 1");
    const std::size_t n = series.outputs.size();
    if (n < na + nb + nk + 1) throw Error(ErrorKind::Domain, "series too short for the requested orders");

    // First row whose regressor reaches only recorded samples.
    const std::size_t start = std::max(na, nk + nb - 1);
    const std::size_t rows = n - start;
    const std::size_t cols = na + nb;
    if (rows < cols) throw Error(ErrorKind::SingularRegressor, "fewer equations than parameters");

    Eigen::MatrixXd phi(rows, cols);
    Eigen::VectorXd target(rows);
    for (std::size_t r = 0; r < rows; ++r) {
        const std::size_t k = start + r;
        for (std::size_t i = 0; i < na; ++i) phi(r, i) = -series.outputs[k - 1 - i];
        for (std::size_t j = 0; j < nb; ++j) phi(r, na + j) = series.inputs[k - nk - j];
        target(r) = series.outputs[k];
    }

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(phi);
    qr.setThreshold(1e-12);
    if (qr.rank() < static_cast<Eigen::Index>(cols)) {
        throw Error(ErrorKind::SingularRegressor, "regressor matrix is rank deficient (insufficient excitation)");
    }
    const Eigen::VectorXd theta = qr.solve(target);
    const Eigen::VectorXd residual = target - phi * theta;

    ArxFit fit;
    fit.model.a_coeffs.assign(theta.data(), theta.data() + na);
    fit.model.b_coeffs.assign(theta.data() + na, theta.data() + cols);
    fit.model.delay_nk = nk;
    fit.model.sample_time = series.sample_time;
    fit.residual_sum_squares = residual.squaredNorm();
    fit.rows = rows;
    return fit;
}

double percent_fit(std::span<const double> y_model, std::span<const double> y_actual) {
    if (y_model.size() != y_actual.size() || y_actual.empty()) {
        throw Error(ErrorKind::Domain, "percent fit needs equal, non-empty sequences");
    }
    const double mean = std::accumulate(y_actual.begin(), y_actual.end(), 0.0) / y_actual.size();
    double err = 0.0;
    double spread = 0.0;
    for (std::size_t i = 0; i < y_actual.size(); ++i) {
        err += (y_model[i] - y_actual[i]) * (y_model[i] - y_actual[i]);
        spread += (y_actual[i] - mean) * (y_actual[i] - mean);
    }
    if (!(spread > 0.0)) throw Error(ErrorKind::DegenerateNorm, "measured output is constant");
    return 100.0 * (1.0 - std::sqrt(err) / std::sqrt(spread));
}

ContinuousTf arx_to_first_order_ct(const ArxModel& model) {
    if (model.a_coeffs.size() != 1 || model.b_coeffs.size() != 1 || model.delay_nk != 1) {
        throw Error(ErrorKind::Domain, "first-order conversion needs an ARX(1,1,1) model");
    }
    const double p = -model.a_coeffs.front();
    if (!(p > 0.0 && p < 1.0)) {
        throw Error(ErrorKind::NonPhysicalPole, "pole " + std::to_string(p) + " is outside (0, 1)");
    }
    const double a = -std::log(p) / model.sample_time;
    const double dc = model.b_coeffs.front() / (1.0 - p);
    return ContinuousTf::first_order(dc * a, a);
}

std::vector<double> simulate_arx(const ArxModel& model, std::span<const double> inputs) {
    return simulate(model.to_discrete_tf(), inputs);
}

SampleSeries read_sample_csv(std::istream& in) {
    std::string line;
    std::size_t line_no = 0;
    bool header_seen = false;
    std::vector<double> times;
    SampleSeries series;

    while (std::getline(in, line)) {
        ++line_no;
        line = trim(line);
        if (line.empty()) continue;
        if (!header_seen) {
            std::string compact;
            std::remove_copy_if(line.begin(), line.end(), std::back_inserter(compact),
                                [](unsigned char c) { return std::isspace(c); });
            if (compact != "t,u,y") {
                throw Error(ErrorKind::Parse, "line " + std::to_string(line_no) + ": expected header 't,u,y'");
            }
            header_seen = true;
            continue;
        }
        std::vector<std::string> fields;
        std::stringstream ss(line);
        std::string field;
        while (std::getline(ss, field, ',')) fields.push_back(trim(field));
        if (fields.size() != 3) {
            throw Error(ErrorKind::Parse, "line " + std::to_string(line_no) + ": expected 3 fields, got " +
                                              std::to_string(fields.size()));
        }
        const double t = parse_number(fields[0], line_no);
        if (!times.empty() && !(t > times.back())) {
            throw Error(ErrorKind::Parse, "line " + std::to_string(line_no) + ": time is not strictly increasing");
        }
        if (times.size() >= 2) {
            const double step = times[1] - times[0];
            if (std::abs((t - times.back()) - step) > 1e-6 * step) {
                throw Error(ErrorKind::Parse, "line " + std::to_string(line_no) + ": time step is not fixed");
            }
        }
        times.push_back(t);
        series.inputs.push_back(parse_number(fields[1], line_no));
        series.outputs.push_back(parse_number(fields[2], line_no));
    }
    if (!header_seen) throw Error(ErrorKind::Parse, "empty sample file");
    if (times.size() < 4) throw Error(ErrorKind::Parse, "need at least 4 samples, got " + std::to_string(times.size()));
    series.sample_time = times[1] - times[0];
    return series;
}

SampleSeries read_sample_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::Parse, "cannot open " + path.string());
    return read_sample_csv(in);
}

}  // namespace wncs
