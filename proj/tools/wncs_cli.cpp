// Command-line front end: closed-loop simulation, identification, controller
// design and the delay/stability tables.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "wncs/delay_approx.hpp"
#include "wncs/delay_est.hpp"
#include "wncs/error.hpp"
#include "wncs/pid.hpp"
#include "wncs/plant.hpp"
#include "wncs/scenario.hpp"
#include "wncs/stability.hpp"
#include "wncs/sysid.hpp"

namespace fs = std::filesystem;
using namespace wncs;

namespace {

std::string num(double v, const char* spec = "%.6g") {
    char buf[64];
    std::snprintf(buf, sizeof buf, spec, v);
    return buf;
}

std::string join(const std::vector<std::string>& parts) {
    std::string out;
    for (const auto& p : parts) out += (out.empty() ? "" : ", ") + p;
    return out;
}

struct SimulateArgs {
    std::string config;
    std::string preset;
    std::string smith = "none";
    std::string out;
    std::optional<std::uint64_t> seed;
    std::optional<double> duration;
    std::optional<long long> rtt_ms;
};

int run_simulate(const SimulateArgs& a) {
    ScenarioConfig cfg;
    if (!a.config.empty()) {
        cfg = load_scenario(a.config);
    } else {
        cfg = make_preset(a.preset.empty() ? "wired" : a.preset, a.smith);
    }
    if (a.rtt_ms) {
        cfg.channel = fixed_rtt_channel(*a.rtt_ms);
        cfg.name += "+rtt" + std::to_string(*a.rtt_ms) + "ms";
    }
    if (a.seed) cfg.seed = *a.seed;
    if (a.duration) cfg.duration = *a.duration;

    const RunRecord rec = run_closed_loop(cfg);
    write_outputs(a.out, cfg, rec);

    const Metrics m = compute_metrics(rec);
    std::cout << "scenario " << cfg.name << ": " << rec.rows.size() << " ticks, seed " << cfg.seed << '\n';
    std::cout << "  overshoot_pct      " << (m.overshoot_pct ? num(*m.overshoot_pct) : "n/a") << '\n';
    std::cout << "  settling_time_s    " << (m.settling_time_s ? num(*m.settling_time_s) : "n/a") << '\n';
    std::cout << "  steady_state_error " << num(m.steady_state_error) << '\n';
    std::cout << "  ise                " << num(m.ise) << '\n';
    std::cout << "  trailing_half_ise  " << num(m.trailing_half_ise) << '\n';
    std::cout << "  frames up/down     " << rec.uplink.sent << '/' << rec.downlink.sent << '\n';
    std::cout << "outputs written to " << a.out << '\n';
    return rec.conservation_held ? 0 : 3;
}

int run_identify(const std::string& data, std::size_t na, std::size_t nb, std::size_t nk, bool raw) {
    SampleSeries series = read_sample_csv(fs::path(data));
    if (!raw) series = normalize(series);
    const ArxFit fit = fit_arx(series, na, nb, nk);
    const auto y_model = simulate_arx(fit.model, series.inputs);

    std::cout << "samples " << series.inputs.size() << ", regression rows " << fit.rows
              << (raw ? ", raw data\n" : ", normalized data\n");
    std::cout << "A(q) = 1";
    for (std::size_t i = 0; i < fit.model.a_coeffs.size(); ++i) {
        std::cout << " + (" << num(fit.model.a_coeffs[i], "%.8g") << ") q^-" << i + 1;
    }
    std::cout << "\nB(q) =";
    for (std::size_t i = 0; i < fit.model.b_coeffs.size(); ++i) {
        std::cout << (i ? " + " : " ") << '(' << num(fit.model.b_coeffs[i], "%.8g") << ") q^-" << nk + i;
    }
    std::cout << "\nresidual sum of squares " << num(fit.residual_sum_squares) << '\n';
    std::cout << "simulation fit " << num(percent_fit(y_model, series.outputs), "%.2f") << " %\n";

    if (na == 1 && nb == 1 && nk == 1) {
        try {
            const ContinuousTf ct = arx_to_first_order_ct(fit.model);
            std::cout << "continuous first order: " << num(ct.num()[0]) << " / (s + " << num(ct.den()[0]) << ")\n";
        } catch (const Error& e) {
            std::cout << "continuous first order: unavailable (" << e.what() << ")\n";
        }
    }
    return 0;
}

int run_design_pi(double zeta, double ratio, const std::string& plant_name) {
    DiscreteTf plant = published_motor_dt();
    if (plant_name == "identified") {
        plant = identified_motor_dt(0.02);
    } else if (plant_name != "published") {
        throw Error(ErrorKind::Configuration, "plant must be published or identified");
    }
    const RootLocusDesign d = design_pi_root_locus(plant, zeta, ratio);
    std::cout << "dominant pole  " << num(d.pole.real(), "%.6f") << (d.pole.imag() < 0 ? " - j" : " + j")
              << num(std::abs(d.pole.imag()), "%.6f") << '\n';
    std::cout << "pi zero        " << num(d.zero, "%.6f") << '\n';
    std::cout << "loop gain K    " << num(d.loop_gain, "%.6f") << '\n';
    std::cout << "kp             " << num(d.gains.kp, "%.6f") << '\n';
    std::cout << "ki             " << num(d.gains.ki, "%.6f") << " 1/s (ki T = " << num(d.gains.integral_gain(), "%.6f")
              << ")\n";
    std::cout << "angle residual " << num(d.angle_residual_deg, "%.3e") << " deg\n";
    std::cout << "magnitude res. " << num(d.magnitude_residual, "%.3e") << '\n';
    return 0;
}

int run_ise_table(const std::vector<double>& taus, double dt, const std::string& out) {
    std::ostringstream csv;
    csv << "series";
    for (double t : taus) csv << ',' << num(t);
    csv << ",average\n";
    for (ApproxKind kind : kAllApproxKinds) {
        csv << to_string(kind);
        double total = 0.0;
        for (double tau : taus) {
            const double ise = ise_vs_true_delay(kind, tau, 0.0, dt).ise;
            total += ise;
            csv << ',' << num(ise);
        }
        csv << ',' << num(total / static_cast<double>(taus.size())) << '\n';
    }
    if (out.empty()) {
        std::cout << csv.str();
    } else {
        std::ofstream(out) << csv.str();
    }
    return 0;
}

std::string tau_label(double tau) {
    std::string s = num(tau, "%.3f");
    for (char& c : s) {
        if (c == '.') c = 'p';
    }
    return s;
}

int run_stability(const std::vector<double>& taus, const std::string& out) {
    const ContinuousTf g = identified_motor_ct();
    std::ostringstream table;
    table << "tau_d,gain_crossover,phase_margin_deg,stable,encirclements\n";
    if (!out.empty()) fs::create_directories(out);
    const auto grid = default_omega_grid(g);
    for (double tau : taus) {
        const MarginReport m = phase_margin(g, tau);
        const NyquistLocus locus = nyquist_locus(g, tau, grid);
        std::string enc;
        try {
            enc = std::to_string(encirclements(locus));
        } catch (const Error&) {
            enc = "marginal";
        }
        table << num(tau) << ',' << num(m.gain_crossover_omega, "%.6f") << ',' << num(m.phase_margin_deg, "%.4f")
              << ',' << (m.stable ? "true" : "false") << ',' << enc << '\n';
        if (!out.empty()) {
            std::ofstream f(fs::path(out) / ("locus_tau_" + tau_label(tau) + ".csv"));
            f << "omega,re,im\n";
            for (std::size_t i = locus.points.size(); i-- > 0;) {
                f << num(-locus.omegas[i], "%.9g") << ',' << num(locus.points[i].real(), "%.9g") << ','
                  << num(-locus.points[i].imag(), "%.9g") << '\n';
            }
            for (std::size_t i = 0; i < locus.points.size(); ++i) {
                f << num(locus.omegas[i], "%.9g") << ',' << num(locus.points[i].real(), "%.9g") << ','
                  << num(locus.points[i].imag(), "%.9g") << '\n';
            }
        }
    }
    std::cout << table.str();
    if (!out.empty()) std::ofstream(fs::path(out) / "phase_margins.csv") << table.str();
    return 0;
}

int run_estimator_demo(long long period, const std::string& out) {
    const ExchangeLog log = reference_exchange();
    const auto estimates = replay(log, period, 8 * period);
    if (out.empty()) {
        write_estimate_csv(std::cout, estimates);
    } else {
        std::ofstream f(out);
        write_estimate_csv(f, estimates);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Wireless networked DC motor control simulator"};
    app.require_subcommand(1);

    SimulateArgs sim;
    auto* simulate = app.add_subcommand("simulate", "Run a closed-loop scenario and write run.csv/metrics.csv");
    auto* config_opt = simulate->add_option("--config", sim.config, "Scenario JSON file")->check(CLI::ExistingFile);
    simulate->add_option("--preset", sim.preset, "Channel preset: " + join(channel_preset_names()))
        ->excludes(config_opt);
    simulate->add_option("--smith", sim.smith, "Smith preset: " + join(smith_preset_names()))->excludes(config_opt);
    simulate->add_option("--rtt-ms", sim.rtt_ms, "Replace the channel by a fixed round trip (ms)");
    simulate->add_option("--out", sim.out, "Output directory")->required();
    simulate->add_option("--seed", sim.seed, "Random seed (default 0)");
    simulate->add_option("--duration", sim.duration, "Simulated time in seconds");

    std::string data;
    std::size_t na = 1, nb = 1, nk = 1;
    bool raw = false;
    auto* identify = app.add_subcommand("identify", "Fit an ARX model to a t,u,y sample file");
    identify->add_option("--data", data, "CSV file with header t,u,y")->required()->check(CLI::ExistingFile);
    identify->add_option("--na", na, "Output lags")->capture_default_str();
    identify->add_option("--nb", nb, "Input lags")->capture_default_str();
    identify->add_option("--nk", nk, "Input delay in samples")->capture_default_str();
    identify->add_flag("--raw", raw, "Fit raw data instead of data normalized to [0, 1]");

    double zeta = 0.94, ratio = 0.1;
    std::string plant_name = "published";
    auto* design = app.add_subcommand("design-pi", "Root-locus PI design");
    design->add_option("--zeta", zeta, "Damping ratio")->capture_default_str();
    design->add_option("--wd-over-ws", ratio, "Damped frequency over sampling frequency")->capture_default_str();
    design->add_option("--plant", plant_name, "published or identified")->capture_default_str();

    std::vector<double> ise_taus{0.04, 0.12, 0.24, 0.3, 1.0};
    double dt = 1e-3;
    std::string ise_out;
    auto* ise = app.add_subcommand("ise-table", "ISE of each delay approximation against the true delay");
    ise->add_option("--taus", ise_taus, "Delays in seconds")->delimiter(',')->capture_default_str();
    ise->add_option("--dt", dt, "Integration step in seconds")->capture_default_str();
    ise->add_option("--out", ise_out, "Write the CSV to this file instead of stdout");

    std::vector<double> stab_taus{0, 0.04, 0.12, 0.18, 0.24, 0.3, 0.4, 0.6, 1, 2};
    std::string stab_out;
    auto* stab = app.add_subcommand("stability", "Phase margin and Nyquist loci against loop delay");
    stab->add_option("--tau-list", stab_taus, "Delays in seconds")->delimiter(',')->capture_default_str();
    stab->add_option("--out", stab_out, "Directory for phase_margins.csv and per-delay locus CSVs");

    long long period = 20;
    std::string demo_out;
    auto* demo = app.add_subcommand("estimator-demo", "Replay the reference RTT exchange through the estimator");
    demo->add_option("--period-ms", period, "Sampling period in ms")->capture_default_str();
    demo->add_option("--out", demo_out, "Write the CSV to this file instead of stdout");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*simulate) return run_simulate(sim);
        if (*identify) return run_identify(data, na, nb, nk, raw);
        if (*design) return run_design_pi(zeta, ratio, plant_name);
        if (*ise) return run_ise_table(ise_taus, dt, ise_out);
        if (*stab) return run_stability(stab_taus, stab_out);
        if (*demo) return run_estimator_demo(period, demo_out);
    } catch (const Error& e) {
        std::cerr << "error (" << to_string(e.kind()) << "): " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 1;
}
