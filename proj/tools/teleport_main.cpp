// Command-line front end: scenario JSON in, JSON/CSV reports out.
// Exit codes: 0 success, 1 runtime or numeric failure, 2 invalid configuration.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "cvt/cf_grid.hpp"
#include "cvt/commands.hpp"
#include "cvt/montecarlo.hpp"

namespace {

struct CommonOpts {
    std::string config;
    std::string out;
    std::int64_t seed = -1;
    std::int64_t samples = -1;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--config", opts.config, "scenario JSON file")->required();
    cmd->add_option("--out", opts.out, "write the report here instead of stdout");
    cmd->add_option("--seed", opts.seed, "override the scenario seed");
    cmd->add_option("--samples", opts.samples, "override the scenario sample count");
}

cvt::Scenario load_scenario(const CommonOpts& opts) {
    std::ifstream file(opts.config);
    if (!file) throw cvt::ConfigError("cannot open config file: " + opts.config);
    std::stringstream buffer;
    buffer << file.rdbuf();
    cvt::Scenario sc = cvt::parse_scenario_text(buffer.str());
    if (opts.seed >= 0) {
        sc.seed = static_cast<std::uint64_t>(opts.seed);
        sc.optimizer.seed = sc.seed;
    }
    if (opts.samples >= 0) {
        if (opts.samples < 2) throw cvt::ConfigError("'--samples' must be at least 2");
        sc.samples = opts.samples;
    }
    return sc;
}

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream file(out_path);
    if (!file) throw cvt::Error("cannot write output file: " + out_path);
    file << text;
}

void emit_report(const cvt::Report& report, const std::string& out_path) {
    emit(report.dump(2) + "\n", out_path);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"continuous-variable teleportation in the characteristic-function picture"};
    app.require_subcommand(1);

    CommonOpts standard_opts, teleport_opts, optimize_opts, montecarlo_opts, sweep_opts;
    std::string dump_cf_path, wigner_path, dump_samples_path;

    CLI::App* cmd_standard = app.add_subcommand("standard-form",
                                                "standard form I, symplectic spectrum, separability");
    add_common(cmd_standard, standard_opts);

    CLI::App* cmd_teleport = app.add_subcommand("teleport",
                                                "added noise and output state of the channel");
    add_common(cmd_teleport, teleport_opts);
    cmd_teleport->add_option("--dump-cf", dump_cf_path, "write the output CF grid (text format)");
    cmd_teleport->add_option("--wigner", wigner_path, "write the output Wigner function as CSV");

    CLI::App* cmd_optimize = app.add_subcommand("optimize",
                                                "minimize the added noise over local squeezings");
    add_common(cmd_optimize, optimize_opts);

    CLI::App* cmd_montecarlo = app.add_subcommand("montecarlo",
                                                  "trajectory sampling against the analytic channel");
    add_common(cmd_montecarlo, montecarlo_opts);
    cmd_montecarlo->add_option("--dump-samples", dump_samples_path,
                               "write raw (q, p, mu) samples as CSV");

    CLI::App* cmd_sweep = app.add_subcommand("sweep", "parameter sweep to CSV");
    add_common(cmd_sweep, sweep_opts);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (cmd_standard->parsed()) {
            emit_report(cvt::cmd_standard_form(load_scenario(standard_opts)), standard_opts.out);
        } else if (cmd_teleport->parsed()) {
            cvt::Scenario sc = load_scenario(teleport_opts);
            emit_report(cvt::cmd_teleport(sc), teleport_opts.out);
            if (!dump_cf_path.empty() || !wigner_path.empty()) {
                auto in = cvt::build_cf(sc.input, sc.grid.extent, sc.grid.n);
                auto out = cvt::teleport_cf(in, cvt::resolve_resource(sc.resource),
                                            cvt::MeasurementGeometry(sc.theta));
                if (!dump_cf_path.empty()) {
                    std::ofstream file(dump_cf_path);
                    if (!file) throw cvt::Error("cannot write CF grid: " + dump_cf_path);
                    cvt::write_cf_grid(file, out);
                }
                if (!wigner_path.empty()) {
                    std::ofstream file(wigner_path);
                    if (!file) throw cvt::Error("cannot write Wigner CSV: " + wigner_path);
                    cvt::write_wigner_csv(file, cvt::wigner_transform(out));
                }
            }
        } else if (cmd_optimize->parsed()) {
            emit_report(cvt::cmd_optimize(load_scenario(optimize_opts)), optimize_opts.out);
        } else if (cmd_montecarlo->parsed()) {
            cvt::Scenario sc = load_scenario(montecarlo_opts);
            if (!dump_samples_path.empty()) {
                std::ofstream file(dump_samples_path);
                if (!file) throw cvt::Error("cannot write samples CSV: " + dump_samples_path);
                file << "q,p,mu_re,mu_im\n";
                file.precision(12);
                cvt::run_ensemble(cvt::GaussianInput{cvt::preset_mean(sc.input),
                                                     cvt::preset_covariance(sc.input)},
                                  cvt::resolve_resource(sc.resource),
                                  cvt::MeasurementGeometry(sc.theta), sc.samples, sc.seed,
                                  [&](const cvt::OutcomeSample& s) {
                                      file << s.q << "," << s.p << "," << s.mu.real() << ","
                                           << s.mu.imag() << "\n";
                                  });
            }
            cvt::Report report = cvt::cmd_montecarlo(sc);
            emit_report(report, montecarlo_opts.out);
            if (!report["pass"].get<bool>()) {
                std::cerr << "montecarlo: empirical covariance deviates beyond 5 standard errors\n";
                return 1;
            }
        } else if (cmd_sweep->parsed()) {
            emit(cvt::cmd_sweep(load_scenario(sweep_opts)), sweep_opts.out);
        }
    } catch (const cvt::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const cvt::MalformedInput& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const cvt::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
