#include "cvt/commands.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "cvt/montecarlo.hpp"
#include "cvt/optimizer.hpp"

namespace cvt {

namespace {

double num(double x) { return round12(x); }

Report covariance_report(const OneModeCovariance& m) {
    Report r;
    r["sqq"] = num(m.sqq);
    r["sqp"] = num(m.sqp);
    r["spp"] = num(m.spp);
    return r;
}

Report standard_form_report(const StandardFormI& s) {
    Report r;
    r["b1"] = num(s.b1);
    r["b2"] = num(s.b2);
    r["c"] = num(s.c);
    r["d"] = num(s.d);
    return r;
}

Report separability_report(const SeparabilityReport& rep) {
    Report r;
    r["symmetric"] = rep.symmetric;
    r["c_tilde_minus"] = num(rep.c_tilde_minus);
    if (rep.symmetric) r["delta_epr"] = num(rep.delta_epr);
    r["entangled"] = rep.entangled;
    return r;
}

Report optimization_report(const OptimizationResult& res) {
    Report r;
    r["method"] = res.method;
    r["v"] = {num(res.v.u1), num(res.v.u2)};
    r["n_min"] = num(res.n_min);
    r["residuals"] = {num(res.residuals.first), num(res.residuals.second)};
    if (res.method == "numeric") r["grid_gap"] = num(res.grid_gap);
    return r;
}

StandardFormI resource_standard_form(const Scenario& sc, const TwoModeCovariance& v) {
    if (sc.resource.kind == "symmetric" || sc.resource.kind == "standard_form")
        return sc.resource.sf;
    return to_standard_form(v).params;
}

/// Overlap of two equal-mean Gaussian states: 1/sqrt(det(Va + Vb)).
double gaussian_overlap(const OneModeCovariance& a, const OneModeCovariance& b) {
    Eigen::Matrix2d sum = a.matrix() + b.matrix();
    return 1.0 / std::sqrt(sum.determinant());
}

std::string csv_num(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", x);
    return buf;
}

} // namespace

Report cmd_standard_form(const Scenario& sc) {
    TwoModeCovariance v = resolve_resource(sc.resource);
    StandardFormI sf = resource_standard_form(sc, v);
    auto validation = validate_two_mode(v);

    Report r;
    r["command"] = "standard_form";
    r["standard_form"] = standard_form_report(sf);
    r["symplectic_eigenvalues"] = {num(validation.symplectic_eigenvalues[0]),
                                   num(validation.symplectic_eigenvalues[1])};
    r["separability"] = separability_report(separability(sf));
    return r;
}

Report cmd_teleport(const Scenario& sc) {
    TwoModeCovariance v = resolve_resource(sc.resource);
    MeasurementGeometry g(sc.theta);
    InducedField induced = induced_covariance(v, g);

    Report r;
    r["command"] = "teleport";
    r["theta"] = num(sc.theta);
    r["input"] = preset_label(sc.input);
    r["n_added"] = num(induced.n_added);
    r["induced_field"] = covariance_report(induced.vm);

    if (preset_is_gaussian(sc.input)) {
        auto rep = gaussian_output(preset_covariance(sc.input), v, g);
        Report gaussian;
        gaussian["v_out"] = covariance_report(rep.v_out);
        Eigen::Vector2d mean = preset_mean(sc.input);
        gaussian["mean"] = {num(mean[0]), num(mean[1])};
        r["gaussian"] = gaussian;
        if (preset_is_pure(sc.input))
            r["fidelity"] = num(gaussian_overlap(preset_covariance(sc.input), rep.v_out));
    } else {
        CFGrid in = build_cf(sc.input, sc.grid.extent, sc.grid.n);
        CFGrid out = teleport_cf(in, v, g);
        Report cf;
        cf["extent"] = num(sc.grid.extent);
        cf["n"] = sc.grid.n;
        auto photon_in = mean_photon(in);
        auto photon_out = mean_photon(out);
        cf["mean_photon_in"] = num(photon_in.value);
        cf["mean_photon_out"] = num(photon_out.value);
        if (photon_in.coarse_grid) cf["coarse_grid"] = true;
        r["cf"] = cf;
        if (preset_is_pure(sc.input)) r["fidelity"] = num(fidelity_overlap(in, out));
    }
    return r;
}

Report cmd_optimize(const Scenario& sc) {
    TwoModeCovariance v = resolve_resource(sc.resource);
    StandardFormI sf = resource_standard_form(sc, v);

    Report r;
    r["command"] = "optimize";
    r["standard_form"] = standard_form_report(sf);
    bool symmetric = std::abs(sf.b1 - sf.b2) <= 1e-10;
    if (symmetric) r["closed_form"] = optimization_report(optimize_symmetric(sf));
    r["numeric"] = optimization_report(optimize_general(sf, sc.optimizer));
    r["separability"] = separability_report(separability(sf));
    return r;
}

Report cmd_montecarlo(const Scenario& sc) {
    if (!preset_is_gaussian(sc.input))
        throw ConfigError("monte-carlo trajectories require a Gaussian input preset");
    TwoModeCovariance v = resolve_resource(sc.resource);
    MeasurementGeometry g(sc.theta);
    GaussianInput in{preset_mean(sc.input), preset_covariance(sc.input)};

    auto analytic = gaussian_output(in.cov, v, g);
    auto stats = run_ensemble(in, v, g, sc.samples, sc.seed);

    Eigen::Matrix2d expected = analytic.v_out.matrix();
    double max_sigma = 0.0;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            max_sigma = std::max(max_sigma, std::abs(stats.covariance(i, j) - expected(i, j)) /
                                                stats.cov_se(i, j));

    Report r;
    r["command"] = "montecarlo";
    r["n_samples"] = stats.n_samples;
    r["seed"] = sc.seed;
    r["theta"] = num(sc.theta);
    if (sc.samples < 10000) r["warning"] = "fewer than 1e4 samples: errors are large";

    Report analytic_r;
    analytic_r["v_out"] = covariance_report(analytic.v_out);
    analytic_r["mean"] = {num(in.mean[0]), num(in.mean[1])};
    analytic_r["n_added"] = num(analytic.induced.n_added);
    r["analytic"] = analytic_r;

    Report empirical;
    empirical["cov"] = covariance_report(
        {stats.covariance(0, 0), stats.covariance(0, 1), stats.covariance(1, 1)});
    empirical["cov_se"] = covariance_report(
        {stats.cov_se(0, 0), stats.cov_se(0, 1), stats.cov_se(1, 1)});
    empirical["mean"] = {num(stats.mean[0]), num(stats.mean[1])};
    empirical["mean_se"] = {num(stats.mean_se[0]), num(stats.mean_se[1])};
    empirical["n_added"] = num(0.5 * (stats.covariance.trace() - in.cov.sqq - in.cov.spp));
    r["empirical"] = empirical;

    r["max_sigma"] = num(max_sigma);
    r["pass"] = max_sigma <= 5.0;
    return r;
}

std::string cmd_sweep(const Scenario& sc) {
    if (!sc.sweep) throw ConfigError("sweep command needs a 'sweep' section");
    const SweepSpec& sw = *sc.sweep;

    const bool standard_kind =
        sc.resource.kind == "symmetric" || sc.resource.kind == "standard_form";
    if (sw.key == "r") {
        if (sc.resource.kind != "tmsv") throw ConfigError("sweep key 'r' needs a tmsv resource");
    } else if (sw.key == "b") {
        if (sc.resource.kind != "symmetric")
            throw ConfigError("sweep key 'b' needs a symmetric resource");
    } else if (sw.key == "c" || sw.key == "d") {
        if (!standard_kind)
            throw ConfigError("sweep keys 'c'/'d' need a symmetric or standard_form resource");
    } else if (sw.key != "theta") {
        throw ConfigError("unknown sweep key '" + sw.key + "'");
    }

    // The input grid does not change along resource sweeps; build it once.
    const bool pure_input = preset_is_pure(sc.input);
    const bool gaussian_input = preset_is_gaussian(sc.input);
    CFGrid in_grid;
    if (pure_input && !gaussian_input) in_grid = build_cf(sc.input, sc.grid.extent, sc.grid.n);

    std::ostringstream csv;
    csv << "param,n_added,n_min,delta_epr,fidelity\n";
    long rows = static_cast<long>(std::floor((sw.to - sw.from) / sw.step + 1e-9)) + 1;
    for (long k = 0; k < rows; ++k) {
        double value = sw.from + static_cast<double>(k) * sw.step;

        Scenario point = sc;
        if (sw.key == "r") {
            point.resource.r = value;
        } else if (sw.key == "b") {
            point.resource.sf.b1 = point.resource.sf.b2 = value;
        } else if (sw.key == "c") {
            point.resource.sf.c = value;
        } else if (sw.key == "d") {
            point.resource.sf.d = value;
        } else {
            if (!(value > 0.0) || !(value < 1.5707963267948966))
                throw ConfigError("theta sweep leaves (0, pi/2)");
            point.theta = value;
        }

        TwoModeCovariance v = resolve_resource(point.resource);
        MeasurementGeometry g(point.theta);
        StandardFormI sf = resource_standard_form(point, v);

        double n_added = added_noise(v, g);
        auto opt = (std::abs(sf.b1 - sf.b2) <= 1e-10) ? optimize_symmetric(sf)
                                                      : optimize_general(sf, point.optimizer);
        auto sep = separability(sf);

        csv << csv_num(value) << "," << csv_num(n_added) << "," << csv_num(opt.n_min) << ",";
        if (sep.symmetric) csv << csv_num(sep.delta_epr);
        csv << ",";
        if (pure_input) {
            double fidelity;
            if (gaussian_input) {
                auto rep = gaussian_output(preset_covariance(point.input), v, g);
                fidelity = gaussian_overlap(preset_covariance(point.input), rep.v_out);
            } else {
                fidelity = fidelity_overlap(in_grid, teleport_cf(in_grid, v, g));
            }
            csv << csv_num(fidelity);
        }
        csv << "\n";
    }
    return csv.str();
}

} // namespace cvt
