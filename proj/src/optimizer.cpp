#include "cvt/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <thread>
#include <vector>

#include "cvt/rng.hpp"

namespace cvt {

namespace {

void check_params(const StandardFormI& s) {
    if (!(s.b1 > 0.0) || !(s.b2 > 0.0))
        throw DomainError("standard-form parameters require b1, b2 > 0");
}

void check_squeeze(const SqueezeParams& u) {
    if (!(u.u1 > 0.0) || !(u.u2 > 0.0))
        throw DomainError("squeeze factors must be positive");
}

struct Derivatives {
    double g1, g2;       // gradient
    double h11, h12, h22; // Hessian
};

Derivatives derivatives(const StandardFormI& s, double u1, double u2) {
    double ad = std::abs(s.d);
    double t = std::sqrt(u1 * u2);
    double w = s.c * t - ad / t;
    double a = 0.5 * (s.c * t + ad / t);
    Derivatives d;
    d.g1 = 0.5 * (s.b1 * (1.0 - 1.0 / (u1 * u1)) - w / u1);
    d.g2 = 0.5 * (s.b2 * (1.0 - 1.0 / (u2 * u2)) - w / u2);
    d.h11 = 0.5 * (2.0 * s.b1 / (u1 * u1 * u1) - (a - w) / (u1 * u1));
    d.h22 = 0.5 * (2.0 * s.b2 / (u2 * u2 * u2) - (a - w) / (u2 * u2));
    d.h12 = -0.5 * a / (u1 * u2);
    return d;
}

/// Damped Newton descent on N from a given start; returns the reached point
/// (which may be the start itself if no progress is possible).
SqueezeParams newton_descend(const StandardFormI& s, SqueezeParams u, double lo, double hi) {
    double n = noise_objective(s, u);
    for (int iter = 0; iter < 200; ++iter) {
        Derivatives d = derivatives(s, u.u1, u.u2);
        double gnorm = std::max(std::abs(d.g1), std::abs(d.g2));
        if (gnorm < 1e-15 * (1.0 + std::abs(n))) break;

        // Solve (H + mu I) step = -g, raising mu until descent direction.
        double mu = 0.0;
        double s1 = 0.0, s2 = 0.0;
        for (int k = 0; k < 60; ++k) {
            double h11 = d.h11 + mu, h22 = d.h22 + mu;
            double det = h11 * h22 - d.h12 * d.h12;
            if (det > 0.0 && h11 > 0.0) {
                s1 = (-d.g1 * h22 + d.g2 * d.h12) / det;
                s2 = (-d.g2 * h11 + d.g1 * d.h12) / det;
                if (s1 * d.g1 + s2 * d.g2 < 0.0) break;
            }
            mu = (mu == 0.0) ? 1e-8 * (1.0 + std::abs(d.h11) + std::abs(d.h22)) : 4.0 * mu;
        }

        double alpha = 1.0;
        bool moved = false;
        for (int k = 0; k < 60; ++k, alpha *= 0.5) {
            SqueezeParams trial{std::clamp(u.u1 + alpha * s1, lo, hi),
                                std::clamp(u.u2 + alpha * s2, lo, hi)};
            double nt = noise_objective(s, trial);
            if (nt < n) {
                u = trial;
                n = nt;
                moved = true;
                break;
            }
        }
        if (!moved) break;
    }
    return u;
}

/// Newton root-finding on the stationarity system itself, started at a point
/// already near the minimizer; drives both residuals to machine precision.
SqueezeParams polish_stationarity(const StandardFormI& s, SqueezeParams u, double lo,
                                  double hi) {
    double ad = std::abs(s.d);
    auto norm = [&](const SqueezeParams& p) {
        auto [r1, r2] = stationarity_residuals(s, p);
        return std::max(std::abs(r1), std::abs(r2));
    };
    double best = norm(u);
    for (int iter = 0; iter < 40 && best > 0.0; ++iter) {
        auto [r1, r2] = stationarity_residuals(s, u);
        double u1 = u.u1, u2 = u.u2;
        double j11 = s.b1 * (1.0 + 1.0 / (u1 * u1));
        double j12 = -s.b2 * (1.0 + 1.0 / (u2 * u2));
        double cross = s.c * u1 * u2 - ad;
        double j21 = 2.0 * s.b1 * s.b2 * u1 * (u2 * u2 - 1.0) - 2.0 * cross * s.c * u2;
        double j22 = 2.0 * s.b1 * s.b2 * (u1 * u1 - 1.0) * u2 - 2.0 * cross * s.c * u1;
        double det = j11 * j22 - j12 * j21;
        if (det == 0.0 || !std::isfinite(det)) break;
        double s1 = (-r1 * j22 + r2 * j12) / det;
        double s2 = (-r2 * j11 + r1 * j21) / det;
        SqueezeParams trial{std::clamp(u1 + s1, lo, hi), std::clamp(u2 + s2, lo, hi)};
        double trial_norm = norm(trial);
        if (!(trial_norm < best)) break;
        u = trial;
        best = trial_norm;
    }
    return u;
}

struct GridBest {
    double value = std::numeric_limits<double>::infinity();
    long index = -1;
};

int worker_count(int max_threads, long rows) {
    int hw = static_cast<int>(std::thread::hardware_concurrency());
    if (hw <= 0) hw = 1;
    int n = (max_threads > 0) ? max_threads : hw;
    if (const char* env = std::getenv("TELEPORT_THREADS")) {
        int cap = std::atoi(env);
        if (cap > 0) n = std::min(n, cap);
    }
    return static_cast<int>(std::min<long>(n, rows));
}

/// Dense log-spaced scan of N over [exp(x_lo), exp(x_hi)]^2; deterministic
/// regardless of worker count (exact value comparison, index tie-break).
GridBest scan_grid(const StandardFormI& s, double x_lo, double x_hi, int points,
                   int max_threads) {
    double step = (points > 1) ? (x_hi - x_lo) / (points - 1) : 0.0;
    int workers = worker_count(max_threads, points);
    std::vector<GridBest> partial(static_cast<std::size_t>(workers));

    auto scan_rows = [&](int worker) {
        GridBest best;
        for (int i = worker; i < points; i += workers) {
            double u1 = std::exp(x_lo + i * step);
            for (int j = 0; j < points; ++j) {
                double u2 = std::exp(x_lo + j * step);
                double n = noise_objective(s, {u1, u2});
                long idx = static_cast<long>(i) * points + j;
                if (n < best.value || (n == best.value && idx < best.index)) {
                    best.value = n;
                    best.index = idx;
                }
            }
        }
        partial[static_cast<std::size_t>(worker)] = best;
    };

    if (workers == 1) {
        scan_rows(0);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        for (int w = 0; w < workers; ++w) pool.emplace_back(scan_rows, w);
        for (auto& t : pool) t.join();
    }

    GridBest best;
    for (const auto& p : partial)
        if (p.value < best.value || (p.value == best.value && p.index < best.index))
            best = p;
    return best;
}

} // namespace

double noise_objective(const StandardFormI& s, const SqueezeParams& u) {
    check_squeeze(u);
    double t = std::sqrt(u.u1 * u.u2);
    return 0.5 * (s.b1 * (u.u1 + 1.0 / u.u1) + s.b2 * (u.u2 + 1.0 / u.u2) -
                  2.0 * (s.c * t + std::abs(s.d) / t));
}

std::pair<double, double> stationarity_residuals(const StandardFormI& s,
                                                 const SqueezeParams& u) {
    check_squeeze(u);
    double r1 = s.b1 * (u.u1 * u.u1 - 1.0) / u.u1 - s.b2 * (u.u2 * u.u2 - 1.0) / u.u2;
    double r2 = s.b1 * s.b2 * (u.u1 * u.u1 - 1.0) * (u.u2 * u.u2 - 1.0) -
                std::pow(s.c * u.u1 * u.u2 - std::abs(s.d), 2);
    return {r1, r2};
}

OptimizationResult optimize_symmetric(const StandardFormI& s, double tol) {
    check_params(s);
    if (std::abs(s.b1 - s.b2) > tol)
        throw WrongRegime("closed-form optimum requires b1 == b2");
    double ad = std::abs(s.d);
    if (s.c >= s.b1)
        throw SingularState("c >= b1: optimal squeezing diverges");
    OptimizationResult res;
    double v = std::sqrt((s.b1 - ad) / (s.b1 - s.c));
    res.v = {v, v};
    res.n_min = 2.0 * std::sqrt((s.b1 - ad) * (s.b1 - s.c));
    res.residuals = stationarity_residuals(s, res.v);
    res.method = "closed-form";
    return res;
}

OptimizationResult optimize_general(const StandardFormI& s, const OptimizerConfig& config) {
    check_params(s);
    double x_hi = std::log(config.u_max);
    double x_lo = -x_hi;
    int points = std::max(config.coarse_points, 16);

    GridBest coarse = scan_grid(s, x_lo, x_hi, points, config.max_threads);
    double step = (x_hi - x_lo) / (points - 1);
    int bi = static_cast<int>(coarse.index / points);
    int bj = static_cast<int>(coarse.index % points);
    if (bi == 0 || bj == 0 || bi == points - 1 || bj == points - 1)
        throw UnboundedOptimum("noise minimum sits on the search-box boundary");

    // Local refinement around the coarse best cell.
    double cx = x_lo + bi * step;
    double cy = x_lo + bj * step;
    double half = step;
    double n_grid = coarse.value;
    constexpr int kRefinePoints = 17;
    for (int round = 0; round < config.refine_rounds && half > 1e-14; ++round) {
        double lstep = 2.0 * half / (kRefinePoints - 1);
        double best_x = cx, best_y = cy;
        for (int i = 0; i < kRefinePoints; ++i) {
            for (int j = 0; j < kRefinePoints; ++j) {
                double x = cx - half + i * lstep;
                double y = cy - half + j * lstep;
                double n = noise_objective(s, {std::exp(x), std::exp(y)});
                if (n < n_grid) {
                    n_grid = n;
                    best_x = x;
                    best_y = y;
                }
            }
        }
        cx = best_x;
        cy = best_y;
        half *= 0.25;
    }

    // Newton polish from several seeds; the refined grid point is always one.
    double lo = std::exp(x_lo), hi = std::exp(x_hi);
    std::vector<SqueezeParams> seeds;
    seeds.push_back({std::exp(cx), std::exp(cy)});
    seeds.push_back({1.0, 1.0});
    double b_mean = 0.5 * (s.b1 + s.b2);
    if (s.c < b_mean) {
        double v = std::sqrt((b_mean - std::abs(s.d)) / (b_mean - s.c));
        seeds.push_back({v, v});
    }
    for (int k = 0; k < config.random_starts; ++k) {
        double x = x_lo + (x_hi - x_lo) * counter_uniform(config.seed, 1, 2 * k);
        double y = x_lo + (x_hi - x_lo) * counter_uniform(config.seed, 1, 2 * k + 1);
        seeds.push_back({std::exp(x), std::exp(y)});
    }

    OptimizationResult res;
    res.method = "numeric";
    res.n_min = std::numeric_limits<double>::infinity();
    for (const auto& seed : seeds) {
        SqueezeParams u = newton_descend(s, seed, lo, hi);
        double n = noise_objective(s, u);
        if (n < res.n_min) {
            res.n_min = n;
            res.v = u;
        }
    }
    // Descent stops on the gradient; sharpen the point on the stationarity
    // system so the reported residuals reach machine precision.
    SqueezeParams polished = polish_stationarity(s, res.v, lo, hi);
    if (noise_objective(s, polished) <= res.n_min + 1e-12 * (1.0 + std::abs(res.n_min))) {
        res.v = polished;
        res.n_min = noise_objective(s, polished);
    }
    res.residuals = stationarity_residuals(s, res.v);
    res.grid_gap = std::abs(res.n_min - n_grid);
    return res;
}

SeparabilityReport separability(const StandardFormI& s, double tol) {
    check_params(s);
    SeparabilityReport rep;
    rep.symmetric = std::abs(s.b1 - s.b2) <= tol;
    if (rep.symmetric) {
        rep.c_tilde_minus = ptranspose_min_eigenvalue_symmetric(s, tol);
        rep.delta_epr = 4.0 * rep.c_tilde_minus;
    } else {
        rep.c_tilde_minus = ptranspose_min_eigenvalue(s);
        rep.delta_epr = std::numeric_limits<double>::quiet_NaN();
    }
    rep.entangled = rep.c_tilde_minus < 0.5;
    return rep;
}

} // namespace cvt
