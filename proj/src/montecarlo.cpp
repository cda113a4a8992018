#include "cvt/montecarlo.hpp"

#include <cmath>

#include "cvt/rng.hpp"

namespace cvt {

namespace {

using Eigen::Matrix2d;
using Eigen::Vector2d;

struct ConditioningPieces {
    Vector2d outcome_mean;
    Matrix2d outcome_cov;   // Sigma_yy
    Matrix2d gain;          // K = Sigma_zy Sigma_yy^{-1}
    Matrix2d conditional;   // Sigma_B - K Sigma_yz
    Matrix2d displacement;  // diag(1/cos, 1/sin)
};

ConditioningPieces conditioning(const GaussianInput& in, const TwoModeCovariance& v,
                                const MeasurementGeometry& g) {
    double c = g.cos(), s = g.sin();
    ConditioningPieces cp;
    cp.outcome_mean = {c * in.mean[0], s * in.mean[1]};
    cp.outcome_cov << c * c * in.cov.sqq + s * s * v.v1.sqq,
        c * s * (in.cov.sqp - v.v1.sqp), c * s * (in.cov.sqp - v.v1.sqp),
        s * s * in.cov.spp + c * c * v.v1.spp;

    const Matrix2d& cb = v.c_block;
    Matrix2d cross; // rows: (q_B, p_B), columns: (q, p)
    cross << -s * cb(0, 0), c * cb(1, 0), -s * cb(0, 1), c * cb(1, 1);

    double det = cp.outcome_cov.determinant();
    double scale = cp.outcome_cov.diagonal().cwiseAbs().maxCoeff();
    if (!(det > 1e-14 * scale * scale))
        throw DegenerateConditioning("outcome covariance is singular");

    cp.gain = cross * cp.outcome_cov.inverse();
    cp.conditional = v.v2.matrix() - cp.gain * cross.transpose();
    cp.conditional = 0.5 * (cp.conditional + cp.conditional.transpose()).eval();
    cp.displacement = Vector2d(1.0 / c, 1.0 / s).asDiagonal();
    return cp;
}

} // namespace

OutcomeDistribution outcome_distribution(const GaussianInput& in, const TwoModeCovariance& v,
                                         const MeasurementGeometry& g) {
    ConditioningPieces cp = conditioning(in, v, g);
    return {cp.outcome_mean, cp.outcome_cov};
}

ConditionalState conditional_bob_state(const GaussianInput& in, const TwoModeCovariance& v,
                                       const MeasurementGeometry& g, const OutcomeSample& s) {
    ConditioningPieces cp = conditioning(in, v, g);
    ConditionalState state;
    state.mean = cp.gain * (Vector2d(s.q, s.p) - cp.outcome_mean);
    state.cov = one_mode_from_matrix(cp.conditional, 1e-9);
    return state;
}

Eigen::Matrix2d mixture_covariance_analytic(const GaussianInput& in,
                                            const TwoModeCovariance& v,
                                            const MeasurementGeometry& g) {
    ConditioningPieces cp = conditioning(in, v, g);
    Matrix2d total_gain = cp.gain + cp.displacement;
    Matrix2d mix = cp.conditional + total_gain * cp.outcome_cov * total_gain.transpose();
    return 0.5 * (mix + mix.transpose());
}

TrajectoryStats run_ensemble(const GaussianInput& in, const TwoModeCovariance& v,
                             const MeasurementGeometry& g, long n_samples,
                             std::uint64_t seed, const SampleSink& sink) {
    if (n_samples < 2) throw DomainError("ensemble needs at least two samples");
    ConditioningPieces cp = conditioning(in, v, g);

    // Cholesky factor of the 2x2 outcome covariance.
    double a = cp.outcome_cov(0, 0), b = cp.outcome_cov(0, 1), d = cp.outcome_cov(1, 1);
    double l11 = std::sqrt(a);
    double l21 = b / l11;
    double l22 = std::sqrt(std::max(d - l21 * l21, 0.0));

    // Welford accumulation of the displaced means.
    Vector2d mean = Vector2d::Zero();
    Matrix2d m2 = Matrix2d::Zero();
    for (long i = 0; i < n_samples; ++i) {
        double z0, z1;
        counter_gaussian_pair(seed, 0, static_cast<std::uint64_t>(i), z0, z1);
        Vector2d y = cp.outcome_mean + Vector2d(l11 * z0, l21 * z0 + l22 * z1);
        if (sink) {
            OutcomeSample s;
            s.q = y[0];
            s.p = y[1];
            s.mu = {y[0] / g.cos() / std::sqrt(2.0), y[1] / g.sin() / std::sqrt(2.0)};
            sink(s);
        }
        Vector2d displaced = cp.gain * (y - cp.outcome_mean) + cp.displacement * y;
        Vector2d delta = displaced - mean;
        mean += delta / static_cast<double>(i + 1);
        m2 += delta * (displaced - mean).transpose();
    }

    TrajectoryStats stats;
    stats.n_samples = n_samples;
    stats.mean = mean;
    Matrix2d spread = m2 / static_cast<double>(n_samples - 1);
    spread = 0.5 * (spread + spread.transpose()).eval();
    stats.covariance = cp.conditional + spread;

    double n = static_cast<double>(n_samples);
    stats.mean_se = (spread.diagonal() / n).cwiseSqrt();
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            stats.cov_se(i, j) = std::sqrt(
                (spread(i, i) * spread(j, j) + spread(i, j) * spread(i, j)) / (n - 1.0));
    return stats;
}

} // namespace cvt
