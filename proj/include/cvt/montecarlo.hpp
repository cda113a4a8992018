#pragma once

// Trajectory-level simulation of the protocol for Gaussian input and
// resource: sample the commuting measurement outcomes, condition Bob's mode,
// displace by mu = (q/cos + i p/sin)/sqrt(2), and average the displaced
// ensemble. Serves as an end-to-end statistical oracle for the analytic
// channel law.

#include <cstdint>
#include <functional>

#include <Eigen/Dense>

#include "cvt/channel.hpp"
#include "cvt/gaussian.hpp"

namespace cvt {

/// A (possibly displaced) Gaussian input state.
struct GaussianInput {
    Eigen::Vector2d mean = Eigen::Vector2d::Zero(); // (<q>, <p>)
    OneModeCovariance cov;
};

/// Zero-mean-shifted Gaussian distribution of the measurement outcomes (q, p).
struct OutcomeDistribution {
    Eigen::Vector2d mean = Eigen::Vector2d::Zero();
    Eigen::Matrix2d cov = Eigen::Matrix2d::Zero();
};

struct OutcomeSample {
    double q = 0.0;
    double p = 0.0;
    std::complex<double> mu; // (q/cos + i p/sin)/sqrt(2)
};

/// Bob's conditional Gaussian state for one outcome; the covariance is
/// outcome-independent, only the mean moves.
struct ConditionalState {
    Eigen::Vector2d mean = Eigen::Vector2d::Zero();
    OneModeCovariance cov;
};

struct TrajectoryStats {
    long n_samples = 0;
    Eigen::Vector2d mean = Eigen::Vector2d::Zero();  // mixture mean
    Eigen::Matrix2d covariance = Eigen::Matrix2d::Zero(); // mixture covariance
    Eigen::Vector2d mean_se = Eigen::Vector2d::Zero();
    Eigen::Matrix2d cov_se = Eigen::Matrix2d::Zero();
};

OutcomeDistribution outcome_distribution(const GaussianInput& in, const TwoModeCovariance& v,
                                         const MeasurementGeometry& g);

/// Gaussian conditioning of the joint (in, A, B) state on the measured pair.
/// Throws DegenerateConditioning when the outcome covariance is singular.
ConditionalState conditional_bob_state(const GaussianInput& in, const TwoModeCovariance& v,
                                       const MeasurementGeometry& g, const OutcomeSample& s);

/// Expected mixture covariance of the displaced ensemble, computed in closed
/// form from the conditioning algebra (no sampling). Must coincide with the
/// output covariance of the analytic channel.
Eigen::Matrix2d mixture_covariance_analytic(const GaussianInput& in,
                                            const TwoModeCovariance& v,
                                            const MeasurementGeometry& g);

using SampleSink = std::function<void(const OutcomeSample&)>;

/// Samples n outcomes with a counter-based stream (bit-identical for a given
/// seed regardless of traversal), accumulates the displaced ensemble.
TrajectoryStats run_ensemble(const GaussianInput& in, const TwoModeCovariance& v,
                             const MeasurementGeometry& g, long n_samples,
                             std::uint64_t seed, const SampleSink& sink = {});

} // namespace cvt
