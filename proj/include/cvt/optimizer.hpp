#pragma once

// Minimization of the added noise over local squeezings (u1, u2) of a
// standard-form resource state, at balanced measurement. The objective is
//   N(u1,u2) = [ b1(u1 + 1/u1) + b2(u2 + 1/u2)
//                - 2 (c sqrt(u1 u2) + |d| / sqrt(u1 u2)) ] / 2,
// whose stationary points satisfy
//   b1 (u1^2 - 1)/u1 = b2 (u2^2 - 1)/u2,
//   b1 b2 (u1^2 - 1)(u2^2 - 1) = (c u1 u2 - |d|)^2.
// For symmetric states (b1 = b2) the unique solution is
//   u1 = u2 = sqrt((b1 - |d|)/(b1 - c)), with minimum 2 sqrt((b1-|d|)(b1-c)).

#include <cstdint>
#include <string>
#include <utility>

#include "cvt/gaussian.hpp"

namespace cvt {

struct SqueezeParams {
    double u1 = 1.0;
    double u2 = 1.0;
};

struct SeparabilityReport {
    double delta_epr = 0.0;   // defined only when symmetric
    double c_tilde_minus = 0.0;
    bool entangled = false;
    bool symmetric = false;
};

struct OptimizationResult {
    SqueezeParams v;
    double n_min = 0.0;
    std::pair<double, double> residuals{0.0, 0.0}; // stationarity system at v
    std::string method;                            // "closed-form" | "numeric"
    double grid_gap = 0.0;                         // |n_min - grid refined minimum|
};

struct OptimizerConfig {
    double u_max = 1e3;      // log-spaced search box [1/u_max, u_max]^2
    int coarse_points = 400; // points per axis of the certification grid
    int refine_rounds = 48;  // local refinement iterations around the grid best
    int random_starts = 8;   // extra Newton seeds, log-uniform in the box
    std::uint64_t seed = 0x5EEDULL;
    int max_threads = 0;     // 0: hardware concurrency (capped by TELEPORT_THREADS)
};

/// N(u1, u2); throws DomainError for nonpositive squeezings.
double noise_objective(const StandardFormI& s, const SqueezeParams& u);

/// Residuals of the stationarity system; both vanish at stationary points.
std::pair<double, double> stationarity_residuals(const StandardFormI& s,
                                                 const SqueezeParams& u);

/// Closed form for symmetric states. Throws WrongRegime when b1 != b2 and
/// SingularState when c >= b1 (solution diverges).
OptimizationResult optimize_symmetric(const StandardFormI& s, double tol = 1e-10);

/// Damped-Newton search from multiple starts, certified against a dense
/// log-spaced grid with local refinement. Throws UnboundedOptimum when the
/// minimum sits on the search-box boundary.
OptimizationResult optimize_general(const StandardFormI& s, const OptimizerConfig& config = {});

/// Entanglement diagnostics; for symmetric states also the minimized EPR
/// correlation Delta_EPR = 4 c~_-, with the entanglement threshold at 2.
SeparabilityReport separability(const StandardFormI& s, double tol = 1e-10);

} // namespace cvt
