#pragma once

// Covariance-matrix and characteristic-function toolkit for one- and
// two-mode Gaussian states.
//
// Conventions used throughout the library:
//   * canonical quadratures q = (a + a^dag)/sqrt(2), p = (a - a^dag)/(i sqrt(2)),
//     so the vacuum state has variance 1/2 in each quadrature;
//   * chi(lambda) = Tr[rho D(lambda)] with D(lambda) = exp(lambda a^dag - lambda* a);
//   * a Gaussian chi is exp(-x^T V x / 2) with the real vector
//       x = (sqrt(2) Im l1, -sqrt(2) Re l1, sqrt(2) Im l2, -sqrt(2) Re l2),
//     which follows from D(lambda) = exp(i sqrt(2) (Im lambda q - Re lambda p)).
//     With vacuum V = I/2 this reproduces chi(lambda) = exp(-|lambda|^2 / 2).
//
// Two-mode covariance matrices are ordered (q1, p1, q2, p2).

#include <array>
#include <complex>

#include <Eigen/Dense>

#include "cvt/errors.hpp"

namespace cvt {

inline constexpr double kVacuumVariance = 0.5;

// ---------------------------------------------------------------------------
// Domain types
// ---------------------------------------------------------------------------

/// Second moments of a single mode: Var(q), Cov(q,p) symmetrized, Var(p).
struct OneModeCovariance {
    double sqq = kVacuumVariance;
    double sqp = 0.0;
    double spp = kVacuumVariance;

    Eigen::Matrix2d matrix() const;
    /// det of the 2x2 matrix; >= 1/4 for physical states.
    double det() const { return sqq * spp - sqp * sqp; }
    /// Robertson-Schroedinger check: sqq, spp > 0 and det >= 1/4 - tol.
    bool physical(double tol = 1e-9) const;
};

/// Builds from a 2x2 matrix; throws MalformedInput when asymmetric beyond tol.
OneModeCovariance one_mode_from_matrix(const Eigen::Matrix2d& m, double tol = 1e-9);

/// Block-structured two-mode covariance: per-mode blocks V1, V2 and the
/// cross-correlation block C with entries
///   [ s(q1q2)  s(q1p2) ]
///   [ s(p1q2)  s(p1p2) ].
struct TwoModeCovariance {
    OneModeCovariance v1;
    OneModeCovariance v2;
    Eigen::Matrix2d c_block = Eigen::Matrix2d::Zero();

    Eigen::Matrix4d matrix() const;
};

/// Builds from a 4x4 matrix; throws MalformedInput when asymmetric beyond tol.
TwoModeCovariance two_mode_from_matrix(const Eigen::Matrix4d& m, double tol = 1e-9);

/// Parameters of the complex-valued Gaussian CF
///   chi = exp[-(A1+1/2)|l1|^2 - B1* l1^2/2 - B1 (l1*)^2/2] x (mode 2 alike)
///       x exp[-F l1* l2 - F* l1 l2* + G l1* l2* + G* l1 l2].
struct ComplexFormParams {
    double a1 = 0.0;
    double a2 = 0.0;
    std::complex<double> b1;
    std::complex<double> b2;
    std::complex<double> f;
    std::complex<double> g;
};

/// Standard form I of a local-squeezing equivalence class:
/// V1 = b1 I, V2 = b2 I, C = diag(c, d) with c >= |d|, c >= 0.
/// d keeps its sign; canonical entangled states have d <= 0.
struct StandardFormI {
    double b1 = kVacuumVariance;
    double b2 = kVacuumVariance;
    double c = 0.0;
    double d = 0.0;
};

struct ValidationReport {
    bool positive_definite = false;
    std::array<double, 2> symplectic_eigenvalues{0.0, 0.0}; // ascending
    bool bona_fide = false;
};

struct StandardFormReduction {
    StandardFormI params;
    Eigen::Matrix2d local1; // symplectic on mode 1
    Eigen::Matrix2d local2; // symplectic on mode 2
};

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

/// Positivity + symplectic spectrum diagnostics. bona_fide means
/// min symplectic eigenvalue >= 1/2 - tol.
ValidationReport validate_two_mode(const TwoModeCovariance& v, double tol = 1e-9);

/// chi(l1, l2) of the zero-mean Gaussian state with covariance v.
std::complex<double> cf_eval_gaussian(const TwoModeCovariance& v, std::complex<double> l1,
                                      std::complex<double> l2);

/// One-mode chi(l) of the zero-mean Gaussian state with covariance m and mean
/// (mq, mp); the mean enters as the phase exp(i sqrt(2)(Im l mq - Re l mp)).
std::complex<double> cf_eval_gaussian(const OneModeCovariance& m, std::complex<double> l,
                                      double mean_q = 0.0, double mean_p = 0.0);

ComplexFormParams complex_form_from_covariance(const TwoModeCovariance& v);
/// Throws InvariantInconsistency if the parameters do not assemble into a
/// symmetric covariance matrix.
TwoModeCovariance covariance_from_complex_form(const ComplexFormParams& p);
/// Direct evaluation of the complex-parameter CF form (independent of
/// cf_eval_gaussian; the two routes must agree).
std::complex<double> cf_eval_complex_form(const ComplexFormParams& p, std::complex<double> l1,
                                          std::complex<double> l2);

/// Reduces v to standard form I by local symplectics (returned per mode).
/// Throws InvariantInconsistency when a per-mode block is not positive
/// definite (non-bona-fide input).
StandardFormReduction to_standard_form(const TwoModeCovariance& v);

/// Symplectic eigenvalues (moduli of the spectrum of i Omega V), ascending;
/// vacuum gives (1/2, 1/2).
std::array<double, 2> symplectic_eigenvalues(const TwoModeCovariance& v);

/// Smallest symplectic eigenvalue of the partially transposed covariance
/// matrix, computed from the full PT spectrum. Entanglement iff < 1/2.
double ptranspose_min_eigenvalue(const StandardFormI& s);

/// Closed form sqrt((b1 - |d|)(b1 - c)) for symmetric states; throws
/// WrongRegime when b1 != b2 beyond tol. Coincides with the PT spectrum for
/// the canonical correlation sign d <= 0.
double ptranspose_min_eigenvalue_symmetric(const StandardFormI& s, double tol = 1e-10);

/// True iff m - I/2 >= 0 (min eigenvalue >= -tol): the state admits a
/// well-defined P representation.
bool classicality_check(const OneModeCovariance& m, double tol = 1e-12);

// ---------------------------------------------------------------------------
// State factories and symplectic building blocks
// ---------------------------------------------------------------------------

OneModeCovariance vacuum_one_mode();
/// Squeezed thermal one-mode state: diag((nbar + 1/2) e^{-2s}, (nbar + 1/2) e^{2s}).
OneModeCovariance squeezed_thermal(double nbar, double s);

TwoModeCovariance vacuum_two_mode();
/// Two-mode squeezed vacuum with squeezing parameter r:
/// V1 = V2 = cosh(2r)/2 I, C = diag(sinh(2r)/2, -sinh(2r)/2).
TwoModeCovariance tmsv(double r);
/// Product of two thermal states with mean occupancies n1, n2.
TwoModeCovariance thermal_product(double n1, double n2);
/// Assembles the covariance matrix of a standard-form state.
TwoModeCovariance from_standard_form(const StandardFormI& s);

/// Proper rotation (symplectic for one mode).
Eigen::Matrix2d rotation2(double phi);
/// diag(sqrt(u), 1/sqrt(u)): scales Var(q) by u, Var(p) by 1/u. Requires u > 0.
Eigen::Matrix2d squeeze2(double u);
Eigen::Matrix4d direct_sum(const Eigen::Matrix2d& s1, const Eigen::Matrix2d& s2);
/// Symplectic beam-splitter mixing the two modes with angle theta.
Eigen::Matrix4d beam_splitter4(double theta);
/// Two-mode squeezing: vacuum -> tmsv(r).
Eigen::Matrix4d two_mode_squeeze4(double r);

TwoModeCovariance apply_symplectic(const TwoModeCovariance& v, const Eigen::Matrix4d& s);
TwoModeCovariance apply_local(const TwoModeCovariance& v, const Eigen::Matrix2d& s1,
                              const Eigen::Matrix2d& s2);

} // namespace cvt
