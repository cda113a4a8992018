#include "cvt/gaussian.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace cvt {

namespace {

using Eigen::Matrix2d;
using Eigen::Matrix4d;
using Eigen::Vector4d;

// Real argument vector of the Gaussian CF, one mode per (lambda).
Eigen::Vector2d cf_argument(std::complex<double> l) {
    return {std::numbers::sqrt2 * l.imag(), -std::numbers::sqrt2 * l.real()};
}

Matrix4d symplectic_form4() {
    Matrix4d omega = Matrix4d::Zero();
    omega(0, 1) = 1.0;
    omega(1, 0) = -1.0;
    omega(2, 3) = 1.0;
    omega(3, 2) = -1.0;
    return omega;
}

// Proper (det = +1) eigenbasis rotation Q^T of a symmetric 2x2 matrix, plus
// its eigenvalues, so that Q^T m Q^TT = diag(eig0, eig1).
void diagonalize_spd2(const Matrix2d& m, Matrix2d& rot, Eigen::Vector2d& eig) {
    Eigen::SelfAdjointEigenSolver<Matrix2d> es(m);
    Matrix2d q = es.eigenvectors();
    if (q.determinant() < 0.0) q.col(1) *= -1.0;
    rot = q.transpose();
    eig = es.eigenvalues();
}

} // namespace

// ---------------------------------------------------------------------------
// Types
// ---------------------------------------------------------------------------

Matrix2d OneModeCovariance::matrix() const {
    Matrix2d m;
    m << sqq, sqp, sqp, spp;
    return m;
}

bool OneModeCovariance::physical(double tol) const {
    return sqq > 0.0 && spp > 0.0 && det() >= 0.25 - tol;
}

OneModeCovariance one_mode_from_matrix(const Matrix2d& m, double tol) {
    if (std::abs(m(0, 1) - m(1, 0)) > tol)
        throw MalformedInput("one-mode covariance matrix is not symmetric");
    return {m(0, 0), 0.5 * (m(0, 1) + m(1, 0)), m(1, 1)};
}

Matrix4d TwoModeCovariance::matrix() const {
    Matrix4d m;
    m.topLeftCorner<2, 2>() = v1.matrix();
    m.bottomRightCorner<2, 2>() = v2.matrix();
    m.topRightCorner<2, 2>() = c_block;
    m.bottomLeftCorner<2, 2>() = c_block.transpose();
    return m;
}

TwoModeCovariance two_mode_from_matrix(const Matrix4d& m, double tol) {
    if ((m - m.transpose()).cwiseAbs().maxCoeff() > tol)
        throw MalformedInput("two-mode covariance matrix is not symmetric");
    Matrix4d sym = 0.5 * (m + m.transpose());
    TwoModeCovariance v;
    v.v1 = one_mode_from_matrix(sym.topLeftCorner<2, 2>(), tol);
    v.v2 = one_mode_from_matrix(sym.bottomRightCorner<2, 2>(), tol);
    v.c_block = sym.topRightCorner<2, 2>();
    return v;
}

// ---------------------------------------------------------------------------
// Validation and invariants
// ---------------------------------------------------------------------------

std::array<double, 2> symplectic_eigenvalues(const TwoModeCovariance& v) {
    Matrix4d ov = symplectic_form4() * v.matrix();
    Eigen::EigenSolver<Matrix4d> es(ov, /*computeEigenvectors=*/false);
    std::array<double, 4> mods{};
    for (int i = 0; i < 4; ++i) mods[i] = std::abs(es.eigenvalues()[i]);
    std::sort(mods.begin(), mods.end());
    // Spectrum comes in +/- pairs; average each pair.
    return {0.5 * (mods[0] + mods[1]), 0.5 * (mods[2] + mods[3])};
}

ValidationReport validate_two_mode(const TwoModeCovariance& v, double tol) {
    ValidationReport report;
    Eigen::SelfAdjointEigenSolver<Matrix4d> es(v.matrix());
    report.positive_definite = es.eigenvalues().minCoeff() > 0.0;
    report.symplectic_eigenvalues = symplectic_eigenvalues(v);
    report.bona_fide =
        report.positive_definite && report.symplectic_eigenvalues[0] >= 0.5 - tol;
    return report;
}

// ---------------------------------------------------------------------------
// CF evaluation
// ---------------------------------------------------------------------------

std::complex<double> cf_eval_gaussian(const TwoModeCovariance& v, std::complex<double> l1,
                                      std::complex<double> l2) {
    Vector4d x;
    x.head<2>() = cf_argument(l1);
    x.tail<2>() = cf_argument(l2);
    return std::exp(std::complex<double>(-0.5 * x.dot(v.matrix() * x), 0.0));
}

std::complex<double> cf_eval_gaussian(const OneModeCovariance& m, std::complex<double> l,
                                      double mean_q, double mean_p) {
    Eigen::Vector2d x = cf_argument(l);
    double quad = -0.5 * x.dot(m.matrix() * x);
    double phase = x[0] * mean_q + x[1] * mean_p;
    return std::exp(std::complex<double>(quad, phase));
}

// ---------------------------------------------------------------------------
// Complex-parameter form
// ---------------------------------------------------------------------------

ComplexFormParams complex_form_from_covariance(const TwoModeCovariance& v) {
    ComplexFormParams p;
    p.a1 = 0.5 * (v.v1.sqq + v.v1.spp) - 0.5;
    p.a2 = 0.5 * (v.v2.sqq + v.v2.spp) - 0.5;
    p.b1 = {0.5 * (v.v1.spp - v.v1.sqq), -v.v1.sqp};
    p.b2 = {0.5 * (v.v2.spp - v.v2.sqq), -v.v2.sqp};
    const Matrix2d& c = v.c_block;
    // C = [[Re(F+G), Im(G-F)], [Im(F+G), Re(F-G)]]
    p.f = {0.5 * (c(0, 0) + c(1, 1)), 0.5 * (c(1, 0) - c(0, 1))};
    p.g = {0.5 * (c(0, 0) - c(1, 1)), 0.5 * (c(1, 0) + c(0, 1))};
    return p;
}

TwoModeCovariance covariance_from_complex_form(const ComplexFormParams& p) {
    TwoModeCovariance v;
    v.v1 = {p.a1 + 0.5 - p.b1.real(), -p.b1.imag(), p.a1 + 0.5 + p.b1.real()};
    v.v2 = {p.a2 + 0.5 - p.b2.real(), -p.b2.imag(), p.a2 + 0.5 + p.b2.real()};
    v.c_block << (p.f + p.g).real(), (p.g - p.f).imag(), (p.f + p.g).imag(),
        (p.f - p.g).real();
    if (!v.matrix().isApprox(v.matrix().transpose(), 1e-12))
        throw InvariantInconsistency("complex-form parameters assemble asymmetrically");
    return v;
}

std::complex<double> cf_eval_complex_form(const ComplexFormParams& p, std::complex<double> l1,
                                          std::complex<double> l2) {
    using std::conj, std::norm;
    std::complex<double> e = -(p.a1 + 0.5) * norm(l1) - 0.5 * conj(p.b1) * l1 * l1 -
                             0.5 * p.b1 * conj(l1) * conj(l1);
    e += -(p.a2 + 0.5) * norm(l2) - 0.5 * conj(p.b2) * l2 * l2 -
         0.5 * p.b2 * conj(l2) * conj(l2);
    e += -p.f * conj(l1) * l2 - conj(p.f) * l1 * conj(l2) + p.g * conj(l1) * conj(l2) +
         conj(p.g) * l1 * l2;
    return std::exp(e);
}

// ---------------------------------------------------------------------------
// Standard form I
// ---------------------------------------------------------------------------

StandardFormReduction to_standard_form(const TwoModeCovariance& v) {
    // Per-mode: rotate to principal axes, then squeeze both variances to the
    // common value b = sqrt(det V_i).
    auto reduce_mode = [](const OneModeCovariance& m) {
        Matrix2d rot;
        Eigen::Vector2d eig;
        diagonalize_spd2(m.matrix(), rot, eig);
        if (eig.minCoeff() <= 0.0)
            throw InvariantInconsistency(
                "per-mode covariance block is not positive definite");
        Matrix2d sq = squeeze2(std::sqrt(eig[1] / eig[0]));
        return Matrix2d(sq * rot);
    };

    Matrix2d l1 = reduce_mode(v.v1);
    Matrix2d l2 = reduce_mode(v.v2);
    Matrix2d c1 = l1 * v.c_block * l2.transpose();

    // With V1, V2 proportional to I, local rotations leave them untouched and
    // can diagonalize the cross block via its SVD (proper rotations only, so
    // the product of the two diagonal entries keeps the sign of det C).
    Eigen::JacobiSVD<Matrix2d> svd(c1, Eigen::ComputeFullU | Eigen::ComputeFullV);
    Matrix2d u = svd.matrixU();
    Matrix2d w = svd.matrixV();
    double sign = 1.0;
    if (u.determinant() < 0.0) {
        u.col(1) *= -1.0;
        sign = -sign;
    }
    if (w.determinant() < 0.0) {
        w.col(1) *= -1.0;
        sign = -sign;
    }
    l1 = u.transpose() * l1;
    l2 = w.transpose() * l2;

    StandardFormReduction red;
    red.params.b1 = std::sqrt(v.v1.det());
    red.params.b2 = std::sqrt(v.v2.det());
    red.params.c = svd.singularValues()[0];
    red.params.d = sign * svd.singularValues()[1];
    red.local1 = l1;
    red.local2 = l2;
    return red;
}

double ptranspose_min_eigenvalue(const StandardFormI& s) {
    TwoModeCovariance v = from_standard_form(s);
    v.c_block(1, 1) = -v.c_block(1, 1); // partial transposition: p2 -> -p2
    return symplectic_eigenvalues(v)[0];
}

double ptranspose_min_eigenvalue_symmetric(const StandardFormI& s, double tol) {
    if (std::abs(s.b1 - s.b2) > tol)
        throw WrongRegime("closed-form PT eigenvalue requires b1 == b2");
    double prod = (s.b1 - std::abs(s.d)) * (s.b1 - s.c);
    if (prod < 0.0)
        throw InvariantInconsistency("PT closed form is imaginary: input not bona fide");
    return std::sqrt(prod);
}

bool classicality_check(const OneModeCovariance& m, double tol) {
    double mean = 0.5 * (m.sqq + m.spp);
    double radius = std::hypot(0.5 * (m.sqq - m.spp), m.sqp);
    return mean - radius >= 0.5 - tol;
}

// ---------------------------------------------------------------------------
// Factories
// ---------------------------------------------------------------------------

OneModeCovariance vacuum_one_mode() { return {}; }

OneModeCovariance squeezed_thermal(double nbar, double s) {
    if (nbar < 0.0) throw MalformedInput("thermal occupancy must be nonnegative");
    double v = nbar + 0.5;
    return {v * std::exp(-2.0 * s), 0.0, v * std::exp(2.0 * s)};
}

TwoModeCovariance vacuum_two_mode() { return {}; }

TwoModeCovariance tmsv(double r) {
    TwoModeCovariance v;
    double ch = 0.5 * std::cosh(2.0 * r);
    double sh = 0.5 * std::sinh(2.0 * r);
    v.v1 = {ch, 0.0, ch};
    v.v2 = {ch, 0.0, ch};
    v.c_block << sh, 0.0, 0.0, -sh;
    return v;
}

TwoModeCovariance thermal_product(double n1, double n2) {
    TwoModeCovariance v;
    v.v1 = {n1 + 0.5, 0.0, n1 + 0.5};
    v.v2 = {n2 + 0.5, 0.0, n2 + 0.5};
    return v;
}

TwoModeCovariance from_standard_form(const StandardFormI& s) {
    TwoModeCovariance v;
    v.v1 = {s.b1, 0.0, s.b1};
    v.v2 = {s.b2, 0.0, s.b2};
    v.c_block << s.c, 0.0, 0.0, s.d;
    return v;
}

Matrix2d rotation2(double phi) {
    Matrix2d r;
    r << std::cos(phi), std::sin(phi), -std::sin(phi), std::cos(phi);
    return r;
}

Matrix2d squeeze2(double u) {
    if (!(u > 0.0)) throw DomainError("squeeze factor must be positive");
    double su = std::sqrt(u);
    Matrix2d s;
    s << su, 0.0, 0.0, 1.0 / su;
    return s;
}

Matrix4d direct_sum(const Matrix2d& s1, const Matrix2d& s2) {
    Matrix4d s = Matrix4d::Zero();
    s.topLeftCorner<2, 2>() = s1;
    s.bottomRightCorner<2, 2>() = s2;
    return s;
}

Matrix4d beam_splitter4(double theta) {
    double c = std::cos(theta), s = std::sin(theta);
    Matrix4d b = c * Matrix4d::Identity();
    b.topRightCorner<2, 2>() = s * Matrix2d::Identity();
    b.bottomLeftCorner<2, 2>() = -s * Matrix2d::Identity();
    return b;
}

Matrix4d two_mode_squeeze4(double r) {
    double ch = std::cosh(r), sh = std::sinh(r);
    Matrix2d z;
    z << 1.0, 0.0, 0.0, -1.0;
    Matrix4d s = Matrix4d::Zero();
    s.topLeftCorner<2, 2>() = ch * Matrix2d::Identity();
    s.bottomRightCorner<2, 2>() = ch * Matrix2d::Identity();
    s.topRightCorner<2, 2>() = sh * z;
    s.bottomLeftCorner<2, 2>() = sh * z;
    return s;
}

TwoModeCovariance apply_symplectic(const TwoModeCovariance& v, const Matrix4d& s) {
    return two_mode_from_matrix(s * v.matrix() * s.transpose(), 1e-9);
}

TwoModeCovariance apply_local(const TwoModeCovariance& v, const Matrix2d& s1,
                              const Matrix2d& s2) {
    return apply_symplectic(v, direct_sum(s1, s2));
}

} // namespace cvt
