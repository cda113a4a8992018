#pragma once

// Sampled characteristic functions over a square region of the lambda plane,
// for arbitrary (including non-Gaussian) one-mode inputs. The teleportation
// channel acts pointwise: chi_out = chi_in * resource factor. Fidelities,
// moments and Wigner functions are extracted by quadrature on the grid.

#include <complex>
#include <iosfwd>
#include <string>
#include <variant>

#include <Eigen/Dense>

#include "cvt/channel.hpp"
#include "cvt/gaussian.hpp"

namespace cvt {

// ---------------------------------------------------------------------------
// State presets
// ---------------------------------------------------------------------------

struct Coherent {
    std::complex<double> alpha;
};
struct Fock {
    int n = 0;
};
/// (|alpha> + e^{i phase} |-alpha>) / norm.
struct Cat {
    std::complex<double> alpha;
    double phase = 0.0;
};
struct SqueezedThermal {
    double nbar = 0.0;
    double s = 0.0;
};

using StatePreset = std::variant<Coherent, Fock, Cat, SqueezedThermal>;

/// Exact analytic CF of a preset; throws MalformedInput on invalid parameters.
std::complex<double> preset_cf(const StatePreset& p, std::complex<double> lambda);

bool preset_is_gaussian(const StatePreset& p);
bool preset_is_pure(const StatePreset& p);
/// Quadrature mean (mq, mp); nonzero only for coherent states.
Eigen::Vector2d preset_mean(const StatePreset& p);
/// Covariance of the Gaussian presets; throws WrongRegime otherwise.
OneModeCovariance preset_covariance(const StatePreset& p);
std::string preset_label(const StatePreset& p);

// ---------------------------------------------------------------------------
// CF grids
// ---------------------------------------------------------------------------

/// n x n samples of chi over [-extent, extent]^2; n is odd so the origin is a
/// sample. samples(i, j) = chi(axis(i) + i axis(j)).
struct CFGrid {
    double extent = 6.0;
    int n = 257;
    std::string label;
    Eigen::MatrixXcd samples;

    double step() const { return 2.0 * extent / (n - 1); }
    double axis(int k) const { return -extent + k * step(); }
    int center() const { return (n - 1) / 2; }
    std::complex<double> at(std::size_t i, std::size_t j) const {
        return samples(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    }
};

/// Checks chi(0) = 1, Hermitian symmetry chi(-l) = chi(l)*, |chi| <= 1.
/// Throws InvariantInconsistency on violation beyond tol.
void validate_cf_grid(const CFGrid& grid, double tol = 1e-12);

/// Samples the exact analytic CF of a preset. n must be odd and >= 65.
CFGrid build_cf(const StatePreset& p, double extent = 6.0, int n = 257);

/// Pointwise application of the factorized channel law.
CFGrid teleport_cf(const CFGrid& in, const TwoModeCovariance& v,
                   const MeasurementGeometry& g);

/// Overlap Tr[rho_a rho_b] = (1/pi) Int chi_a(l) chi_b(-l) d^2 l by midpoint
/// quadrature; equals the teleportation fidelity when a is pure.
double fidelity_overlap(const CFGrid& a, const CFGrid& b);

struct MeanPhotonResult {
    double value = 0.0;
    bool coarse_grid = false; // set when the spacing is too coarse to trust 1e-3
};

/// <a^dag a> from Richardson-extrapolated central differences of chi at the
/// origin.
MeanPhotonResult mean_photon(const CFGrid& a);

struct WignerGrid {
    double extent = 8.0;
    int n = 201;
    Eigen::MatrixXd w; // w(i, j) = W(q_i, p_j)
    double max_imag_residue = 0.0;

    double step() const { return 2.0 * extent / (n - 1); }
    double axis(int k) const { return -extent + k * step(); }
};

/// Symplectic Fourier transform of the CF grid, normalized so that the
/// Wigner function integrates to one.
WignerGrid wigner_transform(const CFGrid& a, double out_extent = 8.0, int out_n = 201);

// Grid import/export: plain text, small header (label, extent, n) followed by
// one "re im" pair per sample, row-major.
void write_cf_grid(std::ostream& os, const CFGrid& grid);
CFGrid read_cf_grid(std::istream& is);

/// CSV rows (q, p, w).
void write_wigner_csv(std::ostream& os, const WignerGrid& grid);

} // namespace cvt
