#include "cvt/cf_grid.hpp"

#include <cmath>
#include <complex>
#include <istream>
#include <numbers>
#include <ostream>

namespace cvt {

namespace {

using std::complex;

constexpr complex<double> kI{0.0, 1.0};

// <beta| D(lambda) |gamma> for coherent states beta, gamma.
complex<double> coherent_matrix_element(complex<double> beta, complex<double> gamma,
                                        complex<double> l) {
    return std::exp(-0.5 * (std::norm(beta) + std::norm(gamma) + std::norm(l)) +
                    std::conj(beta) * gamma + std::conj(beta) * l - std::conj(l) * gamma);
}

struct PresetCfVisitor {
    complex<double> l;

    complex<double> operator()(const Coherent& c) const {
        return std::exp(-0.5 * std::norm(l) + l * std::conj(c.alpha) -
                        std::conj(l) * c.alpha);
    }
    complex<double> operator()(const Fock& f) const {
        if (f.n < 0) throw MalformedInput("Fock occupation must be nonnegative");
        return std::exp(-0.5 * std::norm(l)) *
               std::laguerre(static_cast<unsigned>(f.n), std::norm(l));
    }
    complex<double> operator()(const Cat& c) const {
        complex<double> phase = std::exp(kI * c.phase);
        complex<double> num = coherent_matrix_element(c.alpha, c.alpha, l) +
                              coherent_matrix_element(-c.alpha, -c.alpha, l) +
                              phase * coherent_matrix_element(c.alpha, -c.alpha, l) +
                              std::conj(phase) * coherent_matrix_element(-c.alpha, c.alpha, l);
        double norm2 = 2.0 * (1.0 + std::cos(c.phase) * std::exp(-2.0 * std::norm(c.alpha)));
        if (norm2 <= 0.0) throw MalformedInput("cat state has vanishing norm");
        return num / norm2;
    }
    complex<double> operator()(const SqueezedThermal& st) const {
        return cf_eval_gaussian(squeezed_thermal(st.nbar, st.s), l);
    }
};

std::string format_complex(complex<double> z) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%g%+gi", z.real(), z.imag());
    return buf;
}

} // namespace

// ---------------------------------------------------------------------------
// Presets
// ---------------------------------------------------------------------------

complex<double> preset_cf(const StatePreset& p, complex<double> lambda) {
    return std::visit(PresetCfVisitor{lambda}, p);
}

bool preset_is_gaussian(const StatePreset& p) {
    return std::holds_alternative<Coherent>(p) || std::holds_alternative<SqueezedThermal>(p);
}

bool preset_is_pure(const StatePreset& p) {
    if (const auto* st = std::get_if<SqueezedThermal>(&p)) return st->nbar == 0.0;
    return true;
}

Eigen::Vector2d preset_mean(const StatePreset& p) {
    if (const auto* c = std::get_if<Coherent>(&p))
        return {std::numbers::sqrt2 * c->alpha.real(), std::numbers::sqrt2 * c->alpha.imag()};
    return Eigen::Vector2d::Zero();
}

OneModeCovariance preset_covariance(const StatePreset& p) {
    if (std::holds_alternative<Coherent>(p)) return vacuum_one_mode();
    if (const auto* st = std::get_if<SqueezedThermal>(&p))
        return squeezed_thermal(st->nbar, st->s);
    throw WrongRegime("covariance is defined only for Gaussian presets");
}

std::string preset_label(const StatePreset& p) {
    if (const auto* c = std::get_if<Coherent>(&p))
        return "coherent(" + format_complex(c->alpha) + ")";
    if (const auto* f = std::get_if<Fock>(&p)) return "fock(" + std::to_string(f->n) + ")";
    if (const auto* c = std::get_if<Cat>(&p)) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%g", c->phase);
        return "cat(" + format_complex(c->alpha) + ", " + buf + ")";
    }
    const auto& st = std::get<SqueezedThermal>(p);
    char buf[64];
    std::snprintf(buf, sizeof(buf), "squeezed_thermal(%g, %g)", st.nbar, st.s);
    return buf;
}

// ---------------------------------------------------------------------------
// Grids
// ---------------------------------------------------------------------------

void validate_cf_grid(const CFGrid& grid, double tol) {
    if (grid.n < 3 || grid.n % 2 == 0)
        throw MalformedInput("CF grid needs an odd point count so the origin is a sample");
    if (grid.samples.rows() != grid.n || grid.samples.cols() != grid.n)
        throw MalformedInput("CF grid sample block does not match its point count");
    int c = grid.center();
    if (std::abs(grid.samples(c, c) - 1.0) > tol)
        throw InvariantInconsistency("CF grid is not normalized at the origin");
    for (int i = 0; i < grid.n; ++i) {
        for (int j = 0; j < grid.n; ++j) {
            complex<double> z = grid.samples(i, j);
            if (std::abs(z) > 1.0 + tol)
                throw InvariantInconsistency("CF grid has modulus above one");
            complex<double> mirrored = grid.samples(grid.n - 1 - i, grid.n - 1 - j);
            if (std::abs(mirrored - std::conj(z)) > tol)
                throw InvariantInconsistency("CF grid violates Hermitian symmetry");
        }
    }
}

CFGrid build_cf(const StatePreset& p, double extent, int n) {
    if (!(extent > 0.0)) throw MalformedInput("grid extent must be positive");
    if (n % 2 == 0 || n < 65)
        throw MalformedInput("grid needs an odd point count >= 65 (origin on grid)");
    CFGrid grid;
    grid.extent = extent;
    grid.n = n;
    grid.label = preset_label(p);
    grid.samples.resize(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            grid.samples(i, j) = preset_cf(p, {grid.axis(i), grid.axis(j)});
    return grid;
}

CFGrid teleport_cf(const CFGrid& in, const TwoModeCovariance& v,
                   const MeasurementGeometry& g) {
    CFGrid out = in;
    out.label = in.label + " teleported";
    for (int i = 0; i < in.n; ++i) {
        for (int j = 0; j < in.n; ++j) {
            complex<double> l(in.axis(i), in.axis(j));
            out.samples(i, j) = in.samples(i, j) * resource_cf_factor(v, g, l);
        }
    }
    validate_cf_grid(out, 1e-10);
    return out;
}

double fidelity_overlap(const CFGrid& a, const CFGrid& b) {
    if (a.n != b.n || a.extent != b.extent)
        throw GridMismatch("fidelity requires grids with equal extent and resolution");
    complex<double> acc = 0.0;
    for (int i = 0; i < a.n; ++i)
        for (int j = 0; j < a.n; ++j)
            acc += a.samples(i, j) * b.samples(a.n - 1 - i, a.n - 1 - j);
    double h = a.step();
    return (acc * h * h / std::numbers::pi).real();
}

MeanPhotonResult mean_photon(const CFGrid& a) {
    int c = a.center();
    if (c < 4) throw MalformedInput("grid too small for central differences");
    auto second_diff = [&](bool along_rows, int cells) {
        complex<double> plus = along_rows ? a.samples(c + cells, c) : a.samples(c, c + cells);
        complex<double> minus = along_rows ? a.samples(c - cells, c) : a.samples(c, c - cells);
        double step = cells * a.step();
        return (plus.real() - 2.0 * a.samples(c, c).real() + minus.real()) / (step * step);
    };
    // Richardson: (4 D(h) - D(2h)) / 3 per axis.
    double dxx = (4.0 * second_diff(true, 2) - second_diff(true, 4)) / 3.0;
    double dyy = (4.0 * second_diff(false, 2) - second_diff(false, 4)) / 3.0;
    MeanPhotonResult res;
    res.value = -0.25 * (dxx + dyy) - 0.5;
    res.coarse_grid = a.n < 129;
    return res;
}

WignerGrid wigner_transform(const CFGrid& a, double out_extent, int out_n) {
    WignerGrid wg;
    wg.extent = out_extent;
    wg.n = out_n;

    // W(q,p) = (1/2 pi^2) Int d(Re l) d(Im l) chi(l) e^{-i sqrt2 (Im l q - Re l p)},
    // evaluated as two dense stages: first over Im l, then over Re l.
    Eigen::MatrixXcd inner(a.n, out_n); // (Re-l row, q column)
    Eigen::MatrixXcd phase_q(a.n, out_n);
    for (int i = 0; i < a.n; ++i)
        for (int k = 0; k < out_n; ++k)
            phase_q(i, k) = std::exp(-kI * (std::numbers::sqrt2 * a.axis(i) * wg.axis(k)));
    inner.noalias() = a.samples * phase_q;

    Eigen::MatrixXcd phase_p(a.n, out_n);
    for (int i = 0; i < a.n; ++i)
        for (int k = 0; k < out_n; ++k)
            phase_p(i, k) = std::exp(kI * (std::numbers::sqrt2 * a.axis(i) * wg.axis(k)));
    Eigen::MatrixXcd w_complex = inner.transpose() * phase_p; // (q row, p column)

    double scale = a.step() * a.step() / (2.0 * std::numbers::pi * std::numbers::pi);
    wg.w = scale * w_complex.real();
    wg.max_imag_residue = scale * w_complex.imag().cwiseAbs().maxCoeff();
    return wg;
}

void write_cf_grid(std::ostream& os, const CFGrid& grid) {
    os << "cf-grid v1\n";
    os << "label " << grid.label << "\n";
    os.precision(17);
    os << "extent " << grid.extent << "\n";
    os << "n " << grid.n << "\n";
    for (int i = 0; i < grid.n; ++i)
        for (int j = 0; j < grid.n; ++j)
            os << grid.samples(i, j).real() << " " << grid.samples(i, j).imag() << "\n";
}

CFGrid read_cf_grid(std::istream& is) {
    std::string magic, version;
    is >> magic >> version;
    if (magic != "cf-grid" || version != "v1")
        throw MalformedInput("not a cf-grid v1 stream");
    std::string key;
    CFGrid grid;
    is >> key;
    if (key != "label") throw MalformedInput("cf-grid header: expected label");
    is.ignore(1);
    std::getline(is, grid.label);
    is >> key >> grid.extent;
    if (key != "extent") throw MalformedInput("cf-grid header: expected extent");
    is >> key >> grid.n;
    if (key != "n") throw MalformedInput("cf-grid header: expected point count");
    if (grid.n < 3 || grid.n % 2 == 0) throw MalformedInput("cf-grid: invalid point count");
    grid.samples.resize(grid.n, grid.n);
    for (int i = 0; i < grid.n; ++i) {
        for (int j = 0; j < grid.n; ++j) {
            double re, im;
            if (!(is >> re >> im)) throw MalformedInput("cf-grid: truncated sample block");
            grid.samples(i, j) = {re, im};
        }
    }
    return grid;
}

void write_wigner_csv(std::ostream& os, const WignerGrid& grid) {
    os << "q,p,w\n";
    os.precision(12);
    for (int i = 0; i < grid.n; ++i)
        for (int j = 0; j < grid.n; ++j)
            os << grid.axis(i) << "," << grid.axis(j) << "," << grid.w(i, j) << "\n";
}

} // namespace cvt
