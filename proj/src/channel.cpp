#include "cvt/channel.hpp"

#include <cassert>
#include <cmath>
#include <numbers>

namespace cvt {

MeasurementGeometry::MeasurementGeometry(double theta) : theta_(theta) {
    if (!(theta > 0.0) || !(theta < 0.5 * std::numbers::pi))
        throw GeometryError("measurement angle must lie strictly inside (0, pi/2)");
    cos_ = std::cos(theta);
    sin_ = std::sin(theta);
    tan_ = std::tan(theta);
}

MeasurementGeometry MeasurementGeometry::balanced() {
    return MeasurementGeometry(0.25 * std::numbers::pi);
}

EPRMoments epr_moments(const TwoModeCovariance& v, const MeasurementGeometry& g) {
    double c = g.cos(), s = g.sin();
    EPRMoments m;
    m.q2 = c * c * v.v2.sqq + s * s * v.v1.sqq - 2.0 * s * c * v.c_block(0, 0);
    m.p2 = s * s * v.v2.spp + c * c * v.v1.spp + 2.0 * s * c * v.c_block(1, 1);
    m.qp = s * c * (v.v2.sqp - v.v1.sqp) + c * c * v.c_block(1, 0) -
           s * s * v.c_block(0, 1);
    return m;
}

InducedField induced_covariance_direct(const TwoModeCovariance& v,
                                       const MeasurementGeometry& g) {
    double t = g.tan(), ct = g.cot();
    InducedField f;
    f.vm.sqq = 0.5 + v.v2.sqq + t * t * v.v1.sqq - 2.0 * t * v.c_block(0, 0);
    f.vm.spp = 0.5 + v.v2.spp + ct * ct * v.v1.spp + 2.0 * ct * v.c_block(1, 1);
    f.vm.sqp = v.v2.sqp - v.v1.sqp + ct * v.c_block(1, 0) - t * v.c_block(0, 1);
    f.n_added = 0.5 * (f.vm.sqq + f.vm.spp - 1.0);
    return f;
}

InducedField induced_covariance_from_moments(const TwoModeCovariance& v,
                                             const MeasurementGeometry& g) {
    EPRMoments m = epr_moments(v, g);
    InducedField f;
    f.vm.sqq = 0.5 + m.q2 / (g.cos() * g.cos());
    f.vm.spp = 0.5 + m.p2 / (g.sin() * g.sin());
    f.vm.sqp = m.qp / (g.sin() * g.cos());
    f.n_added = 0.5 * (f.vm.sqq + f.vm.spp - 1.0);
    return f;
}

InducedField induced_covariance(const TwoModeCovariance& v, const MeasurementGeometry& g) {
    InducedField f = induced_covariance_direct(v, g);
#ifndef NDEBUG
    InducedField check = induced_covariance_from_moments(v, g);
    double scale = 1.0 + std::abs(f.vm.sqq) + std::abs(f.vm.spp);
    assert(std::abs(f.vm.sqq - check.vm.sqq) < 1e-9 * scale);
    assert(std::abs(f.vm.spp - check.vm.spp) < 1e-9 * scale);
    assert(std::abs(f.vm.sqp - check.vm.sqp) < 1e-9 * scale);
#endif
    return f;
}

double added_noise(const TwoModeCovariance& v, const MeasurementGeometry& g) {
    EPRMoments m = epr_moments(v, g);
    return 0.5 * (m.q2 / (g.cos() * g.cos()) + m.p2 / (g.sin() * g.sin()));
}

TeleportReport gaussian_output(const OneModeCovariance& v_in, const TwoModeCovariance& v,
                               const MeasurementGeometry& g) {
    if (!v_in.physical())
        throw MalformedInput("input covariance violates the uncertainty relation");
    TeleportReport report;
    report.induced = induced_covariance(v, g);
    report.v_out = {v_in.sqq + report.induced.vm.sqq - 0.5,
                    v_in.sqp + report.induced.vm.sqp,
                    v_in.spp + report.induced.vm.spp - 0.5};
    report.theta = g.theta();
    report.resource = to_standard_form(v).params;
    return report;
}

std::complex<double> resource_cf_factor(const TwoModeCovariance& v,
                                        const MeasurementGeometry& g,
                                        std::complex<double> lambda) {
    std::complex<double> l1(g.cot() * lambda.real(), -g.tan() * lambda.imag());
    return cf_eval_gaussian(v, l1, lambda);
}

TwoModeCovariance unbalanced_to_balanced(const TwoModeCovariance& v,
                                         const MeasurementGeometry& g) {
    Eigen::Matrix2d s;
    s << g.tan(), 0.0, 0.0, g.cot();
    return apply_local(v, s, Eigen::Matrix2d::Identity());
}

} // namespace cvt
