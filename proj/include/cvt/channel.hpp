#pragma once

// The teleportation channel in the CF picture. Alice mixes the input with
// mode 1 of the resource on a beam splitter of angle theta and measures the
// commuting pair
//   q = cos(theta) q_in - sin(theta) q_1,   p = sin(theta) p_in + cos(theta) p_1;
// after Bob's outcome-dependent displacement the output CF factorizes as
//   chi_out(l) = chi_in(l) * chi_AB(cot(theta) Re l - i tan(theta) Im l, l),
// i.e. the channel superposes a measurement-induced classical field M on the
// input. This module computes M's covariance, the added noise, and the
// Gaussian output state.

#include <complex>

#include "cvt/gaussian.hpp"

namespace cvt {

/// Beam-splitter angle of the joint measurement; theta must lie strictly
/// inside (0, pi/2) so that cot and tan stay finite.
class MeasurementGeometry {
  public:
    explicit MeasurementGeometry(double theta);
    static MeasurementGeometry balanced();

    double theta() const { return theta_; }
    double tan() const { return tan_; }
    double cot() const { return 1.0 / tan_; }
    double cos() const { return cos_; }
    double sin() const { return sin_; }

  private:
    double theta_;
    double cos_, sin_, tan_;
};

/// Second moments of the commuting resource combinations
/// Q = cos(theta) q2 - sin(theta) q1, P = sin(theta) p2 + cos(theta) p1.
struct EPRMoments {
    double q2 = 0.0; // <Q^2>
    double p2 = 0.0; // <P^2>
    double qp = 0.0; // <QP> symmetrized
};

/// The measurement-induced field: covariance and its mean occupancy.
struct InducedField {
    OneModeCovariance vm;
    double n_added = 0.0;
};

struct TeleportReport {
    InducedField induced;
    OneModeCovariance v_out; // defined for Gaussian input
    double theta = 0.0;
    StandardFormI resource;  // standard-form fingerprint of the resource
};

EPRMoments epr_moments(const TwoModeCovariance& v, const MeasurementGeometry& g);

/// V_M from the direct entry formulas s(qq), s(qp), s(pp).
InducedField induced_covariance_direct(const TwoModeCovariance& v,
                                       const MeasurementGeometry& g);
/// V_M through the EPR moments: s(qq) = 1/2 + <Q^2>/cos^2, etc.
InducedField induced_covariance_from_moments(const TwoModeCovariance& v,
                                             const MeasurementGeometry& g);
/// Primary entry point (direct path; cross-checked against the moment path
/// in debug builds).
InducedField induced_covariance(const TwoModeCovariance& v, const MeasurementGeometry& g);

/// Mean occupancy of the induced field,
/// N = [ <Q^2>/cos^2 + <P^2>/sin^2 ] / 2 = (s(qq) + s(pp) - 1)/2.
double added_noise(const TwoModeCovariance& v, const MeasurementGeometry& g);

/// Output covariance for a Gaussian input: v_out = v_in + V_M - I/2.
TeleportReport gaussian_output(const OneModeCovariance& v_in, const TwoModeCovariance& v,
                               const MeasurementGeometry& g);

/// The multiplicative channel factor g(l) = chi_AB(cot Re l - i tan Im l, l);
/// exp(-|l|^2/2) g(l) is the CF of the induced field.
std::complex<double> resource_cf_factor(const TwoModeCovariance& v,
                                        const MeasurementGeometry& g,
                                        std::complex<double> lambda);

/// Local squeezing of mode 1 (q1 -> tan q1, p1 -> cot p1) that maps the
/// unbalanced measurement onto the balanced one:
/// added_noise(V, theta) == added_noise(result, pi/4).
TwoModeCovariance unbalanced_to_balanced(const TwoModeCovariance& v,
                                         const MeasurementGeometry& g);

} // namespace cvt
