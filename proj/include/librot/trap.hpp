#ifndef LIBROT_TRAP_HPP
#define LIBROT_TRAP_HPP

#include <cmath>
#include <vector>

#include "librot/constants.hpp"
#include "librot/errors.hpp"
#include "librot/kinematics.hpp"

namespace librot {

/// Quadrupole trap parameters. The curvature vector kappa must satisfy the
/// Laplace condition sum(kappa) = 0 within 1e-12.
struct TrapConfig {
  double U_DC = 0.0;                    // V
  double U_AC = 100.0;                  // V
  double Omega_AC = 2 * constants::pi * 250e3;  // rad/s
  double l0 = 100e-6;                   // m
  Vec3 kappa = Vec3(-0.95, -1.05, 2.0);  // dimensionless

  /// Reported asymmetry between the transverse curvatures.
  double epsilon() const { return (kappa[1] - kappa[0]) / 2.0; }

  void validate() const {
    if (std::abs(kappa.sum()) > 1e-12)
      throw ConfigError("trap curvatures must sum to zero (Laplace condition)");
    if (!(Omega_AC > 0.0)) throw ConfigError("Omega_AC must be positive");
    if (!(l0 > 0.0)) throw ConfigError("l0 must be positive");
  }
};

/// One multiplicative modulation channel on the AC amplitude.
struct ModulationChannel {
  double delta = 0.0;    // relative depth, |delta| < 1
  double omega_m = 0.0;  // rad/s
  double phi_m = 0.0;    // rad, referenced to absolute time
  double t_start = 0.0;  // s
  double t_stop = 0.0;   // s; channel active on [t_start, t_stop)
  int mode = -1;         // owning libration mode (0..2), -1 when unmanaged
};

/// Trap drive: U(t) = U_DC + U_AC [1 + sum_i delta_i sin(w_i t + phi_i)] cos(Omega_AC t).
/// Channels combine additively on the AC amplitude.
struct DriveWaveform {
  TrapConfig base;
  std::vector<ModulationChannel> modulations;

  double modulation_factor(double t) const {
    double m = 1.0;
    for (const auto& ch : modulations)
      if (t >= ch.t_start && t < ch.t_stop)
        m += ch.delta * std::sin(ch.omega_m * t + ch.phi_m);
    return m;
  }

  /// Instantaneous AC amplitude including modulation (V).
  double ac_amplitude(double t) const { return base.U_AC * modulation_factor(t); }
};

/// Electrode voltage at time t (V).
inline double voltage(const DriveWaveform& w, double t) {
  return w.base.U_DC + w.ac_amplitude(t) * std::cos(w.base.Omega_AC * t);
}

/// Electric field of the quadrupole potential at lab position r:
/// E_i = -U(t) kappa_i r_i / l0^2.
template <class S>
Vec3T<S> field_at(const Vec3T<S>& r, const Vec3& kappa, S U_over_l02) {
  return Vec3T<S>(-U_over_l02 * kappa.template cast<S>().array() * r.array());
}

inline Vec3 field(const Vec3& r, const DriveWaveform& w, double t) {
  return field_at<double>(r, w.base.kappa, voltage(w, t) / (w.base.l0 * w.base.l0));
}

/// Quadrupole potential at lab position r (V); the field is -grad of this.
inline double potential(const Vec3& r, const DriveWaveform& w, double t) {
  const double u = voltage(w, t) / (2.0 * w.base.l0 * w.base.l0);
  return u * (w.base.kappa.array() * r.array().square()).sum();
}

/// Field-gradient tensor rotated to the body frame:
/// K = R^T (grad E) R = -(U(t)/l0^2) R^T diag(kappa) R. Symmetric, traceless.
inline Mat3 gradient_tensor_body(const EulerAngles& phi, const DriveWaveform& w, double t) {
  const Mat3 R = rotation_from_euler(phi);
  const double u = voltage(w, t) / (w.base.l0 * w.base.l0);
  return Mat3(-u * (R.transpose() * w.base.kappa.asDiagonal() * R));
}

/// Same tensor for a given voltage amplitude; used by the secular layer where
/// the AC and DC parts enter separately.
inline Mat3 gradient_tensor_body_at(const Mat3& R, const Vec3& kappa, double U_over_l02) {
  return Mat3(-U_over_l02 * (R.transpose() * kappa.asDiagonal() * R));
}

}  // namespace librot

#endif  // LIBROT_TRAP_HPP
