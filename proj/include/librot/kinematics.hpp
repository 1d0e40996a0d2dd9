#ifndef LIBROT_KINEMATICS_HPP
#define LIBROT_KINEMATICS_HPP

#include <cmath>

#include "librot/constants.hpp"
#include "librot/errors.hpp"

namespace librot {

/// Euler angles (alpha, beta, gamma) in the z-y'-z'' convention.
/// Values are unrestricted; trajectories may wind past +-pi.
struct EulerAngles {
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;

  Vec3 vec() const { return Vec3(alpha, beta, gamma); }
  static EulerAngles from_vec(const Vec3& v) { return {v[0], v[1], v[2]}; }
};

/// |sin beta| below this is treated as a gimbal singularity.
inline constexpr double beta_tol = 1e-6;

template <class S>
Mat3T<S> rotation_z(S angle) {
  const S c = std::cos(angle), s = std::sin(angle);
  Mat3T<S> R;
  R << c, -s, S(0), s, c, S(0), S(0), S(0), S(1);
  return R;
}

template <class S>
Mat3T<S> rotation_y(S angle) {
  const S c = std::cos(angle), s = std::sin(angle);
  Mat3T<S> R;
  R << c, S(0), s, S(0), S(1), S(0), -s, S(0), c;
  return R;
}

/// Body-to-lab rotation R = Rz(alpha) Ry(beta) Rz(gamma).
template <class S>
Mat3T<S> rotation_from_euler(S alpha, S beta, S gamma) {
  return Mat3T<S>(rotation_z(alpha) * rotation_y(beta) * rotation_z(gamma));
}

inline Mat3 rotation_from_euler(const EulerAngles& e) {
  return rotation_from_euler(e.alpha, e.beta, e.gamma);
}

/// Map T with omega_body = T * dphi/dt. Singular at sin(beta) = 0.
template <class S>
Mat3T<S> t_matrix(S beta, S gamma) {
  const S sb = std::sin(beta), cb = std::cos(beta);
  const S sg = std::sin(gamma), cg = std::cos(gamma);
  Mat3T<S> T;
  T << -sb * cg, sg, S(0),
        sb * sg, cg, S(0),
        cb,      S(0), S(1);
  return T;
}

inline Mat3 t_matrix(const EulerAngles& e) { return t_matrix(e.beta, e.gamma); }

/// Exact inverse of t_matrix. Throws GimbalSingularityError for |sin beta| <= beta_tol.
template <class S>
Mat3T<S> t_inverse(S beta, S gamma) {
  const S sb = std::sin(beta);
  if (std::abs(sb) <= S(beta_tol))
    throw GimbalSingularityError("Euler-angle map is singular: |sin beta| <= tolerance");
  const S cb = std::cos(beta);
  const S sg = std::sin(gamma), cg = std::cos(gamma);
  Mat3T<S> Ti;
  Ti << -cg / sb,      sg / sb,      S(0),
         sg,           cg,           S(0),
         cg * cb / sb, -sg * cb / sb, S(1);
  return Ti;
}

inline Mat3 t_inverse(const EulerAngles& e) { return t_inverse(e.beta, e.gamma); }

/// Cross-product matrix: skew(v) * u = v x u.
template <class S>
Mat3T<S> skew(const Vec3T<S>& v) {
  Mat3T<S> m;
  m << S(0), -v[2], v[1],
       v[2], S(0), -v[0],
      -v[1], v[0], S(0);
  return m;
}

}  // namespace librot

#endif  // LIBROT_KINEMATICS_HPP
