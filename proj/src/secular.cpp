#include "librot/secular.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "librot/errors.hpp"

namespace librot {

namespace {

inline Vec3 axial(const Mat3& A) {
  return Vec3(A(1, 2) - A(2, 1), A(2, 0) - A(0, 2), A(0, 1) - A(1, 0));
}

inline Mat3 curvature_matrix(const EulerAngles& phi, const Vec3& kappa) {
  const Mat3 R = rotation_from_euler(phi);
  return R.transpose() * kappa.asDiagonal() * R;
}

}  // namespace

Vec3 effective_curvatures(const EulerAngles& phi, const Vec3& kappa) {
  return curvature_matrix(phi, kappa).diagonal();
}

Vec3 drive_stiffness(const ChargeMoments& cm, const TrapConfig& trap,
                     const EulerAngles& equilibrium) {
  const Vec3 kt = effective_curvatures(equilibrium, trap.kappa);
  const Vec3 Qd = cm.Q.diagonal();
  const double scale = trap.U_AC / (trap.l0 * trap.l0);
  Vec3 h;
  for (int l = 0; l < 3; ++l) {
    const int j = (l + 1) % 3;
    const int k = (l + 2) % 3;
    h[l] = std::abs(scale * (Qd[j] - Qd[k]) * (kt[j] - kt[k]));
  }
  return h;
}

Vec3 secular_frequencies(const MassProperties& props, const ChargeMoments& cm,
                         const TrapConfig& trap, const EulerAngles& equilibrium) {
  const Vec3 h = drive_stiffness(cm, trap, equilibrium);
  // Map body-axis stiffness onto Euler-angle modes through |T^{-1}| at the
  // equilibrium; at (0, pi/2, 0) this is the identity up to signs.
  const Mat3 W = t_inverse(equilibrium.beta, equilibrium.gamma).cwiseAbs();
  Vec3 omega = Vec3::Zero();
  for (int i = 0; i < 3; ++i)
    for (int l = 0; l < 3; ++l)
      omega[i] += W(i, l) * h[l] / (std::sqrt(2.0) * props.I[l] * trap.Omega_AC);
  return omega;
}

Vec3 mathieu_parameters(const MassProperties& props, const ChargeMoments& cm,
                        const TrapConfig& trap, const EulerAngles& equilibrium) {
  const Vec3 h = drive_stiffness(cm, trap, equilibrium);
  return 2.0 * (h.array() / (props.I.array() * trap.Omega_AC * trap.Omega_AC)).matrix();
}

Vec3 com_mathieu_parameters(const MassProperties& props, const ChargeMoments& cm,
                            const TrapConfig& trap) {
  const double denom = props.M * trap.l0 * trap.l0 * trap.Omega_AC * trap.Omega_AC;
  return (4.0 * cm.q * trap.U_AC / denom) * trap.kappa.cwiseAbs();
}

Vec3 com_secular_frequencies(const MassProperties& props, const ChargeMoments& cm,
                             const TrapConfig& trap) {
  return com_mathieu_parameters(props, cm, trap) * trap.Omega_AC / (4.0 * std::sqrt(2.0));
}

Vec3 threshold_temperatures(const Vec3& omega_s, const Vec3& I, double phi_max) {
  return (I.array() * omega_s.array().square() * phi_max * phi_max /
          constants::k_B)
      .matrix();
}

Vec3 torque_per_volt(const EulerAngles& phi, const ChargeMoments& cm,
                     const TrapConfig& trap) {
  const Mat3 M = curvature_matrix(phi, trap.kappa);
  const Mat3 G = -(1.0 / (trap.l0 * trap.l0)) * cm.Q * M;
  return axial(G);
}

Mat3 torque_per_volt_jacobian(const EulerAngles& phi, const ChargeMoments& cm,
                              const TrapConfig& trap) {
  const Mat3 M = curvature_matrix(phi, trap.kappa);
  const Mat3 T = t_matrix(phi.beta, phi.gamma);
  const double inv_l02 = 1.0 / (trap.l0 * trap.l0);
  Mat3 J;
  for (int j = 0; j < 3; ++j) {
    const Mat3 Aj = skew(Vec3(T.col(j)));
    const Mat3 dM = M * Aj - Aj * M;
    J.col(j) = axial(Mat3(-inv_l02 * cm.Q * dM));
  }
  return J;
}

Vec3 secular_torque(const EulerAngles& phi, const MassProperties& props,
                    const ChargeMoments& cm, const TrapConfig& trap) {
  const Vec3 g = torque_per_volt(phi, cm, trap);
  const Mat3 J = torque_per_volt_jacobian(phi, cm, trap);
  const Mat3 Ti = t_inverse(phi.beta, phi.gamma);
  const Vec3 v = Ti * (g.array() / props.I.array()).matrix();
  const double Omega2 = trap.Omega_AC * trap.Omega_AC;
  return trap.U_DC * g - (trap.U_AC * trap.U_AC / (2.0 * Omega2)) * (J * v);
}

Vec3 micromotion_amplitude(const EulerAngles& phi_s, const MassProperties& props,
                           const ChargeMoments& cm, const TrapConfig& trap) {
  const Vec3 g = torque_per_volt(phi_s, cm, trap);
  const Mat3 Ti = t_inverse(phi_s.beta, phi_s.gamma);
  return -(trap.U_AC / (trap.Omega_AC * trap.Omega_AC)) *
         (Ti * (g.array() / props.I.array()).matrix());
}

EquilibriumInfo equilibrium_orientation(const ChargeMoments& cm, const TrapConfig& trap) {
  EquilibriumInfo info;
  const Vec3 Qd = cm.Q.diagonal();
  const Vec3 ka = trap.kappa.cwiseAbs();

  const double q_scale = Qd.cwiseAbs().maxCoeff();
  const double tol = 1e-9 * std::max(q_scale, std::numeric_limits<double>::min());
  if ((Qd.maxCoeff() - Qd.minCoeff()) <= tol) {
    info.no_preferred = true;
    return info;
  }

  // Secular angular energy of a pairing is proportional to sum_lab |kappa_lab| *
  // Q_body(lab); scan all assignments of body axes to lab axes.
  std::array<int, 3> perm{0, 1, 2};
  std::array<int, 3> best = perm;
  double best_energy = std::numeric_limits<double>::infinity();
  std::sort(perm.begin(), perm.end());
  do {
    const double e = ka[0] * Qd[perm[0]] + ka[1] * Qd[perm[1]] + ka[2] * Qd[perm[2]];
    if (e < best_energy - tol * ka.maxCoeff()) {
      best_energy = e;
      best = perm;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));

  // Conventional alignment (0, pi/2, 0): body axes (1,2,3) -> lab (-z, y, x).
  const std::array<int, 3> conventional{2, 1, 0};
  const double conventional_energy =
      ka[0] * Qd[conventional[0]] + ka[1] * Qd[conventional[1]] + ka[2] * Qd[conventional[2]];
  info.pairing = conventional;
  info.metastable = conventional_energy > best_energy + tol * ka.maxCoeff();
  return info;
}

SecularReport secular_report(const MassProperties& props, const ChargeMoments& cm,
                             const TrapConfig& trap, double phi_max) {
  SecularReport rep;
  const EquilibriumInfo eq = equilibrium_orientation(cm, trap);
  rep.equilibrium = eq.angles;
  rep.metastable = eq.metastable;
  rep.no_preferred = eq.no_preferred;
  rep.omega_s = secular_frequencies(props, cm, trap, eq.angles);
  rep.q_lib = mathieu_parameters(props, cm, trap, eq.angles);
  rep.T_lib = threshold_temperatures(rep.omega_s, props.I, phi_max);
  rep.q_com = com_mathieu_parameters(props, cm, trap);
  rep.omega_com = com_secular_frequencies(props, cm, trap);
  if (trap.U_DC != 0.0)
    rep.warnings.push_back(
        "closed-form secular frequencies assume a pure AC drive (U_DC = 0)");
  if (rep.metastable)
    rep.warnings.push_back(
        "conventional alignment is metastable: a different axis pairing has lower secular energy");
  return rep;
}

}  // namespace librot
