#pragma once

#include <array>
#include <string>
#include <vector>

#include "librot/constants.hpp"
#include "librot/kinematics.hpp"
#include "librot/shapes.hpp"
#include "librot/trap.hpp"

namespace librot {

/// Analytic secular-layer summary for one particle/trap configuration.
struct SecularReport {
  Vec3 omega_s = Vec3::Zero();     ///< secular libration frequencies (alpha, beta, gamma) [rad/s]
  Vec3 q_lib = Vec3::Zero();       ///< rotational Mathieu parameters per mode
  Vec3 T_lib = Vec3::Zero();       ///< threshold temperatures per mode [K]
  Vec3 q_com = Vec3::Zero();       ///< center-of-mass Mathieu parameters (x, y, z)
  Vec3 omega_com = Vec3::Zero();   ///< center-of-mass secular frequencies [rad/s]
  EulerAngles equilibrium{0.0, constants::pi / 2, 0.0};
  bool metastable = false;         ///< equilibrium alignment is only a secondary minimum
  bool no_preferred = false;       ///< fully degenerate quadrupole moments: no preferred alignment
  std::vector<std::string> warnings;
};

/// Alignment of body axes against the trap curvatures.
struct EquilibriumInfo {
  EulerAngles angles{0.0, constants::pi / 2, 0.0};
  /// pairing[lab_axis] = body axis aligned with that lab axis at the returned angles
  std::array<int, 3> pairing{2, 1, 0};
  bool metastable = false;
  bool no_preferred = false;
};

/// Lab curvatures seen along the body axes at a given orientation:
/// diagonal of R^T diag(kappa) R.
Vec3 effective_curvatures(const EulerAngles& phi, const Vec3& kappa);

/// Drive stiffness factor per mode: h_l = (U_AC/l0^2) |(Q_j - Q_k)(kt_j - kt_k)|
/// with (l, j, k) cyclic and kt the effective curvatures at equilibrium.
Vec3 drive_stiffness(const ChargeMoments& cm, const TrapConfig& trap,
                     const EulerAngles& equilibrium);

/// Secular libration angular frequencies Omega_l = h_l / (sqrt(2) I_l Omega_AC).
Vec3 secular_frequencies(const MassProperties& props, const ChargeMoments& cm,
                         const TrapConfig& trap,
                         const EulerAngles& equilibrium = EulerAngles{0.0, constants::pi / 2, 0.0});

/// Rotational Mathieu parameters q_l = 2 h_l / (I_l Omega_AC^2).
Vec3 mathieu_parameters(const MassProperties& props, const ChargeMoments& cm,
                        const TrapConfig& trap,
                        const EulerAngles& equilibrium = EulerAngles{0.0, constants::pi / 2, 0.0});

/// Center-of-mass Mathieu parameters q_axis = 4 q U_AC kappa_axis / (M l0^2 Omega_AC^2)
/// (convention chosen so the reference trap reproduces q_z ~ 0.52).
Vec3 com_mathieu_parameters(const MassProperties& props, const ChargeMoments& cm,
                            const TrapConfig& trap);

/// Center-of-mass secular frequencies, omega_axis = q_axis Omega_AC / (4 sqrt(2)).
Vec3 com_secular_frequencies(const MassProperties& props, const ChargeMoments& cm,
                             const TrapConfig& trap);

/// Threshold temperatures T_l = I_l omega_l^2 phi_max^2 / k_B for full angular trapping.
Vec3 threshold_temperatures(const Vec3& omega_s, const Vec3& I,
                            double phi_max = constants::pi / 4);

/// Instantaneous torque divided by the drive voltage: tau = U(t) g(phi), with
/// g_i = -(1/l0^2) eps_ijk Q_jl M_lk and M = R^T diag(kappa) R.
Vec3 torque_per_volt(const EulerAngles& phi, const ChargeMoments& cm,
                     const TrapConfig& trap);

/// Analytic Jacobian d g / d phi (column j = derivative along Euler angle j).
Mat3 torque_per_volt_jacobian(const EulerAngles& phi, const ChargeMoments& cm,
                              const TrapConfig& trap);

/// RF-period-averaged secular torque (full second-order expression):
/// tau_s = U_DC g(phi) - (U_AC^2 / (2 Omega^2)) (dg/dphi) T^{-1} (g ./ I).
Vec3 secular_torque(const EulerAngles& phi, const MassProperties& props,
                    const ChargeMoments& cm, const TrapConfig& trap);

/// Micromotion amplitude per Euler angle (coefficient of cos(Omega_AC t)):
/// phi_m = -(U_AC / Omega^2) T^{-1} (g ./ I) evaluated at the secular orientation.
Vec3 micromotion_amplitude(const EulerAngles& phi_s, const MassProperties& props,
                           const ChargeMoments& cm, const TrapConfig& trap);

/// Preferred alignment of the body axes in the trap. Returns the conventional
/// equilibrium (0, pi/2, 0) -- long axis along the weakest transverse curvature --
/// flagging it metastable when a different pairing has lower secular energy, and
/// no_preferred when all quadrupole moments are degenerate.
EquilibriumInfo equilibrium_orientation(const ChargeMoments& cm, const TrapConfig& trap);

/// Full analytic summary (frequencies, Mathieu parameters, thresholds, CoM values).
SecularReport secular_report(const MassProperties& props, const ChargeMoments& cm,
                             const TrapConfig& trap,
                             double phi_max = constants::pi / 4);

}  // namespace librot
