#ifndef LIBROT_DYNAMICS_HPP
#define LIBROT_DYNAMICS_HPP

#include <functional>
#include <random>
#include <vector>

#include "librot/constants.hpp"
#include "librot/shapes.hpp"
#include "librot/trap.hpp"

namespace librot {

/// Full rigid-body state: CoM position/velocity, orientation, body-frame
/// angular velocity.
struct RigidBodyState {
  double t = 0.0;                 // s
  Vec3 R_com = Vec3::Zero();      // m
  Vec3 V_com = Vec3::Zero();      // m/s
  EulerAngles phi;
  Vec3 omega = Vec3::Zero();      // rad/s, body frame
};

/// Time derivative of RigidBodyState (same layout).
struct StateDerivative {
  Vec3 dR = Vec3::Zero();
  Vec3 dV = Vec3::Zero();
  Vec3 dphi = Vec3::Zero();
  Vec3 domega = Vec3::Zero();
};

/// Fixed-step RK4 settings. dt must not exceed RF period / 50.
struct IntegratorConfig {
  double dt = 0.0;          // s
  int record_stride = 5;    // samples every record_stride steps
  double t_end = 0.0;       // s

  // Overflow guards; exceeding any raises InstabilityError.
  double max_angle = 1e3;     // rad
  double max_omega = 1e12;    // rad/s
  double max_position = 1.0;  // m
  double max_velocity = 1e9;  // m/s
};

/// Optional gas-collision noise: per-axis angular velocity damping plus
/// fluctuation-dissipation kicks applied after every step.
struct RotationalNoise {
  Vec3 Gamma = Vec3::Zero();  // 1/s, per body axis
  double T_gas = 300.0;       // K
  std::mt19937_64* rng = nullptr;
};

/// Torque in the body frame: tau_i = eps_ijk [ p_j E'_k + (Q K)_jk ],
/// with E' = R^T E(R_com) and K the body-frame field-gradient tensor.
Vec3 torque_body(const EulerAngles& phi, const ChargeMoments& cm,
                 const DriveWaveform& w, double t, const Vec3& E_at_com);

/// CoM force: F = q E(R_com) + (p_lab . grad) E with p_lab = R p.
Vec3 com_force(const RigidBodyState& state, const ChargeMoments& cm,
               const DriveWaveform& w);

/// Equations of motion. Throws GimbalSingularityError near sin(beta) = 0.
StateDerivative derivative(const RigidBodyState& state, const MassProperties& props,
                           const ChargeMoments& cm, const DriveWaveform& w);

/// One RK4 step of length dt.
RigidBodyState rk4_step(const RigidBodyState& state, double dt,
                        const MassProperties& props, const ChargeMoments& cm,
                        const DriveWaveform& w);

/// Fixed-step RK4 trajectory. on_sample is invoked with the initial state and
/// then every record_stride steps. Deterministic for identical inputs.
/// Throws InstabilityError naming the failure time if any guard trips.
void integrate(RigidBodyState state, const MassProperties& props,
               const ChargeMoments& cm, const DriveWaveform& w,
               const IntegratorConfig& cfg,
               const std::function<void(const RigidBodyState&)>& on_sample,
               const RotationalNoise* noise = nullptr);

/// Lab-frame angular momentum L = R (I o omega).
Vec3 angular_momentum_lab(const RigidBodyState& state, const MassProperties& props);

/// Rotational kinetic energy (J).
double rotational_energy(const RigidBodyState& state, const MassProperties& props);

}  // namespace librot

#endif  // LIBROT_DYNAMICS_HPP
