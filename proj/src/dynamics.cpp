#include "librot/dynamics.hpp"

#include <cmath>
#include <string>

#include "librot/errors.hpp"

namespace librot {

Vec3 torque_body(const EulerAngles& phi, const ChargeMoments& cm,
                 const DriveWaveform& w, double t, const Vec3& E_at_com) {
  const Mat3 R = rotation_from_euler(phi);
  const double u = voltage(w, t) / (w.base.l0 * w.base.l0);
  const Mat3 K = gradient_tensor_body_at(R, w.base.kappa, u);
  const Mat3 A = cm.Q * K;
  Vec3 tau(A(1, 2) - A(2, 1), A(2, 0) - A(0, 2), A(0, 1) - A(1, 0));
  if (cm.p.squaredNorm() > 0.0) {
    const Vec3 E_body = R.transpose() * E_at_com;
    tau += cm.p.cross(E_body);
  }
  return tau;
}

Vec3 com_force(const RigidBodyState& state, const ChargeMoments& cm,
               const DriveWaveform& w) {
  const double u = voltage(w, state.t) / (w.base.l0 * w.base.l0);
  Vec3 F = cm.q * field_at<double>(state.R_com, w.base.kappa, u);
  if (cm.p.squaredNorm() > 0.0) {
    const Vec3 p_lab = rotation_from_euler(state.phi) * cm.p;
    F -= u * (w.base.kappa.array() * p_lab.array()).matrix();
  }
  return F;
}

StateDerivative derivative(const RigidBodyState& state, const MassProperties& props,
                           const ChargeMoments& cm, const DriveWaveform& w) {
  StateDerivative d;
  d.dR = state.V_com;
  d.dV = com_force(state, cm, w) / props.M;
  d.dphi = t_inverse(state.phi.beta, state.phi.gamma) * state.omega;

  const double u = voltage(w, state.t) / (w.base.l0 * w.base.l0);
  const Vec3 E_com = field_at<double>(state.R_com, w.base.kappa, u);
  const Vec3 tau = torque_body(state.phi, cm, w, state.t, E_com);
  const Vec3& o = state.omega;
  const Vec3& I = props.I;
  d.domega[0] = ((I[1] - I[2]) * o[1] * o[2] + tau[0]) / I[0];
  d.domega[1] = ((I[2] - I[0]) * o[2] * o[0] + tau[1]) / I[1];
  d.domega[2] = ((I[0] - I[1]) * o[0] * o[1] + tau[2]) / I[2];
  return d;
}

namespace {

RigidBodyState advance(const RigidBodyState& s, const StateDerivative& d, double h) {
  RigidBodyState r = s;
  r.t = s.t + h;
  r.R_com += h * d.dR;
  r.V_com += h * d.dV;
  r.phi.alpha += h * d.dphi[0];
  r.phi.beta += h * d.dphi[1];
  r.phi.gamma += h * d.dphi[2];
  r.omega += h * d.domega;
  return r;
}

void check_guards(const RigidBodyState& s, const IntegratorConfig& cfg) {
  const Vec3 ang = s.phi.vec();
  if (!ang.allFinite() || !s.omega.allFinite() || !s.R_com.allFinite() ||
      !s.V_com.allFinite() || ang.cwiseAbs().maxCoeff() > cfg.max_angle ||
      s.omega.cwiseAbs().maxCoeff() > cfg.max_omega ||
      s.R_com.cwiseAbs().maxCoeff() > cfg.max_position ||
      s.V_com.cwiseAbs().maxCoeff() > cfg.max_velocity) {
    throw InstabilityError(
        "state diverged at t = " + std::to_string(s.t) + " s", s.t);
  }
}

}  // namespace

RigidBodyState rk4_step(const RigidBodyState& state, double dt,
                        const MassProperties& props, const ChargeMoments& cm,
                        const DriveWaveform& w) {
  const StateDerivative k1 = derivative(state, props, cm, w);
  const StateDerivative k2 = derivative(advance(state, k1, dt / 2), props, cm, w);
  const StateDerivative k3 = derivative(advance(state, k2, dt / 2), props, cm, w);
  const StateDerivative k4 = derivative(advance(state, k3, dt), props, cm, w);

  RigidBodyState out = state;
  out.t = state.t + dt;
  const double c = dt / 6.0;
  out.R_com += c * (k1.dR + 2 * k2.dR + 2 * k3.dR + k4.dR);
  out.V_com += c * (k1.dV + 2 * k2.dV + 2 * k3.dV + k4.dV);
  const Vec3 dphi = c * (k1.dphi + 2 * k2.dphi + 2 * k3.dphi + k4.dphi);
  out.phi.alpha += dphi[0];
  out.phi.beta += dphi[1];
  out.phi.gamma += dphi[2];
  out.omega += c * (k1.domega + 2 * k2.domega + 2 * k3.domega + k4.domega);
  return out;
}

void integrate(RigidBodyState state, const MassProperties& props,
               const ChargeMoments& cm, const DriveWaveform& w,
               const IntegratorConfig& cfg,
               const std::function<void(const RigidBodyState&)>& on_sample,
               const RotationalNoise* noise) {
  if (!(cfg.dt > 0.0)) throw ConfigError("integrator dt must be positive");
  const double rf_period = 2 * constants::pi / w.base.Omega_AC;
  if (cfg.dt > rf_period / 50.0)
    throw ConfigError("integrator dt must not exceed RF period / 50");

  const long long n_steps = std::llround((cfg.t_end - state.t) / cfg.dt);
  if (on_sample) on_sample(state);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (long long i = 1; i <= n_steps; ++i) {
    state = rk4_step(state, cfg.dt, props, cm, w);
    if (noise && noise->rng) {
      for (int k = 0; k < 3; ++k) {
        const double g = noise->Gamma[k];
        if (g <= 0.0) continue;
        const double sigma =
            std::sqrt(2.0 * g * constants::k_B * noise->T_gas * cfg.dt / props.I[k]);
        state.omega[k] += -g * state.omega[k] * cfg.dt + sigma * gauss(*noise->rng);
      }
    }
    check_guards(state, cfg);
    if (on_sample && (i % cfg.record_stride == 0)) on_sample(state);
  }
}

Vec3 angular_momentum_lab(const RigidBodyState& state, const MassProperties& props) {
  const Mat3 R = rotation_from_euler(state.phi);
  return R * (props.I.array() * state.omega.array()).matrix();
}

double rotational_energy(const RigidBodyState& state, const MassProperties& props) {
  return 0.5 * (props.I.array() * state.omega.array().square()).sum();
}

}  // namespace librot
