// Acceptance gate: every headline requirement of the librational-dynamics
// engine is exercised end to end and reported as one PASS/FAIL line. The
// binary exits non-zero when any check fails.

#include <algorithm>
#include <cmath>
#include <complex>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "librot/cooling.hpp"
#include "librot/dynamics.hpp"
#include "librot/interferometry.hpp"
#include "librot/io/threadpool.hpp"
#include "librot/secular.hpp"
#include "librot/shapes.hpp"
#include "librot/thermo.hpp"
#include "oracles.hpp"

using namespace librot;

namespace {

constexpr double pi = constants::pi;
const double nan_d = std::numeric_limits<double>::quiet_NaN();

struct Gate {
  int passed = 0;
  int failed = 0;

  void check(const std::string& id, bool ok, const std::string& detail) {
    (ok ? passed : failed) += 1;
    std::cout << (ok ? "[PASS] " : "[FAIL] ") << id << " " << detail << "\n";
  }
};

std::string fmt(double v, int prec = 4) {
  std::ostringstream os;
  os << std::setprecision(prec) << v;
  return os.str();
}

BodyShape reference_particle() {
  BodyShape s;
  s.geometry = Cylindroid{30e-9, 30e-9, 100e-9};
  s.density = 3510.0;
  s.charge = 100.0 * constants::e_charge;
  return s;
}

/// Cross-section aspect sweep at fixed geometric-mean radius and height.
BodyShape aspect_shape(double b_over_a) {
  BodyShape s = reference_particle();
  const double r0 = 30e-9;
  s.geometry = Cylindroid{r0 / std::sqrt(b_over_a), r0 * std::sqrt(b_over_a), 100e-9};
  return s;
}

/// Elongation sweep at fixed volume and fixed transverse ratio a/b = 1.25.
/// The sweep parameter is L/(2a): the stiff libration mode compares the
/// axial charge quadrupole against the one along a, so the transition is
/// parametrized against that axis.
BodyShape elongation_shape(double L_over_2a) {
  BodyShape s = reference_particle();
  const double volume = pi * 30e-9 * 30e-9 * 100e-9;
  const double ratio = 1.25;
  Cylindroid c;
  c.a = std::cbrt(volume * ratio / (2 * pi * L_over_2a));
  c.b = c.a / ratio;
  c.L = 2 * c.a * L_over_2a;
  s.geometry = c;
  return s;
}

struct CoolingRun {
  CoolingTrace trace;
  Vec3 omega_s = Vec3::Zero();
};

CoolingRun cooling_run(std::array<bool, 3> modes, double delta, double offset,
                       double t_end, bool invert) {
  const BodyShape shape = reference_particle();
  const MassProperties props = mass_properties(shape);
  const ChargeMoments cm = charge_moments(shape);
  const TrapConfig trap;

  FeedbackConfig fb;
  fb.modes = modes;
  fb.delta = delta;
  fb.invert_phase = invert;

  RigidBodyState state;
  state.phi = EulerAngles{0.0, pi / 2, 0.0};
  if (modes[0]) state.phi.alpha += offset;
  if (modes[1]) state.phi.beta += offset;
  if (modes[2]) state.phi.gamma += offset;

  CoolingRun run;
  run.trace = run_cooling(state, props, cm, trap, fb, t_end);
  run.omega_s = secular_frequencies(props, cm, trap);
  return run;
}

void criterion_1_stability_parameters(Gate& gate) {
  const BodyShape shape = reference_particle();
  const SecularReport rep =
      secular_report(mass_properties(shape), charge_moments(shape), TrapConfig{});
  gate.check("01a", std::abs(rep.q_com[2] - 0.52) <= 0.03,
             "center-of-mass stability parameter q_z = " + fmt(rep.q_com[2]) +
                 " (expected 0.52 +/- 0.03)");
  gate.check("01b", std::abs(rep.q_lib[1] - 0.30) <= 0.02,
             "beta libration stability parameter q_beta = " + fmt(rep.q_lib[1]) +
                 " (expected 0.30 +/- 0.02)");
}

void criterion_2_frequency_validation(Gate& gate, int threads) {
  const std::vector<double> ratios{1.0, 1.25, 1.5, 1.75, 2.0};
  const double duration = 5e-3;
  const double offset = 0.1;
  const int n_tasks = static_cast<int>(ratios.size()) * 3;
  std::vector<double> deviation(n_tasks, nan_d);

  io::parallel_for(n_tasks, threads, [&](int task) {
    const int i = task / 3;
    const int m = task % 3;
    const BodyShape shape = aspect_shape(ratios[i]);
    const MassProperties props = mass_properties(shape);
    const ChargeMoments cm = charge_moments(shape);
    const TrapConfig trap;
    const Vec3 omega_s = secular_frequencies(props, cm, trap);
    // A mode is resolvable only when the run spans several oscillations.
    if (!(omega_s[m] * duration > 2 * pi * 2.5)) return;
    const double numeric =
        measure_mode_frequency(props, cm, trap, m, offset, duration);
    deviation[task] = std::abs(numeric - omega_s[m]) / omega_s[m];
  });

  double worst = 0.0;
  int evaluated = 0;
  for (const double d : deviation)
    if (!std::isnan(d)) {
      worst = std::max(worst, d);
      ++evaluated;
    }
  gate.check("02", evaluated >= 10 && worst <= 0.10,
             "analytic vs simulated mode frequencies: worst deviation " +
                 fmt(100 * worst, 3) + "% over " + std::to_string(evaluated) +
                 " shape/mode points, b/a in [1,2] (tolerance 10%)");
}

void criterion_3_mode_ratio(Gate& gate) {
  const BodyShape shape = reference_particle();
  const Vec3 omega_s =
      secular_frequencies(mass_properties(shape), charge_moments(shape), TrapConfig{});
  const double ratio = omega_s[1] / omega_s[0];
  gate.check("03", std::abs(ratio - 30.0) <= 3.0,
             "stiff/soft frequency ratio omega_beta/omega_alpha = " + fmt(ratio) +
                 " at a = b (expected 30 +/- 3)");
}

void criterion_4_degeneracy_crossing(Gate& gate) {
  const auto moment_gap = [](double s) {
    const ChargeMoments cm = charge_moments(elongation_shape(s));
    return cm.Q(2, 2) - cm.Q(0, 0);
  };
  double lo = 0.70, hi = 1.00;
  double f_lo = moment_gap(lo);
  if (!(f_lo < 0.0) || !(moment_gap(hi) > 0.0)) {
    gate.check("04", false, "charge-moment gap does not bracket a sign change in [0.7, 1.0]");
    return;
  }
  for (int it = 0; it < 80; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (moment_gap(mid) < 0.0) {
      lo = mid;
      f_lo = moment_gap(mid);
    } else {
      hi = mid;
    }
  }
  const double s_star = 0.5 * (lo + hi);
  const double omega_beta_at_star =
      secular_frequencies(mass_properties(elongation_shape(s_star)),
                          charge_moments(elongation_shape(s_star)), TrapConfig{})[1];
  const double omega_beta_ref =
      secular_frequencies(mass_properties(reference_particle()),
                          charge_moments(reference_particle()), TrapConfig{})[1];
  gate.check("04", s_star >= 0.80 && s_star <= 0.88 && omega_beta_at_star < 0.01 * omega_beta_ref,
             "beta stiffness collapses at elongation " + fmt(s_star) +
                 " for transverse ratio 1.25 at fixed volume (expected within [0.80, 0.88])");
}

void criterion_5_cooling_rates(Gate& gate) {
  const CoolingRun alpha = cooling_run({true, false, false}, 0.05, 0.1, 12e-3, false);
  const double alpha_pred = alpha.omega_s[0] * 0.05;
  gate.check("05a",
             std::abs(alpha.trace.fitted_rate[0] - alpha_pred) <= 0.10 * alpha_pred,
             "alpha-mode fitted cooling rate " + fmt(alpha.trace.fitted_rate[0]) +
                 " 1/s vs omega*delta = " + fmt(alpha_pred) + " 1/s (tolerance 10%)");

  const CoolingRun beta = cooling_run({false, true, false}, 0.05, 0.1, 1.5e-3, false);
  const double beta_pred = beta.omega_s[1] * 0.05;
  gate.check("05b",
             std::abs(beta.trace.fitted_rate[1] - beta_pred) <= 0.35 * beta_pred,
             "beta-mode fitted cooling rate " + fmt(beta.trace.fitted_rate[1]) +
                 " 1/s vs omega*delta = " + fmt(beta_pred) + " 1/s (tolerance 35%)");

  const double crossing = beta.trace.hbar_crossing[1];
  gate.check("05c", crossing >= 1.0e-3 && crossing <= 1.5e-3,
             "beta-mode energy reaches the hbar*omega scale at t = " + fmt(crossing) +
                 " s from a 0.1 rad start at delta = 0.05 (expected 1.0-1.5 ms)");
}

void criterion_6_antidamping(Gate& gate) {
  const CoolingRun run = cooling_run({false, true, false}, 0.05, 0.02, 0.9e-3, true);
  const double predicted = run.omega_s[1] * 0.05;
  const double growth = -run.trace.fitted_rate[1];
  gate.check("06", std::abs(growth - predicted) <= 0.20 * predicted,
             "pi-shifted feedback heats the beta mode at " + fmt(growth) +
                 " 1/s vs omega*delta = " + fmt(predicted) + " 1/s (tolerance 20%)");
}

void criterion_7_conservation(Gate& gate) {
  MassProperties props;
  props.M = 1e-18;
  props.I = Vec3(1.2e-33, 1.0e-33, 0.6e-33);
  ChargeMoments cm;  // zero multipoles: torque-free

  DriveWaveform wave;
  wave.base.U_DC = 0.0;
  wave.base.U_AC = 0.0;

  RigidBodyState state;
  state.phi = EulerAngles{0.4, 1.1, 0.2};
  state.omega = Vec3(500.0, 300.0, 5e4);

  IntegratorConfig cfg;
  cfg.dt = 1e-8;
  cfg.t_end = 1e-2;  // one million RK4 steps
  cfg.record_stride = 2000;

  const double E0 = rotational_energy(state, props);
  const double L0 = angular_momentum_lab(state, props).norm();
  double worst_E = 0.0, worst_L = 0.0;
  integrate(state, props, cm, wave, cfg, [&](const RigidBodyState& s) {
    worst_E = std::max(worst_E, std::abs(rotational_energy(s, props) / E0 - 1.0));
    worst_L = std::max(worst_L,
                       std::abs(angular_momentum_lab(s, props).norm() / L0 - 1.0));
  });
  gate.check("07", worst_E <= 1e-9 && worst_L <= 1e-9,
             "free asymmetric top over 1e6 steps: |dE/E| <= " + fmt(worst_E, 3) +
                 ", |dL/L| <= " + fmt(worst_L, 3) + " (tolerance 1e-9)");
}

void criterion_8_damping_cross_check(Gate& gate) {
  std::mt19937_64 rng(20260815);
  std::uniform_real_distribution<double> udim(15e-9, 45e-9);
  std::uniform_real_distribution<double> ulen(50e-9, 200e-9);
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const double a = udim(rng), b = udim(rng), L = ulen(rng);
    BodyShape shape;
    shape.geometry = Cylindroid{a, b, L};
    shape.charge = constants::e_charge;
    const MassProperties props = mass_properties(shape);
    for (const double ac : {0.0, 1.0}) {
      GasModel gas;
      gas.alpha_c = ac;
      const Vec3 quad = damping_tensor_surface(shape, props, gas).Gamma;
      const Vec3 closed = damping_rates_closed_form(Cylindroid{a, b, L}, props, gas).Gamma;
      for (int m = 0; m < 3; ++m)
        if (closed[m] > 1e-30)
          worst = std::max(worst, std::abs(quad[m] - closed[m]) / closed[m]);
    }
  }
  gate.check("08", worst <= 0.01,
             "surface-quadrature vs closed-form damping rates: worst deviation " +
                 fmt(100 * worst, 3) + "% over 20 random cylindroids, alpha_c in {0,1} "
                 "(tolerance 1%)");
}

void criterion_9_steady_state(Gate& gate) {
  const GasModel gas;  // 1e-9 torr, 300 K, diffuse
  const double delta = 0.05;
  bool ordering = true;
  double worst_doubling = 0.0;
  for (int k = 0; k < 10; ++k) {
    const double ratio = 1.1 + 0.1 * k;
    const BodyShape shape = aspect_shape(ratio);
    const MassProperties props = mass_properties(shape);
    const Vec3 omega_s = secular_frequencies(props, charge_moments(shape), TrapConfig{});
    const Vec3 G_gas = damping_tensor_surface(shape, props, gas).Gamma;
    GasModel doubled = gas;
    doubled.P = 2.0 * gas.P;
    const Vec3 G_gas2 = damping_tensor_surface(shape, props, doubled).Gamma;
    Vec3 T_ss, T_ss2;
    for (int m = 0; m < 3; ++m) {
      const double G_fb = predicted_damping_rate(omega_s[m], delta);
      T_ss[m] = steady_state_temperature(G_gas[m], G_fb, gas.T_gas);
      T_ss2[m] = steady_state_temperature(G_gas2[m], G_fb, gas.T_gas);
      worst_doubling = std::max(worst_doubling, std::abs(T_ss2[m] / (2 * T_ss[m]) - 1.0));
    }
    ordering = ordering && T_ss[0] > T_ss[1] && T_ss[0] > T_ss[2];
  }
  gate.check("09a", ordering,
             "soft alpha mode stays the hottest steady-state mode over b/a in (1, 2] "
             "under delta = 0.05 feedback at 1e-9 torr");
  gate.check("09b", worst_doubling <= 0.01,
             "doubling the pressure doubles every steady-state temperature (worst "
             "deviation " + fmt(100 * worst_doubling, 3) + "%, tolerance 1%)");
}

void criterion_10_interferometer_numbers(Gate& gate) {
  const InterferometerConfig cfg;
  const PhaseReport rep = interferometer_phase(cfg);
  const double omega_B = libration_frequency_B(cfg.mu, cfg.B, cfg.I_axis);
  const double t_quantum = quantum_temperature_scale(omega_B);

  gate.check("10a", std::abs(rep.phi_int - 12.0) <= 0.5,
             "interferometer phase phi_int = " + fmt(rep.phi_int) + " rad (expected 12 +/- 0.5)");
  gate.check("10b", std::abs(rep.splitting - 29.6e-12) <= 0.3e-12,
             "maximum path splitting = " + fmt(rep.splitting / 1e-12) +
                 " pm (expected 29.6 +/- 0.3)");
  gate.check("10c", std::abs(omega_B / (2 * pi) - 1500.0) <= 30.0,
             "magnetic libration frequency = " + fmt(omega_B / (2 * pi)) +
                 " Hz (expected 1500 +/- 30)");
  gate.check("10d", std::abs(t_quantum - 72e-9) <= 2e-9,
             "libration quantum hbar*omega_B/k_B = " + fmt(t_quantum / 1e-9) +
                 " nK (expected 72 +/- 2)");
}

void criterion_11_contrast(Gate& gate) {
  InterferometerConfig cfg;
  cfg.n_max = 8000;
  const double omega_B = libration_frequency_B(cfg.mu, cfg.B, cfg.I_axis);

  const double c_cold = contrast(7e-6, cfg);
  gate.check("11a", std::abs(c_cold - 0.5) <= 0.1,
             "two-path contrast C(7 uK) = " + fmt(c_cold, 6) + " (expected 0.5 +/- 20%)");

  const double c_warm = contrast(4e-5, cfg);
  gate.check("11b", std::abs(c_warm - 0.1) <= 0.02,
             "two-path contrast C(40 uK) = " + fmt(c_warm, 6) + " (expected 0.1 +/- 20%)");

  const double n_cold = mean_phonons(7e-6, omega_B);
  const double n_warm = mean_phonons(4e-5, omega_B);
  gate.check("11c",
             std::abs(n_cold / 100.0 - 1.0) <= 0.10 && std::abs(n_warm / 580.0 - 1.0) <= 0.10,
             "mean phonon numbers " + fmt(n_cold) + " at 7 uK and " + fmt(n_warm) +
                 " at 40 uK (expected 100 and 580, within 10%)");

  // Dual route: metaplectic overlaps against split-step grid propagation.
  const double u = omega_B * cfg.T_p;
  const Mat2 S = Mat2(path_propagator_b(u).inverse() * path_propagator_a(u));
  oracles::GridSpec g;
  double worst = 0.0;
  for (int n = 0; n <= 10; ++n)
    worst = std::max(worst,
                     std::abs(mode_overlap(S, n) - oracles::grid_path_overlap(n, u, g)));
  gate.check("11d", worst <= 1e-3,
             "symplectic vs grid-propagated mode overlaps: worst |difference| = " +
                 fmt(worst, 3) + " for n <= 10 at the operating point (tolerance 1e-3)");
}

void criterion_12_scaling(Gate& gate) {
  double worst = 0.0;
  bool any = false;
  const auto compare = [&](const Cylindroid& small) {
    BodyShape s1 = reference_particle();
    s1.geometry = small;
    BodyShape s2 = s1;
    s2.geometry = Cylindroid{2 * small.a, 2 * small.b, 2 * small.L};
    s2.charge = 8.0 * s1.charge;  // mass grows 8x: fixed charge-to-mass ratio
    const SecularReport r1 =
        secular_report(mass_properties(s1), charge_moments(s1), TrapConfig{});
    const SecularReport r2 =
        secular_report(mass_properties(s2), charge_moments(s2), TrapConfig{});
    for (int m = 0; m < 3; ++m) {
      if (r1.T_lib[m] <= 0.0) continue;
      worst = std::max(worst, std::abs(r2.T_lib[m] / (32.0 * r1.T_lib[m]) - 1.0));
      any = true;
    }
  };
  compare(Cylindroid{30e-9, 30e-9, 100e-9});
  compare(Cylindroid{24e-9, 36e-9, 100e-9});
  gate.check("12", any && worst <= 0.01,
             "doubling all dimensions at fixed charge-to-mass ratio scales the "
             "librational thresholds by 32 (worst deviation " + fmt(100 * worst, 3) +
                 "%, tolerance 1%)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance gate for the librational dynamics engine"};
  int threads = 4;
  app.add_option("--threads", threads, "worker threads for simulation sweeps");
  CLI11_PARSE(app, argc, argv);

  std::cout << "acceptance checks: nanoparticle librational dynamics engine\n";
  Gate gate;
  criterion_1_stability_parameters(gate);
  criterion_2_frequency_validation(gate, threads);
  criterion_3_mode_ratio(gate);
  criterion_4_degeneracy_crossing(gate);
  criterion_5_cooling_rates(gate);
  criterion_6_antidamping(gate);
  criterion_7_conservation(gate);
  criterion_8_damping_cross_check(gate);
  criterion_9_steady_state(gate);
  criterion_10_interferometer_numbers(gate);
  criterion_11_contrast(gate);
  criterion_12_scaling(gate);

  std::cout << gate.passed << " of " << (gate.passed + gate.failed)
            << " checks passed\n";
  return gate.failed == 0 ? 0 : 1;
}
