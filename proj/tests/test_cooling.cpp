#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "librot/cooling.hpp"
#include "librot/errors.hpp"
#include "librot/thermo.hpp"

using namespace librot;

namespace {

constexpr double pi = constants::pi;

double wrap(double a) {
  while (a > pi) a -= 2 * pi;
  while (a < -pi) a += 2 * pi;
  return a;
}

BodyShape reference_particle() {
  BodyShape s;
  s.geometry = Cylindroid{30e-9, 30e-9, 100e-9};
  s.density = 3510.0;
  s.charge = 100.0 * constants::e_charge;
  return s;
}

struct LoopSetup {
  MassProperties props;
  ChargeMoments cm;
  TrapConfig trap;
  SecularReport rep;
};

LoopSetup reference_loop() {
  LoopSetup ls;
  const BodyShape shape = reference_particle();
  ls.props = mass_properties(shape);
  ls.cm = charge_moments(shape);
  ls.rep = secular_report(ls.props, ls.cm, ls.trap);
  return ls;
}

std::vector<double> tone(int n, double dt, double t_end, double f0, double phi0,
                         double amp, double dc = 0.0) {
  std::vector<double> x(n);
  for (int k = 0; k < n; ++k) {
    const double t = t_end - (n - 1 - k) * dt;
    x[k] = dc + amp * std::sin(2 * pi * f0 * (t - t_end) + phi0);
  }
  return x;
}

}  // namespace

TEST_CASE("estimator recovers frequency, phase, and amplitude of a clean tone") {
  const double f0 = 26.4e3, dt = 2e-6, t_end = 7.7e-3;
  const int n = 2048;
  FeedbackConfig fb;
  for (double phi0 : {0.0, 1.1, -2.5, 3.0}) {
    const auto x = tone(n, dt, t_end, f0, phi0, 0.08, 5.0);
    for (double hint_scale : {1.0, 0.85, 1.15}) {
      const ModeEstimate est =
          estimate_mode(x, dt, t_end, f0 * hint_scale, 1, fb);
      REQUIRE(est.valid);
      CHECK(est.mode == 1);
      CHECK(est.t_ref == t_end);
      CHECK(est.f_est == doctest::Approx(f0).scale(0.0).epsilon(5e-3));
      CHECK(std::abs(wrap(est.phi_est - phi0)) < 0.05);
      CHECK(est.amplitude == doctest::Approx(0.08).scale(0.0).epsilon(0.05));
    }
  }
}

TEST_CASE("estimator ignores strong out-of-band interference") {
  const double f0 = 20e3, dt = 2e-6, t_end = 1.0;
  const int n = 4096;
  auto x = tone(n, dt, t_end, f0, 0.7, 0.05);
  const auto loud = tone(n, dt, t_end, 2.6 * f0, 1.9, 0.25);
  for (int k = 0; k < n; ++k) x[k] += loud[k];
  const ModeEstimate est = estimate_mode(x, dt, t_end, f0, 0, FeedbackConfig{});
  REQUIRE(est.valid);
  CHECK(est.f_est == doctest::Approx(f0).scale(0.0).epsilon(5e-3));
  CHECK(std::abs(wrap(est.phi_est - 0.7)) < 0.05);
}

TEST_CASE("estimator rejects featureless noise") {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<double> x(2048);
  for (auto& v : x) v = gauss(rng);
  const ModeEstimate est = estimate_mode(x, 2e-6, 0.1, 25e3, 2, FeedbackConfig{});
  CHECK_FALSE(est.valid);
}

TEST_CASE("estimator refuses buffers with fewer than min_cycles oscillations") {
  const double dt = 2e-6;
  const int n = 2048;  // 4.096 ms buffer
  const double f0 = 500.0;  // ~2 cycles < min_cycles = 3
  const auto x = tone(n, dt, dt * (n - 1), f0, 0.4, 0.1);
  const ModeEstimate est =
      estimate_mode(x, dt, dt * (n - 1), f0, 0, FeedbackConfig{});
  CHECK_FALSE(est.valid);
}

TEST_CASE("apply_feedback installs the doubled-frequency channel") {
  DriveWaveform w;
  w.base = TrapConfig{};

  ModeEstimate est;
  est.mode = 1;
  est.f_est = 26e3;
  est.phi_est = 0.3;
  est.t_ref = 1.234e-3;
  est.valid = true;

  const DriveWaveform w1 = apply_feedback(w, est, 0.05);
  REQUIRE(w1.modulations.size() == 1);
  const ModulationChannel& ch = w1.modulations[0];
  CHECK(ch.mode == 1);
  CHECK(ch.delta == doctest::Approx(0.05).scale(0.0).epsilon(1e-9));
  CHECK(ch.omega_m == doctest::Approx(2.0 * 2 * pi * est.f_est).scale(0.0).epsilon(1e-12));
  CHECK(ch.t_start == doctest::Approx(est.t_ref).scale(0.0).epsilon(1e-12));
  // Modulation phase referenced to absolute time: at t_ref it sits at 2*phi_est.
  CHECK(std::sin(ch.omega_m * est.t_ref + ch.phi_m) ==
        doctest::Approx(std::sin(2 * est.phi_est)).scale(0.0).epsilon(1e-9));

  // Inverted phase shifts by pi.
  const DriveWaveform w_inv = apply_feedback(w, est, 0.05, true);
  CHECK(std::sin(w_inv.modulations[0].omega_m * est.t_ref +
                 w_inv.modulations[0].phi_m) ==
        doctest::Approx(-std::sin(2 * est.phi_est)).scale(0.0).epsilon(1e-9));

  // Re-applying for the same mode replaces; another mode adds.
  ModeEstimate est2 = est;
  est2.f_est = 27e3;
  const DriveWaveform w2 = apply_feedback(w1, est2, 0.05);
  REQUIRE(w2.modulations.size() == 1);
  CHECK(w2.modulations[0].omega_m == doctest::Approx(2.0 * 2 * pi * 27e3).scale(0.0).epsilon(1e-9));
  ModeEstimate est3 = est;
  est3.mode = 0;
  const DriveWaveform w3 = apply_feedback(w2, est3, 0.02);
  CHECK(w3.modulations.size() == 2);

  // Invalid estimates leave the drive untouched.
  ModeEstimate bad = est;
  bad.valid = false;
  CHECK(apply_feedback(w3, bad, 0.05).modulations.size() == 2);
}

TEST_CASE("predicted damping rate and mode energies") {
  CHECK(predicted_damping_rate(1.6e5, 0.05) == doctest::Approx(8e3).scale(0.0).epsilon(1e-12));
  CHECK_THROWS_AS(predicted_damping_rate(1e5, 1.5), DomainError);

  const LoopSetup ls = reference_loop();
  RigidBodyState s;
  s.phi = EulerAngles{0.0, pi / 2 + 0.02, 0.0};
  const Vec3 E = mode_energies(s, ls.props, ls.rep.omega_s);
  const double expect =
      0.5 * ls.props.I[1] * std::pow(ls.rep.omega_s[1] * 0.02, 2);
  CHECK(E[1] == doctest::Approx(expect).scale(0.0).epsilon(1e-9));
  CHECK(std::abs(E[0]) < 1e-30);

  s.phi = EulerAngles{0.0, pi / 2, 0.0};
  CHECK(mode_energies(s, ls.props, ls.rep.omega_s).norm() == 0.0);
}

TEST_CASE("energy-balance steady state is half the collisional mixing value") {
  const double T = 300.0, Gg = 2e-5;
  // Equal rates: balance gives T/2 exactly.
  CHECK(steady_state_energy_balance(Gg, heating_rate(Gg, T)) ==
        doctest::Approx(T / 2).scale(0.0).epsilon(1e-12));
  // Strong feedback: balance -> mixing/2.
  const double Gd = 1000 * Gg;
  const double bal = steady_state_energy_balance(Gd, heating_rate(Gg, T));
  const double mix = steady_state_temperature(Gg, Gd, T);
  CHECK(bal / mix == doctest::Approx(0.5).scale(0.0).epsilon(2e-3));
  CHECK_THROWS_AS(steady_state_energy_balance(0.0, 1e-30), NoSteadyStateError);
}

TEST_CASE("feedback config validation") {
  FeedbackConfig fb;
  CHECK_NOTHROW(fb.validate());
  fb.delta = 1.0;
  CHECK_THROWS_AS(fb.validate(), ConfigError);
  fb = FeedbackConfig{};
  fb.window = 0.0;
  CHECK_THROWS_AS(fb.validate(), ConfigError);
  fb = FeedbackConfig{};
  fb.min_cycles = 0;
  CHECK_THROWS_AS(fb.validate(), ConfigError);
}

TEST_CASE("closed-loop cooling damps the stiff mode at omega*delta") {
  const LoopSetup ls = reference_loop();
  FeedbackConfig fb;
  fb.modes = {false, true, false};
  fb.delta = 0.05;
  fb.window = 1e-4;

  RigidBodyState s;
  s.phi = EulerAngles{0.0, pi / 2 + 0.1, 0.0};
  const CoolingTrace trace =
      run_cooling(s, ls.props, ls.cm, ls.trap, fb, 1.5e-3, 100);

  const double w_beta = ls.rep.omega_s[1];
  const double rate = predicted_damping_rate(w_beta, fb.delta);

  // Two estimation windows are needed for three cycles at ~26 kHz.
  REQUIRE_FALSE(std::isnan(trace.first_actuation[1]));
  CHECK(trace.first_actuation[1] > 1.9e-4);
  CHECK(trace.first_actuation[1] < 2.2e-4);

  // No estimates exist before the first actuation.
  for (const auto& row : trace.rows)
    if (row.t < trace.first_actuation[1] - 1e-9) CHECK(std::isnan(row.f_est[1]));

  CHECK(trace.fitted_rate[1] == doctest::Approx(rate).scale(0.0).epsilon(0.35));
  CHECK(trace.predicted_rate[1] == doctest::Approx(rate).scale(0.0).epsilon(1e-12));

  // Latest estimate locks onto the libration frequency; the measured line
  // sits a couple of percent above the leading-order secular value because
  // the stiff mode runs at q ~ 0.3 where O(q^2) corrections are visible.
  CHECK(trace.rows.back().f_est[1] ==
        doctest::Approx(w_beta / (2 * pi)).scale(0.0).epsilon(0.03));

  // Energy falls by >= 3 orders of magnitude and crosses the hbar*omega scale.
  const double E0 = trace.rows.front().E[1];
  CHECK(trace.rows.back().E[1] < 1e-3 * E0);
  REQUIRE_FALSE(std::isnan(trace.hbar_crossing[1]));
  CHECK(trace.hbar_crossing[1] > 0.5e-3);
  CHECK(trace.hbar_crossing[1] < 1.5e-3);
  bool noted = false;
  for (const auto& msg : trace.warnings)
    noted |= msg.find("hbar") != std::string::npos;
  CHECK(noted);

  CHECK(trace.micromotion_fraction[1] ==
        doctest::Approx(ls.rep.q_lib[1] / 2).scale(0.0).epsilon(1e-12));
}

TEST_CASE("cooling rate scales linearly with the modulation depth") {
  const LoopSetup ls = reference_loop();
  RigidBodyState s;
  s.phi = EulerAngles{0.0, pi / 2 + 0.1, 0.0};
  for (double delta : {0.02, 0.05}) {
    FeedbackConfig fb;
    fb.modes = {false, true, false};
    fb.delta = delta;
    fb.window = 1e-4;
    const CoolingTrace trace =
        run_cooling(s, ls.props, ls.cm, ls.trap, fb, 1.5e-3, 100);
    CHECK(trace.fitted_rate[1] ==
          doctest::Approx(ls.rep.omega_s[1] * delta).scale(0.0).epsilon(0.15));
  }
}

TEST_CASE("pi-shifted feedback anti-damps at the same rate") {
  const LoopSetup ls = reference_loop();
  FeedbackConfig fb;
  fb.modes = {false, true, false};
  fb.delta = 0.05;
  fb.window = 1e-4;
  fb.invert_phase = true;

  RigidBodyState s;
  s.phi = EulerAngles{0.0, pi / 2 + 0.02, 0.0};
  const CoolingTrace trace =
      run_cooling(s, ls.props, ls.cm, ls.trap, fb, 0.9e-3, 100);

  const double rate = ls.rep.omega_s[1] * fb.delta;
  CHECK(trace.fitted_rate[1] == doctest::Approx(-rate).scale(0.0).epsilon(0.20));
  CHECK(trace.rows.back().E[1] > 50.0 * trace.rows.front().E[1]);
}

TEST_CASE("zero modulation depth leaves the energy flat") {
  const LoopSetup ls = reference_loop();
  FeedbackConfig fb;
  fb.modes = {false, true, false};
  fb.delta = 0.0;

  RigidBodyState s;
  s.phi = EulerAngles{0.0, pi / 2 + 0.05, 0.0};
  const CoolingTrace trace =
      run_cooling(s, ls.props, ls.cm, ls.trap, fb, 1e-3, 100);
  CHECK(std::isnan(trace.first_actuation[1]));
  // The recorded mode energy pairs the instantaneous rate from the full
  // dynamics with the secular frequency, so at q ~ 0.3 it carries a
  // micromotion ripple of order q about the secular energy.  With no
  // modulation there is no net drift: window-averaged energies at the two
  // ends of the run agree, and every sample stays inside the ripple band.
  const double E0 = trace.rows.front().E[1];
  auto mean_between = [&](double t0, double t1) {
    double acc = 0.0;
    long n = 0;
    for (const auto& row : trace.rows)
      if (row.t >= t0 && row.t < t1) {
        acc += row.E[1];
        ++n;
      }
    REQUIRE(n > 0);
    return acc / n;
  };
  const double head = mean_between(0.0, 2e-4);
  const double tail = mean_between(8e-4, 1e-3);
  CHECK(tail == doctest::Approx(head).scale(0.0).epsilon(0.03));
  for (const auto& row : trace.rows) {
    CHECK(row.E[1] > 0.4 * E0);
    CHECK(row.E[1] < 1.25 * E0);
  }
}

TEST_CASE("numeric frequency extraction matches the analytic secular value") {
  const LoopSetup ls = reference_loop();
  // Soft mode (q ~ 0.01) at small amplitude: the pseudopotential well is
  // anharmonic (softening ~ amplitude^2), so probe well inside the
  // linear regime.
  const double w_alpha =
      measure_mode_frequency(ls.props, ls.cm, ls.trap, 0, 0.02, 5e-3);
  CHECK(w_alpha == doctest::Approx(ls.rep.omega_s[0]).scale(0.0).epsilon(5e-3));
  // Stiff mode (q ~ 0.3): the full dynamics run a couple of percent above
  // the leading-order secular frequency.
  const double w_meas =
      measure_mode_frequency(ls.props, ls.cm, ls.trap, 1, 0.1, 5e-4);
  CHECK(w_meas == doctest::Approx(ls.rep.omega_s[1]).scale(0.0).epsilon(2e-2));

  CHECK_THROWS_AS(
      measure_mode_frequency(ls.props, ls.cm, ls.trap, 3, 0.1, 1e-4),
      DomainError);
  CHECK_THROWS_AS(
      measure_mode_frequency(ls.props, ls.cm, ls.trap, 1, 0.1, 1e-4, 10),
      ConfigError);
}
