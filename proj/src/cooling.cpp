#include "librot/cooling.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>

#include <unsupported/Eigen/FFT>

#include "librot/errors.hpp"

namespace librot {

namespace {

constexpr double pi = constants::pi;
const double nan_d = std::numeric_limits<double>::quiet_NaN();

double wrap_angle(double x) {
  x = std::fmod(x, 2 * pi);
  if (x > pi) x -= 2 * pi;
  if (x <= -pi) x += 2 * pi;
  return x;
}

/// Least-squares fit signal_i ~ C cos(2 pi f x_i) + S sin(2 pi f x_i) with
/// x_i = t_i - t_end; returns the residual sum of squares.
double cosine_fit(const std::vector<double>& s, double dt, double f, double& C,
                  double& S) {
  const int n = static_cast<int>(s.size());
  double cc = 0, cs = 0, ss = 0, yc = 0, ys = 0;
  for (int i = 0; i < n; ++i) {
    const double x = -(n - 1 - i) * dt;
    const double c = std::cos(2 * pi * f * x);
    const double sn = std::sin(2 * pi * f * x);
    cc += c * c;
    cs += c * sn;
    ss += sn * sn;
    yc += s[i] * c;
    ys += s[i] * sn;
  }
  const double det = cc * ss - cs * cs;
  if (std::abs(det) < 1e-300) {
    C = S = 0.0;
    return std::numeric_limits<double>::infinity();
  }
  C = (ss * yc - cs * ys) / det;
  S = (cc * ys - cs * yc) / det;
  double rss = 0;
  for (int i = 0; i < n; ++i) {
    const double x = -(n - 1 - i) * dt;
    const double r = s[i] - C * std::cos(2 * pi * f * x) - S * std::sin(2 * pi * f * x);
    rss += r * r;
  }
  return rss;
}

/// Linear fit y = a + b x; returns slope b (NaN for fewer than 2 points).
double line_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const int n = static_cast<int>(x.size());
  if (n < 2) return nan_d;
  double mx = 0, my = 0;
  for (int i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0;
  for (int i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx <= 0.0) return nan_d;
  return sxy / sxx;
}

}  // namespace

void FeedbackConfig::validate() const {
  if (!(window > 0.0)) throw ConfigError("feedback window must be positive");
  if (!(delta >= 0.0 && delta < 1.0))
    throw ConfigError("modulation depth must lie in [0, 1)");
  if (!(band_halfwidth > 0.0 && band_halfwidth < 1.0))
    throw ConfigError("band half-width must lie in (0, 1)");
  if (min_cycles < 1) throw ConfigError("min_cycles must be at least 1");
  if (!(prominence_min >= 1.0)) throw ConfigError("prominence threshold must be >= 1");
}

ModeEstimate estimate_mode(const std::vector<double>& signal, double dt_sample,
                           double t_end, double f_hint, int mode,
                           const FeedbackConfig& cfg) {
  ModeEstimate est;
  est.mode = mode;
  est.t_ref = t_end;
  const int n = static_cast<int>(signal.size());
  if (n < 8 || !(dt_sample > 0.0) || !(f_hint > 0.0)) return est;

  const double t_buf = n * dt_sample;
  double mean = 0.0;
  for (double v : signal) mean += v;
  mean /= n;
  std::vector<double> centered(signal);
  for (double& v : centered) v -= mean;

  // Hann-windowed periodogram for peak detection.
  std::vector<double> windowed(centered);
  for (int i = 0; i < n; ++i)
    windowed[i] *= 0.5 * (1.0 - std::cos(2 * pi * i / (n - 1)));
  Eigen::FFT<double> fft;
  std::vector<std::complex<double>> spec;
  fft.fwd(spec, windowed);

  const double df = 1.0 / (n * dt_sample);
  const int k_lo = std::max(1, static_cast<int>(std::ceil(0.5 * f_hint / df)));
  const int k_hi = std::min(n / 2 - 1, static_cast<int>(std::floor(1.5 * f_hint / df)));
  if (k_hi - k_lo + 1 < 3) return est;

  int k_peak = k_lo;
  double a_peak = -1.0;
  for (int k = k_lo; k <= k_hi; ++k) {
    const double a = std::abs(spec[k]);
    if (a > a_peak) {
      a_peak = a;
      k_peak = k;
    }
  }
  // Spectral floor for the prominence test: median magnitude over the whole
  // positive-frequency axis excluding DC and the peak's own main lobe.  The
  // candidate band can be as narrow as the lobe itself (slow mode, short
  // buffer), so an in-band median would measure the line, not the floor.
  std::vector<double> sorted;
  sorted.reserve(n / 2);
  for (int k = 1; k < n / 2; ++k)
    if (std::abs(k - k_peak) > 2) sorted.push_back(std::abs(spec[k]));
  if (sorted.empty()) return est;
  std::nth_element(sorted.begin(), sorted.begin() + sorted.size() / 2, sorted.end());
  const double floor_med = sorted[sorted.size() / 2];
  if (!(a_peak > 0.0) || !(floor_med >= 0.0)) return est;
  if (floor_med > 0.0 && a_peak / floor_med < cfg.prominence_min) return est;
  if (floor_med == 0.0 && a_peak == 0.0) return est;

  // Parabolic interpolation of the peak bin.
  double f0 = k_peak * df;
  if (k_peak > 1 && k_peak < n / 2 - 1) {
    const double am = std::abs(spec[k_peak - 1]);
    const double a0 = std::abs(spec[k_peak]);
    const double ap = std::abs(spec[k_peak + 1]);
    const double denom = am - 2 * a0 + ap;
    if (denom < 0.0) {
      double p = 0.5 * (am - ap) / denom;
      p = std::clamp(p, -0.5, 0.5);
      f0 = (k_peak + p) * df;
    }
  }
  if (f0 * t_buf < cfg.min_cycles) return est;

  // Zero-phase brick-wall band-pass around f0 on the unwindowed signal.
  // A passband narrower than a few DFT bins is not realizable on the record
  // (the impulse response would outlast the buffer, and truncating the mode
  // line's own spectral skirt biases the fit); below that resolution the
  // filter degenerates to the identity.
  std::vector<double> filtered(centered);
  const double halfwidth = cfg.band_halfwidth * f0;
  if (halfwidth >= 3.0 * df) {
    std::vector<std::complex<double>> raw_spec;
    fft.fwd(raw_spec, centered);
    const double f_lo = f0 - halfwidth;
    const double f_hi = f0 + halfwidth;
    for (int k = 0; k < n; ++k) {
      const double fk = std::min(k, n - k) * df;
      if (fk < f_lo || fk > f_hi) raw_spec[k] = 0.0;
    }
    std::vector<std::complex<double>> filtered_c;
    fft.inv(filtered_c, raw_spec);
    for (int i = 0; i < n; ++i) filtered[i] = filtered_c[i].real();
  }

  // Cosine fit with parabolic frequency refinement.
  double C = 0, S = 0;
  double f_best = f0;
  double h = 0.25 * df;
  for (int round = 0; round < 3; ++round) {
    double Cm, Sm, Cp, Sp;
    const double rm = cosine_fit(filtered, dt_sample, f_best - h, Cm, Sm);
    const double r0 = cosine_fit(filtered, dt_sample, f_best, C, S);
    const double rp = cosine_fit(filtered, dt_sample, f_best + h, Cp, Sp);
    const double denom = rm - 2 * r0 + rp;
    if (denom > 0.0) {
      double p = 0.5 * (rm - rp) / denom;
      p = std::clamp(p, -1.0, 1.0);
      f_best += p * h;
    } else if (rm < r0 && rm < rp) {
      f_best -= h;
    } else if (rp < r0 && rp < rm) {
      f_best += h;
    }
    h *= 0.25;
  }
  if (!(f_best > 0.0) || f_best * t_buf < cfg.min_cycles) return est;
  cosine_fit(filtered, dt_sample, f_best, C, S);

  est.f_est = f_best;
  est.amplitude = std::hypot(C, S);
  est.phi_est = std::atan2(C, S);  // signal ~ A sin(2 pi f (t - t_end) + phi)
  est.valid = est.amplitude > 0.0;
  return est;
}

DriveWaveform apply_feedback(const DriveWaveform& w, const ModeEstimate& est,
                             double delta, bool invert_phase) {
  if (!est.valid || delta == 0.0) return w;
  DriveWaveform out = w;
  ModulationChannel ch;
  ch.mode = est.mode;
  ch.delta = delta;
  ch.omega_m = 2.0 * (2 * pi * est.f_est);
  double psi = 2.0 * est.phi_est + (invert_phase ? pi : 0.0);
  ch.phi_m = wrap_angle(psi - ch.omega_m * est.t_ref);
  ch.t_start = est.t_ref;
  ch.t_stop = std::numeric_limits<double>::infinity();
  for (auto& existing : out.modulations)
    if (existing.mode == est.mode) {
      existing = ch;
      return out;
    }
  out.modulations.push_back(ch);
  return out;
}

double predicted_damping_rate(double omega, double delta) {
  if (omega < 0.0 || delta < 0.0 || delta >= 1.0)
    throw DomainError("predicted_damping_rate requires omega >= 0 and 0 <= delta < 1");
  return omega * delta;
}

Vec3 mode_energies(const RigidBodyState& state, const MassProperties& props,
                   const Vec3& omega_mode) {
  const Vec3 dphi(state.phi.alpha, state.phi.beta - pi / 2, state.phi.gamma);
  const Vec3 rate = t_inverse(state.phi.beta, state.phi.gamma) * state.omega;
  return 0.5 *
         (props.I.array() *
          (rate.array().square() + omega_mode.array().square() * dphi.array().square()))
             .matrix();
}

CoolingTrace run_cooling(const RigidBodyState& initial, const MassProperties& props,
                         const ChargeMoments& cm, const TrapConfig& trap,
                         const FeedbackConfig& fb, double t_end, int dt_per_period) {
  fb.validate();
  trap.validate();
  if (dt_per_period < 50) throw ConfigError("dt_per_period must be at least 50");

  CoolingTrace trace;
  const SecularReport rep = secular_report(props, cm, trap);
  trace.omega_mode = rep.omega_s;
  trace.micromotion_fraction = rep.q_lib / 2.0;
  for (int m = 0; m < 3; ++m) {
    trace.predicted_rate[m] = fb.modes[m] ? predicted_damping_rate(rep.omega_s[m], fb.delta) : 0.0;
    trace.fitted_rate[m] = nan_d;
    trace.first_actuation[m] = nan_d;
    trace.hbar_crossing[m] = nan_d;
  }

  const double rf_period = 2 * pi / trap.Omega_AC;
  const double dt = rf_period / dt_per_period;
  const long long steps_per_window = std::llround(fb.window / dt);
  if (steps_per_window < 2 * dt_per_period)
    throw ConfigError("feedback window must span at least two RF periods");
  const int est_stride = std::max(1, dt_per_period / 20);
  if (steps_per_window % est_stride != 0)
    throw ConfigError("feedback window must be divisible by the estimator stride");
  const long long samples_per_window = steps_per_window / est_stride;
  const double dt_sample = est_stride * dt;
  const long long total_steps = std::llround((t_end - initial.t) / dt);
  const long long n_windows = total_steps / steps_per_window;

  // Windows needed so the trailing buffer holds >= min_cycles expected cycles.
  std::array<long long, 3> windows_needed{};
  for (int m = 0; m < 3; ++m) {
    const double f_hint = rep.omega_s[m] / (2 * pi);
    windows_needed[m] =
        f_hint > 0.0
            ? std::max<long long>(
                  1, static_cast<long long>(std::ceil(fb.min_cycles / (f_hint * fb.window))))
            : std::numeric_limits<long long>::max();
  }

  DriveWaveform wave;
  wave.base = trap;
  RigidBodyState state = initial;
  std::array<std::vector<double>, 3> buffers;
  Vec3 last_f = Vec3::Constant(nan_d);
  Vec3 last_phi = Vec3::Constant(nan_d);

  const auto record = [&](const RigidBodyState& s) {
    CoolingRow row;
    row.t = s.t;
    row.E = mode_energies(s, props, rep.omega_s);
    row.f_est = last_f;
    row.phi_est = last_phi;
    trace.rows.push_back(row);
    for (int m = 0; m < 3; ++m)
      if (std::isnan(trace.hbar_crossing[m]) && rep.omega_s[m] > 0.0 &&
          row.E[m] < constants::hbar * rep.omega_s[m])
        trace.hbar_crossing[m] = s.t;
  };
  record(state);

  for (long long w_idx = 0; w_idx < n_windows; ++w_idx) {
    for (long long step = 1; step <= steps_per_window; ++step) {
      state = rk4_step(state, dt, props, cm, wave);
      const Vec3 ang = state.phi.vec();
      if (!ang.allFinite() || ang.cwiseAbs().maxCoeff() > 1e3 ||
          !state.omega.allFinite() || state.omega.cwiseAbs().maxCoeff() > 1e12)
        throw InstabilityError("state diverged at t = " + std::to_string(state.t) + " s",
                               state.t);
      if (step % est_stride == 0) {
        buffers[0].push_back(state.phi.alpha);
        buffers[1].push_back(state.phi.beta - pi / 2);
        buffers[2].push_back(state.phi.gamma);
      }
      if (step % dt_per_period == 0) record(state);
    }

    const long long windows_elapsed = w_idx + 1;
    for (int m = 0; m < 3; ++m) {
      if (!fb.modes[m] || rep.omega_s[m] <= 0.0) continue;
      if (windows_elapsed < windows_needed[m]) continue;
      const long long n_take = windows_needed[m] * samples_per_window;
      const auto& buf = buffers[m];
      std::vector<double> tail(buf.end() - n_take, buf.end());
      const double f_hint = rep.omega_s[m] / (2 * pi);
      const ModeEstimate est = estimate_mode(tail, dt_sample, state.t, f_hint, m, fb);
      if (est.valid) {
        wave = apply_feedback(wave, est, fb.delta, fb.invert_phase);
        last_f[m] = est.f_est;
        last_phi[m] = est.phi_est;
        if (std::isnan(trace.first_actuation[m]) && fb.delta > 0.0)
          trace.first_actuation[m] = state.t;
      }
    }
  }

  // Fit the post-actuation log-energy slope per controlled mode, restricted to
  // the window where the motion is harmonic and still classical.
  for (int m = 0; m < 3; ++m) {
    if (!fb.modes[m] || std::isnan(trace.first_actuation[m])) continue;
    const double w_l = rep.omega_s[m];
    const double e_floor = 50.0 * constants::hbar * w_l;
    const double amp_max = 0.5;
    const double e_ceil = 0.5 * props.I[m] * w_l * w_l * amp_max * amp_max;
    std::vector<double> ts, logs;
    for (const auto& row : trace.rows) {
      if (row.t < trace.first_actuation[m] + fb.window) continue;
      if (!(row.E[m] > e_floor) || !(row.E[m] < e_ceil)) continue;
      ts.push_back(row.t);
      logs.push_back(std::log(row.E[m]));
    }
    if (ts.size() >= 4) trace.fitted_rate[m] = -line_slope(ts, logs);
  }

  for (int m = 0; m < 3; ++m) {
    if (!std::isnan(trace.hbar_crossing[m]))
      trace.warnings.push_back(
          "mode " + std::string{"abg"[m]} +
          ": energy crossed the hbar*omega scale at t = " +
          std::to_string(trace.hbar_crossing[m]) +
          " s; the classical model is indicative only below this point");
    if (fb.modes[m] && std::isnan(trace.first_actuation[m]) && fb.delta > 0.0)
      trace.warnings.push_back("mode " + std::string{"abg"[m]} +
                               ": feedback never engaged (no valid estimate)");
  }
  return trace;
}

double steady_state_energy_balance(double Gamma_damp, double heating_rate) {
  if (!(Gamma_damp > 0.0))
    throw NoSteadyStateError("energy balance requires a positive damping rate");
  return heating_rate / (constants::k_B * Gamma_damp);
}

double measure_mode_frequency(const MassProperties& props, const ChargeMoments& cm,
                              const TrapConfig& trap, int mode, double offset,
                              double duration, int dt_per_period) {
  if (mode < 0 || mode > 2) throw DomainError("mode index must be 0, 1, or 2");
  if (!(offset > 0.0) || !(duration > 0.0))
    throw DomainError("offset and duration must be positive");
  if (dt_per_period < 50) throw ConfigError("dt_per_period must be at least 50");
  trap.validate();

  RigidBodyState state;
  state.phi = EulerAngles{0.0, pi / 2, 0.0};
  if (mode == 0) state.phi.alpha += offset;
  if (mode == 1) state.phi.beta += offset;
  if (mode == 2) state.phi.gamma += offset;

  DriveWaveform wave;
  wave.base = trap;
  const double dt = (2 * pi / trap.Omega_AC) / dt_per_period;
  const int stride = std::max(1, dt_per_period / 20);
  const long long total_steps = std::llround(duration / dt);

  std::vector<double> t_s, y_s;
  t_s.reserve(total_steps / stride + 1);
  y_s.reserve(total_steps / stride + 1);
  for (long long step = 1; step <= total_steps; ++step) {
    state = rk4_step(state, dt, props, cm, wave);
    const Vec3 ang = state.phi.vec();
    if (!ang.allFinite() || ang.cwiseAbs().maxCoeff() > 1e3 ||
        !state.omega.allFinite() || state.omega.cwiseAbs().maxCoeff() > 1e12)
      throw InstabilityError("state diverged at t = " + std::to_string(state.t) + " s",
                             state.t);
    if (step % stride == 0) {
      t_s.push_back(state.t);
      y_s.push_back(mode == 0   ? state.phi.alpha
                    : mode == 1 ? state.phi.beta - pi / 2
                                : state.phi.gamma);
    }
  }
  if (y_s.size() < 16) return nan_d;

  double mean = 0.0;
  for (double v : y_s) mean += v;
  mean /= static_cast<double>(y_s.size());

  std::vector<double> crossings;
  for (size_t i = 0; i + 1 < y_s.size(); ++i) {
    const double a = y_s[i] - mean;
    const double b = y_s[i + 1] - mean;
    if (a == 0.0) {
      crossings.push_back(t_s[i]);
    } else if (a * b < 0.0) {
      crossings.push_back(t_s[i] + (t_s[i + 1] - t_s[i]) * a / (a - b));
    }
  }
  if (crossings.size() < 7) return nan_d;  // need at least three full cycles
  const double span = crossings.back() - crossings.front();
  if (!(span > 0.0)) return nan_d;
  return pi * static_cast<double>(crossings.size() - 1) / span;
}

}  // namespace librot
