#pragma once

#include <array>
#include <string>
#include <vector>

#include "librot/dynamics.hpp"
#include "librot/secular.hpp"
#include "librot/trap.hpp"

namespace librot {

/// Parametric-feedback controller settings.
struct FeedbackConfig {
  double window = 1e-4;          ///< estimation interval (s)
  double delta = 0.05;           ///< modulation depth per mode
  double band_halfwidth = 0.2;   ///< relative band-pass half-width around the peak
  int min_cycles = 3;            ///< oscillation cycles required before actuation
  std::array<bool, 3> modes{true, true, true};  ///< alpha, beta, gamma under control
  double prominence_min = 3.0;   ///< required spectral peak / median-floor ratio
  bool invert_phase = false;     ///< pi-shift the modulation (anti-damping probe)

  void validate() const;  ///< throws ConfigError on out-of-range values
};

/// Result of one spectral phase/frequency estimate.
struct ModeEstimate {
  int mode = -1;           ///< 0 = alpha, 1 = beta, 2 = gamma
  double f_est = 0.0;      ///< oscillation frequency (Hz)
  /// Sine-convention phase at t_ref: signal ~ amplitude * sin(2 pi f_est (t - t_ref) + phi_est).
  double phi_est = 0.0;
  double amplitude = 0.0;  ///< fitted amplitude (rad)
  double t_ref = 0.0;      ///< reference time = end of the estimation buffer (s)
  bool valid = false;
};

/// One record of the closed-loop run, sampled at RF-period marks so the
/// micromotion phase is constant across records.
struct CoolingRow {
  double t = 0.0;
  Vec3 E = Vec3::Zero();  ///< per-mode energy 0.5 I (dphi^2 + omega^2 phi^2)
  Vec3 f_est = Vec3::Zero();    ///< latest estimate per mode (NaN before first)
  Vec3 phi_est = Vec3::Zero();  ///< latest estimate per mode (NaN before first)
};

/// Closed-loop cooling record plus fitted decay diagnostics.
struct CoolingTrace {
  std::vector<CoolingRow> rows;
  Vec3 omega_mode = Vec3::Zero();      ///< analytic secular frequencies used for E
  Vec3 fitted_rate = Vec3::Zero();     ///< log-energy decay rate per mode (1/s; NaN when unfitted)
  Vec3 predicted_rate = Vec3::Zero();  ///< omega * delta per mode
  Vec3 first_actuation = Vec3::Zero(); ///< time feedback first engaged per mode (NaN if never)
  Vec3 hbar_crossing = Vec3::Zero();   ///< first time E < hbar*omega per mode (NaN if never)
  Vec3 micromotion_fraction = Vec3::Zero();  ///< q/2 ripple diagnostic per mode
  std::vector<std::string> warnings;
};

/// Spectral estimate of the dominant oscillation of `signal` near f_hint:
/// Hann periodogram peak restricted to [0.5, 1.5] f_hint, prominence gate,
/// zero-phase band-pass, then a least-squares cosine fit with frequency
/// refinement. `t_end` is the absolute time of the last sample. Returns an
/// invalid estimate (never throws) when no credible peak exists or fewer than
/// min_cycles oscillations fit in the buffer.
ModeEstimate estimate_mode(const std::vector<double>& signal, double dt_sample,
                           double t_end, double f_hint, int mode,
                           const FeedbackConfig& cfg);

/// Install/update the modulation channel for the estimate's mode: frequency
/// 2*(2 pi f_est), phase 2*phi_est referenced to the buffer end (plus pi when
/// invert_phase). Other channels are untouched; invalid estimates leave the
/// waveform unchanged.
DriveWaveform apply_feedback(const DriveWaveform& w, const ModeEstimate& est,
                             double delta, bool invert_phase = false);

/// Analytic energy damping rate of parametric feedback, Gamma = omega * delta.
double predicted_damping_rate(double omega, double delta);

/// Closed-loop run: integrate one window, estimate each controlled mode from
/// the trailing samples, update the modulation channels, repeat until t_end.
/// Energies are recorded at RF-period marks; the decay rate is fitted on the
/// post-actuation log-energy slope.
CoolingTrace run_cooling(const RigidBodyState& initial, const MassProperties& props,
                         const ChargeMoments& cm, const TrapConfig& trap,
                         const FeedbackConfig& fb, double t_end,
                         int dt_per_period = 100);

/// Steady-state temperature from an energy balance: T = heating / (k_B Gamma).
/// Throws NoSteadyStateError when Gamma_damp <= 0.
double steady_state_energy_balance(double Gamma_damp, double heating_rate);

/// Numeric secular-frequency measurement: integrate a single-mode excitation
/// of `offset` radians for `duration` seconds and extract the angular
/// frequency of that Euler coordinate from its mean-crossing times (robust to
/// the multiplicative micromotion ripple). Returns NaN when fewer than three
/// full cycles are resolved.
double measure_mode_frequency(const MassProperties& props, const ChargeMoments& cm,
                              const TrapConfig& trap, int mode, double offset,
                              double duration, int dt_per_period = 100);

/// Per-mode libration energies 0.5 I_l (dphi_l^2 + omega_l^2 dphi_l^2) of a state,
/// with displacements measured from the conventional equilibrium (0, pi/2, 0).
Vec3 mode_energies(const RigidBodyState& state, const MassProperties& props,
                   const Vec3& omega_mode);

}  // namespace librot
