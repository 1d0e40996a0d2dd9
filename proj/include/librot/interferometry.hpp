#pragma once

#include <complex>
#include <string>
#include <vector>

#include "librot/constants.hpp"

namespace librot {

using Mat2 = Eigen::Matrix2d;

/// Grid resolution for the brute-force split-step cross-check propagator.
struct GridSettings {
  int n_points = 4096;          ///< grid size (scaled phase-space units)
  double span = 16.0;           ///< half-width of the grid in units of sigma_0
  int steps_per_segment = 256;  ///< split-step slices per pulse segment
};

/// Stern-Gerlach interferometer and angular-coherence model parameters.
struct InterferometerConfig {
  double M = 5e-19;         ///< mass (kg)
  double a_minus = 1.85;    ///< acceleration in the |-> arm (m/s^2)
  double g_par = 9.8;       ///< gravity component along the gradient (m/s^2)
  double T_p = 4e-6;        ///< pulse duration (s)
  double B = 10 * units::gauss;  ///< magnetic field (T)
  double mu = 2.8e6 / units::gauss * constants::h_planck;  ///< spin moment (J/T)
  double I_axis = 2.1e-34;  ///< moment of inertia about the librating axis (kg m^2)
  int n_max = 0;            ///< thermal eigenstate cutoff; 0 = automatic (capped at 2000)
  GridSettings grid;

  void validate() const;  ///< throws DomainError on non-positive parameters
  /// Zero-field-splitting validity note (non-empty when mu*B/h exceeds 1% of D).
  std::string weak_field_warning() const;
};

/// Interferometer phase and maximal path splitting.
struct PhaseReport {
  double phi_int = 0.0;             ///< (M/hbar) a_-(a_- + 2 g_par) T_p^3 (rad)
  double phi_int_no_gravity = 0.0;  ///< same with g_par = 0
  double splitting = 0.0;           ///< a_- T_p^2 (m)
};

PhaseReport interferometer_phase(const InterferometerConfig& cfg);

/// Libration angular frequency in the field, omega_B = sqrt(mu |B| / I).
double libration_frequency_B(double mu, double B, double I_axis);

/// Temperature equivalent of one libration quantum, hbar*omega_B/k_B (K).
double quantum_temperature_scale(double omega_B);

/// Phase-space propagators in scaled units (X = x/sigma0, P = p sigma0/hbar);
/// theta = omega_B * t.
Mat2 propagator_harmonic(double theta);
Mat2 propagator_free(double theta);

/// Four-segment path propagators with u = omega_B * T_p:
/// path a = harmonic(u), free(2u), harmonic(u); path b = free(u), harmonic(2u), free(u).
Mat2 path_propagator_a(double u);
Mat2 path_propagator_b(double u);

/// Diagonal matrix element <n|U(S)|n> of the metaplectic operator of a
/// symplectic S (det = 1): exp(-i phi (n + 1/2)) sqrt(sech r) P_n(sech r).
std::complex<double> mode_overlap(const Mat2& S, int n);

/// Thermal two-path contrast C = |sum_n w_n <psi_n^b|psi_n^a>| at temperature T.
/// Throws TruncationError when the thermal tail past n_max exceeds 1e-4.
double contrast(double T, const InterferometerConfig& cfg);

struct ContrastDetail {
  double contrast = 0.0;
  double tail_bound = 0.0;  ///< thermal weight beyond the summed states
  int n_used = 0;           ///< number of eigenstates summed
  double sech_r = 0.0;      ///< squeezing mismatch parameter of S_b^{-1} S_a
  double phi_G = 0.0;       ///< Gouy-type phase per quantum
};

ContrastDetail contrast_detail(double T, const InterferometerConfig& cfg);

/// Mean thermal phonon number [exp(hbar omega_B / k_B T) - 1]^{-1}.
double mean_phonons(double T, double omega_B);

/// Invert C(T) by bisection to relative precision 1e-3.
/// Throws UnattainableTargetError when C_target >= C(T = 0).
double required_temperature(double C_target, const InterferometerConfig& cfg);

}  // namespace librot
