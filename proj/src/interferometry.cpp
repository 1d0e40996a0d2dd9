#include "librot/interferometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "librot/errors.hpp"

namespace librot {

namespace {

constexpr double zero_field_splitting_hz = 2.87e9;

/// Automatic cutoff: smallest N whose residual thermal weight e^{-(N+1)x}
/// drops below 1e-4, capped at 2000.
int auto_n_max(double x) {
  if (!(x > 0.0) || std::isinf(x)) return 0;
  const double n = std::ceil(std::log(1e4) / x) - 1.0;
  return std::clamp(static_cast<int>(n), 0, 2000);
}

}  // namespace

void InterferometerConfig::validate() const {
  if (!(M > 0.0) || !(T_p > 0.0) || !(B > 0.0) || !(mu > 0.0) || !(I_axis > 0.0))
    throw DomainError("interferometer parameters must be positive");
  if (n_max < 0) throw DomainError("n_max must be non-negative");
}

std::string InterferometerConfig::weak_field_warning() const {
  const double ratio = mu * B / constants::h_planck / zero_field_splitting_hz;
  if (ratio > 0.01)
    return "mu*B/h is " + std::to_string(ratio) +
           " of the zero-field splitting; the weak-field two-level model may not hold";
  return {};
}

PhaseReport interferometer_phase(const InterferometerConfig& cfg) {
  cfg.validate();
  PhaseReport rep;
  const double t3 = cfg.T_p * cfg.T_p * cfg.T_p;
  rep.phi_int = cfg.M / constants::hbar * cfg.a_minus * (cfg.a_minus + 2.0 * cfg.g_par) * t3;
  rep.phi_int_no_gravity = cfg.M / constants::hbar * cfg.a_minus * cfg.a_minus * t3;
  rep.splitting = cfg.a_minus * cfg.T_p * cfg.T_p;
  return rep;
}

double libration_frequency_B(double mu, double B, double I_axis) {
  if (!(mu > 0.0) || !(I_axis > 0.0))
    throw DomainError("libration frequency requires positive mu and I");
  return std::sqrt(mu * std::abs(B) / I_axis);
}

double quantum_temperature_scale(double omega_B) {
  return constants::hbar * omega_B / constants::k_B;
}

Mat2 propagator_harmonic(double theta) {
  Mat2 S;
  S << std::cos(theta), std::sin(theta), -std::sin(theta), std::cos(theta);
  return S;
}

Mat2 propagator_free(double theta) {
  Mat2 S;
  S << 1.0, theta, 0.0, 1.0;
  return S;
}

Mat2 path_propagator_a(double u) {
  return propagator_harmonic(u) * propagator_free(2.0 * u) * propagator_harmonic(u);
}

Mat2 path_propagator_b(double u) {
  return propagator_free(u) * propagator_harmonic(2.0 * u) * propagator_free(u);
}

std::complex<double> mode_overlap(const Mat2& S, int n) {
  const std::complex<double> mu_c(0.5 * (S(0, 0) + S(1, 1)), 0.5 * (S(1, 0) - S(0, 1)));
  const double sech_r = 1.0 / std::abs(mu_c);
  const double phi = -std::arg(mu_c);
  // Legendre recurrence up to n.
  double p0 = 1.0, p1 = sech_r;
  double pn = (n == 0) ? p0 : p1;
  for (int k = 1; k < n; ++k) {
    const double p2 = ((2 * k + 1) * sech_r * p1 - k * p0) / (k + 1);
    p0 = p1;
    p1 = p2;
    pn = p2;
  }
  return std::polar(std::sqrt(sech_r) * pn, -phi * (n + 0.5));
}

ContrastDetail contrast_detail(double T, const InterferometerConfig& cfg) {
  cfg.validate();
  if (T < 0.0) throw DomainError("temperature must be non-negative");

  const double omega_B = libration_frequency_B(cfg.mu, cfg.B, cfg.I_axis);
  const double u = omega_B * cfg.T_p;
  const Mat2 S_a = path_propagator_a(u);
  const Mat2 S_b = path_propagator_b(u);
  Mat2 S_b_inv;
  S_b_inv << S_b(1, 1), -S_b(0, 1), -S_b(1, 0), S_b(0, 0);
  const Mat2 S_G = S_b_inv * S_a;

  const std::complex<double> mu_c(0.5 * (S_G(0, 0) + S_G(1, 1)),
                                  0.5 * (S_G(1, 0) - S_G(0, 1)));
  const double sech_r = 1.0 / std::abs(mu_c);
  const double phi_G = -std::arg(mu_c);

  const double x = T > 0.0 ? constants::hbar * omega_B / (constants::k_B * T)
                           : std::numeric_limits<double>::infinity();
  const int n_max = cfg.n_max > 0 ? cfg.n_max : auto_n_max(x);

  ContrastDetail out;
  out.sech_r = sech_r;
  out.phi_G = phi_G;
  out.n_used = n_max + 1;

  if (std::isinf(x)) {
    out.contrast = std::abs(mode_overlap(S_G, 0));
    out.tail_bound = 0.0;
    return out;
  }

  const double w0 = 1.0 - std::exp(-x);
  std::complex<double> acc(0.0, 0.0);
  double p_prev = 0.0, p_cur = 1.0;  // P_{n-1}, P_n starting at n = 0
  for (int n = 0; n <= n_max; ++n) {
    const double w_n = w0 * std::exp(-n * x);
    acc += w_n * std::polar(std::sqrt(sech_r) * p_cur, -phi_G * (n + 0.5));
    const double p_next = ((2 * n + 1) * sech_r * p_cur - n * p_prev) / (n + 1);
    p_prev = p_cur;
    p_cur = p_next;
  }
  out.tail_bound = std::exp(-(n_max + 1) * x);
  if (out.tail_bound > 1e-4)
    throw TruncationError(
        "thermal tail beyond n_max exceeds 1e-4; increase interferometer.n_max");
  out.contrast = std::abs(acc);
  return out;
}

double contrast(double T, const InterferometerConfig& cfg) {
  return contrast_detail(T, cfg).contrast;
}

double mean_phonons(double T, double omega_B) {
  if (T <= 0.0) return 0.0;
  const double x = constants::hbar * omega_B / (constants::k_B * T);
  return 1.0 / std::expm1(x);
}

double required_temperature(double C_target, const InterferometerConfig& cfg) {
  cfg.validate();
  if (!(C_target > 0.0)) throw DomainError("contrast target must be positive");

  const double omega_B = libration_frequency_B(cfg.mu, cfg.B, cfg.I_axis);
  const double c0 = contrast(0.0, cfg);
  if (C_target >= c0)
    throw UnattainableTargetError(
        "contrast target is not attainable: C(T=0) = " + std::to_string(c0));

  // Bracket the target; size n_max for the largest temperature probed.
  InterferometerConfig work = cfg;
  const auto contrast_at = [&](double T) {
    const double x = constants::hbar * omega_B / (constants::k_B * T);
    const int needed = static_cast<int>(std::ceil(std::log(1e4) / x));
    work.n_max = std::max({cfg.n_max, needed, 1});
    return contrast(T, work);
  };

  double t_lo = quantum_temperature_scale(omega_B) * 1e-3;
  double t_hi = t_lo * 2.0;
  int guard = 0;
  while (contrast_at(t_hi) > C_target) {
    t_lo = t_hi;
    t_hi *= 2.0;
    if (++guard > 120)
      throw UnattainableTargetError("contrast target not reached at any finite temperature");
  }
  while ((t_hi - t_lo) / t_hi > 1e-3) {
    const double mid = 0.5 * (t_lo + t_hi);
    (contrast_at(mid) > C_target ? t_lo : t_hi) = mid;
  }
  return 0.5 * (t_lo + t_hi);
}

}  // namespace librot
