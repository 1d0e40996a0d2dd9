#pragma once

#include <cmath>

#include "librot/constants.hpp"
#include "librot/shapes.hpp"

namespace librot {

/// Rarefied-gas environment for collisional rotational damping.
struct GasModel {
  double P = 1e-9 * units::torr;  ///< pressure (Pa)
  double T_gas = 300.0;           ///< gas temperature (K)
  double m_g = 4.8e-26;           ///< mean molecule mass (kg), air default
  double alpha_c = 1.0;           ///< accommodation: 1 fully diffuse, 0 fully specular
  double T_s = 300.0;             ///< particle surface temperature (K)

  double number_density() const { return P / (constants::k_B * T_gas); }
  double momentum_flux() const {
    return std::sqrt(m_g * constants::k_B * T_gas / (2.0 * constants::pi));
  }
  double gamma_s() const { return std::sqrt(T_s / T_gas); }
  /// Specular/diffuse mixing weight of the (r x n)(r x n) surface term.
  double eta_tilde() const {
    return 4.0 - 3.0 * alpha_c + constants::pi / 2.0 * alpha_c * gamma_s();
  }

  void validate() const;  ///< throws DomainError on out-of-range parameters
};

/// Rotational damping rates about the three body axes.
struct DampingRates {
  Vec3 Gamma = Vec3::Zero();  // 1/s
};

/// Resolution of the normative surface quadrature: trapezoid points around the
/// perimeter, Gauss-Legendre nodes along the height / cap radius.
struct SurfaceQuadrature {
  int n_phi = 256;
  int n_z = 48;
};

/// Second-moment damping tensor n_g p_g ∫ dA [eta (r x n)(r x n)^T
/// + alpha_c (r² 1 - r r^T)] before division by the inertia (kg m²/s).
Mat3 damping_moment_tensor(const BodyShape& shape, const GasModel& gas,
                           const SurfaceQuadrature& quad = {});

/// Damping rates from the surface quadrature (normative implementation).
/// Asserts the moment tensor is diagonal for these reflection-symmetric bodies.
DampingRates damping_tensor_surface(const BodyShape& shape, const MassProperties& props,
                                    const GasModel& gas,
                                    const SurfaceQuadrature& quad = {});

/// Damping rates from the cylindroid closed forms (cross-check implementation).
DampingRates damping_rates_closed_form(const Cylindroid& c, const MassProperties& props,
                                       const GasModel& gas);

/// Collisional heating power of one mode, dE/dt = (1/2) k_B T_gas Gamma (J/s).
double heating_rate(double Gamma_mode, double T_gas);

/// Steady-state mode temperature T = Gamma_gas / (Gamma_gas + Gamma_damp) T_gas.
/// Throws NoSteadyStateError when both rates vanish.
double steady_state_temperature(double Gamma_gas, double Gamma_damp, double T_gas);

}  // namespace librot
