#ifndef LIBROT_SHAPES_HPP
#define LIBROT_SHAPES_HPP

#include <variant>

#include "librot/constants.hpp"

namespace librot {

/// Right cylinder with elliptic base; semi-axes a, b span body axes n1, n2,
/// the height L runs along the symmetry axis n3.
struct Cylindroid {
  double a = 0.0;  // basis semi-axis (m)
  double b = 0.0;  // basis semi-axis (m)
  double L = 0.0;  // height (m)
};

/// Rectangular box given by half side-lengths along the body axes.
struct Box {
  double a = 0.0;  // half side-length along n1 (m)
  double b = 0.0;  // half side-length along n2 (m)
  double c = 0.0;  // half side-length along n3 (m)
};

/// Particle geometry, material density, and surface charge description.
/// The charge is uniformly distributed on the surface; a nonzero
/// charge-center offset d (body frame) produces a dipole moment p = q d.
struct BodyShape {
  std::variant<Cylindroid, Box> geometry = Cylindroid{};
  double density = 3510.0;          // kg/m^3
  double charge = 0.0;              // C
  Vec3 charge_offset = Vec3::Zero();  // m, body frame
};

/// Mass and principal moments of inertia.
struct MassProperties {
  double M = 0.0;        // kg
  Vec3 I = Vec3::Zero();  // principal moments (kg m^2)
};

/// Charge multipole moments in the body frame.
/// Q is the second moment of the charge distribution, Q_jl = ∫ rho r_j r_l dA.
struct ChargeMoments {
  double q = 0.0;          // total charge (C)
  Vec3 p = Vec3::Zero();   // dipole moment (C m)
  Mat3 Q = Mat3::Zero();   // quadrupole tensor (C m^2), symmetric
  double rho_S = 0.0;      // surface charge density (C/m^2)
};

/// Named shape integrals of the elliptic cross-section; all equal 1 at r = 1.
enum class ShapeIntegral { A0, A1, A2, A3 };

/// Evaluate the named integral by adaptive quadrature. Requires r > 0.
double shape_integral(ShapeIntegral kind, double r);

/// Mass and principal inertia from the closed forms. Throws InvalidShapeError
/// on non-positive dimensions or density.
MassProperties mass_properties(const BodyShape& shape);

/// Surface charge density and multipole moments for the uniform surface
/// charge model. Q is diagonal for these reflection-symmetric shapes.
ChargeMoments charge_moments(const BodyShape& shape);

/// Total surface area (both end caps plus lateral wall for the cylindroid).
double surface_area(const BodyShape& shape);

/// Surface second moments per body axis, ∫ r_j² dA (m⁴).
Vec3 surface_second_moments(const BodyShape& shape);

}  // namespace librot

#endif  // LIBROT_SHAPES_HPP
