#include "librot/shapes.hpp"

#include <cmath>

#include "librot/errors.hpp"
#include "librot/quadrature.hpp"

namespace librot {

namespace {

constexpr double pi = constants::pi;

void validate(const Cylindroid& c, double density) {
  if (!(c.a > 0.0) || !(c.b > 0.0) || !(c.L > 0.0))
    throw InvalidShapeError("cylindroid dimensions must be strictly positive");
  if (!(density > 0.0)) throw InvalidShapeError("density must be positive");
}

void validate(const Box& b, double density) {
  if (!(b.a > 0.0) || !(b.b > 0.0) || !(b.c > 0.0))
    throw InvalidShapeError("box half side-lengths must be strictly positive");
  if (!(density > 0.0)) throw InvalidShapeError("density must be positive");
}

}  // namespace

double shape_integral(ShapeIntegral kind, double r) {
  if (!(r > 0.0)) throw DomainError("shape integral requires r > 0");
  switch (kind) {
    case ShapeIntegral::A0: {
      const double v = integrate_adaptive(
          [r](double phi) {
            const double s = std::sin(phi), c = std::cos(phi);
            return std::sqrt(r * r * s * s + c * c);
          },
          0.0, 2 * pi);
      return v / (pi * (1.0 + r));
    }
    case ShapeIntegral::A1: {
      const double v = integrate_adaptive(
          [r](double phi) {
            const double s = std::sin(phi), c = std::cos(phi);
            return std::sqrt(s * s + r * r * c * c) * c * c;
          },
          0.0, 2 * pi);
      return 2.0 * v / (pi * (1.0 + r));
    }
    case ShapeIntegral::A2: {
      const double v = integrate_adaptive(
          [r](double phi) {
            const double s = std::sin(phi), c = std::cos(phi);
            return s * s / std::sqrt(s * s + r * r * c * c);
          },
          0.0, 2 * pi);
      return v / pi;
    }
    case ShapeIntegral::A3: {
      const double v = integrate_adaptive(
          [r](double phi) {
            const double s = std::sin(phi), c = std::cos(phi);
            const double s2 = 2 * s * c;
            return s2 * s2 / std::sqrt(s * s + r * r * c * c);
          },
          0.0, 2 * pi);
      return v / pi;
    }
  }
  throw DomainError("unknown shape integral");
}

MassProperties mass_properties(const BodyShape& shape) {
  MassProperties mp;
  if (const auto* c = std::get_if<Cylindroid>(&shape.geometry)) {
    validate(*c, shape.density);
    mp.M = shape.density * pi * c->a * c->b * c->L;
    mp.I[0] = 0.25 * mp.M * (c->b * c->b + c->L * c->L / 3.0);
    mp.I[1] = 0.25 * mp.M * (c->a * c->a + c->L * c->L / 3.0);
    mp.I[2] = 0.25 * mp.M * (c->a * c->a + c->b * c->b);
  } else {
    const auto& b = std::get<Box>(shape.geometry);
    validate(b, shape.density);
    mp.M = shape.density * 8.0 * b.a * b.b * b.c;
    mp.I[0] = mp.M / 3.0 * (b.b * b.b + b.c * b.c);
    mp.I[1] = mp.M / 3.0 * (b.a * b.a + b.c * b.c);
    mp.I[2] = mp.M / 3.0 * (b.a * b.a + b.b * b.b);
  }
  return mp;
}

double surface_area(const BodyShape& shape) {
  if (const auto* c = std::get_if<Cylindroid>(&shape.geometry)) {
    validate(*c, shape.density);
    const double A0 = shape_integral(ShapeIntegral::A0, c->a / c->b);
    return 2 * pi * c->a * c->b + pi * (c->a + c->b) * A0 * c->L;
  }
  const auto& b = std::get<Box>(shape.geometry);
  validate(b, shape.density);
  return 8.0 * (b.a * b.b + b.b * b.c + b.a * b.c);
}

Vec3 surface_second_moments(const BodyShape& shape) {
  Vec3 m;
  if (const auto* cyl = std::get_if<Cylindroid>(&shape.geometry)) {
    validate(*cyl, shape.density);
    const double a = cyl->a, b = cyl->b, L = cyl->L;
    const double A0 = shape_integral(ShapeIntegral::A0, a / b);
    const double A1_ba = shape_integral(ShapeIntegral::A1, b / a);
    const double A1_ab = shape_integral(ShapeIntegral::A1, a / b);
    m[0] = pi / 2 * a * a * (L * (a + b) * A1_ba + a * b);
    m[1] = pi / 2 * b * b * (L * (a + b) * A1_ab + a * b);
    m[2] = pi / 2 * L * L * ((a + b) * A0 * L / 6.0 + a * b);
  } else {
    const auto& bx = std::get<Box>(shape.geometry);
    validate(bx, shape.density);
    const double a = bx.a, b = bx.b, c = bx.c;
    m[0] = 8.0 / 3.0 * a * a * (a * b + a * c + 3 * b * c);
    m[1] = 8.0 / 3.0 * b * b * (a * b + 3 * a * c + b * c);
    m[2] = 8.0 / 3.0 * c * c * (3 * a * b + a * c + b * c);
  }
  return m;
}

ChargeMoments charge_moments(const BodyShape& shape) {
  ChargeMoments cm;
  cm.q = shape.charge;
  cm.p = shape.charge * shape.charge_offset;
  cm.rho_S = shape.charge / surface_area(shape);
  cm.Q = (cm.rho_S * surface_second_moments(shape)).asDiagonal();
  return cm;
}

}  // namespace librot
