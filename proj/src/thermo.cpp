#include "librot/thermo.hpp"

#include <cmath>
#include <vector>

#include "librot/errors.hpp"

namespace librot {

namespace {

constexpr double pi = constants::pi;

struct GLRule {
  std::vector<double> x;  // nodes on [-1, 1]
  std::vector<double> w;
};

GLRule gauss_legendre(int n) {
  GLRule rule;
  rule.x.resize(n);
  rule.w.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(pi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      pp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    rule.x[i] = -x;
    rule.x[n - 1 - i] = x;
    rule.w[i] = rule.w[n - 1 - i] = 2.0 / ((1.0 - x * x) * pp * pp);
  }
  return rule;
}

Mat3 surface_term(const Vec3& r, const Vec3& n_hat, double eta_t, double alpha_c) {
  const Vec3 c = r.cross(n_hat);
  return eta_t * (c * c.transpose()) +
         alpha_c * (r.squaredNorm() * Mat3::Identity() - r * r.transpose());
}

Mat3 moment_tensor_cylindroid(const Cylindroid& c, const GasModel& gas,
                              const SurfaceQuadrature& quad) {
  const double eta_t = gas.eta_tilde();
  const double ac = gas.alpha_c;
  const GLRule gl = gauss_legendre(quad.n_z);
  const double dphi = 2 * pi / quad.n_phi;
  Mat3 acc = Mat3::Zero();

  for (int i = 0; i < quad.n_phi; ++i) {
    const double phi = dphi * i;
    const double cp = std::cos(phi), sp = std::sin(phi);
    const double N = std::hypot(c.a * sp, c.b * cp);
    const Vec3 n_hat(c.b * cp / N, c.a * sp / N, 0.0);
    // lateral wall: dA = N dphi dz
    for (int j = 0; j < quad.n_z; ++j) {
      const double z = 0.5 * c.L * gl.x[j];
      const Vec3 r(c.a * cp, c.b * sp, z);
      acc += (dphi * 0.5 * c.L * gl.w[j] * N) * surface_term(r, n_hat, eta_t, ac);
    }
    // end caps: r = (a u cos, b u sin, ±L/2), dA = a b u du dphi
    for (int j = 0; j < quad.n_z; ++j) {
      const double u = 0.5 * (gl.x[j] + 1.0);
      const double wu = 0.5 * gl.w[j];
      const double jac = dphi * wu * c.a * c.b * u;
      for (const double s : {-1.0, 1.0}) {
        const Vec3 r(c.a * u * cp, c.b * u * sp, s * 0.5 * c.L);
        acc += jac * surface_term(r, Vec3(0, 0, s), eta_t, ac);
      }
    }
  }
  return acc;
}

Mat3 moment_tensor_box(const Box& b, const GasModel& gas, const SurfaceQuadrature& quad) {
  const double eta_t = gas.eta_tilde();
  const double ac = gas.alpha_c;
  const GLRule gl = gauss_legendre(quad.n_z);
  const Vec3 h(b.a, b.b, b.c);
  Mat3 acc = Mat3::Zero();
  for (int axis = 0; axis < 3; ++axis) {
    const int u_axis = (axis + 1) % 3;
    const int v_axis = (axis + 2) % 3;
    for (const double s : {-1.0, 1.0}) {
      const Vec3 n_hat = s * Vec3::Unit(axis);
      for (int i = 0; i < quad.n_z; ++i)
        for (int j = 0; j < quad.n_z; ++j) {
          Vec3 r;
          r[axis] = s * h[axis];
          r[u_axis] = h[u_axis] * gl.x[i];
          r[v_axis] = h[v_axis] * gl.x[j];
          const double w = h[u_axis] * gl.w[i] * h[v_axis] * gl.w[j];
          acc += w * surface_term(r, n_hat, eta_t, ac);
        }
    }
  }
  return acc;
}

}  // namespace

void GasModel::validate() const {
  if (!(P >= 0.0)) throw DomainError("gas pressure must be non-negative");
  if (!(T_gas > 0.0) || !(T_s > 0.0))
    throw DomainError("gas and surface temperatures must be positive");
  if (!(m_g > 0.0)) throw DomainError("gas molecule mass must be positive");
  if (!(alpha_c >= 0.0 && alpha_c <= 1.0))
    throw DomainError("accommodation coefficient must lie in [0, 1]");
}

Mat3 damping_moment_tensor(const BodyShape& shape, const GasModel& gas,
                           const SurfaceQuadrature& quad) {
  gas.validate();
  Mat3 tensor;
  if (const auto* c = std::get_if<Cylindroid>(&shape.geometry))
    tensor = moment_tensor_cylindroid(*c, gas, quad);
  else
    tensor = moment_tensor_box(std::get<Box>(shape.geometry), gas, quad);
  return gas.number_density() * gas.momentum_flux() * tensor;
}

DampingRates damping_tensor_surface(const BodyShape& shape, const MassProperties& props,
                                    const GasModel& gas, const SurfaceQuadrature& quad) {
  const Mat3 tensor = damping_moment_tensor(shape, gas, quad);
  const double scale = tensor.diagonal().cwiseAbs().maxCoeff();
  if (scale > 0.0) {
    const Mat3 off = tensor - Mat3(tensor.diagonal().asDiagonal());
    if (off.cwiseAbs().maxCoeff() > 1e-6 * scale)
      throw DomainError("damping moment tensor has unexpected off-diagonal entries");
  }
  DampingRates rates;
  rates.Gamma = tensor.diagonal().array() / props.I.array();
  return rates;
}

DampingRates damping_rates_closed_form(const Cylindroid& c, const MassProperties& props,
                                       const GasModel& gas) {
  gas.validate();
  const double a = c.a, b = c.b, L = c.L;
  const double eta = pi / 2 * gas.eta_tilde();
  const double ngpg = gas.number_density() * gas.momentum_flux();
  BodyShape shape;
  shape.geometry = c;
  const Vec3 Qbar = surface_second_moments(shape);
  const double A2_ba = shape_integral(ShapeIntegral::A2, b / a);
  const double A2_ab = shape_integral(ShapeIntegral::A2, a / b);
  const double A3_ba = shape_integral(ShapeIntegral::A3, b / a);
  const double aa_bb = (a * a - b * b);

  DampingRates rates;
  rates.Gamma[0] = ngpg / props.I[0] *
                   (eta * (a * L * L * L * A2_ba / 6.0 + a * b * b * b) +
                    gas.alpha_c * (Qbar[1] + Qbar[2]));
  rates.Gamma[1] = ngpg / props.I[1] *
                   (eta * (b * L * L * L * A2_ab / 6.0 + a * a * a * b) +
                    gas.alpha_c * (Qbar[0] + Qbar[2]));
  rates.Gamma[2] = ngpg / props.I[2] *
                   (eta * (L * aa_bb * aa_bb * A3_ba / (2.0 * a)) +
                    gas.alpha_c * (Qbar[0] + Qbar[1]));
  return rates;
}

double heating_rate(double Gamma_mode, double T_gas) {
  return 0.5 * constants::k_B * T_gas * Gamma_mode;
}

double steady_state_temperature(double Gamma_gas, double Gamma_damp, double T_gas) {
  if (Gamma_gas < 0.0 || Gamma_damp < 0.0)
    throw DomainError("damping rates must be non-negative");
  const double total = Gamma_gas + Gamma_damp;
  if (!(total > 0.0))
    throw NoSteadyStateError("no steady state: all rates vanish");
  return Gamma_gas / total * T_gas;
}

}  // namespace librot
