#pragma once

#include <cmath>
#include <numbers>
#include <vector>

namespace oracle {

// Gauss-Legendre nodes and weights on [0, 1] by Newton iteration on P_n.
inline void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
  x.assign(n, 0.0);
  w.assign(n, 0.0);
  for (int i = 0; i < n; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = z;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (z * p1 - p0) / (z * z - 1.0);
      const double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    x[i] = 0.5 * (1.0 - z);
    w[i] = 1.0 / ((1.0 - z * z) * dp * dp);
  }
}

struct BladeCase {
  int n_blades;
  double chord, radius, lift_slope, theta0, theta_tw, cd_bar;
  double rho, omega, lambda, mu;
};

struct BladeLoads {
  double thrust, h_force, y_force, torque, roll, pitch;
};

// Double integral over span and azimuth of the small-angle blade-element
// section loads:
//   dL/dr = 1/2 rho U_T^2 a c (theta0 - theta_tw r/R - U_P/U_T)
//   dD/dr = 1/2 rho U_T^2 cd c
// with U_T = Omega R (r/R + mu sin psi), U_P = Omega R lambda. Products with
// U_P/U_T are expanded before evaluation so the integrands stay polynomial.
inline BladeLoads blade_element_loads(const BladeCase& c, int span_nodes = 12, int azimuth_nodes = 32) {
  std::vector<double> xs, ws;
  gauss_legendre(span_nodes, xs, ws);
  const double tip = c.omega * c.radius;
  const double q0 = 0.5 * c.rho * c.chord * tip * tip;
  BladeLoads out{0, 0, 0, 0, 0, 0};
  for (int k = 0; k < azimuth_nodes; ++k) {
    const double psi = 2.0 * std::numbers::pi * k / azimuth_nodes;
    const double s = std::sin(psi), co = std::cos(psi);
    const double wpsi = 1.0 / azimuth_nodes;  // (N / 2pi) * dpsi folded with N below
    for (int i = 0; i < span_nodes; ++i) {
      const double x = xs[i];
      const double ut = x + c.mu * s;                           // U_T / (Omega R)
      const double pitch = c.theta0 - c.theta_tw * x;
      const double lift = q0 * c.lift_slope * (ut * ut * pitch - c.lambda * ut);
      const double drag = q0 * c.cd_bar * ut * ut;
      const double lift_inflow = q0 * c.lift_slope * (ut * pitch * c.lambda - c.lambda * c.lambda);
      const double dr = c.radius * ws[i];
      const double r = x * c.radius;
      const double wgt = c.n_blades * wpsi * dr;
      out.thrust += wgt * lift;
      out.h_force += wgt * (drag + lift_inflow) * s;
      out.y_force -= wgt * (drag + lift_inflow) * co;
      out.torque += wgt * (drag + lift_inflow) * r;
      out.roll -= wgt * lift * r * s;
      out.pitch -= wgt * lift * r * co;
    }
  }
  return out;
}

}  // namespace oracle
