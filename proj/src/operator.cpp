#include "npz/operator.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace npz {

namespace {

// Clamp coordinates into [0,1], tolerating only rounding-scale excursions.
double clamp_coordinate(double v, const char* name) {
  if (v < -clamp_tol || v > 1.0 + clamp_tol || std::isnan(v)) {
    std::ostringstream os;
    os << "step map produced " << name << " = " << v << " outside the simplex";
    throw std::runtime_error(os.str());
  }
  if (v < 0.0) return 0.0;
  if (v > 1.0) return 1.0;
  return v;
}

}  // namespace

SimplexPoint apply(const ModelParameters& p, const SimplexPoint& s) {
  require_simplex_preserving(p);
  const double nx = s.x * (1.0 - p.b + p.d * s.y);
  const double ny = s.y * (1.0 - p.a - p.d * s.x + p.c * s.z);
  const double nz = s.z * (1.0 - p.c * s.y) + p.a * s.y + p.b * s.x;
  return SimplexPoint{clamp_coordinate(nx, "x"), clamp_coordinate(ny, "y"),
                      clamp_coordinate(nz, "z")};
}

SimplexPoint apply_via_tensor(const CubicCoefficients& coeffs, const SimplexPoint& s) {
  const StochasticReport rep = check_stochastic_conditions(coeffs);
  if (!rep.ok) {
    std::string msg = "coefficient tensor is not stochastic:";
    for (const auto& v : rep.violations) msg += " [" + v + "]";
    throw std::invalid_argument(msg);
  }
  const double in[3] = {s.x, s.y, s.z};
  double out[3] = {0.0, 0.0, 0.0};
  for (int k = 0; k < 3; ++k) {
    double acc = 0.0;
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) acc += coeffs.p[i][j][k] * in[i] * in[j];
    }
    out[k] = acc;
  }
  return SimplexPoint{clamp_coordinate(out[0], "x"), clamp_coordinate(out[1], "y"),
                      clamp_coordinate(out[2], "z")};
}

ReducedPoint apply_reduced(const ModelParameters& p, const ReducedPoint& q) {
  require_simplex_preserving(p);
  if (q.x < -clamp_tol || q.y < -clamp_tol || q.x + q.y > 1.0 + clamp_tol) {
    std::ostringstream os;
    os << "reduced state (" << q.x << ", " << q.y << ") outside {x,y >= 0, x+y <= 1}";
    throw std::invalid_argument(os.str());
  }
  const double nx = q.x * (1.0 - p.b + p.d * q.y);
  const double ny = q.y * (1.0 - p.a + p.c - (p.c + p.d) * q.x - p.c * q.y);
  return ReducedPoint{nx < 0.0 ? 0.0 : nx, ny < 0.0 ? 0.0 : ny};
}

double restriction_f(double d, double z, double x) {
  if (d < -1.0 || d > 1.0) throw std::invalid_argument("grazing rate outside [-1,1]");
  if (z < 0.0 || z > 1.0) throw std::invalid_argument("nitrogen fraction outside [0,1]");
  if (x < 0.0 || x > 1.0) throw std::invalid_argument("zooplankton fraction outside [0,1]");
  return x * (1.0 + d * (1.0 - x - z));
}

double restriction_g(double a, double c, double x, double y) {
  if (a < 0.0 || a > 1.0) throw std::invalid_argument("recycling rate a outside [0,1]");
  if (c < -(1.0 - a) || c > 1.0 + a) throw std::invalid_argument("uptake rate c outside [-(1-a), 1+a]");
  if (x < 0.0 || x > 1.0) throw std::invalid_argument("frozen zooplankton fraction outside [0,1]");
  if (y < 0.0 || y > 1.0 - x + clamp_tol) throw std::invalid_argument("phytoplankton fraction outside [0, 1-x]");
  return y * (1.0 - a + c * (1.0 - x - y));
}

double restriction_phi(double a, double c, double y) {
  if (a < 0.0 || a > 1.0) throw std::invalid_argument("recycling rate a outside [0,1]");
  if (c < -(1.0 - a) || c > 1.0 + a) throw std::invalid_argument("uptake rate c outside [-(1-a), 1+a]");
  if (y < 0.0 || y > 1.0) throw std::invalid_argument("phytoplankton fraction outside [0,1]");
  return y * (1.0 - a + c - c * y);
}

std::vector<double> z_recursion(const ModelParameters& p, ZRecursionVariant variant,
                                double z0, double z1, std::size_t n) {
  require_simplex_preserving(p);
  const double d = p.d;
  std::vector<double> z;
  z.reserve(n + 1);
  z.push_back(z0);
  if (n == 0) return z;
  z.push_back(z1);
  if (variant == ZRecursionVariant::recycle_b) {
    if (p.b == 0.0) throw std::invalid_argument("recycle_b recursion divides by b; b must be nonzero");
    const double b = p.b;
    for (std::size_t k = 2; k <= n; ++k) {
      const double zp = z[k - 1], zq = z[k - 2];
      z.push_back(-(d / b) * zp * zp + ((2.0 - b) * d / b) * zp * zq -
                  ((1.0 - b) * d / b) * zq * zq + (2.0 - b + d) * zp - (1.0 - b + d) * zq);
    }
  } else {
    if (p.a == 0.0) throw std::invalid_argument("recycle_a recursion divides by a; a must be nonzero");
    const double a = p.a;
    for (std::size_t k = 2; k <= n; ++k) {
      const double zp = z[k - 1], zq = z[k - 2];
      z.push_back((d / a) * zp * zp - ((2.0 - a) * d / a) * zp * zq +
                  ((1.0 - a) * d / a) * zq * zq + (2.0 - a - d) * zp - (1.0 - a - d) * zq);
    }
  }
  return z;
}

}  // namespace npz
