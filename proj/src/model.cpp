#include "npz/model.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace npz {

namespace {

std::string bound_msg(const char* what, double value, const char* bound) {
  std::ostringstream os;
  os << what << " = " << value << " violates " << bound;
  return os.str();
}

}  // namespace

ValidationReport validate_parameters(const ModelParameters& p) {
  ValidationReport r;
  if (!(p.a >= 0.0)) r.violations.push_back(bound_msg("a", p.a, "a >= 0"));
  if (!(p.a <= 1.0)) r.violations.push_back(bound_msg("a", p.a, "a <= 1"));
  if (!(p.b >= 0.0)) r.violations.push_back(bound_msg("b", p.b, "b >= 0"));
  if (!(p.b <= 1.0)) r.violations.push_back(bound_msg("b", p.b, "b <= 1"));
  if (!(p.c >= -(1.0 - p.a))) r.violations.push_back(bound_msg("c", p.c, "c >= -(1-a)"));
  if (!(p.c <= 1.0 + p.a)) r.violations.push_back(bound_msg("c", p.c, "c <= 1+a"));
  if (!(p.d >= -(1.0 - p.b))) r.violations.push_back(bound_msg("d", p.d, "d >= -(1-b)"));
  if (!(p.d <= 1.0 - p.a)) r.violations.push_back(bound_msg("d", p.d, "d <= 1-a"));
  r.valid = r.violations.empty();
  return r;
}

bool is_valid(const ModelParameters& p) {
  return p.a >= 0.0 && p.a <= 1.0 && p.b >= 0.0 && p.b <= 1.0 &&
         p.c >= -(1.0 - p.a) && p.c <= 1.0 + p.a &&
         p.d >= -(1.0 - p.b) && p.d <= 1.0 - p.a;
}

void require_valid(const ModelParameters& p) {
  if (is_valid(p)) return;
  const ValidationReport r = validate_parameters(p);
  std::string msg = "invalid model parameters:";
  for (const auto& v : r.violations) msg += " [" + v + "]";
  throw std::invalid_argument(msg);
}

// c may exceed 1+a without the map ever leaving the simplex: x' and y' only
// need the box bounds on b and d, while z' >= 0 on the x=0 edge reduces to
// the quadratic c y^2 - (1+c-a) y + 1 >= 0, i.e. c <= (1+sqrt(a))^2.
ValidationReport validate_invariance(const ModelParameters& p) {
  ValidationReport r;
  if (!(p.a >= 0.0)) r.violations.push_back(bound_msg("a", p.a, "a >= 0"));
  if (!(p.a <= 1.0)) r.violations.push_back(bound_msg("a", p.a, "a <= 1"));
  if (!(p.b >= 0.0)) r.violations.push_back(bound_msg("b", p.b, "b >= 0"));
  if (!(p.b <= 1.0)) r.violations.push_back(bound_msg("b", p.b, "b <= 1"));
  if (!(p.c >= -(1.0 - p.a))) r.violations.push_back(bound_msg("c", p.c, "c >= -(1-a)"));
  if (!(p.a >= 0.0 && p.c <= (1.0 + std::sqrt(p.a)) * (1.0 + std::sqrt(p.a))))
    r.violations.push_back(bound_msg("c", p.c, "c <= (1+sqrt(a))^2"));
  if (!(p.d >= -(1.0 - p.b))) r.violations.push_back(bound_msg("d", p.d, "d >= -(1-b)"));
  if (!(p.d <= 1.0 - p.a)) r.violations.push_back(bound_msg("d", p.d, "d <= 1-a"));
  r.valid = r.violations.empty();
  return r;
}

bool preserves_simplex(const ModelParameters& p) {
  return p.a >= 0.0 && p.a <= 1.0 && p.b >= 0.0 && p.b <= 1.0 &&
         p.c >= -(1.0 - p.a) &&
         p.c <= (1.0 + std::sqrt(p.a)) * (1.0 + std::sqrt(p.a)) &&
         p.d >= -(1.0 - p.b) && p.d <= 1.0 - p.a;
}

void require_simplex_preserving(const ModelParameters& p) {
  if (preserves_simplex(p)) return;
  const ValidationReport r = validate_invariance(p);
  std::string msg = "parameters do not keep the simplex invariant:";
  for (const auto& v : r.violations) msg += " [" + v + "]";
  throw std::invalid_argument(msg);
}

SimplexPoint make_point(double x, double y, double z) {
  for (double* v : {&x, &y, &z}) {
    if (std::isnan(*v) || *v < -clamp_tol || *v > 1.0 + construction_tol) {
      std::ostringstream os;
      os << "coordinate " << *v << " outside the simplex";
      throw std::invalid_argument(os.str());
    }
    if (*v < 0.0) *v = 0.0;
  }
  const double sum = x + y + z;
  if (std::abs(sum - 1.0) > construction_tol) {
    std::ostringstream os;
    os << "coordinates sum to " << sum << ", more than " << construction_tol << " from 1";
    throw std::invalid_argument(os.str());
  }
  if (std::abs(sum - 1.0) > structural_tol) {
    // Rescale and rebuild z from the complement; the final sum is then
    // exactly 1 in floating point.
    x /= sum;
    y /= sum;
    z = 1.0 - x - y;
    if (z < 0.0) z = 0.0;  // at most one ulp below zero after the rescale
  }
  return SimplexPoint{x, y, z};
}

double distance(const SimplexPoint& p, const SimplexPoint& q) {
  return std::max({std::abs(p.x - q.x), std::abs(p.y - q.y), std::abs(p.z - q.z)});
}

CubicCoefficients derive_coefficients(const ModelParameters& p) {
  require_valid(p);
  const double a = p.a, b = p.b, c = p.c, d = p.d;
  CubicCoefficients t{};
  auto set = [&t](int i, int j, int k, double v) {
    t.at(i, j, k) = v;
    t.at(j, i, k) = v;  // interactions are unordered pairs
  };
  // produced species 1 (zooplankton)
  set(1, 1, 1, 1.0 - b);
  set(1, 2, 1, (1.0 - b + d) / 2.0);
  set(1, 3, 1, (1.0 - b) / 2.0);
  // produced species 2 (phytoplankton)
  set(2, 2, 2, 1.0 - a);
  set(1, 2, 2, (1.0 - a - d) / 2.0);
  set(2, 3, 2, (1.0 - a + c) / 2.0);
  // produced species 3 (nitrogen) -- completes every row sum to 1
  set(1, 1, 3, b);
  set(1, 2, 3, (a + b) / 2.0);
  set(1, 3, 3, (1.0 + b) / 2.0);
  set(2, 2, 3, a);
  set(2, 3, 3, (1.0 + a - c) / 2.0);
  set(3, 3, 3, 1.0);
  return t;
}

StochasticReport check_stochastic_conditions(const CubicCoefficients& coeffs) {
  StochasticReport r;
  for (int i = 1; i <= 3; ++i) {
    for (int j = 1; j <= 3; ++j) {
      double row = 0.0;
      for (int k = 1; k <= 3; ++k) {
        const double v = coeffs.at(i, j, k);
        row += v;
        if (v < -structural_tol) {
          std::ostringstream os;
          os << "P[" << i << "][" << j << "][" << k << "] = " << v << " is negative";
          r.violations.push_back(os.str());
        }
        if (std::abs(v - coeffs.at(j, i, k)) > structural_tol) {
          std::ostringstream os;
          os << "P[" << i << "][" << j << "][" << k << "] != P[" << j << "][" << i << "][" << k << "]";
          r.violations.push_back(os.str());
        }
      }
      if (std::abs(row - 1.0) > structural_tol) {
        std::ostringstream os;
        os << "sum_k P[" << i << "][" << j << "][k] = " << row << " != 1";
        r.violations.push_back(os.str());
      }
    }
  }
  r.ok = r.violations.empty();
  return r;
}

bool check_l_volterra(const CubicCoefficients& coeffs, int ell) {
  if (ell < 1 || ell > 3) throw std::invalid_argument("conservation order must be 1, 2 or 3");
  for (int k = 1; k <= ell; ++k) {
    for (int i = 1; i <= 3; ++i) {
      for (int j = 1; j <= 3; ++j) {
        if (i != k && j != k && std::abs(coeffs.at(i, j, k)) > structural_tol) return false;
      }
    }
  }
  for (int k = ell + 1; k <= 3; ++k) {
    bool has_cross = false;
    for (int i = 1; i <= 3 && !has_cross; ++i) {
      for (int j = 1; j <= 3 && !has_cross; ++j) {
        if (i != k && j != k && coeffs.at(i, j, k) > structural_tol) has_cross = true;
      }
    }
    if (!has_cross) return false;
  }
  return true;
}

}  // namespace npz
