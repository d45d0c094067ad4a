#include "npz/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "npz/operator.hpp"

namespace npz {

namespace {

bool eig_less(const std::complex<double>& u, const std::complex<double>& v) {
  if (u.real() != v.real()) return u.real() < v.real();
  return u.imag() < v.imag();
}

std::string describe(const SimplexPoint& s) {
  std::ostringstream os;
  os << "(" << s.x << ", " << s.y << ", " << s.z << ")";
  return os.str();
}

}  // namespace

EigenPair eigenvalues_2x2(const Matrix2& m) {
  const double tr = m.trace();
  const double det = m.det();
  const double disc = tr * tr - 4.0 * det;
  EigenPair mu;
  if (disc >= 0.0) {
    const double s = std::sqrt(disc);
    // Larger-magnitude root first, partner through det to avoid cancellation.
    const double q = 0.5 * (tr + (tr >= 0.0 ? s : -s));
    const double r1 = q;
    const double r2 = (q != 0.0) ? det / q : 0.0;
    mu = {std::complex<double>(r1, 0.0), std::complex<double>(r2, 0.0)};
  } else {
    const double im = 0.5 * std::sqrt(-disc);
    mu = {std::complex<double>(0.5 * tr, -im), std::complex<double>(0.5 * tr, im)};
  }
  if (eig_less(mu[1], mu[0])) std::swap(mu[0], mu[1]);
  return mu;
}

Matrix2 jacobian_reduced(const ModelParameters& p, const ReducedPoint& q) {
  require_simplex_preserving(p);
  return Matrix2{1.0 - p.b + p.d * q.y, p.d * q.x,
                 -(p.c + p.d) * q.y, 1.0 - p.a + p.c - (p.c + p.d) * q.x - 2.0 * p.c * q.y};
}

std::string to_string(StabilityClass s) {
  switch (s) {
    case StabilityClass::attracting: return "attracting";
    case StabilityClass::repelling: return "repelling";
    case StabilityClass::saddle: return "saddle";
    case StabilityClass::nonhyperbolic: return "nonhyperbolic";
  }
  return "unknown";
}

StabilityClass classify_eigenvalues(const EigenPair& mu) {
  const double m0 = std::abs(mu[0]);
  const double m1 = std::abs(mu[1]);
  if (std::abs(m0 - 1.0) <= unit_circle_band || std::abs(m1 - 1.0) <= unit_circle_band)
    return StabilityClass::nonhyperbolic;
  if (m0 < 1.0 && m1 < 1.0) return StabilityClass::attracting;
  if (m0 > 1.0 && m1 > 1.0) return StabilityClass::repelling;
  return StabilityClass::saddle;
}

std::string to_string(FamilyPattern f) {
  switch (f) {
    case FamilyPattern::free_x_zero_y: return "free_x_zero_y";
    case FamilyPattern::free_y_zero_x: return "free_y_zero_x";
    case FamilyPattern::free_x_fixed_z: return "free_x_fixed_z";
    case FamilyPattern::whole_simplex: return "whole_simplex";
  }
  return "unknown";
}

SimplexPoint family_member(const FixedPointFamily& fam, double t, double u) {
  t = std::clamp(t, fam.lo, fam.hi);
  switch (fam.pattern) {
    case FamilyPattern::free_x_zero_y:
      return SimplexPoint{t, 0.0, 1.0 - t};
    case FamilyPattern::free_y_zero_x:
      return SimplexPoint{0.0, t, 1.0 - t};
    case FamilyPattern::free_x_fixed_z: {
      double y = 1.0 - t - fam.fixed_z;
      if (y < 0.0) y = 0.0;
      return SimplexPoint{t, y, fam.fixed_z};
    }
    case FamilyPattern::whole_simplex: {
      u = std::clamp(u, 0.0, 1.0);
      const double y = u;
      const double x = t * (1.0 - u);
      return SimplexPoint{x, y, 1.0 - x - y};
    }
  }
  return SimplexPoint{};
}

std::string to_string(RegimeClass r) {
  switch (r) {
    case RegimeClass::Identity: return "Identity";
    case RegimeClass::Linear: return "Linear";
    case RegimeClass::CZeroDNonzero: return "CZeroDNonzero";
    case RegimeClass::DZeroCNonzero: return "DZeroCNonzero";
    case RegimeClass::CEqualsMinusD: return "CEqualsMinusD";
    case RegimeClass::GenericCLessA: return "Generic-CLessA";
    case RegimeClass::GenericSaddle: return "Generic-Saddle";
    case RegimeClass::GenericInterior: return "Generic-Interior";
    case RegimeClass::Boundary: return "Boundary";
  }
  return "unknown";
}

RegimeTag regime(const ModelParameters& p) {
  require_simplex_preserving(p);
  const double a = p.a, b = p.b, c = p.c, d = p.d;
  if (c == 0.0 && d == 0.0) {
    if (a == 0.0 && b == 0.0) return {RegimeClass::Identity, ""};
    if (b == 0.0) return {RegimeClass::Linear, "a!=0, b=0"};
    if (a == 0.0) return {RegimeClass::Linear, "a=0, b!=0"};
    return {RegimeClass::Linear, "a!=0, b!=0"};
  }
  if (c == 0.0) {
    if (a == 0.0 && b == 0.0)
      return {RegimeClass::CZeroDNonzero, d > 0.0 ? "a=b=0, d>0" : "a=b=0, d<0"};
    if (a == 0.0) return {RegimeClass::CZeroDNonzero, "a=0, b!=0"};
    if (b == 0.0) return {RegimeClass::CZeroDNonzero, "a!=0, b=0"};
    return {RegimeClass::CZeroDNonzero, "a!=0, b!=0"};
  }
  if (d == 0.0) {
    if (b == 0.0) return {RegimeClass::DZeroCNonzero, c > 0.0 ? "b=0, c>0" : "b=0, c<0"};
    return {RegimeClass::DZeroCNonzero, c <= a ? "b!=0, c<=a" : "b!=0, c>a"};
  }
  if (c == -d) {
    if (c > a) return {RegimeClass::CEqualsMinusD, "c>a"};
    if (b == 0.0) return {RegimeClass::CEqualsMinusD, "b=0, c<=a"};
    return {RegimeClass::CEqualsMinusD, c > 0.0 ? "b!=0, 0<c<=a" : "b!=0, c<0<=a"};
  }
  // fully coupled: c, d and c+d all nonzero
  if (c < a) return {RegimeClass::GenericCLessA, ""};
  if (c == a) return {RegimeClass::Boundary, "c=a"};
  if (d < b) return {RegimeClass::GenericSaddle, ""};
  if (d == b) return {RegimeClass::Boundary, "c>a, d=b"};
  if (b == 0.0) return {RegimeClass::Boundary, "c>a, d>0, b=0"};
  const double disc = c * d - a * d - b * c;
  return {RegimeClass::GenericInterior,
          disc > 0.0 ? "coexistence point on simplex" : "coexistence point off simplex (cd-ad-bc<=0)"};
}

namespace {

FixedPointRecord isolated_record(const ModelParameters& p, const SimplexPoint& s,
                                 std::string name, std::string case_label) {
  FixedPointRecord r;
  r.kind = FixedPointRecord::Kind::isolated;
  r.name = std::move(name);
  r.point = s;
  r.eigenvalues = eigenvalues_2x2(jacobian_reduced(p, ReducedPoint{s.x, s.y}));
  r.stability = classify_eigenvalues(*r.eigenvalues);
  r.case_label = case_label.empty() ? "eigenvalue moduli" : std::move(case_label);
  return r;
}

FixedPointRecord family_record(FamilyPattern pattern, double lo, double hi, double fixed_z,
                               std::string name, std::string description) {
  FixedPointRecord r;
  r.kind = FixedPointRecord::Kind::family;
  r.name = std::move(name);
  FixedPointFamily fam{pattern, lo, hi, fixed_z, std::move(description)};
  r.point = family_member(fam, 0.5 * (lo + hi), 0.5);
  r.family = fam;
  r.stability = StabilityClass::nonhyperbolic;
  r.case_label = "family: unit eigenvalue along the line";
  return r;
}

FixedPointRecord phyto_free_line() {
  return family_record(FamilyPattern::free_x_zero_y, 0.0, 1.0, 0.0,
                       "phytoplankton_free_line", "(x, 0, 1-x), x in [0, 1]");
}

FixedPointRecord zoo_free_line() {
  return family_record(FamilyPattern::free_y_zero_x, 0.0, 1.0, 0.0,
                       "zooplankton_free_line", "(0, y, 1-y), y in [0, 1]");
}

}  // namespace

std::vector<FixedPointRecord> enumerate_fixed_points(const ModelParameters& p) {
  require_simplex_preserving(p);
  const double a = p.a, b = p.b, c = p.c, d = p.d;
  std::vector<FixedPointRecord> out;

  const SimplexPoint extinction{0.0, 0.0, 1.0};

  if (c == 0.0 && d == 0.0) {
    if (a == 0.0 && b == 0.0) {
      out.push_back(family_record(FamilyPattern::whole_simplex, 0.0, 1.0, 0.0,
                                  "entire_simplex", "every state (identity map)"));
    } else if (b == 0.0) {
      out.push_back(phyto_free_line());
    } else if (a == 0.0) {
      out.push_back(zoo_free_line());
    } else {
      out.push_back(isolated_record(p, extinction, "extinction", ""));
    }
    return out;
  }

  if (c == 0.0) {  // d != 0
    if (a == 0.0 && b == 0.0) {
      out.push_back(phyto_free_line());
      out.push_back(zoo_free_line());
    } else if (a == 0.0) {
      out.push_back(zoo_free_line());
    } else if (b == 0.0) {
      out.push_back(phyto_free_line());
    } else {
      // Both recyclers active: the only solution of the fixed-point system.
      out.push_back(isolated_record(p, extinction, "extinction", ""));
    }
    return out;
  }

  // Zooplankton-free equilibrium (0, 1-a/c, a/c); requires c > 0 and c >= a
  // for simplex membership.
  const bool phyto_only_exists = c > 0.0 && c >= a;
  const SimplexPoint phyto_only = phyto_only_exists
                                      ? SimplexPoint{0.0, 1.0 - a / c, a / c}
                                      : SimplexPoint{};

  if (d == 0.0) {  // c != 0
    if (b == 0.0) {
      out.push_back(phyto_free_line());
      if (phyto_only_exists) {
        const double zstar = a / c;
        std::ostringstream os;
        os << "(x, 1-x-" << zstar << ", " << zstar << "), x in [0, " << 1.0 - zstar << "]";
        out.push_back(family_record(FamilyPattern::free_x_fixed_z, 0.0, 1.0 - zstar, zstar,
                                    "fixed_nitrogen_line", os.str()));
      }
    } else {
      out.push_back(isolated_record(p, extinction, "extinction", ""));
      if (phyto_only_exists)
        out.push_back(isolated_record(p, phyto_only, "phytoplankton_only", ""));
    }
    return out;
  }

  if (c == -d) {  // c != 0, d != 0
    if (c <= a) {
      if (b == 0.0)
        out.push_back(phyto_free_line());
      else
        out.push_back(isolated_record(p, extinction, "extinction", ""));
    } else {  // c > a (hence c > 0)
      if (b == 0.0)
        out.push_back(phyto_free_line());
      else
        out.push_back(isolated_record(p, extinction, "extinction", ""));
      out.push_back(isolated_record(p, phyto_only, "phytoplankton_only", ""));
    }
    return out;
  }

  // Fully coupled regime: the three closed-form equilibria with existence and
  // classification tables.
  {
    std::string label;
    if (b == 0.0 && a == c) label = "nonhyperbolic: b=0, a=c";
    else if (b == 0.0) label = "nonhyperbolic: b=0";
    else if (a == c) label = "nonhyperbolic: a=c";
    else if (a > c) label = "attracting: a>c, b>0";
    else label = "saddle: a<c, b>0";
    out.push_back(isolated_record(p, extinction, "extinction", label));
  }
  if (phyto_only_exists) {
    const double threshold = d * (1.0 - a / c);
    std::string label;
    if (a == c) label = "nonhyperbolic: a=c";
    else if (b == threshold) label = "nonhyperbolic: b=d(1-a/c)";
    else if (b > threshold) label = "attracting: b>d(1-a/c)";
    else label = "saddle: b<d(1-a/c)";
    out.push_back(isolated_record(p, phyto_only, "phytoplankton_only", label));
  }
  const double disc = c * d - a * d - b * c;
  const bool coexistence_exists =
      d > 0.0 && d >= b && a - b <= c && c >= 0.0 && disc >= 0.0;
  if (coexistence_exists) {
    const SimplexPoint coexistence{disc / (d * (c + d)), b / d, (a - b + d) / (c + d)};
    std::string label;
    if (b == 0.0) label = "nonhyperbolic: b=0";
    else if (disc == 0.0) label = "nonhyperbolic: cd-ad-bc=0";
    else if (b == d) label = "nonhyperbolic: b=d";
    else if (c <= a) label = "nonhyperbolic: c<=a";
    else label = "attracting: c>0, c>a, d>b>0, cd-ad-bc>0";
    out.push_back(isolated_record(p, coexistence, "coexistence", label));
  }
  return out;
}

StabilityClass classify_fixed_point(const ModelParameters& p, const FixedPointRecord& fp) {
  require_simplex_preserving(p);
  auto residual_ok = [&p](const SimplexPoint& s) {
    return distance(apply(p, s), s) <= structural_tol;
  };
  if (fp.kind == FixedPointRecord::Kind::isolated) {
    if (!residual_ok(fp.point))
      throw std::invalid_argument("point " + describe(fp.point) +
                                  " is not fixed for these parameters");
    const EigenPair mu = eigenvalues_2x2(jacobian_reduced(p, ReducedPoint{fp.point.x, fp.point.y}));
    return classify_eigenvalues(mu);
  }
  if (!fp.family) throw std::invalid_argument("family record without a family descriptor");
  const FixedPointFamily& fam = *fp.family;
  for (double t : {fam.lo, 0.5 * (fam.lo + fam.hi), fam.hi}) {
    if (!residual_ok(family_member(fam, t, 0.5)))
      throw std::invalid_argument("family member at t=" + std::to_string(t) +
                                  " is not fixed for these parameters");
  }
  // A curve of fixed points always carries a unit eigenvalue along itself.
  return StabilityClass::nonhyperbolic;
}

SetMembership invariant_set_membership(const ModelParameters& p, const SimplexPoint& s) {
  require_simplex_preserving(p);
  SetMembership m;
  if (p.c != 0.0) {
    const double threshold = (p.a + p.d * s.x) / p.c;
    m.in_E = s.z >= threshold;
    m.in_F = s.z < threshold;
    m.in_H = s.z > p.a / p.c;
  }
  m.in_M1 = s.x == 0.0;
  m.in_M2 = s.y == 0.0;
  return m;
}

double two_periodic_discriminant(double d, double z) {
  return d * d * (z - 1.0) * (z - 1.0) - 4.0;
}

}  // namespace npz
