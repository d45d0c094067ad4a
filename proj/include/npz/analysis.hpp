#ifndef NPZ_ANALYSIS_HPP
#define NPZ_ANALYSIS_HPP

#include <array>
#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "npz/model.hpp"

// Equilibrium structure of the model: exact fixed points, local stability via
// the reduced 2x2 Jacobian, parameter-regime classification, and the
// invariant sets used in the convergence arguments.

namespace npz {

struct Matrix2 {
  double m00{0.0}, m01{0.0};
  double m10{0.0}, m11{0.0};

  double trace() const { return m00 + m11; }
  double det() const { return m00 * m11 - m01 * m10; }
};

// Eigenvalues ordered ascending by real part, then imaginary part.
using EigenPair = std::array<std::complex<double>, 2>;

// Closed-form eigenvalues of a real 2x2 matrix (quadratic formula, stable
// larger-root-first evaluation).
EigenPair eigenvalues_2x2(const Matrix2& m);

// Jacobian of the reduced map at q:
//   [ 1 - b + d y              d x                        ]
//   [ -(c + d) y               1 - a + c - (c+d) x - 2 c y ]
Matrix2 jacobian_reduced(const ModelParameters& p, const ReducedPoint& q);

enum class StabilityClass { attracting, repelling, saddle, nonhyperbolic };
std::string to_string(StabilityClass s);

// Moduli test with a 1e-10 band around the unit circle: any eigenvalue in the
// band makes the point nonhyperbolic.
inline constexpr double unit_circle_band = 1e-10;
StabilityClass classify_eigenvalues(const EigenPair& mu);

// One-parameter curves of fixed points. Members:
//   free_x_zero_y : (t, 0, 1-t)
//   free_y_zero_x : (0, t, 1-t)
//   free_x_fixed_z: (t, 1-t-z*, z*) with the nitrogen fraction pinned at z*
//   whole_simplex : every state is fixed (identity map)
enum class FamilyPattern { free_x_zero_y, free_y_zero_x, free_x_fixed_z, whole_simplex };
std::string to_string(FamilyPattern f);

struct FixedPointFamily {
  FamilyPattern pattern{FamilyPattern::free_x_zero_y};
  double lo{0.0}, hi{1.0};  // range of the free coordinate
  double fixed_z{0.0};      // only meaningful for free_x_fixed_z
  std::string description;
};

// Point of a family at free-coordinate value t (clamped into [lo,hi]).
// whole_simplex uses the second parameter too: (t(1-u), u, rest).
SimplexPoint family_member(const FixedPointFamily& fam, double t, double u = 0.0);

struct FixedPointRecord {
  enum class Kind { isolated, family };
  Kind kind{Kind::isolated};
  // Domain names: "extinction" (0,0,1), "phytoplankton_only" (0,1-a/c,a/c),
  // "coexistence" (interior), "phytoplankton_free_line", "zooplankton_free_line",
  // "fixed_nitrogen_line", "entire_simplex".
  std::string name;
  SimplexPoint point;                        // representative for families
  std::optional<FixedPointFamily> family;
  std::optional<EigenPair> eigenvalues;      // isolated points only
  StabilityClass stability{StabilityClass::nonhyperbolic};
  std::string case_label;                    // which classification case fired
};

// Every fixed point of the map for these parameters: the three closed-form
// equilibria in the generic regime (each guarded by its existence
// conditions), or the case-table families/points in the degenerate regimes.
std::vector<FixedPointRecord> enumerate_fixed_points(const ModelParameters& p);

// Recomputes the stability class of a record produced for the same
// parameters.  Rejects mismatched input (residual above 1e-12).
StabilityClass classify_fixed_point(const ModelParameters& p, const FixedPointRecord& fp);

enum class RegimeClass {
  Identity,        // a=b=c=d=0
  Linear,          // c=d=0, not identity
  CZeroDNonzero,   // c=0, d!=0
  DZeroCNonzero,   // d=0, c!=0
  CEqualsMinusD,   // c=-d!=0
  GenericCLessA,   // cd(c+d)!=0, c<a
  GenericSaddle,   // cd(c+d)!=0, c>a, d<b
  GenericInterior, // cd(c+d)!=0, c>a, d>b>0
  Boundary,        // cd(c+d)!=0 and none of the above (c=a, d=b, or b=0<d)
};
std::string to_string(RegimeClass r);

struct RegimeTag {
  RegimeClass cls{RegimeClass::Identity};
  std::string sub;  // finer split used by the limit dispatch, e.g. "a=0, b!=0"
};

RegimeTag regime(const ModelParameters& p);

// Membership in the invariant sets of the convergence proofs.  E, F and H
// divide by c and are absent when c = 0.
//   E : z >= (a + d x) / c     (invariant when c > a, d < b, c + d >= 0)
//   F : z <  (a + d x) / c     (invariant when c > a, d < b, c + d < 0)
//   H : z >  a / c             (invariant when d = 0, c > a)
//   M1: x = 0,  M2: y = 0      (always invariant)
struct SetMembership {
  std::optional<bool> in_E, in_F, in_H;
  bool in_M1{false}, in_M2{false};
};

SetMembership invariant_set_membership(const ModelParameters& p, const SimplexPoint& s);

// Discriminant of the 2-cycle condition for the one-dimensional restriction
// f: d^2 (z-1)^2 - 4.  Strictly negative on [-1,1] x [0,1], so f has no
// genuine period-two orbits.
double two_periodic_discriminant(double d, double z);

}  // namespace npz

#endif  // NPZ_ANALYSIS_HPP
