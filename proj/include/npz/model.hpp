#ifndef NPZ_MODEL_HPP
#define NPZ_MODEL_HPP

#include <array>
#include <string>
#include <vector>

// Core state and parameter types of the discrete-time plankton-nitrogen
// model, plus the admissibility checks that make the step map well defined
// on the 2-simplex.

namespace npz {

// Dimensionless rates per time step:
//   a — nitrogen recycled from phytoplankton mortality
//   b — nitrogen recycled from zooplankton mortality
//   c — nitrogen uptake by phytoplankton
//   d — phytoplankton grazing by zooplankton
struct ModelParameters {
  double a{0.0};
  double b{0.0};
  double c{0.0};
  double d{0.0};
};

// Structural identities (symmetry, row sums, residuals of fixed points) are
// asserted at this tolerance.
inline constexpr double structural_tol = 1e-12;
// make_point accepts coordinate-sum drift up to this bound before rejecting.
inline constexpr double construction_tol = 1e-9;
// Negative coordinates no worse than -clamp_tol are rounded up to zero;
// anything below is an error, not noise.
inline constexpr double clamp_tol = 1e-12;

struct ValidationReport {
  bool valid{true};
  std::vector<std::string> violations;  // one human-readable line per failed bound
};

// Admissible box: 0 <= a <= 1, 0 <= b <= 1, -(1-a) <= c <= 1+a,
// -(1-b) <= d <= 1-a.  On this closed box every heredity coefficient lies in
// [0,1], i.e. the quadratic form of the step map is stochastic.
ValidationReport validate_parameters(const ModelParameters& p);
bool is_valid(const ModelParameters& p);          // cheap, no report
void require_valid(const ModelParameters& p);     // throws std::invalid_argument

// The step map keeps the simplex invariant on a strictly larger region: the
// uptake bound relaxes to c <= (1+sqrt(a))^2, because z' restricted to the
// x=0 edge is the quadratic c y^2 - (1+c-a) y + 1, nonnegative exactly when
// (1+c-a)^2 <= 4c (or c <= 1).  Dynamics are well defined on this whole
// region even where the quadratic form stops being stochastic.
ValidationReport validate_invariance(const ModelParameters& p);
bool preserves_simplex(const ModelParameters& p);
void require_simplex_preserving(const ModelParameters& p);  // throws std::invalid_argument

// Population state: mass fractions of zooplankton (x), phytoplankton (y)
// and free nitrogen (z); x + y + z = 1.  Construct through make_point so the
// invariants hold.
struct SimplexPoint {
  double x{0.0};
  double y{0.0};
  double z{1.0};
};

// Clamps negatives within -1e-12 to zero, renormalises sums that drifted by
// more than 1e-12 (but at most 1e-9) exactly back to 1, rejects anything
// worse with std::invalid_argument.
SimplexPoint make_point(double x, double y, double z);

// Max-norm distance between two states.
double distance(const SimplexPoint& p, const SimplexPoint& q);

// State of the two plankton fractions with z = 1 - x - y implicit.
struct ReducedPoint {
  double x{0.0};
  double y{0.0};
};

// Heredity coefficients P[i][j][k]: probability that an (i,j) interaction
// yields species k.  Indices are 1-based in documentation and external
// formats; storage is 0-based.
struct CubicCoefficients {
  std::array<std::array<std::array<double, 3>, 3>, 3> p{};

  double& at(int i, int j, int k) { return p[i - 1][j - 1][k - 1]; }
  double at(int i, int j, int k) const { return p[i - 1][j - 1][k - 1]; }
};

struct StochasticReport {
  bool ok{true};
  std::vector<std::string> violations;
};

// The step map written as a quadratic form x'_k = sum_{i,j} P_{ij,k} x_i x_j.
// Rejects invalid parameters.
CubicCoefficients derive_coefficients(const ModelParameters& p);

// Nonnegativity, symmetry P_{ij,k} = P_{ji,k}, and unit row sums
// sum_k P_{ij,k} = 1, all at 1e-12.
StochasticReport check_stochastic_conditions(const CubicCoefficients& coeffs);

// Zero-pattern test for the conservation order ell in {1,2,3}: every
// coordinate k <= ell may only be produced by interactions involving k
// (P_{ij,k} = 0 whenever k is in neither i nor j), and every coordinate
// k > ell must have at least one strictly positive cross coefficient.
// Throws std::invalid_argument for ell outside 1..3.
bool check_l_volterra(const CubicCoefficients& coeffs, int ell);

}  // namespace npz

#endif  // NPZ_MODEL_HPP
