#ifndef NPZ_OPERATOR_HPP
#define NPZ_OPERATOR_HPP

#include <cstddef>
#include <vector>

#include "npz/model.hpp"

// One-step evaluation of the population map, its reduced two-variable form,
// the one-dimensional restrictions used by the limit analysis, and the
// second-order nitrogen recursions.

namespace npz {

// One step of the full map
//   x' = x (1 - b + d y)
//   y' = y (1 - a - d x + c z)
//   z' = z (1 - c y) + a y + b x
// evaluated with the stored z (not 1-x-y), so the algebraic mass cancellation
// holds to rounding.  Coordinates are clamped into [0,1] only within 1e-12;
// larger excursions throw std::runtime_error (integrity failure).
SimplexPoint apply(const ModelParameters& p, const SimplexPoint& s);

// Same step through the quadratic form x'_k = sum_{ij} P_{ij,k} x_i x_j.
// Rejects tensors that fail the stochastic conditions.
SimplexPoint apply_via_tensor(const CubicCoefficients& coeffs, const SimplexPoint& s);

// Two-variable form on {x >= 0, y >= 0, x + y <= 1}:
//   x' = x (1 - b + d y)
//   y' = y (1 - a + c - (c + d) x - c y)
ReducedPoint apply_reduced(const ModelParameters& p, const ReducedPoint& q);

// Restriction to the phytoplankton-free line {y = 0} when c = 0, a = b = 0
// and the nitrogen fraction z is frozen:  f(x) = x (1 + d (1 - x - z)).
// Fixed points: 0 and 1 - z.
double restriction_f(double d, double z, double x);

// Restriction to a frozen-zooplankton line when d = 0, b = 0:
//   g(y) = y (1 - a + c (1 - x - y)).  Fixed points: 0 and 1 - x - a/c.
double restriction_g(double a, double c, double x, double y);

// Restriction of the reduced map to the zooplankton-free edge {x = 0}:
//   phi(y) = y (1 - a + c - c y).  Fixed points: 0 and 1 - a/c;
//   phi'(0) = 1 - a + c, phi'(1 - a/c) = 1 + a - c.
double restriction_phi(double a, double c, double y);

// Which closed-form second-order recursion the nitrogen coordinate obeys.
//   zb: valid when a = 0, b != 0 (seed z1 = z0 + b x0)
//   za: valid when b = 0, a != 0 (seed z1 = z0 + a y0)
enum class ZRecursionVariant { recycle_b, recycle_a };

// Evaluates the recursion numerically and returns z^(0)..z^(n) (n+1 values).
// recycle_b:
//   z'' = -(d/b) z'^2 + ((2-b)d/b) z' z - ((1-b)d/b) z^2 + (2-b+d) z' - (1-b+d) z
// recycle_a:
//   z'' =  (d/a) z'^2 - ((2-a)d/a) z' z + ((1-a)d/a) z^2 + (2-a-d) z' - (1-a-d) z
// Throws std::invalid_argument when the dividing parameter is zero.
std::vector<double> z_recursion(const ModelParameters& p, ZRecursionVariant variant,
                                double z0, double z1, std::size_t n);

}  // namespace npz

#endif  // NPZ_OPERATOR_HPP
