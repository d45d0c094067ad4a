#ifndef NPZ_DYNAMICS_HPP
#define NPZ_DYNAMICS_HPP

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "npz/analysis.hpp"
#include "npz/model.hpp"

// Trajectory simulation, convergence detection, closed-form limit prediction
// and its verification against simulation, and whole-simplex regularity
// sweeps.

namespace npz {

inline constexpr double default_tol = 1e-9;
inline constexpr std::size_t default_max_iter = 1000000;
// Exact predictions must agree with the simulated limit this closely.
inline constexpr double prediction_tol = 1e-6;

struct Trajectory {
  ModelParameters params;
  std::vector<SimplexPoint> points;  // n+1 entries, points[0] = initial
};

// n steps of the map, all intermediate states stored.
Trajectory iterate(const ModelParameters& p, const SimplexPoint& s0, std::size_t n);

struct ConvergeResult {
  bool converged{false};
  SimplexPoint limit;          // best estimate; last iterate when not converged
  std::size_t iterations{0};   // smallest n with ||V^{n+1} - V^n|| <= tol
};

// Runs until the step moves less than tol in max-norm AND the point has moved
// less than 10*tol over the last 16 steps (guards against slow drift and
// near-cycles), or until max_iter.  Non-convergence is a report, not an error.
ConvergeResult converge(const ModelParameters& p, const SimplexPoint& s0,
                        double tol = default_tol, std::size_t max_iter = default_max_iter);

struct LimitPrediction {
  enum class Kind { exact, family_with_unknown, identity, unpredicted };
  Kind kind{Kind::unpredicted};
  std::optional<SimplexPoint> point;        // exact / identity
  std::optional<FixedPointFamily> family;   // family_with_unknown
  std::string unknown;                      // name of the free coordinate, e.g. "xbar"
  // Dispatch rule that fired: R1..R17 for the degenerate table (cd(c+d)=0),
  // G1..G3 for the generic cases, "boundary"/"uncovered" otherwise.
  std::string rule;
};

// Closed-form limit by first-match dispatch on the regime and the initial
// point's zero pattern.  G3 interior predictions are proved only locally and
// are flagged accordingly in the rule string.
LimitPrediction predict_limit(const ModelParameters& p, const SimplexPoint& s0);

struct VerificationRecord {
  SimplexPoint initial;
  LimitPrediction prediction;
  bool converged{false};
  SimplexPoint limit;                   // simulated
  std::size_t iterations{0};
  bool pass{false};
  double known_coordinate_error{0.0};   // max error over predicted coordinates
  double fixed_residual{0.0};           // ||V(limit) - limit||_inf
  std::optional<double> unknown_value;  // simulated value of a family unknown
  std::string basin;                    // fixed point the trajectory reached
};

// Simulates to tolerance conv_tol and checks the prediction at tolerance tol.
// Unpredicted cases pass iff the trajectory converges.
VerificationRecord verify_prediction(const ModelParameters& p, const SimplexPoint& s0,
                                     double tol = prediction_tol,
                                     double conv_tol = default_tol,
                                     std::size_t max_iter = default_max_iter);

// Name of the enumerated fixed point (or family) nearest to limit, within a
// 1e-4 matching band; "unresolved" when nothing matches.
std::string basin_label(const ModelParameters& p, const SimplexPoint& limit);

struct SweepReport {
  ModelParameters params;
  RegimeTag regime_tag;
  std::size_t grid_n{0};
  double tol{prediction_tol};
  double conv_tol{default_tol};
  std::size_t max_iter{default_max_iter};
  std::vector<VerificationRecord> records;   // one per grid point
  std::size_t points{0};
  std::size_t converged{0};
  std::size_t passed{0};
  double pass_rate{0.0};
  std::size_t max_iterations{0};             // over converged records
  std::map<std::string, std::size_t> basins; // basin name -> count
};

// Barycentric grid (i/n, j/n, (n-i-j)/n), i+j <= n: (n+1)(n+2)/2 initial
// points including edges and vertices, verified point by point.
SweepReport regularity_sweep(const ModelParameters& p, std::size_t grid_n,
                             double tol = prediction_tol,
                             double conv_tol = default_tol,
                             std::size_t max_iter = default_max_iter);

}  // namespace npz

#endif  // NPZ_DYNAMICS_HPP
