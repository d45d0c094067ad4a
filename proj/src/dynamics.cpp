#include "npz/dynamics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

#include "npz/operator.hpp"

namespace npz {

Trajectory iterate(const ModelParameters& p, const SimplexPoint& s0, std::size_t n) {
  require_simplex_preserving(p);
  Trajectory t;
  t.params = p;
  t.points.reserve(n + 1);
  t.points.push_back(s0);
  SimplexPoint cur = s0;
  for (std::size_t k = 0; k < n; ++k) {
    cur = apply(p, cur);
    t.points.push_back(cur);
  }
  return t;
}

ConvergeResult converge(const ModelParameters& p, const SimplexPoint& s0,
                        double tol, std::size_t max_iter) {
  require_simplex_preserving(p);
  if (!(tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
  // Last 16 iterates (including the current one) in a ring; the slot about to
  // be overwritten is the oldest, giving the 16-step lookback target.
  std::array<SimplexPoint, 16> ring;
  std::size_t filled = 0, pos = 0;
  auto push = [&](const SimplexPoint& s) {
    ring[pos] = s;
    pos = (pos + 1) % ring.size();
    if (filled < ring.size()) ++filled;
  };
  auto oldest = [&]() -> const SimplexPoint& {
    return filled < ring.size() ? ring[0] : ring[pos];
  };
  push(s0);
  SimplexPoint cur = s0;
  for (std::size_t n = 0; n < max_iter; ++n) {
    const SimplexPoint nxt = apply(p, cur);
    if (distance(nxt, cur) <= tol && distance(nxt, oldest()) <= 10.0 * tol)
      return ConvergeResult{true, nxt, n};
    push(nxt);
    cur = nxt;
  }
  return ConvergeResult{false, cur, max_iter};
}

namespace {

LimitPrediction exact_prediction(const SimplexPoint& s, std::string rule) {
  LimitPrediction r;
  r.kind = LimitPrediction::Kind::exact;
  r.point = s;
  r.rule = std::move(rule);
  return r;
}

LimitPrediction family_prediction(FamilyPattern pattern, std::string unknown,
                                  std::string description, std::string rule) {
  LimitPrediction r;
  r.kind = LimitPrediction::Kind::family_with_unknown;
  r.family = FixedPointFamily{pattern, 0.0, 1.0, 0.0, std::move(description)};
  r.unknown = std::move(unknown);
  r.rule = std::move(rule);
  return r;
}

LimitPrediction unpredicted(std::string rule) {
  LimitPrediction r;
  r.kind = LimitPrediction::Kind::unpredicted;
  r.rule = std::move(rule);
  return r;
}

}  // namespace

LimitPrediction predict_limit(const ModelParameters& p, const SimplexPoint& s0) {
  require_simplex_preserving(p);
  const double a = p.a, b = p.b, c = p.c, d = p.d;
  const double x = s0.x, y = s0.y, z = s0.z;
  const bool az = a == 0.0, bz = b == 0.0, cz = c == 0.0, dz = d == 0.0;

  // Degenerate dispatch table (cd(c+d)=0), checked in order, first match wins.
  if (cz && dz) {
    if (az && bz) {
      LimitPrediction r;
      r.kind = LimitPrediction::Kind::identity;
      r.point = s0;
      r.rule = "R1: a=b=c=d=0 (identity map)";
      return r;
    }
    if (bz) return exact_prediction({x, 0.0, 1.0 - x}, "R2: a!=0, b=c=d=0");
    if (az) return exact_prediction({0.0, y, 1.0 - y}, "R3: b!=0, a=c=d=0");
    return exact_prediction({0.0, 0.0, 1.0}, "R4: ab!=0, c=d=0");
  }

  if (cz) {  // d != 0
    if (az && bz) {
      if (d > 0.0) {
        if (x == 0.0) return exact_prediction(s0, "R5: a=b=c=0, d>0 (initial on fixed line x=0)");
        return exact_prediction({1.0 - z, 0.0, z}, "R5: a=b=c=0, d>0");
      }
      if (y == 0.0) return exact_prediction(s0, "R6: a=b=c=0, d<0 (initial on fixed line y=0)");
      return exact_prediction({0.0, 1.0 - z, z}, "R6: a=b=c=0, d<0");
    }
    if (az) return family_prediction(FamilyPattern::free_y_zero_x, "ybar",
                                     "(0, ybar, 1-ybar)", "R7: a=c=0, bd!=0");
    if (bz) return family_prediction(FamilyPattern::free_x_zero_y, "xbar",
                                     "(xbar, 0, 1-xbar)", "R8: b=c=0, ad!=0");
    return unpredicted("uncovered: a!=0, b!=0, c=0, d!=0 (no closed-form case)");
  }

  if (dz) {  // c != 0
    if (bz) {
      if (c > 0.0) {
        if (y == 0.0) return exact_prediction({x, 0.0, 1.0 - x},
                                              "R9: b=d=0, c>0 (initial on fixed line y=0)");
        const double ystar = 1.0 - x - a / c;
        if (ystar <= 0.0) return exact_prediction({x, 0.0, 1.0 - x},
                                                  "R9: b=d=0, c>0 (target line out of range)");
        return exact_prediction({x, ystar, a / c}, "R9: b=d=0, c>0");
      }
      if (az && z == 0.0) return exact_prediction(s0, "R10: b=d=0, c<0 (edge z=0 fixed when a=0)");
      return exact_prediction({x, 0.0, 1.0 - x}, "R10: b=d=0, c<0");
    }
    if (c <= a || y == 0.0) {
      if (az && x == 0.0 && y == 1.0)
        return exact_prediction(s0, "R11: b!=0, d=0 (vertex fixed when a=0)");
      return exact_prediction({0.0, 0.0, 1.0}, "R11: b!=0, d=0, c<=a or y0=0");
    }
    return exact_prediction({0.0, 1.0 - a / c, a / c}, "R12: b!=0, d=0, c>a, y0>0");
  }

  if (c == -d) {  // c != 0, d != 0
    if (!bz && c > 0.0 && c <= a)
      return exact_prediction({0.0, 0.0, 1.0}, "R13: b!=0, c=-d!=0, 0<c<=a");
    if (bz && c <= a) {
      if (az && y == 1.0) return exact_prediction(s0, "R14: b=0, c=-d!=0 (vertex fixed when a=0)");
      return family_prediction(FamilyPattern::free_x_zero_y, "xtilde",
                               "(xtilde, 0, 1-xtilde)", "R14: b=0, c=-d!=0, c<=a");
    }
    if (a < c) {
      if (y == 0.0) {
        if (bz) return exact_prediction({x, 0.0, 1.0 - x}, "R16: b=0, c=-d, a<c, y0=0");
        return exact_prediction({0.0, 0.0, 1.0}, "R15: b!=0, c=-d, a<c, y0=0");
      }
      return exact_prediction({0.0, 1.0 - a / c, a / c}, "R17: c=-d, a<c, y0>0");
    }
    return unpredicted("uncovered: b!=0, c=-d, c<0<=a (no closed-form case)");
  }

  // Fully coupled regime.
  if (c < a) {
    if (bz && y == 0.0)
      return exact_prediction(s0, "G1: c<a (initial on fixed line y=0, b=0)");
    if (az && x == 0.0 && y == 1.0)
      return exact_prediction(s0, "G1: c<a (vertex fixed when a=0)");
    return exact_prediction({0.0, 0.0, 1.0}, "G1: c<a");
  }
  if (c > a && d < b) {
    if (y == 0.0) {
      if (bz) return exact_prediction({x, 0.0, 1.0 - x}, "G2: c>a, d<b, y0=0, b=0");
      return exact_prediction({0.0, 0.0, 1.0}, "G2: c>a, d<b, y0=0, b!=0");
    }
    return exact_prediction({0.0, 1.0 - a / c, a / c}, "G2: c>a, d<b, y0>0");
  }
  if (c > a && d > b && b > 0.0) {
    const double disc = c * d - a * d - b * c;
    if (disc > 0.0) {
      if (y == 0.0) return exact_prediction({0.0, 0.0, 1.0}, "G3: c>a, d>b>0, y0=0");
      if (x == 0.0)
        return exact_prediction({0.0, 1.0 - a / c, a / c}, "G3: c>a, d>b>0, x0=0, y0>0");
      return exact_prediction(
          {disc / (d * (c + d)), b / d, (a - b + d) / (c + d)},
          "G3: c>a, d>b>0, interior (locally proved, numerically verified)");
    }
    return unpredicted("G3 outside: cd-ad-bc<=0 (coexistence point off the simplex)");
  }
  return unpredicted("boundary: c=a, d=b, or b=0<d (no covering case)");
}

namespace {

std::string label_basin(const SimplexPoint& limit,
                        const std::vector<FixedPointRecord>& fps) {
  const double btol = 1e-4;
  std::string best;
  double best_dist = btol;
  for (const auto& fp : fps) {
    if (fp.kind != FixedPointRecord::Kind::isolated) continue;
    const double dist = distance(limit, fp.point);
    if (dist <= best_dist) {
      best_dist = dist;
      best = fp.name;
    }
  }
  if (!best.empty()) return best;
  for (const auto& fp : fps) {
    if (fp.kind != FixedPointRecord::Kind::family) continue;
    const FixedPointFamily& fam = *fp.family;
    bool member = false;
    switch (fam.pattern) {
      case FamilyPattern::free_x_zero_y:
        member = std::abs(limit.y) <= btol && limit.x >= fam.lo - btol && limit.x <= fam.hi + btol;
        break;
      case FamilyPattern::free_y_zero_x:
        member = std::abs(limit.x) <= btol && limit.y >= fam.lo - btol && limit.y <= fam.hi + btol;
        break;
      case FamilyPattern::free_x_fixed_z:
        member = std::abs(limit.z - fam.fixed_z) <= btol && limit.x >= fam.lo - btol &&
                 limit.x <= fam.hi + btol;
        break;
      case FamilyPattern::whole_simplex:
        member = true;
        break;
    }
    if (member) return fp.name;
  }
  return "unresolved";
}

}  // namespace

VerificationRecord verify_prediction(const ModelParameters& p, const SimplexPoint& s0,
                                     double tol, double conv_tol, std::size_t max_iter) {
  VerificationRecord rec;
  rec.initial = s0;
  rec.prediction = predict_limit(p, s0);
  const ConvergeResult cv = converge(p, s0, conv_tol, max_iter);
  rec.converged = cv.converged;
  rec.limit = cv.limit;
  rec.iterations = cv.iterations;
  rec.fixed_residual = distance(apply(p, cv.limit), cv.limit);

  switch (rec.prediction.kind) {
    case LimitPrediction::Kind::identity:
    case LimitPrediction::Kind::exact: {
      rec.known_coordinate_error = distance(cv.limit, *rec.prediction.point);
      rec.pass = cv.converged && rec.known_coordinate_error <= tol;
      break;
    }
    case LimitPrediction::Kind::family_with_unknown: {
      const FixedPointFamily& fam = *rec.prediction.family;
      double err = 0.0, unknown = 0.0;
      switch (fam.pattern) {
        case FamilyPattern::free_y_zero_x:
          err = std::abs(cv.limit.x);
          unknown = cv.limit.y;
          break;
        case FamilyPattern::free_x_zero_y:
          err = std::abs(cv.limit.y);
          unknown = cv.limit.x;
          break;
        case FamilyPattern::free_x_fixed_z:
          err = std::abs(cv.limit.z - fam.fixed_z);
          unknown = cv.limit.x;
          break;
        case FamilyPattern::whole_simplex:
          unknown = cv.limit.x;
          break;
      }
      rec.known_coordinate_error = err;
      rec.unknown_value = unknown;
      const bool in_range = unknown >= fam.lo - tol && unknown <= fam.hi + tol;
      rec.pass = cv.converged && err <= tol && in_range;
      break;
    }
    case LimitPrediction::Kind::unpredicted:
      rec.pass = cv.converged;
      break;
  }
  rec.basin = label_basin(cv.limit, enumerate_fixed_points(p));
  return rec;
}

std::string basin_label(const ModelParameters& p, const SimplexPoint& limit) {
  return label_basin(limit, enumerate_fixed_points(p));
}

SweepReport regularity_sweep(const ModelParameters& p, std::size_t grid_n,
                             double tol, double conv_tol, std::size_t max_iter) {
  require_simplex_preserving(p);
  if (grid_n < 2) throw std::invalid_argument("grid resolution must be at least 2");
  SweepReport rep;
  rep.params = p;
  rep.regime_tag = regime(p);
  rep.grid_n = grid_n;
  rep.tol = tol;
  rep.conv_tol = conv_tol;
  rep.max_iter = max_iter;
  const double n = static_cast<double>(grid_n);
  const std::vector<FixedPointRecord> fps = enumerate_fixed_points(p);
  for (std::size_t i = 0; i <= grid_n; ++i) {
    for (std::size_t j = 0; i + j <= grid_n; ++j) {
      const SimplexPoint s0 = make_point(static_cast<double>(i) / n, static_cast<double>(j) / n,
                                         static_cast<double>(grid_n - i - j) / n);
      VerificationRecord rec = verify_prediction(p, s0, tol, conv_tol, max_iter);
      rec.basin = label_basin(rec.limit, fps);
      rep.records.push_back(std::move(rec));
    }
  }
  rep.points = rep.records.size();
  for (const auto& rec : rep.records) {
    if (rec.converged) {
      ++rep.converged;
      rep.max_iterations = std::max(rep.max_iterations, rec.iterations);
    }
    if (rec.pass) ++rep.passed;
    ++rep.basins[rec.basin];
  }
  rep.pass_rate = rep.points == 0 ? 0.0
                                  : static_cast<double>(rep.passed) / static_cast<double>(rep.points);
  return rep;
}

}  // namespace npz
