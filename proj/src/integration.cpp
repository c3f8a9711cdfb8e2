#include "setcalc/integration.hpp"

#include <algorithm>
#include <cmath>

namespace setcalc {

namespace {

constexpr double kBisectTol = 1e-12;
constexpr int kFallbackCells = 10000;
constexpr int kMaxSchemeLevels = 50000000;

void check_value(double v) {
  if (!std::isfinite(v)) throw UnboundedIntegrand("integrand produced a non-finite value");
}

// Segment of an interval covered by one monotone piece, with direction
// resolved from the clipped endpoint values.
struct Segment {
  double lo, hi;
  double f_lo, f_hi;
};

// Tile [iv.a, iv.b] with clipped monotone pieces; returns false when the
// annotations leave a gap (caller falls back to the grid).
bool tile_interval(const Interval& iv, const std::vector<MonotonePiece>& pieces,
                   const std::function<double(double)>& f, std::vector<Segment>& out) {
  double cursor = iv.a;
  for (const auto& p : pieces) {  // pre-sorted by a
    if (p.b <= cursor || p.a >= iv.b) continue;
    if (p.a > cursor + 1e-12) return false;  // gap before this piece
    const double lo = cursor;
    const double hi = std::min(p.b, iv.b);
    if (hi > lo) {
      Segment s{lo, hi, f(lo), f(hi)};
      check_value(s.f_lo);
      check_value(s.f_hi);
      out.push_back(s);
      cursor = hi;
    }
    if (cursor >= iv.b) break;
  }
  return cursor >= iv.b - 1e-12;
}

// First x in [lo, hi] with f(x) >= y, assuming f non-decreasing on the
// segment; hi when the predicate never holds.
double rise_crossing(const std::function<double(double)>& f, double lo, double hi, double y) {
  if (f(lo) >= y) return lo;
  if (f(hi) < y) return hi;
  while (hi - lo > kBisectTol) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) >= y ? hi : lo) = mid;
  }
  return hi;
}

// Last x in [lo, hi] with f(x) >= y, assuming f non-increasing; lo when the
// predicate never holds.
double fall_crossing(const std::function<double(double)>& f, double lo, double hi, double y) {
  if (f(hi) >= y) return hi;
  if (f(lo) < y) return lo;
  while (hi - lo > kBisectTol) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) >= y ? lo : hi) = mid;
  }
  return lo;
}

struct Accumulator {
  // Streaming sums; the per-level vector is only kept on request.
  double s_lower = 0.0, s_upper = 0.0, total_measure = 0.0;
  double alpha = 0.0, h = 0.0;
  int n = 0;
  std::vector<double>* per_level = nullptr;

  void add(int level, double measure) {
    if (measure <= 0.0) return;
    const double y_lo = alpha + level * h;
    s_lower += y_lo * measure;
    s_upper += (y_lo + h) * measure;
    total_measure += measure;
    if (per_level) (*per_level)[level] += measure;
  }

  int level_of(double value) const {
    int v = int(std::floor((value - alpha) / h));
    return std::clamp(v, 0, n - 1);  // clamp absorbs rounding and the closed top level
  }
};

}  // namespace

Integrand integrand_from_expr(const Expr& e, std::vector<MonotonePiece> pieces) {
  for (const auto& v : e.variables()) {
    if (v != "x") throw ParseError("integrand expressions use the single variable x");
  }
  Integrand g;
  g.name = e.text();
  g.f = [e](double x) { return e.eval({{"x", x}}); };
  g.monotone_pieces = std::move(pieces);
  return g;
}

// Core scheme over bare interval and point parts (no carrier-range
// restriction, which the mixed integral and shrinking balls rely on).
static SchemeResult scheme_impl(const Integrand& f, const IntervalSet& intervals,
                                const PointSet& points, const MeasureConfig& cfg,
                                MeasureMode mode, int n_levels, double tolerance,
                                std::vector<double>* per_level,
                                std::vector<double>* levels_out) {
  cfg.validate();
  if (n_levels < 1 || n_levels > kMaxSchemeLevels) throw Error("level count out of range");

  const double w_int = interval_weight(cfg, mode);
  const double w_pt = point_weight_factor(cfg, mode);
  double m_a = w_int * intervals.length();
  for (double x : points.values()) m_a += w_pt * cfg.H(x);

  // Tile interval parts by the monotone annotations; remember which need the
  // grid fallback.
  auto pieces = f.monotone_pieces;
  std::sort(pieces.begin(), pieces.end(),
            [](const MonotonePiece& x, const MonotonePiece& y) { return x.a < y.a; });
  std::vector<Segment> segments;
  std::vector<Interval> fallback;
  for (const Interval& iv : intervals.pieces()) {
    std::vector<Segment> tile;
    if (tile_interval(iv, pieces, f.f, tile)) {
      segments.insert(segments.end(), tile.begin(), tile.end());
    } else {
      fallback.push_back(iv);
    }
  }

  // Value bounds: segment endpoints are extremes on monotone pieces; grid
  // intervals and points get sampled.
  double alpha = std::numeric_limits<double>::infinity();
  double beta = -std::numeric_limits<double>::infinity();
  auto take = [&](double v) {
    check_value(v);
    alpha = std::min(alpha, v);
    beta = std::max(beta, v);
  };
  for (const Segment& s : segments) {
    take(s.f_lo);
    take(s.f_hi);
  }
  std::vector<std::vector<double>> fallback_values(fallback.size());
  for (std::size_t i = 0; i < fallback.size(); ++i) {
    const auto& iv = fallback[i];
    auto& vals = fallback_values[i];
    vals.resize(kFallbackCells);
    const double step = iv.length() / kFallbackCells;
    for (int c = 0; c < kFallbackCells; ++c) {
      vals[c] = f(iv.a + (c + 0.5) * step);
      take(vals[c]);
    }
  }
  std::vector<double> point_values;
  for (double x : points.values()) {
    point_values.push_back(f(x));
    take(point_values.back());
  }
  if (segments.empty() && fallback.empty() && point_values.empty()) {
    SchemeResult res;  // empty set: everything zero, trivially converged
    res.converged = true;
    res.levels = n_levels;
    return res;
  }
  if (f.alpha || f.beta) {
    const double sa = f.alpha.value_or(alpha), sb = f.beta.value_or(beta);
    if (alpha < sa - 1e-12 || beta > sb + 1e-12) {
      throw UnboundedIntegrand("integrand leaves the supplied bounds on the set");
    }
    alpha = sa;
    beta = sb;
  }

  SchemeResult res;
  res.alpha = alpha;
  res.beta = beta;
  res.grid_fallback = !fallback.empty();
  res.levels = n_levels;

  // Constant integrand: a single level reproduces c0 * m(A) exactly.
  if (beta == alpha) {
    res.lower = res.upper = res.j = alpha * m_a;
    res.converged = true;
    res.partition_defect = 0.0;
    if (per_level) *per_level = std::vector<double>{m_a};
    if (levels_out) *levels_out = {alpha, alpha};
    res.levels = 1;
    return res;
  }

  Accumulator acc;
  acc.alpha = alpha;
  acc.h = (beta - alpha) / n_levels;
  acc.n = n_levels;
  if (per_level) {
    per_level->assign(n_levels, 0.0);
    acc.per_level = per_level;
  }
  if (levels_out) {
    levels_out->resize(n_levels + 1);
    for (int v = 0; v <= n_levels; ++v) (*levels_out)[v] = alpha + v * acc.h;
  }

  // Exact inversion on each monotone segment: walk the level boundaries once,
  // bracketing each crossing by the previous one.
  for (const Segment& s : segments) {
    if (s.f_lo == s.f_hi) {
      acc.add(acc.level_of(s.f_lo), w_int * (s.hi - s.lo));
      continue;
    }
    const bool rising = s.f_lo < s.f_hi;
    const double f_min = rising ? s.f_lo : s.f_hi;
    const double f_max = rising ? s.f_hi : s.f_lo;
    const int v_first = acc.level_of(f_min);
    const int v_last = acc.level_of(f_max);
    if (rising) {
      double prev = s.lo;  // crossing of y_{v_first} is the segment start
      for (int v = v_first; v < v_last; ++v) {
        const double y_next = alpha + (v + 1) * acc.h;
        const double cur = rise_crossing(f.f, prev, s.hi, y_next);
        acc.add(v, w_int * (cur - prev));
        prev = cur;
      }
      acc.add(v_last, w_int * (s.hi - prev));
    } else {
      double prev = s.lo;  // highest values sit at the left end
      for (int v = v_last; v > v_first; --v) {
        const double y_lo = alpha + v * acc.h;
        const double cur = fall_crossing(f.f, prev, s.hi, y_lo);
        acc.add(v, w_int * (cur - prev));
        prev = cur;
      }
      acc.add(v_first, w_int * (s.hi - prev));
    }
  }

  // Grid fallback: each cell contributes its whole width at the midpoint level.
  for (std::size_t i = 0; i < fallback.size(); ++i) {
    const double cell = fallback[i].length() / kFallbackCells;
    for (double v : fallback_values[i]) acc.add(acc.level_of(v), w_int * cell);
  }

  // Point part: each point lands in one level with weight c*H (or alpha3*H).
  {
    std::size_t i = 0;
    for (double x : points.values()) {
      acc.add(acc.level_of(point_values[i++]), w_pt * cfg.H(x));
    }
  }

  res.lower = acc.s_lower;
  res.upper = acc.s_upper;
  res.j = 0.5 * (acc.s_lower + acc.s_upper);
  res.converged = (acc.s_upper - acc.s_lower) < tolerance;
  res.partition_defect = std::abs(acc.total_measure - m_a);
  return res;
}

static void reject_fractals(const HybridSet& a) {
  if (!a.fractals.empty()) {
    throw UnsupportedFractal("the level scheme does not integrate over fractal parts");
  }
}

SchemeResult integrate_scheme(const Integrand& f, const HybridSet& a,
                              const MeasureConfig& cfg, MeasureMode mode, int n_levels,
                              double tolerance) {
  reject_fractals(a);
  return scheme_impl(f, a.intervals, a.points, cfg, mode, n_levels, tolerance, nullptr,
                     nullptr);
}

LevelScheme build_level_scheme(const Integrand& f, const HybridSet& a,
                               const MeasureConfig& cfg, MeasureMode mode, int n_levels,
                               double tolerance) {
  if (n_levels > 100000) throw Error("level scheme inspection is capped at 1e5 levels");
  reject_fractals(a);
  LevelScheme scheme;
  scheme.result = scheme_impl(f, a.intervals, a.points, cfg, mode, n_levels, tolerance,
                              &scheme.measures, &scheme.levels);
  return scheme;
}

DiscreteResult integrate_discrete(const std::function<double(double)>& f, const PointSet& q,
                                  double c, const PointWeight& h) {
  DiscreteResult res;
  for (double x : q.values()) {
    const double term = c * f(x) * h(x);
    check_value(term);
    res.value += term;
    res.last_term = std::abs(term);
    ++res.terms_used;
  }
  return res;
}

DiscreteResult integrate_discrete(const std::function<double(double)>& f,
                                  const std::function<double(int)>& generator, double c,
                                  const PointWeight& h, int max_terms, double term_tol) {
  DiscreteResult res;
  int below = 0;  // consecutive terms under the tail threshold
  for (int i = 0; i < max_terms; ++i) {
    const double x = generator(i);
    const double term = c * f(x) * h(x);
    check_value(term);
    res.value += term;
    res.last_term = std::abs(term);
    ++res.terms_used;
    below = res.last_term < term_tol ? below + 1 : 0;
    if (below >= 3) {
      res.truncated = true;
      return res;
    }
  }
  throw NonConvergent("discrete integral tail did not fall below tolerance");
}

MixedResult integrate_mixed(const Integrand& f, double a, double b, const PointSet& q,
                            double c, const PointWeight& h, int n_levels,
                            bool no_double_count, double tolerance) {
  if (!(a < b)) throw Error("mixed integral needs a proper interval");
  MixedResult res;
  MeasureConfig cfg;  // plain mode: unit interval weight, c on the points
  cfg.c = c;
  cfg.H = h;
  res.continuous = scheme_impl(f, IntervalSet::single(a, b), PointSet{}, cfg,
                               MeasureMode::Plain, n_levels, tolerance, nullptr, nullptr);

  PointSet effective = q;
  if (no_double_count) {
    std::vector<double> kept;
    for (double x : q.values()) {
      if (x < a || x > b) kept.push_back(x);
    }
    effective = PointSet(kept);
  }
  res.discrete = integrate_discrete(f.f, effective, c, h);
  res.value = res.continuous.j + res.discrete.value;
  return res;
}

MeanValueReport mean_value_bounds(const Integrand& f, const HybridSet& a,
                                  const MeasureConfig& cfg, MeasureMode mode,
                                  int n_levels) {
  const auto scheme = integrate_scheme(f, a, cfg, mode, n_levels);
  const double m_a = measure_hybrid(a, cfg, mode);
  MeanValueReport rep;
  rep.lower_bound = scheme.alpha * m_a;
  rep.upper_bound = scheme.beta * m_a;
  rep.j = scheme.j;
  const double slack = 1e-9 * std::max({1.0, std::abs(rep.lower_bound),
                                        std::abs(rep.upper_bound)});
  rep.holds = rep.lower_bound - slack <= rep.j && rep.j <= rep.upper_bound + slack;
  return rep;
}

DensityReport radon_nikodym_check(const Integrand& f, double x, const MeasureConfig& cfg,
                                  MeasureMode mode, int steps, double tol) {
  if (steps < 2) throw Error("density check needs at least two shrinking steps");
  DensityReport rep;
  double radius = 0.25;
  for (int n = 0; n < steps; ++n, radius *= 0.5) {
    const IntervalSet ball = IntervalSet::single(x - radius, x + radius);
    const auto scheme =
        scheme_impl(f, ball, PointSet{}, cfg, mode, 2000, 1e-6, nullptr, nullptr);
    const double m_ball = interval_weight(cfg, mode) * ball.length();
    rep.quotients.push_back(scheme.j / m_ball);
  }
  rep.estimate = rep.quotients.back();
  rep.stabilized =
      std::abs(rep.quotients[steps - 1] - rep.quotients[steps - 2]) < tol;
  return rep;
}

double radon_nikodym_finite(const UniversePtr& u, const std::vector<double>& f_values,
                            std::size_t element) {
  if (f_values.size() != u->size()) throw Error("one integrand value per element required");
  if (element >= u->size()) throw Error("element index out of range");
  // J(A delta {w}) - J(A) = ±f(w)H(w) and m moves by ±H(w); the quotient is
  // f(w) for any A, so evaluate it at A = empty.
  const double h = u->weight(element);
  return (f_values[element] * h) / h;
}

}  // namespace setcalc
