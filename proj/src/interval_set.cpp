#include "setcalc/interval_set.hpp"

#include <algorithm>
#include <cmath>

namespace setcalc {

Interval::Interval(double a_, double b_, bool cl, bool cr)
    : a(a_), b(b_), closed_left(cl), closed_right(cr) {
  if (!std::isfinite(a) || !std::isfinite(b)) throw Error("interval endpoints must be finite");
  if (!(a < b)) throw Error("interval requires a < b; single points belong in a point set");
}

namespace {

bool any_contains_point(const std::vector<Interval>& v, double x) {
  for (const Interval& iv : v) {
    if (iv.contains(x)) return true;
  }
  return false;
}

// Whether the open gap (lo, hi) lies inside some interval of v. lo and hi are
// consecutive cut points drawn from all operand endpoints, so each interval
// either contains the whole gap or misses it entirely; flags are irrelevant.
bool any_contains_gap(const std::vector<Interval>& v, double lo, double hi) {
  for (const Interval& iv : v) {
    if (iv.a <= lo && hi <= iv.b) return true;
  }
  return false;
}

// Elementary decomposition over the merged endpoint list: alternating
// point/gap pieces, each entirely inside or outside each operand. Selected
// pieces are stitched back into maximal runs; a run of a single point piece
// is degenerate and gets dropped (reported via dropped_points).
std::vector<Interval> combine_raw(const std::vector<Interval>& lhs,
                                  const std::vector<Interval>& rhs, SetOp op,
                                  std::vector<double>* dropped_points) {
  std::vector<double> cuts;
  cuts.reserve(2 * (lhs.size() + rhs.size()));
  for (const Interval& iv : lhs) {
    cuts.push_back(iv.a);
    cuts.push_back(iv.b);
  }
  for (const Interval& iv : rhs) {
    cuts.push_back(iv.a);
    cuts.push_back(iv.b);
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  if (cuts.empty()) return {};

  // Pieces in left-to-right order: point 0, gap 0, point 1, gap 1, ... point k-1.
  const std::size_t k = cuts.size();
  std::vector<char> point_sel(k), gap_sel(k ? k - 1 : 0);
  for (std::size_t i = 0; i < k; ++i) {
    point_sel[i] = apply_op(any_contains_point(lhs, cuts[i]),
                            any_contains_point(rhs, cuts[i]), op);
  }
  for (std::size_t i = 0; i + 1 < k; ++i) {
    gap_sel[i] = apply_op(any_contains_gap(lhs, cuts[i], cuts[i + 1]),
                          any_contains_gap(rhs, cuts[i], cuts[i + 1]), op);
  }

  std::vector<Interval> out;
  // Walk the 2k-1 pieces; even index 2i = point i, odd index 2i+1 = gap i.
  const std::size_t n_pieces = 2 * k - 1;
  auto selected = [&](std::size_t p) {
    return p % 2 == 0 ? point_sel[p / 2] != 0 : gap_sel[p / 2] != 0;
  };
  std::size_t p = 0;
  while (p < n_pieces) {
    if (!selected(p)) {
      ++p;
      continue;
    }
    const std::size_t first = p;
    while (p + 1 < n_pieces && selected(p + 1)) ++p;
    const std::size_t last = p;
    ++p;

    if (first == last && first % 2 == 0) {
      if (dropped_points) dropped_points->push_back(cuts[first / 2]);
      continue;
    }
    double a, b;
    bool cl, cr;
    if (first % 2 == 0) {
      a = cuts[first / 2];
      cl = true;
    } else {
      a = cuts[first / 2];
      cl = false;
    }
    if (last % 2 == 0) {
      b = cuts[last / 2];
      cr = true;
    } else {
      b = cuts[last / 2 + 1];
      cr = false;
    }
    out.emplace_back(a, b, cl, cr);
  }
  return out;
}

}  // namespace

IntervalSet::IntervalSet(std::vector<Interval> pieces)
    : pieces_(combine_raw(pieces, {}, SetOp::Union, nullptr)) {}

IntervalSet IntervalSet::single(double a, double b, bool closed_left, bool closed_right) {
  return IntervalSet({Interval(a, b, closed_left, closed_right)});
}

bool IntervalSet::contains(double x) const { return any_contains_point(pieces_, x); }

double IntervalSet::length() const {
  double total = 0.0;
  for (const Interval& iv : pieces_) total += iv.length();
  return total;
}

Rational IntervalSet::length_exact() const {
  Rational total = 0;
  for (const Interval& iv : pieces_) total += Rational(iv.b) - Rational(iv.a);
  return total;
}

IntervalSet combine(const IntervalSet& lhs, const IntervalSet& rhs, SetOp op,
                    std::vector<double>* dropped_points) {
  return IntervalSet(combine_raw(lhs.pieces(), rhs.pieces(), op, dropped_points));
}

IntervalSet union_of(const IntervalSet& a, const IntervalSet& b) {
  return combine(a, b, SetOp::Union);
}
IntervalSet intersect(const IntervalSet& a, const IntervalSet& b) {
  return combine(a, b, SetOp::Intersect);
}
IntervalSet minus(const IntervalSet& a, const IntervalSet& b) {
  return combine(a, b, SetOp::Minus);
}
IntervalSet sym_diff(const IntervalSet& a, const IntervalSet& b) {
  return combine(a, b, SetOp::SymDiff);
}

bool is_subset(const IntervalSet& a, const IntervalSet& b) {
  return minus(a, b).empty();
}

}  // namespace setcalc
