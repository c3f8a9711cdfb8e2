#pragma once

#include <vector>

#include "setcalc/errors.hpp"
#include "setcalc/rational.hpp"
#include "setcalc/set_ops.hpp"

namespace setcalc {

/// One interval with per-end inclusion flags. Degenerate intervals (a == b)
/// are forbidden; isolated points live in PointSet.
struct Interval {
  double a;
  double b;
  bool closed_left;
  bool closed_right;

  Interval(double a_, double b_, bool cl = true, bool cr = true);

  double length() const { return b - a; }
  bool contains(double x) const {
    if (x == a) return closed_left;
    if (x == b) return closed_right;
    return a < x && x < b;
  }
  bool operator==(const Interval& o) const {
    return a == o.a && b == o.b && closed_left == o.closed_left &&
           closed_right == o.closed_right;
  }
};

/// Finite union of intervals in canonical form: sorted by left endpoint,
/// pairwise disjoint, and non-mergeable (no two pieces whose union is again
/// an interval). Canonicalization happens in the constructor, so equality is
/// plain piece-list equality.
///
/// All boolean algebra is done by elementary decomposition over the combined
/// endpoint list. No arithmetic is performed on endpoints (comparisons only),
/// so results are bit-exact for any double inputs. Degenerate single-point
/// pieces that the algebra produces (e.g. [0,1] intersect [1,2]) are dropped,
/// optionally reported through the dropped_points out-parameter; see README
/// for the quotient semantics this induces.
class IntervalSet {
 public:
  IntervalSet() = default;
  explicit IntervalSet(std::vector<Interval> pieces);

  static IntervalSet single(double a, double b, bool closed_left = true,
                            bool closed_right = true);

  const std::vector<Interval>& pieces() const { return pieces_; }
  bool empty() const { return pieces_.empty(); }
  std::size_t size() const { return pieces_.size(); }
  bool contains(double x) const;

  double length() const;
  Rational length_exact() const;

  bool operator==(const IntervalSet& o) const { return pieces_ == o.pieces_; }
  bool operator!=(const IntervalSet& o) const { return !(*this == o); }

 private:
  std::vector<Interval> pieces_;
};

IntervalSet combine(const IntervalSet& lhs, const IntervalSet& rhs, SetOp op,
                    std::vector<double>* dropped_points = nullptr);

IntervalSet union_of(const IntervalSet& a, const IntervalSet& b);
IntervalSet intersect(const IntervalSet& a, const IntervalSet& b);
IntervalSet minus(const IntervalSet& a, const IntervalSet& b);
IntervalSet sym_diff(const IntervalSet& a, const IntervalSet& b);

/// Subset test modulo finitely many endpoints: a \ b measures zero.
bool is_subset(const IntervalSet& a, const IntervalSet& b);

}  // namespace setcalc
