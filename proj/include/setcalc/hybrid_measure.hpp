#pragma once

#include <map>
#include <string>
#include <vector>

#include "setcalc/interval_set.hpp"

namespace setcalc {

/// Self-similar Cantor-like fractal: k copies of the base interval scaled by
/// r, iterated. Dimension d = ln k / ln(1/r) in (0, 1]; its measure is the
/// d-dimensional content (base length)^d, normalized so the middle-thirds
/// construction on [0,1] (k=2, r=1/3) has measure 1.
struct FractalComponent {
  double a;
  double b;
  int k;
  double r;
  std::string label;

  FractalComponent(double a_, double b_, int k_, double r_, std::string label_ = "");

  double base_length() const { return b - a; }
  double dimension() const;

  bool operator==(const FractalComponent& o) const {
    return a == o.a && b == o.b && k == o.k && r == o.r && label == o.label;
  }
  bool operator<(const FractalComponent& o) const;
};

double caratheodory_measure(const FractalComponent& f);

/// Finite set of isolated points, kept sorted and distinct.
class PointSet {
 public:
  PointSet() = default;
  explicit PointSet(std::vector<double> pts);

  const std::vector<double>& values() const { return pts_; }
  bool empty() const { return pts_.empty(); }
  std::size_t size() const { return pts_.size(); }
  bool contains(double x) const;

  bool operator==(const PointSet& o) const { return pts_ == o.pts_; }
  bool operator!=(const PointSet& o) const { return !(*this == o); }

 private:
  std::vector<double> pts_;
};

PointSet combine(const PointSet& a, const PointSet& b, SetOp op);
PointSet union_of(const PointSet& a, const PointSet& b);
PointSet intersect(const PointSet& a, const PointSet& b);
PointSet minus(const PointSet& a, const PointSet& b);
PointSet sym_diff(const PointSet& a, const PointSet& b);
bool is_subset(const PointSet& a, const PointSet& b);

/// Point-weight function H(x), strictly positive wherever queried.
class PointWeight {
 public:
  enum class Kind { One, ExpAbs, Table };

  PointWeight() : kind_(Kind::One) {}

  static PointWeight one() { return PointWeight(); }
  static PointWeight exp_abs();
  static PointWeight from_table(std::map<double, double> table);

  Kind kind() const { return kind_; }
  const std::map<double, double>& table() const { return table_; }

  /// Table mode throws on unknown points instead of defaulting.
  double operator()(double x) const;

 private:
  Kind kind_;
  std::map<double, double> table_;
};

/// Coefficients for the two measure variants: the plain one with a single
/// point-part constant c, and the dimension-balancing one with per-component
/// weights alpha1 (intervals), alpha2 (fractals), alpha3 (points).
struct MeasureConfig {
  double alpha1 = 1.0;
  double alpha2 = 1.0;
  double alpha3 = 1.0;
  double c = 1.0;
  PointWeight H;

  void validate() const;
};

enum class MeasureMode { Plain, Weighted };

/// A = {K, f, Q}: interval part, fractal components, isolated points. The
/// parts are formally independent — a point of Q may lie inside an interval
/// of K and the measure then counts it in both parts by design.
struct HybridSet {
  IntervalSet intervals;
  std::vector<FractalComponent> fractals;
  PointSet points;

  HybridSet() = default;
  HybridSet(IntervalSet k, std::vector<FractalComponent> f, PointSet q);

  bool empty() const {
    return intervals.empty() && fractals.empty() && points.empty();
  }

  bool operator==(const HybridSet& o) const {
    return intervals == o.intervals && fractals == o.fractals && points == o.points;
  }
  bool operator!=(const HybridSet& o) const { return !(*this == o); }
};

double lebesgue_length(const IntervalSet& k);

/// Plain mode: mu_l(K) + c * sum H(x); rejects nonempty fractal parts.
/// Weighted mode: alpha1*mu_l(K) + alpha2*sum mu_c(f_i) + alpha3*sum H(x).
double measure_hybrid(const HybridSet& a, const MeasureConfig& cfg, MeasureMode mode);

/// Coefficient applied to Lebesgue interval length under each mode.
double interval_weight(const MeasureConfig& cfg, MeasureMode mode);

/// Coefficient applied to the H-weighted point sum under each mode.
double point_weight_factor(const MeasureConfig& cfg, MeasureMode mode);

/// Componentwise combination. Fractal components must pair up as identical
/// (present in both) or have disjoint supports; partial overlap across the
/// two operands throws PartialFractalOverlap.
HybridSet combine(const HybridSet& a, const HybridSet& b, SetOp op);
HybridSet union_of(const HybridSet& a, const HybridSet& b);
HybridSet intersect(const HybridSet& a, const HybridSet& b);
HybridSet minus(const HybridSet& a, const HybridSet& b);
HybridSet sym_diff_hybrid(const HybridSet& a, const HybridSet& b);
bool is_subset(const HybridSet& a, const HybridSet& b);

double distance_hybrid(const HybridSet& a, const HybridSet& b, const MeasureConfig& cfg,
                       MeasureMode mode);

}  // namespace setcalc
