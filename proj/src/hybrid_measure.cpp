#include "setcalc/hybrid_measure.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

namespace setcalc {

FractalComponent::FractalComponent(double a_, double b_, int k_, double r_, std::string label_)
    : a(a_), b(b_), k(k_), r(r_), label(std::move(label_)) {
  if (!(a < b)) throw Error("fractal base requires a < b");
  if (k < 2) throw Error("fractal needs at least 2 pieces");
  if (!(r > 0.0) || k * r > 1.0) throw Error("fractal ratio must satisfy 0 < k*r <= 1");
}

double FractalComponent::dimension() const { return std::log(double(k)) / std::log(1.0 / r); }

bool FractalComponent::operator<(const FractalComponent& o) const {
  return std::tie(a, b, k, r, label) < std::tie(o.a, o.b, o.k, o.r, o.label);
}

double caratheodory_measure(const FractalComponent& f) {
  return std::pow(f.base_length(), f.dimension());
}

PointSet::PointSet(std::vector<double> pts) : pts_(std::move(pts)) {
  for (double x : pts_) {
    if (!std::isfinite(x)) throw Error("points must be finite");
  }
  std::sort(pts_.begin(), pts_.end());
  pts_.erase(std::unique(pts_.begin(), pts_.end()), pts_.end());
}

bool PointSet::contains(double x) const {
  return std::binary_search(pts_.begin(), pts_.end(), x);
}

PointSet combine(const PointSet& a, const PointSet& b, SetOp op) {
  std::vector<double> out;
  auto ia = a.values().begin(), ea = a.values().end();
  auto ib = b.values().begin(), eb = b.values().end();
  while (ia != ea || ib != eb) {
    bool in_a, in_b;
    double x;
    if (ib == eb || (ia != ea && *ia < *ib)) {
      x = *ia++;
      in_a = true;
      in_b = false;
    } else if (ia == ea || *ib < *ia) {
      x = *ib++;
      in_a = false;
      in_b = true;
    } else {
      x = *ia;
      ++ia;
      ++ib;
      in_a = in_b = true;
    }
    if (apply_op(in_a, in_b, op)) out.push_back(x);
  }
  return PointSet(std::move(out));
}

PointSet union_of(const PointSet& a, const PointSet& b) { return combine(a, b, SetOp::Union); }
PointSet intersect(const PointSet& a, const PointSet& b) {
  return combine(a, b, SetOp::Intersect);
}
PointSet minus(const PointSet& a, const PointSet& b) { return combine(a, b, SetOp::Minus); }
PointSet sym_diff(const PointSet& a, const PointSet& b) { return combine(a, b, SetOp::SymDiff); }
bool is_subset(const PointSet& a, const PointSet& b) { return minus(a, b).empty(); }

PointWeight PointWeight::exp_abs() {
  PointWeight w;
  w.kind_ = Kind::ExpAbs;
  return w;
}

PointWeight PointWeight::from_table(std::map<double, double> table) {
  for (const auto& [x, h] : table) {
    if (!(h > 0.0)) throw Error("point weights must be strictly positive");
    (void)x;
  }
  PointWeight w;
  w.kind_ = Kind::Table;
  w.table_ = std::move(table);
  return w;
}

double PointWeight::operator()(double x) const {
  switch (kind_) {
    case Kind::One: return 1.0;
    case Kind::ExpAbs: return std::exp(-std::abs(x));
    case Kind::Table: {
      auto it = table_.find(x);
      if (it == table_.end()) throw Error("point weight table has no entry for queried point");
      return it->second;
    }
  }
  throw Error("invalid point weight kind");
}

void MeasureConfig::validate() const {
  if (!(alpha1 > 0.0 && alpha2 > 0.0 && alpha3 > 0.0 && c > 0.0)) {
    throw Error("measure coefficients must be strictly positive");
  }
}

namespace {

void check_unit_range(const HybridSet& s) {
  for (const Interval& iv : s.intervals.pieces()) {
    if (iv.a < 0.0 || iv.b > 1.0) throw Error("hybrid interval parts must lie in [0,1]");
  }
  for (const FractalComponent& f : s.fractals) {
    if (f.a < 0.0 || f.b > 1.0) throw Error("hybrid fractal parts must lie in [0,1]");
  }
  for (double x : s.points.values()) {
    if (x < 0.0 || x > 1.0) throw Error("hybrid points must lie in [0,1]");
  }
}

}  // namespace

HybridSet::HybridSet(IntervalSet k, std::vector<FractalComponent> f, PointSet q)
    : intervals(std::move(k)), fractals(std::move(f)), points(std::move(q)) {
  std::sort(fractals.begin(), fractals.end());
  if (std::adjacent_find(fractals.begin(), fractals.end()) != fractals.end()) {
    throw Error("duplicate fractal component in one set");
  }
  check_unit_range(*this);
}

double lebesgue_length(const IntervalSet& k) { return k.length(); }

double interval_weight(const MeasureConfig& cfg, MeasureMode mode) {
  return mode == MeasureMode::Plain ? 1.0 : cfg.alpha1;
}

double point_weight_factor(const MeasureConfig& cfg, MeasureMode mode) {
  return mode == MeasureMode::Plain ? cfg.c : cfg.alpha3;
}

double measure_hybrid(const HybridSet& a, const MeasureConfig& cfg, MeasureMode mode) {
  cfg.validate();
  if (a.empty()) return 0.0;

  double points_part = 0.0;
  for (double x : a.points.values()) points_part += cfg.H(x);

  if (mode == MeasureMode::Plain) {
    if (!a.fractals.empty()) {
      throw Error("plain measure mode does not admit fractal parts");
    }
    return lebesgue_length(a.intervals) + cfg.c * points_part;
  }
  double fractal_part = 0.0;
  for (const FractalComponent& f : a.fractals) fractal_part += caratheodory_measure(f);
  return interval_weight(cfg, mode) * lebesgue_length(a.intervals) +
         cfg.alpha2 * fractal_part + point_weight_factor(cfg, mode) * points_part;
}

namespace {

bool supports_overlap(const FractalComponent& f, const FractalComponent& g) {
  return std::max(f.a, g.a) < std::min(f.b, g.b);
}

// Identical components pair up and count as "in both"; everything else must
// have disjoint support across the operands.
std::vector<FractalComponent> combine_fractals(const std::vector<FractalComponent>& a,
                                               const std::vector<FractalComponent>& b,
                                               SetOp op) {
  std::vector<FractalComponent> out;
  for (const FractalComponent& f : a) {
    const bool in_b = std::find(b.begin(), b.end(), f) != b.end();
    if (!in_b) {
      for (const FractalComponent& g : b) {
        if (supports_overlap(f, g)) {
          throw PartialFractalOverlap("fractal components overlap without being identical");
        }
      }
    }
    if (apply_op(true, in_b, op)) out.push_back(f);
  }
  for (const FractalComponent& g : b) {
    const bool in_a = std::find(a.begin(), a.end(), g) != a.end();
    if (!in_a && apply_op(false, true, op)) out.push_back(g);
  }
  return out;
}

}  // namespace

HybridSet combine(const HybridSet& a, const HybridSet& b, SetOp op) {
  return HybridSet(combine(a.intervals, b.intervals, op),
                   combine_fractals(a.fractals, b.fractals, op),
                   combine(a.points, b.points, op));
}

HybridSet union_of(const HybridSet& a, const HybridSet& b) { return combine(a, b, SetOp::Union); }
HybridSet intersect(const HybridSet& a, const HybridSet& b) {
  return combine(a, b, SetOp::Intersect);
}
HybridSet minus(const HybridSet& a, const HybridSet& b) { return combine(a, b, SetOp::Minus); }
HybridSet sym_diff_hybrid(const HybridSet& a, const HybridSet& b) {
  return combine(a, b, SetOp::SymDiff);
}

bool is_subset(const HybridSet& a, const HybridSet& b) {
  return minus(a, b).empty();
}

double distance_hybrid(const HybridSet& a, const HybridSet& b, const MeasureConfig& cfg,
                       MeasureMode mode) {
  return measure_hybrid(sym_diff_hybrid(a, b), cfg, mode);
}

}  // namespace setcalc
