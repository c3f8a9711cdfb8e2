#pragma once

#include <array>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "setcalc/calculus.hpp"

namespace setcalc {

/// One grid cell: center coordinates and area (1-D grids set x2 = 0 and
/// area = cell length).
struct GridCell {
  double x1 = 0.0, x2 = 0.0;
  double area = 0.0;
};

/// Regular discretization of a bounded region; cell order is fixed by grid
/// index so downstream output is deterministic.
class GridDomain {
 public:
  static std::shared_ptr<const GridDomain> quarter_disk(double h);
  static std::shared_ptr<const GridDomain> segment(double a, double b, int n_cells);

  const std::vector<GridCell>& cells() const { return cells_; }
  std::size_t size() const { return cells_.size(); }
  double resolution() const { return h_; }
  bool planar() const { return planar_; }
  double total_area() const { return total_area_; }

 private:
  std::vector<GridCell> cells_;
  double h_ = 0.0;
  bool planar_ = true;
  double total_area_ = 0.0;
};

using DomainPtr = std::shared_ptr<const GridDomain>;

/// Subset of grid cells (bitset over cell indices). Value type, immutable.
class CellSet {
 public:
  static CellSet empty_set(DomainPtr d);
  static CellSet full_set(DomainPtr d);
  static CellSet of_indices(DomainPtr d, const std::vector<std::size_t>& indices);

  const DomainPtr& domain() const { return domain_; }
  bool contains(std::size_t i) const;
  std::size_t count() const;
  bool empty() const { return count() == 0; }
  double area() const;  // sum of member cell areas

  CellSet with(std::size_t i) const;     // copy plus one cell
  CellSet without(std::size_t i) const;  // copy minus one cell

  bool operator==(const CellSet& o) const;
  bool operator!=(const CellSet& o) const { return !(*this == o); }

  friend CellSet combine(const CellSet& a, const CellSet& b, SetOp op);

 private:
  CellSet(DomainPtr d, std::size_t words);
  DomainPtr domain_;
  std::vector<std::uint64_t> bits_;
};

CellSet union_of(const CellSet& a, const CellSet& b);
CellSet intersect(const CellSet& a, const CellSet& b);
CellSet minus(const CellSet& a, const CellSet& b);
CellSet sym_diff(const CellSet& a, const CellSet& b);
CellSet complement(const CellSet& a);

/// Area measure space over cell subsets.
MeasureSpace<CellSet> cell_space();

/// Real-valued function of an n-tuple of sets, one measure space per slot.
template <class Set>
struct NArySetFunction {
  std::string name;
  int arity = 0;
  std::function<double(const std::vector<Set>&)> eval;
  std::vector<MeasureSpace<Set>> slot_spaces;

  double operator()(const std::vector<Set>& args) const {
    if (static_cast<int>(args.size()) != arity) throw Error("arity mismatch");
    return eval(args);
  }
};

/// Derivative in one slot with every other slot frozen.
template <class Set>
DerivativeEstimates partial_derivative(const NArySetFunction<Set>& f, int slot,
                                       const std::vector<Set>& tuple,
                                       const SetSequence<Set>& seq,
                                       double exist_tol = 1e-8, int window = 0) {
  if (slot < 0 || slot >= f.arity) throw Error("slot index out of range");
  if (static_cast<int>(tuple.size()) != f.arity) throw Error("arity mismatch");
  SetFunction<Set> frozen{
      f.name + "[slot " + std::to_string(slot) + "]",
      [&f, &tuple, slot](const Set& a) {
        std::vector<Set> args = tuple;
        args[slot] = a;
        return f.eval(args);
      },
      false};
  return derivative_along(frozen, f.slot_spaces[slot], tuple[slot], seq, exist_tol, window);
}

template <class Set>
struct GradientReport {
  std::vector<DerivativeEstimates> components;
  std::vector<std::optional<double>> values;  // empty optional: inconclusive slot
  bool complete = true;
};

/// Componentwise partial derivatives; undefined slots are reported, not fatal.
template <class Set>
GradientReport<Set> gradient(const NArySetFunction<Set>& f, const std::vector<Set>& tuple,
                             const std::vector<SetSequence<Set>>& slot_seqs,
                             double exist_tol = 1e-8) {
  if (static_cast<int>(slot_seqs.size()) != f.arity) {
    throw Error("one sequence per slot required");
  }
  GradientReport<Set> rep;
  for (int i = 0; i < f.arity; ++i) {
    rep.components.push_back(partial_derivative(f, i, tuple, slot_seqs[i], exist_tol));
    rep.values.push_back(rep.components.back().value);
    if (!rep.values.back()) rep.complete = false;
  }
  return rep;
}

struct PartitionMinimalityReport {
  std::vector<double> inner_components;  // one per supplied inner variation
  bool all_nonpositive = true;
  double max_component = 0.0;
  bool premise_checked = false;
};

/// Necessary minimality condition for constrained partitions: for each inner
/// variation (slot i, cells B inside tuple[i]) the admissible move transfers
/// B to the best other slot; the quotient of the objective change over the
/// slot-i measure change (negative) must be <= 0 at a minimizer. When
/// verify_premise is set, random single-cell transfers are scanned first and
/// an improving one throws MinimalityUnverified.
PartitionMinimalityReport check_partition_minimality(const NArySetFunction<CellSet>& f,
                              const std::vector<CellSet>& tuple,
                              const std::vector<std::pair<int, CellSet>>& inner_variations,
                              bool verify_premise = false, int premise_samples = 2000,
                              unsigned seed = 1, double tol = 1e-9);

struct PartitionResult {
  std::vector<int> assignment;  // slot index per cell
  std::vector<CellSet> parts;   // one CellSet per slot
  double objective = 0.0;       // sum over slots of f_i at members times area
};

/// Pointwise argmin partition with the fixed tie-break: slot 1 keeps ties
/// against both, slot 2 keeps ties against slot 3 only, slot 3 keeps none.
PartitionResult partition_argmin(const std::vector<std::function<double(const GridCell&)>>& f,
                                 const DomainPtr& grid);

/// Objective of an arbitrary assignment under the same integrands.
double partition_objective(const std::vector<std::function<double(const GridCell&)>>& f,
                           const DomainPtr& grid, const std::vector<int>& assignment);

/// The partition objective as a ternary set function for derivative checks.
NArySetFunction<CellSet> partition_objective_fn(
    const std::vector<std::function<double(const GridCell&)>>& f, const DomainPtr& grid);

struct ParetoPoint {
  double lambda = 0.0;
  double slope = 0.0;  // boundary ray x2 = slope * x1
  CellSet a;
  double f1_value = 0.0;  // sum of f1 over A
  double f2_value = 0.0;  // sum of f2 over the complement
};

struct ParetoFamily {
  double a = 0.0, b = 0.0;
  DomainPtr domain;
  std::vector<ParetoPoint> points;   // ascending lambda
  bool sector_rendering = true;      // ray union rendered as swept sector
};

/// Example family on the quarter disk: f1 = x1 + x2 over the sector below
/// the lambda ray, f2 = a*x1 - b*x2 over the rest. Lambdas below 1/a are
/// inadmissible.
ParetoFamily pareto_family(double a, double b, std::vector<double> lambdas, double h);

struct ParetoVerifyReport {
  bool monotone_chain = true;  // F1 nondecreasing, F2 nonincreasing in lambda
  bool no_dominance = true;
  std::vector<std::pair<int, int>> violations;  // offending index pairs
  double tolerance = 0.0;                       // 2h in objective units
};

ParetoVerifyReport pareto_verify(const ParetoFamily& family);

struct StationarityReport {
  double max_residual = 0.0;  // max |f1 - lambda*f2| at ray-projected points
  bool holds = false;
  int samples = 0;
  double tolerance = 0.0;
};

/// Necessary condition f1 = lambda*f2 on the boundary ray, evaluated at the
/// projections of boundary-cell centers onto the ray (exact up to rounding).
StationarityReport pareto_stationarity(const ParetoFamily& family, std::size_t index);

struct LagrangeReport {
  double max_residual = 0.0;  // max |dF1/dm + lambda*dF2/dm| at boundary cells
  bool holds = false;
  int samples = 0;
  double tolerance = 0.0;
};

/// Multiplier relation dF1/dm = -lambda*dF2/dm via single-cell symmetric
/// differences at boundary cells. Residuals are evaluated at cell centers,
/// so the tolerance scales with (1 + lambda*(a+b))*h.
LagrangeReport pareto_lagrange_check(const ParetoFamily& family, std::size_t index);

}  // namespace setcalc
