#pragma once

#include <functional>

#include "setcalc/finite_core.hpp"
#include "setcalc/hybrid_measure.hpp"

namespace setcalc {

/// The minimal interface the convergence and calculus machinery needs from a
/// set model: a measure, the symmetric difference, general boolean
/// combination, and equality. Instantiated for finite-universe subsets,
/// hybrid sets, and grid-cell sets.
template <class Set>
struct MeasureSpace {
  std::function<double(const Set&)> measure;
  std::function<Set(const Set&, const Set&)> sym_diff;
  std::function<Set(const Set&, const Set&, SetOp)> combine;
  std::function<bool(const Set&, const Set&)> equal;

  double distance(const Set& a, const Set& b) const { return measure(sym_diff(a, b)); }
};

inline MeasureSpace<Subset> finite_space() {
  MeasureSpace<Subset> sp;
  sp.measure = [](const Subset& a) { return measure(a); };
  sp.sym_diff = [](const Subset& a, const Subset& b) { return sym_diff(a, b); };
  sp.combine = [](const Subset& a, const Subset& b, SetOp op) { return apply_op(a, b, op); };
  sp.equal = [](const Subset& a, const Subset& b) { return a == b; };
  return sp;
}

inline MeasureSpace<HybridSet> hybrid_space(MeasureConfig cfg, MeasureMode mode) {
  cfg.validate();
  MeasureSpace<HybridSet> sp;
  sp.measure = [cfg, mode](const HybridSet& a) { return measure_hybrid(a, cfg, mode); };
  sp.sym_diff = [](const HybridSet& a, const HybridSet& b) { return sym_diff_hybrid(a, b); };
  sp.combine = [](const HybridSet& a, const HybridSet& b, SetOp op) {
    return combine(a, b, op);
  };
  sp.equal = [](const HybridSet& a, const HybridSet& b) { return a == b; };
  return sp;
}

}  // namespace setcalc
