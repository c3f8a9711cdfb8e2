#pragma once

#include <cstdint>
#include <initializer_list>
#include <memory>
#include <string>
#include <vector>

#include "setcalc/errors.hpp"
#include "setcalc/rational.hpp"
#include "setcalc/set_ops.hpp"

namespace setcalc {

/// Ordered finite ground set with one strictly positive weight per element.
/// The weight function is what turns subset cardinality into a measure; with
/// mixed-sign weights a nonempty set could have measure zero, so positivity
/// is enforced at construction.
///
/// Immutable after construction; universes are shared via UniversePtr so that
/// subsets stay valid for as long as any of them is alive.
class FiniteUniverse {
 public:
  /// Hard cap so exhaustive 2^n subset enumeration stays tractable.
  static constexpr std::size_t kMaxSize = 24;

  FiniteUniverse(std::vector<std::string> elements, std::vector<double> weights);
  FiniteUniverse(std::vector<std::string> elements, std::vector<Rational> weights);

  std::size_t size() const { return elements_.size(); }
  const std::vector<std::string>& elements() const { return elements_; }
  const std::string& element(std::size_t i) const { return elements_[i]; }
  double weight(std::size_t i) const { return weights_[i]; }
  const Rational& weight_exact(std::size_t i) const { return exact_weights_[i]; }
  double min_weight() const;

  /// Index of a named element; throws Error on unknown names.
  std::size_t index_of(const std::string& name) const;

  bool operator==(const FiniteUniverse& other) const;

 private:
  void validate() const;

  std::vector<std::string> elements_;
  std::vector<double> weights_;
  std::vector<Rational> exact_weights_;
};

using UniversePtr = std::shared_ptr<const FiniteUniverse>;

UniversePtr make_universe(std::vector<std::string> elements, std::vector<double> weights);
UniversePtr make_universe(std::vector<std::string> elements, std::vector<Rational> weights);
/// Universe {w1..wn} with H == 1.
UniversePtr make_unit_universe(std::size_t n);
/// Universe {w1..wn} with the given weights.
UniversePtr make_weighted_universe(std::vector<double> weights);

/// Subset of a finite universe, stored as a membership mask over the
/// universe's element order. Value type: cheap to copy, immutable.
class Subset {
 public:
  Subset(UniversePtr universe, std::uint32_t mask);

  static Subset empty_set(UniversePtr universe);
  static Subset full_set(UniversePtr universe);
  static Subset of(UniversePtr universe, std::initializer_list<std::size_t> indices);
  static Subset of_indices(UniversePtr universe, const std::vector<std::size_t>& indices);
  static Subset from_names(UniversePtr universe, const std::vector<std::string>& names);

  const UniversePtr& universe() const { return universe_; }
  std::uint32_t mask() const { return mask_; }
  bool contains(std::size_t i) const { return (mask_ >> i) & 1u; }
  std::size_t count() const;
  bool empty() const { return mask_ == 0; }

  /// Member element names in universe order (the serialized form).
  std::vector<std::string> element_names() const;

  /// Equal iff the universes have equal content and the masks coincide.
  bool operator==(const Subset& other) const;
  bool operator!=(const Subset& other) const { return !(*this == other); }

 private:
  UniversePtr universe_;
  std::uint32_t mask_;
};

/// Throws UniverseMismatch unless both subsets live over the same universe
/// (same object or equal content). Returns the common universe.
const UniversePtr& require_same_universe(const Subset& a, const Subset& b);

Subset union_of(const Subset& a, const Subset& b);
Subset intersect(const Subset& a, const Subset& b);
Subset minus(const Subset& a, const Subset& b);
Subset sym_diff(const Subset& a, const Subset& b);
Subset complement(const Subset& a);
Subset apply_op(const Subset& a, const Subset& b, SetOp op);
bool is_subset(const Subset& a, const Subset& b);
bool disjoint(const Subset& a, const Subset& b);

/// The atomic measure: 0 on the empty set, otherwise the sum of member
/// weights.
double measure(const Subset& a);
Rational measure_exact(const Subset& a);

/// Symmetric-difference distance rho(A,B) = m(A delta B).
double distance(const Subset& a, const Subset& b);
Rational distance_exact(const Subset& a, const Subset& b);

}  // namespace setcalc
