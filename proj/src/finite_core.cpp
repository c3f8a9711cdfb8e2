#include "setcalc/finite_core.hpp"

#include <algorithm>
#include <bit>
#include <limits>
#include <sstream>

namespace setcalc {

namespace {

std::vector<Rational> to_exact(const std::vector<double>& weights) {
  std::vector<Rational> out;
  out.reserve(weights.size());
  for (double w : weights) out.emplace_back(w);
  return out;
}

std::vector<double> to_double_vec(const std::vector<Rational>& weights) {
  std::vector<double> out;
  out.reserve(weights.size());
  for (const Rational& w : weights) out.push_back(to_double(w));
  return out;
}

}  // namespace

FiniteUniverse::FiniteUniverse(std::vector<std::string> elements, std::vector<double> weights)
    : elements_(std::move(elements)),
      weights_(std::move(weights)),
      exact_weights_(to_exact(weights_)) {
  validate();
}

FiniteUniverse::FiniteUniverse(std::vector<std::string> elements, std::vector<Rational> weights)
    : elements_(std::move(elements)),
      weights_(to_double_vec(weights)),
      exact_weights_(std::move(weights)) {
  validate();
}

void FiniteUniverse::validate() const {
  if (elements_.empty()) throw Error("universe must have at least one element");
  if (elements_.size() > kMaxSize) {
    std::ostringstream os;
    os << "universe size " << elements_.size() << " exceeds limit " << kMaxSize;
    throw Error(os.str());
  }
  if (elements_.size() != exact_weights_.size()) {
    throw Error("element/weight count mismatch");
  }
  for (const Rational& w : exact_weights_) {
    if (w <= 0) throw Error("weights must be strictly positive");
  }
  for (std::size_t i = 0; i < elements_.size(); ++i) {
    for (std::size_t j = i + 1; j < elements_.size(); ++j) {
      if (elements_[i] == elements_[j]) {
        throw Error("duplicate element name: " + elements_[i]);
      }
    }
  }
}

double FiniteUniverse::min_weight() const {
  return *std::min_element(weights_.begin(), weights_.end());
}

std::size_t FiniteUniverse::index_of(const std::string& name) const {
  auto it = std::find(elements_.begin(), elements_.end(), name);
  if (it == elements_.end()) throw Error("unknown element: " + name);
  return static_cast<std::size_t>(it - elements_.begin());
}

bool FiniteUniverse::operator==(const FiniteUniverse& other) const {
  return elements_ == other.elements_ && exact_weights_ == other.exact_weights_;
}

UniversePtr make_universe(std::vector<std::string> elements, std::vector<double> weights) {
  return std::make_shared<const FiniteUniverse>(std::move(elements), std::move(weights));
}

UniversePtr make_universe(std::vector<std::string> elements, std::vector<Rational> weights) {
  return std::make_shared<const FiniteUniverse>(std::move(elements), std::move(weights));
}

UniversePtr make_unit_universe(std::size_t n) {
  return make_weighted_universe(std::vector<double>(n, 1.0));
}

UniversePtr make_weighted_universe(std::vector<double> weights) {
  std::vector<std::string> names;
  names.reserve(weights.size());
  for (std::size_t i = 0; i < weights.size(); ++i) names.push_back("w" + std::to_string(i + 1));
  return make_universe(std::move(names), std::move(weights));
}

Subset::Subset(UniversePtr universe, std::uint32_t mask)
    : universe_(std::move(universe)), mask_(mask) {
  if (!universe_) throw Error("subset requires a universe");
  const std::uint32_t valid =
      universe_->size() == 32 ? ~0u : ((1u << universe_->size()) - 1u);
  if (mask_ & ~valid) throw Error("subset mask references elements outside the universe");
}

Subset Subset::empty_set(UniversePtr universe) { return Subset(std::move(universe), 0u); }

Subset Subset::full_set(UniversePtr universe) {
  const std::uint32_t mask = (1u << universe->size()) - 1u;
  return Subset(std::move(universe), mask);
}

Subset Subset::of(UniversePtr universe, std::initializer_list<std::size_t> indices) {
  return of_indices(std::move(universe), std::vector<std::size_t>(indices));
}

Subset Subset::of_indices(UniversePtr universe, const std::vector<std::size_t>& indices) {
  std::uint32_t mask = 0;
  for (std::size_t i : indices) {
    if (i >= universe->size()) throw Error("element index out of range");
    mask |= (1u << i);
  }
  return Subset(std::move(universe), mask);
}

Subset Subset::from_names(UniversePtr universe, const std::vector<std::string>& names) {
  std::uint32_t mask = 0;
  for (const std::string& name : names) mask |= (1u << universe->index_of(name));
  return Subset(std::move(universe), mask);
}

std::size_t Subset::count() const { return static_cast<std::size_t>(std::popcount(mask_)); }

std::vector<std::string> Subset::element_names() const {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < universe_->size(); ++i) {
    if (contains(i)) out.push_back(universe_->element(i));
  }
  return out;
}

bool Subset::operator==(const Subset& other) const {
  if (mask_ != other.mask_) return false;
  if (universe_ == other.universe_) return true;
  return *universe_ == *other.universe_;
}

const UniversePtr& require_same_universe(const Subset& a, const Subset& b) {
  if (a.universe() == b.universe()) return a.universe();
  if (*a.universe() == *b.universe()) return a.universe();
  throw UniverseMismatch("subsets belong to different universes");
}

Subset union_of(const Subset& a, const Subset& b) {
  return Subset(require_same_universe(a, b), a.mask() | b.mask());
}

Subset intersect(const Subset& a, const Subset& b) {
  return Subset(require_same_universe(a, b), a.mask() & b.mask());
}

Subset minus(const Subset& a, const Subset& b) {
  return Subset(require_same_universe(a, b), a.mask() & ~b.mask());
}

Subset sym_diff(const Subset& a, const Subset& b) {
  return Subset(require_same_universe(a, b), a.mask() ^ b.mask());
}

Subset complement(const Subset& a) {
  return sym_diff(Subset::full_set(a.universe()), a);
}

Subset apply_op(const Subset& a, const Subset& b, SetOp op) {
  switch (op) {
    case SetOp::Union: return union_of(a, b);
    case SetOp::Intersect: return intersect(a, b);
    case SetOp::Minus: return minus(a, b);
    case SetOp::SymDiff: return sym_diff(a, b);
  }
  throw Error("unknown set operation");
}

bool is_subset(const Subset& a, const Subset& b) {
  require_same_universe(a, b);
  return (a.mask() & ~b.mask()) == 0;
}

bool disjoint(const Subset& a, const Subset& b) {
  require_same_universe(a, b);
  return (a.mask() & b.mask()) == 0;
}

double measure(const Subset& a) {
  double total = 0.0;
  for (std::size_t i = 0; i < a.universe()->size(); ++i) {
    if (a.contains(i)) total += a.universe()->weight(i);
  }
  return total;
}

Rational measure_exact(const Subset& a) {
  Rational total = 0;
  for (std::size_t i = 0; i < a.universe()->size(); ++i) {
    if (a.contains(i)) total += a.universe()->weight_exact(i);
  }
  return total;
}

double distance(const Subset& a, const Subset& b) { return measure(sym_diff(a, b)); }

Rational distance_exact(const Subset& a, const Subset& b) {
  return measure_exact(sym_diff(a, b));
}

}  // namespace setcalc
