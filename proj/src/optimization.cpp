#include "setcalc/optimization.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <random>

namespace setcalc {

std::shared_ptr<const GridDomain> GridDomain::quarter_disk(double h) {
  if (!(h > 0.0) || h > 1.0) throw Error("grid resolution must lie in (0, 1]");
  auto d = std::make_shared<GridDomain>();
  d->h_ = h;
  d->planar_ = true;
  const int n = static_cast<int>(std::ceil(1.0 / h));
  for (int i = 0; i <= n; ++i) {
    const double c1 = (i + 0.5) * h;
    for (int j = 0; j <= n; ++j) {
      const double c2 = (j + 0.5) * h;
      if (c1 * c1 + c2 * c2 <= 1.0) {
        d->cells_.push_back({c1, c2, h * h});
        d->total_area_ += h * h;
      }
    }
  }
  return d;
}

std::shared_ptr<const GridDomain> GridDomain::segment(double a, double b, int n_cells) {
  if (!(a < b)) throw Error("segment needs a < b");
  if (n_cells < 1) throw Error("segment needs at least one cell");
  auto d = std::make_shared<GridDomain>();
  const double h = (b - a) / n_cells;
  d->h_ = h;
  d->planar_ = false;
  for (int i = 0; i < n_cells; ++i) {
    d->cells_.push_back({a + (i + 0.5) * h, 0.0, h});
    d->total_area_ += h;
  }
  return d;
}

namespace {

std::size_t words_for(std::size_t cells) { return (cells + 63) / 64; }

void require_same_domain(const CellSet& a, const CellSet& b) {
  if (a.domain() != b.domain()) {
    throw UniverseMismatch("cell sets live on different grids");
  }
}

}  // namespace

CellSet::CellSet(DomainPtr d, std::size_t words) : domain_(std::move(d)), bits_(words, 0) {}

CellSet CellSet::empty_set(DomainPtr d) {
  if (!d) throw Error("cell set needs a grid");
  const std::size_t w = words_for(d->size());
  return CellSet(std::move(d), w);
}

CellSet CellSet::full_set(DomainPtr d) {
  CellSet s = empty_set(std::move(d));
  const std::size_t n = s.domain_->size();
  for (std::size_t w = 0; w < s.bits_.size(); ++w) s.bits_[w] = ~std::uint64_t{0};
  if (n % 64 != 0) s.bits_.back() = (std::uint64_t{1} << (n % 64)) - 1;
  return s;
}

CellSet CellSet::of_indices(DomainPtr d, const std::vector<std::size_t>& indices) {
  CellSet s = empty_set(std::move(d));
  for (std::size_t i : indices) {
    if (i >= s.domain_->size()) throw Error("cell index out of range");
    s.bits_[i / 64] |= std::uint64_t{1} << (i % 64);
  }
  return s;
}

bool CellSet::contains(std::size_t i) const {
  return i < domain_->size() && (bits_[i / 64] >> (i % 64)) & 1u;
}

std::size_t CellSet::count() const {
  std::size_t total = 0;
  for (std::uint64_t w : bits_) total += std::popcount(w);
  return total;
}

double CellSet::area() const {
  double total = 0.0;
  const auto& cells = domain_->cells();
  for (std::size_t w = 0; w < bits_.size(); ++w) {
    std::uint64_t word = bits_[w];
    while (word) {
      const int bit = std::countr_zero(word);
      total += cells[w * 64 + bit].area;
      word &= word - 1;
    }
  }
  return total;
}

CellSet CellSet::with(std::size_t i) const {
  if (i >= domain_->size()) throw Error("cell index out of range");
  CellSet s = *this;
  s.bits_[i / 64] |= std::uint64_t{1} << (i % 64);
  return s;
}

CellSet CellSet::without(std::size_t i) const {
  if (i >= domain_->size()) throw Error("cell index out of range");
  CellSet s = *this;
  s.bits_[i / 64] &= ~(std::uint64_t{1} << (i % 64));
  return s;
}

bool CellSet::operator==(const CellSet& o) const {
  return domain_ == o.domain_ && bits_ == o.bits_;
}

CellSet combine(const CellSet& a, const CellSet& b, SetOp op) {
  require_same_domain(a, b);
  CellSet out = a;
  for (std::size_t w = 0; w < out.bits_.size(); ++w) {
    switch (op) {
      case SetOp::Union: out.bits_[w] = a.bits_[w] | b.bits_[w]; break;
      case SetOp::Intersect: out.bits_[w] = a.bits_[w] & b.bits_[w]; break;
      case SetOp::Minus: out.bits_[w] = a.bits_[w] & ~b.bits_[w]; break;
      case SetOp::SymDiff: out.bits_[w] = a.bits_[w] ^ b.bits_[w]; break;
    }
  }
  return out;
}

CellSet union_of(const CellSet& a, const CellSet& b) { return combine(a, b, SetOp::Union); }
CellSet intersect(const CellSet& a, const CellSet& b) {
  return combine(a, b, SetOp::Intersect);
}
CellSet minus(const CellSet& a, const CellSet& b) { return combine(a, b, SetOp::Minus); }
CellSet sym_diff(const CellSet& a, const CellSet& b) {
  return combine(a, b, SetOp::SymDiff);
}
CellSet complement(const CellSet& a) {
  return sym_diff(a, CellSet::full_set(a.domain()));
}

MeasureSpace<CellSet> cell_space() {
  MeasureSpace<CellSet> sp;
  sp.measure = [](const CellSet& s) { return s.area(); };
  sp.sym_diff = [](const CellSet& a, const CellSet& b) { return sym_diff(a, b); };
  sp.combine = [](const CellSet& a, const CellSet& b, SetOp op) { return combine(a, b, op); };
  sp.equal = [](const CellSet& a, const CellSet& b) { return a == b; };
  return sp;
}

PartitionMinimalityReport check_partition_minimality(const NArySetFunction<CellSet>& f,
                              const std::vector<CellSet>& tuple,
                              const std::vector<std::pair<int, CellSet>>& inner_variations,
                              bool verify_premise, int premise_samples, unsigned seed,
                              double tol) {
  if (static_cast<int>(tuple.size()) != f.arity) throw Error("arity mismatch");
  const double f0 = f(tuple);

  // The admissible inner move for (slot i, B inside tuple[i]): remove B from
  // slot i and hand it to whichever other slot hurts the objective least.
  auto best_transfer = [&](int slot, const CellSet& b) {
    double best = std::numeric_limits<double>::infinity();
    for (int j = 0; j < f.arity; ++j) {
      if (j == slot) continue;
      std::vector<CellSet> moved = tuple;
      moved[slot] = minus(tuple[slot], b);
      moved[j] = union_of(tuple[j], b);
      best = std::min(best, f(moved));
    }
    return best;
  };

  if (verify_premise) {
    std::mt19937 gen(seed);
    const std::size_t n_cells = tuple.empty() ? 0 : tuple[0].domain()->size();
    std::uniform_int_distribution<std::size_t> pick(0, n_cells ? n_cells - 1 : 0);
    for (int s = 0; s < premise_samples; ++s) {
      const std::size_t cell = pick(gen);
      for (int slot = 0; slot < f.arity; ++slot) {
        if (!tuple[slot].contains(cell)) continue;
        const CellSet b = CellSet::of_indices(tuple[slot].domain(), {cell});
        if (best_transfer(slot, b) < f0 - 1e-12) {
          throw MinimalityUnverified("a sampled cell transfer improves the objective");
        }
      }
    }
  }

  PartitionMinimalityReport rep;
  rep.premise_checked = verify_premise;
  rep.max_component = -std::numeric_limits<double>::infinity();
  for (const auto& [slot, b] : inner_variations) {
    if (slot < 0 || slot >= f.arity) throw Error("slot index out of range");
    const CellSet inner = intersect(b, tuple[slot]);
    if (inner.empty()) throw Error("inner variation must intersect its slot");
    const double dm = -f.slot_spaces[slot].measure(inner);  // slot measure shrinks
    if (dm == 0.0) throw ZeroDenominator("inner variation has zero measure");
    const double quotient = (best_transfer(slot, inner) - f0) / dm;
    rep.inner_components.push_back(quotient);
    rep.max_component = std::max(rep.max_component, quotient);
    if (quotient > tol) rep.all_nonpositive = false;
  }
  return rep;
}

PartitionResult partition_argmin(
    const std::vector<std::function<double(const GridCell&)>>& f, const DomainPtr& grid) {
  if (f.size() != 3) throw Error("the partition optimizer takes exactly three integrands");
  PartitionResult res;
  const auto& cells = grid->cells();
  res.assignment.resize(cells.size());
  std::array<std::vector<std::size_t>, 3> members;
  for (std::size_t c = 0; c < cells.size(); ++c) {
    const double v1 = f[0](cells[c]), v2 = f[1](cells[c]), v3 = f[2](cells[c]);
    int slot;
    if (v1 <= v2 && v1 <= v3) {
      slot = 0;  // slot 1 keeps all ties
    } else if (v2 <= v3) {
      slot = 1;  // here v2 < v1; slot 2 keeps the tie against slot 3
    } else {
      slot = 2;  // strictly least
    }
    res.assignment[c] = slot;
    members[slot].push_back(c);
    res.objective += f[slot](cells[c]) * cells[c].area;
  }
  for (int s = 0; s < 3; ++s) res.parts.push_back(CellSet::of_indices(grid, members[s]));
  return res;
}

double partition_objective(const std::vector<std::function<double(const GridCell&)>>& f,
                           const DomainPtr& grid, const std::vector<int>& assignment) {
  if (assignment.size() != grid->size()) throw Error("one slot per cell required");
  const auto& cells = grid->cells();
  double total = 0.0;
  for (std::size_t c = 0; c < cells.size(); ++c) {
    const int slot = assignment[c];
    if (slot < 0 || slot >= static_cast<int>(f.size())) throw Error("slot out of range");
    total += f[slot](cells[c]) * cells[c].area;
  }
  return total;
}

NArySetFunction<CellSet> partition_objective_fn(
    const std::vector<std::function<double(const GridCell&)>>& f, const DomainPtr& grid) {
  NArySetFunction<CellSet> nf;
  nf.name = "partition_objective";
  nf.arity = static_cast<int>(f.size());
  nf.slot_spaces.assign(nf.arity, cell_space());
  nf.eval = [f, grid](const std::vector<CellSet>& parts) {
    const auto& cells = grid->cells();
    double total = 0.0;
    for (std::size_t s = 0; s < parts.size(); ++s) {
      for (std::size_t c = 0; c < cells.size(); ++c) {
        if (parts[s].contains(c)) total += f[s](cells[c]) * cells[c].area;
      }
    }
    return total;
  };
  return nf;
}

namespace {

double pareto_slope(double a, double b, double lambda) {
  return (lambda * a - 1.0) / (lambda * b + 1.0);
}

double f1_example(const GridCell& c) { return c.x1 + c.x2; }

}  // namespace

ParetoFamily pareto_family(double a, double b, std::vector<double> lambdas, double h) {
  if (!(a > 0.0) || !(b > 0.0)) throw Error("pareto family needs positive a and b");
  if (lambdas.empty()) throw Error("pareto family needs at least one lambda");
  for (double l : lambdas) {
    if (l * a - 1.0 < -1e-12) {
      throw Error("lambda below 1/a is inadmissible (negative boundary slope)");
    }
  }
  std::sort(lambdas.begin(), lambdas.end());

  ParetoFamily fam;
  fam.a = a;
  fam.b = b;
  fam.domain = GridDomain::quarter_disk(h);
  const auto& cells = fam.domain->cells();

  for (double lambda : lambdas) {
    const double slope = std::max(0.0, pareto_slope(a, b, lambda));
    std::vector<std::size_t> sector;
    double fa = 0.0, fc = 0.0;
    for (std::size_t c = 0; c < cells.size(); ++c) {
      const auto& cell = cells[c];
      if (cell.x2 <= slope * cell.x1) {
        sector.push_back(c);
        fa += f1_example(cell) * cell.area;
      } else {
        fc += (a * cell.x1 - b * cell.x2) * cell.area;
      }
    }
    fam.points.push_back(
        ParetoPoint{lambda, slope, CellSet::of_indices(fam.domain, sector), fa, fc});
  }
  return fam;
}

ParetoVerifyReport pareto_verify(const ParetoFamily& family) {
  if (family.points.empty()) throw Error("empty pareto family");
  ParetoVerifyReport rep;
  rep.tolerance = 2.0 * family.domain->resolution();
  const auto& pts = family.points;
  for (std::size_t i = 1; i < pts.size(); ++i) {
    // Along ascending lambda the sector grows: F1 must not drop and F2 must
    // not rise beyond the grid tolerance.
    if (pts[i].f1_value < pts[i - 1].f1_value - rep.tolerance ||
        pts[i].f2_value > pts[i - 1].f2_value + rep.tolerance) {
      rep.monotone_chain = false;
      rep.violations.emplace_back(int(i - 1), int(i));
    }
  }
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = 0; j < pts.size(); ++j) {
      if (i == j) continue;
      // i strictly better in both objectives means j is dominated.
      if (pts[i].f1_value > pts[j].f1_value + rep.tolerance &&
          pts[i].f2_value > pts[j].f2_value + rep.tolerance) {
        rep.no_dominance = false;
        rep.violations.emplace_back(int(i), int(j));
      }
    }
  }
  return rep;
}

namespace {

// Cells of the sector whose center lies within one cell width of the
// boundary ray — the sampling support for the two boundary conditions.
std::vector<std::size_t> boundary_cells(const ParetoFamily& fam, const ParetoPoint& p) {
  const double h = fam.domain->resolution();
  const auto& cells = fam.domain->cells();
  std::vector<std::size_t> out;
  for (std::size_t c = 0; c < cells.size(); ++c) {
    if (!p.a.contains(c)) continue;
    if (p.slope * cells[c].x1 - cells[c].x2 <= h) out.push_back(c);
  }
  return out;
}

}  // namespace

StationarityReport pareto_stationarity(const ParetoFamily& family, std::size_t index) {
  if (index >= family.points.size()) throw Error("pareto point index out of range");
  const ParetoPoint& p = family.points[index];
  StationarityReport rep;
  rep.tolerance = 2.0 * family.domain->resolution();
  const auto& cells = family.domain->cells();
  for (std::size_t c : boundary_cells(family, p)) {
    // Project the center onto the ray (vertically) and evaluate there; the
    // identity f1 = lambda*f2 is exact on the ray.
    const double x1 = cells[c].x1;
    const double x2 = p.slope * x1;
    const double f1 = x1 + x2;
    const double f2 = family.a * x1 - family.b * x2;
    rep.max_residual = std::max(rep.max_residual, std::abs(f1 - p.lambda * f2));
    ++rep.samples;
  }
  rep.holds = rep.max_residual <= rep.tolerance;
  return rep;
}

LagrangeReport pareto_lagrange_check(const ParetoFamily& family, std::size_t index) {
  if (index >= family.points.size()) throw Error("pareto point index out of range");
  const ParetoPoint& p = family.points[index];
  const auto sp = cell_space();
  const auto& cells = family.domain->cells();
  const double a = family.a, b = family.b;

  SetFunction<CellSet> f1_fn{"F1",
                             [&cells](const CellSet& s) {
                               double total = 0.0;
                               for (std::size_t c = 0; c < cells.size(); ++c) {
                                 if (s.contains(c)) total += f1_example(cells[c]) * cells[c].area;
                               }
                               return total;
                             },
                             true};
  SetFunction<CellSet> f2_fn{"F2",
                             [&cells, a, b](const CellSet& s) {
                               double total = 0.0;
                               for (std::size_t c = 0; c < cells.size(); ++c) {
                                 if (!s.contains(c)) {
                                   total += (a * cells[c].x1 - b * cells[c].x2) *
                                            cells[c].area;
                                 }
                               }
                               return total;
                             },
                             true};

  LagrangeReport rep;
  const double h = family.domain->resolution();
  rep.tolerance = (1.0 + p.lambda * (a + b)) * h;  // center-vs-ray offset bound
  for (std::size_t c : boundary_cells(family, p)) {
    const CellSet single = CellSet::of_indices(family.domain, {c});
    const double d1 = difference_quotient(f1_fn, sp, p.a, single);
    const double d2 = difference_quotient(f2_fn, sp, p.a, single);
    rep.max_residual = std::max(rep.max_residual, std::abs(d1 + p.lambda * d2));
    ++rep.samples;
  }
  rep.holds = rep.max_residual <= rep.tolerance;
  return rep;
}

}  // namespace setcalc
