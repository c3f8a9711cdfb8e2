// Acceptance gate: one binary, one printed line per criterion. Each criterion
// owns its tolerances and its time budget; the gate fails on any violated
// check or busted budget. Expectations are re-derived inside this file from
// integer/rational mirrors or closed forms, never from the library under test.

#include <algorithm>
#include <array>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

#include "setcalc/calculus.hpp"
#include "setcalc/convergence.hpp"
#include "setcalc/finite_core.hpp"
#include "setcalc/hybrid_measure.hpp"
#include "setcalc/integration.hpp"
#include "setcalc/interval_set.hpp"
#include "setcalc/measure_space.hpp"
#include "setcalc/optimization.hpp"
#include "setcalc/symmetric_decomp.hpp"

using namespace setcalc;

namespace {

struct Outcome {
  bool pass = false;
  std::string note;  // stats when passing, first offending instance when not
};

Outcome ok(std::string note) { return {true, std::move(note)}; }
Outcome bad(std::string note) { return {false, std::move(note)}; }

std::vector<std::string> element_names(int n) {
  std::vector<std::string> names(n);
  for (int i = 0; i < n; ++i) names[i] = "e" + std::to_string(i + 1);
  return names;
}

// ---- 1. measure axioms --------------------------------------------------
//
// p1 (vanishing only at the empty set) and p2 (modular additivity
// m(AuB) + m(AnB) = m(A) + m(B), which is the inclusion-exclusion form and
// implies additivity on disjoint pairs) are checked for every ordered pair of
// subsets. Weights are dyadic rationals num/64, so an int64 mirror of
// 64*m(A) carries the exact arithmetic; the library's exact measure is then
// pinned to the mirror on every single subset, which transfers the exhaustive
// pair verification to the library itself.
Outcome c01_measure_axioms() {
  std::mt19937 rng(101);
  long long pair_checks = 0;
  for (int n : {4, 6, 8, 10, 11, 12}) {
    const std::uint32_t full = 1u << n;
    std::vector<long long> num(n);
    std::vector<Rational> wr(n);
    for (int i = 0; i < n; ++i) {
      num[i] = 1 + static_cast<long long>(rng() % 9999);
      wr[i] = Rational(num[i]) / 64;
    }
    auto u = make_universe(element_names(n), wr);

    std::vector<long long> m64(full, 0);
    for (std::uint32_t mask = 1; mask < full; ++mask) {
      m64[mask] = m64[mask & (mask - 1)] + num[std::countr_zero(mask)];
    }
    for (std::uint32_t mask = 0; mask < full; ++mask) {
      if (measure_exact(Subset(u, mask)) * 64 != Rational(m64[mask])) {
        return bad("exact measure deviates from the integer mirror at n=" + std::to_string(n) +
                   " mask=" + std::to_string(mask));
      }
    }

    if (m64[0] != 0) return bad("p1: m(empty) != 0");
    for (std::uint32_t mask = 1; mask < full; ++mask) {
      if (m64[mask] <= 0) return bad("p1: nonempty set with nonpositive measure");
    }
    for (std::uint32_t a = 0; a < full; ++a) {
      const long long ma = m64[a];
      for (std::uint32_t b = 0; b < full; ++b) {
        if (m64[a | b] + m64[a & b] != ma + m64[b]) {
          return bad("p2 violated at n=" + std::to_string(n) + " a=" + std::to_string(a) +
                     " b=" + std::to_string(b));
        }
      }
    }
    pair_checks += static_cast<long long>(full) * full;

    for (int t = 0; t < 2000; ++t) {  // the same identity through the library's rational path
      Subset a(u, rng() % full), b(u, rng() % full);
      if (measure_exact(union_of(a, b)) + measure_exact(intersect(a, b)) !=
          measure_exact(a) + measure_exact(b)) {
        return bad("library p2 identity failed in exact arithmetic");
      }
    }
  }
  std::ostringstream note;
  note << pair_checks << " ordered pairs across 6 universes, all exact";
  return ok(note.str());
}

// ---- 2. metric axioms ---------------------------------------------------
//
// Identity, symmetry and the triangle inequality for rho(A,B) = m(A delta B).
// Integer weights keep every double sum exact, so "zero violations" is a
// statement about real arithmetic, not rounding.
Outcome c02_metric_axioms() {
  std::mt19937 rng(202);
  const int n = 8;
  const std::uint32_t full = 1u << n;
  std::vector<double> w(n);
  for (int i = 0; i < n; ++i) w[i] = 1.0 + static_cast<double>(rng() % 99);
  auto u = make_weighted_universe(w);

  std::vector<double> ws(full, 0.0);
  for (std::uint32_t mask = 1; mask < full; ++mask) {
    ws[mask] = ws[mask & (mask - 1)] + w[std::countr_zero(mask)];
  }
  for (std::uint32_t a = 0; a < full; ++a) {
    for (std::uint32_t b = 0; b < full; ++b) {
      const double d = distance(Subset(u, a), Subset(u, b));
      if (d != ws[a ^ b]) return bad("library distance deviates from the mirror");
      if ((d == 0.0) != (a == b)) return bad("identity axiom violated");
      if (d != distance(Subset(u, b), Subset(u, a))) return bad("symmetry violated");
    }
  }
  long long triples = 0;
  for (std::uint32_t a = 0; a < full; ++a) {
    for (std::uint32_t b = 0; b < full; ++b) {
      const double dab = ws[a ^ b];
      for (std::uint32_t c = 0; c < full; ++c) {
        if (ws[a ^ c] > dab + ws[b ^ c]) {
          return bad("triangle inequality violated in the exhaustive scan");
        }
      }
      triples += full;
    }
  }

  const int n2 = 20;
  const std::uint32_t full2 = 1u << n2;
  std::vector<double> w2(n2);
  for (int i = 0; i < n2; ++i) w2[i] = 1.0 + static_cast<double>(rng() % 999);
  auto u2 = make_weighted_universe(w2);
  for (int t = 0; t < 100000; ++t) {
    const std::uint32_t a = rng() % full2, b = rng() % full2, c = rng() % full2;
    Subset A(u2, a), B(u2, b), C(u2, c);
    const double dab = distance(A, B), dbc = distance(B, C), dac = distance(A, C);
    if ((dab == 0.0) != (a == b)) return bad("identity axiom violated on a random triple");
    if (dab != distance(B, A)) return bad("symmetry violated on a random triple");
    if (dac > dab + dbc) return bad("triangle inequality violated on a random triple");
  }
  std::ostringstream note;
  note << triples << " exhaustive triples (n=8) + 100000 random triples (n=20), 0 violations";
  return ok(note.str());
}

// ---- 3. the two limit notions agree -------------------------------------
Outcome c03_limit_agreement() {
  std::mt19937 rng(303);
  const int n = 10;
  const std::uint32_t full = 1u << n;
  std::vector<double> w(n);
  for (int i = 0; i < n; ++i) w[i] = 1.0 + static_cast<double>(rng() % 9);
  auto u = make_weighted_universe(w);
  auto sp = finite_space();
  auto sub = [&](std::uint32_t m) { return Subset(u, m); };

  int ran = 0;
  auto expect_limit = [&](const SetSequence<Subset>& seq,
                          std::uint32_t limit_mask) -> std::optional<std::string> {
    auto rep = check_limit_agreement(seq, sp);
    if (rep.inconclusive) return "inconclusive verdict on a constructed sequence";
    if (!rep.agree) return "existence of the two limit notions disagrees";
    if (!rep.borel.limit_exists()) return "constructed convergent sequence found no limit";
    if (rep.borel.lower.mask() != limit_mask) return "limit differs from the construction";
    ++ran;
    return std::nullopt;
  };

  for (int i = 0; i < 13; ++i) {
    const std::uint32_t b = rng() % full;
    if (auto err = expect_limit(constant_sequence(sub(b), 64), b)) return bad(*err);
  }
  for (int i = 0; i < 13; ++i) {
    const std::uint32_t head = rng() % full, tail = rng() % full;
    // The truncated scans cut at horizon - 2*window = 32, so the sequence has
    // to settle by then for the horizon to certify anything.
    const int sw = 2 + static_cast<int>(rng() % 31);
    if (auto err = expect_limit(eventually_constant_sequence(sub(head), sub(tail), sw, 64),
                                tail)) {
      return bad(*err);
    }
  }
  for (int i = 0; i < 12; ++i) {
    const std::uint32_t a = rng() % full;
    std::uint32_t b = rng() % full;
    while (b == a) b = rng() % full;
    auto rep = check_limit_agreement(alternating_sequence(sub(a), sub(b), 64), sp);
    if (rep.inconclusive) return bad("alternating sequence judged inconclusive");
    if (!rep.agree) return bad("alternating sequence: existence verdicts disagree");
    if (rep.borel.limit_exists()) return bad("alternating pair of distinct sets got a limit");
    ++ran;
  }
  for (int i = 0; i < 12; ++i) {
    const std::uint32_t base = rng() % full;
    const std::uint32_t extra = 1 + rng() % (full - 1);
    const int drop = 2 + static_cast<int>(rng() % 30);
    if (auto err = expect_limit(shrinking_tail_sequence(sub(base), sub(extra), sp, drop, 64),
                                base)) {
      return bad(*err);
    }
  }
  return ok(std::to_string(ran) + "/50 sequences: existence agreement and exact limit match");
}

// ---- 4. operations commute with limits ----------------------------------
Outcome c04_op_commutation() {
  std::mt19937 rng(404);
  const int n = 12;
  const std::uint32_t full = 1u << n;
  std::vector<double> w(n);
  for (int i = 0; i < n; ++i) w[i] = 1.0 + static_cast<double>(rng() % 9);
  auto u = make_weighted_universe(w);
  auto sp = finite_space();

  const SetOp ops[] = {SetOp::Union, SetOp::Intersect, SetOp::Minus, SetOp::SymDiff};
  int checks = 0;
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const std::uint32_t head = rng() % full, tail = rng() % full, a = rng() % full;
    const int sw = 2 + static_cast<int>(rng() % 31);
    auto seq =
        eventually_constant_sequence(Subset(u, head), Subset(u, tail), sw, 64);
    for (SetOp op : ops) {
      auto rep = limit_op_commutes(seq, Subset(u, tail), Subset(u, a), op, sp);
      if (rep.verdict != Verdict::Converged) {
        return bad(std::string("transformed sequence failed to converge under ") +
                   to_string(op));
      }
      if (!(rep.max_tail_residual < 1e-12)) return bad("tail residual above 1e-12");
      if (!rep.bound_holds) return bad("contraction bound m((Bn*A)d(B*A)) <= m(Bn d B) failed");
      worst = std::max(worst, rep.max_tail_residual);
      ++checks;
    }
  }
  std::ostringstream note;
  note << checks << " sequence/op pairs, max tail residual " << worst;
  return ok(note.str());
}

// ---- 5. differentiation rules -------------------------------------------
Outcome c05_derivative_rules() {
  std::mt19937 rng(505);
  const int n = 10;
  const std::uint32_t full = 1u << n;
  std::uniform_real_distribution<double> wd(0.5, 2.5), vd(-2.0, 2.0), cd(-5.0, 5.0);
  std::vector<double> w(n), v1(n), v2(n);
  for (int i = 0; i < n; ++i) {
    w[i] = wd(rng);
    v1[i] = vd(rng);
    v2[i] = vd(rng);
  }
  auto u = make_weighted_universe(w);
  auto sp = finite_space();
  std::vector<SetFunction<Subset>> pool = {sf_measure(sp), sf_measure_squared(sp),
                                           sf_linear_sum(v1), sf_linear_sum(v2)};

  auto draw_pair = [&](Subset& a, Subset& b) {
    for (int tries = 0; tries < 1000; ++tries) {
      a = Subset(u, rng() % full);
      b = Subset(u, rng() % full);
      const double dm = measure(sym_diff(a, b)) - measure(a);
      if (std::abs(dm) > 1e-3) return true;
    }
    return false;
  };

  for (int t = 0; t < 1000; ++t) {
    Subset a = Subset::empty_set(u), b = Subset::empty_set(u);
    if (!draw_pair(a, b)) return bad("could not draw an admissible (A,B) pair");
    const auto& f1 = pool[rng() % pool.size()];
    const auto& f2 = pool[rng() % pool.size()];
    const double c = cd(rng);
    if (!rule1_check(sf_constant<Subset>(c), sp, a, b).agree) {
      return bad("constant rule failed at instance " + std::to_string(t));
    }
    if (!rule2_check(c, f1, sp, a, b).agree) {
      return bad("scalar rule failed at instance " + std::to_string(t));
    }
    if (!rule3_check(f1, f2, sp, a, b).agree) {
      return bad("sum rule failed at instance " + std::to_string(t));
    }
    if (!rule4_check(f1, f2, sp, a, b).agree) {
      return bad("product rule failed at instance " + std::to_string(t));
    }
    const double shift = 1.0 + 2.0 * std::abs(cd(rng));
    SetFunction<Subset> denom{"m_shift",
                              [msp = sp.measure, shift](const Subset& s) {
                                return msp(s) + shift;
                              },
                              true};
    if (!rule5_check(f1, denom, sp, a, b).agree) {
      return bad("quotient rule failed at instance " + std::to_string(t));
    }
  }

  const SmoothFn phis[] = {
      {"square", [](double x) { return x * x; }, [](double x) { return 2.0 * x; }},
      {"cube", [](double x) { return x * x * x; }, [](double x) { return 3.0 * x * x; }},
      {"exp40", [](double x) { return std::exp(x / 40.0); },
       [](double x) { return std::exp(x / 40.0) / 40.0; }},
      {"atan", [](double x) { return std::atan(x); },
       [](double x) { return 1.0 / (1.0 + x * x); }},
  };
  int witnesses = 0;
  for (int t = 0; t < 150; ++t) {
    Subset a = Subset::empty_set(u), b = Subset::empty_set(u);
    if (!draw_pair(a, b)) return bad("could not draw an admissible (A,B) pair");
    const auto& phi = phis[rng() % 4];
    const auto& f = pool[rng() % pool.size()];
    try {
      auto r = rule6_check(phi, f, sp, a, b);  // default witness tolerance 1e-6
      if (!r.agree || !(r.theta >= 0.0 && r.theta <= 1.0)) {
        return bad("chain rule witness out of range at instance " + std::to_string(t));
      }
      ++witnesses;
    } catch (const NoWitness&) {
      return bad("no chain-rule witness within 1e-6 at instance " + std::to_string(t));
    }
  }
  std::ostringstream note;
  note << "1000 instances x rules 1-5 at 1e-10 relative; " << witnesses
       << "/150 chain-rule witnesses at 1e-6";
  return ok(note.str());
}

// ---- 6. necessary condition at a minimizer ------------------------------
Outcome c06_minimizer_condition() {
  std::mt19937 rng(606);

  // Finite case: F(A) = m(A delta E0) is uniquely minimized at E0. Inner
  // directions (limits inside E0) must have derivative <= tol, outer
  // directions >= -tol; here they are exactly -1 and +1.
  const int n = 10;
  const std::uint32_t full = 1u << n;
  std::vector<double> w(n);
  for (int i = 0; i < n; ++i) w[i] = 1.0 + static_cast<double>(rng() % 9);
  auto u = make_weighted_universe(w);
  auto sp = finite_space();
  const std::uint32_t e0_mask = 1 + rng() % (full - 2);
  Subset e0(u, e0_mask);
  auto f = sf_distance_to(sp, e0);

  std::vector<Subset> candidates;
  candidates.reserve(full);
  for (std::uint32_t mask = 0; mask < full; ++mask) candidates.emplace_back(u, mask);

  auto submask = [&](std::uint32_t m) {
    while (true) {
      const std::uint32_t r = rng() & m;
      if (r) return r;
    }
  };
  std::vector<SetSequence<Subset>> inner, outer;
  const std::uint32_t co_mask = ~e0_mask & (full - 1);
  for (int i = 0; i < n; ++i) {
    auto single = constant_sequence(Subset(u, 1u << i), 32);
    ((e0_mask >> i) & 1u ? inner : outer).push_back(single);
  }
  for (int t = 0; t < 4; ++t) {
    inner.push_back(constant_sequence(Subset(u, submask(e0_mask)), 32));
    outer.push_back(constant_sequence(Subset(u, submask(co_mask)), 32));
  }
  auto rep = check_min_necessary(f, sp, e0, candidates, inner, outer, 1e-9);
  if (!rep.minimality_verified) return bad("finite-case premise scan failed");
  const double max_inner =
      *std::max_element(rep.inner_derivatives.begin(), rep.inner_derivatives.end());
  const double min_outer =
      *std::min_element(rep.outer_derivatives.begin(), rep.outer_derivatives.end());
  if (!rep.inner_nonpositive || !(max_inner <= 1e-9)) {
    return bad("finite case: inner derivative above 1e-9");
  }
  if (!rep.outer_nonnegative || !(min_outer >= -1e-9)) {
    return bad("finite case: outer derivative below -1e-9");
  }

  // Grid case: the three-way partition objective at its pointwise argmin.
  auto grid = GridDomain::quarter_disk(0.05);
  std::vector<std::function<double(const GridCell&)>> trio = {
      [](const GridCell& c) { return c.x1 + c.x2; },
      [](const GridCell& c) { return (c.x1 - 1.0) * (c.x1 - 1.0) + c.x2 * c.x2; },
      [](const GridCell& c) { return c.x1 * c.x1 + (c.x2 - 1.0) * (c.x2 - 1.0); },
  };
  auto opt = partition_argmin(trio, grid);
  auto F = partition_objective_fn(trio, grid);
  const std::size_t n_cells = grid->size();

  std::array<std::vector<std::size_t>, 3> members;
  for (std::size_t c = 0; c < n_cells; ++c) {
    members[static_cast<std::size_t>(opt.assignment[c])].push_back(c);
  }
  std::vector<std::pair<int, CellSet>> vars;
  for (int s = 0; s < 3; ++s) {
    const auto& ms = members[s];
    if (ms.empty()) return bad("argmin left slot " + std::to_string(s + 1) + " empty");
    vars.push_back({s, CellSet::of_indices(grid, {ms.front()})});
    vars.push_back({s, CellSet::of_indices(grid, {ms.back()})});
    vars.push_back({s, CellSet::of_indices(grid, {ms[rng() % ms.size()]})});
    vars.push_back({s, CellSet::of_indices(grid, {ms.front(), ms[ms.size() / 2]})});
  }
  PartitionMinimalityReport grep;
  try {
    grep = check_partition_minimality(F, opt.parts, vars, /*verify_premise=*/true, 4000, 7);
  } catch (const MinimalityUnverified&) {
    return bad("premise scan found an improving transfer at the argmin");
  }
  if (!grep.premise_checked) return bad("grid premise scan did not run");
  if (!grep.all_nonpositive || !(grep.max_component <= 1e-9)) {
    return bad("grid case: inner component above 1e-9");
  }

  // Outer directions on the grid: adjoining a foreign cell to a slot adds
  // f_slot there, and the trio is nonnegative, so the quotient must be >= 0.
  int outer_checked = 0;
  for (int t = 0; t < 24; ++t) {
    const std::size_t ci = rng() % n_cells;
    const int owner = opt.assignment[ci];
    for (int s = 0; s < 3; ++s) {
      if (s == owner) continue;
      auto est = partial_derivative(F, s, opt.parts,
                                    constant_sequence(CellSet::of_indices(grid, {ci}), 16));
      if (!est.value) return bad("grid outer derivative undefined");
      if (!(*est.value >= -1e-9)) return bad("grid case: outer derivative below -1e-9");
      ++outer_checked;
    }
  }

  // A mutated partition (first two parts swapped) must expose at least one
  // strictly positive inner component.
  std::vector<CellSet> swapped = {opt.parts[1], opt.parts[0], opt.parts[2]};
  std::size_t worst_cell = members[1].front();
  double worst_gap = 0.0;
  for (std::size_t c : members[1]) {
    const double gap = trio[0](grid->cells()[c]) - trio[1](grid->cells()[c]);
    if (gap > worst_gap) {
      worst_gap = gap;
      worst_cell = c;
    }
  }
  if (!(worst_gap > 1e-6)) return bad("mutation has no strictly misassigned cell");
  std::vector<std::pair<int, CellSet>> bad_vars = {
      {0, CellSet::of_indices(grid, {worst_cell})},
      {0, CellSet::of_indices(grid, {members[1].front()})},
  };
  auto mutated = check_partition_minimality(F, swapped, bad_vars);
  if (mutated.all_nonpositive || !(mutated.max_component > 1e-9)) {
    return bad("mutated partition not flagged by a positive inner component");
  }

  std::ostringstream note;
  note << "inner max " << std::max(max_inner, grep.max_component) << ", outer min "
       << min_outer << " over " << rep.inner_derivatives.size() + vars.size() << "+"
       << outer_checked << " directions; mutation component +" << mutated.max_component;
  return ok(note.str());
}

// ---- 7. composition suite for n=3, m=2 ----------------------------------
Outcome c07_composition_suite() {
  if (count_compositions(3, 2) != 6) return bad("composition count is not 6");
  auto fns = enumerate_compositions(Expr::parse("t1^2 + t2^3"), {1.0, 2.0, 3.0}, 3);
  const std::vector<std::string> expected = {"s1^2 + s2^3", "s1^2 + s3^3", "s2^2 + s1^3",
                                             "s2^2 + s3^3", "s3^2 + s1^3", "s3^2 + s2^3"};
  if (fns.size() != expected.size()) return bad("expected exactly 6 compositions");
  for (std::size_t i = 0; i < expected.size(); ++i) {
    if (fns[i].name != expected[i]) {
      return bad("composition " + std::to_string(i + 1) + " is '" + fns[i].name +
                 "', expected '" + expected[i] + "'");
    }
  }
  // Full-set sanity: sigma = (6, 11, 6) for values (1,2,3), so the first
  // composition evaluates to 6^2 + 11^3 = 1367 there.
  auto full = Subset::full_set(make_unit_universe(3));
  if (fns[0](full) != 1367.0) return bad("first composition value at the full set is off");
  return ok("6/6 names match symbol-for-symbol; full-set value 1367 confirmed");
}

// ---- 8. symmetric-polynomial decomposition ------------------------------
Outcome c08_decomposition() {
  // Exact span recovery at n = 12: a rational coefficient vector is rebuilt
  // with S^2 identically zero.
  const int n = 12;
  std::vector<Rational> xr(n), c_true(n);
  for (int i = 0; i < n; ++i) xr[i] = Rational(i + 2) / 5;
  c_true[0] = 2;
  c_true[1] = -1;
  c_true[2] = Rational(1) / 2;
  c_true[5] = Rational(3) / 7;
  c_true[7] = Rational(-5) / 2;
  c_true[9] = Rational(1) / 9;
  c_true[11] = 4;
  std::vector<Rational> ones(n, Rational(1));
  auto u = make_universe(element_names(n), ones);
  auto f_exact = [&](const Subset& a) {
    const auto sig = elementary_symmetric_all(a, xr);
    Rational s = 0;
    for (int k = 1; k <= n; ++k) s += c_true[k - 1] * sig[k];
    return s;
  };
  auto er = decompose_exact(f_exact, u, xr);
  if (er.s_squared != 0) return bad("exact span member left a nonzero residual");
  for (int k = 0; k < n; ++k) {
    if (er.coefficients[k] != c_true[k]) {
      return bad("exact coefficient c" + std::to_string(k + 1) + " not recovered");
    }
  }

  // Outside the span: F = m(A)^2 at n = 8. The fitted S^2 must beat 10^3
  // random coefficient perturbations of magnitude up to 10, and the residual
  // must be orthogonal to every basis function.
  std::mt19937 rng(808);
  const int n2 = 8;
  const std::uint32_t full = 1u << n2;
  std::uniform_real_distribution<double> wd(0.3, 1.0), vd(0.85, 1.2);
  std::vector<double> w2(n2), x2(n2);
  for (int i = 0; i < n2; ++i) {
    w2[i] = wd(rng);
    x2[i] = vd(rng);
  }
  auto u2 = make_weighted_universe(w2);
  auto sp = finite_space();
  auto f2 = sf_measure_squared(sp);
  auto res = decompose(f2, u2, x2);

  std::vector<std::array<double, 9>> sig(full);
  std::vector<double> fv(full), resid(full);
  for (std::uint32_t mask = 0; mask < full; ++mask) {
    Subset a(u2, mask);
    const auto all = elementary_symmetric_all(a, x2);
    for (int k = 0; k <= n2; ++k) sig[mask][k] = all[k];
    fv[mask] = f2(a);
  }
  auto s2_of = [&](const std::vector<double>& c) {
    double s = 0.0;
    for (std::uint32_t mask = 0; mask < full; ++mask) {
      double r = fv[mask];
      for (int k = 1; k <= n2; ++k) r -= c[k - 1] * sig[mask][k];
      s += r * r;
    }
    return s;
  };
  const double s2_star = s2_of(res.coefficients);
  if (std::abs(s2_star - res.s_squared) > 1e-6 * (1.0 + s2_star)) {
    return bad("reported S^2 disagrees with direct evaluation");
  }
  for (std::uint32_t mask = 0; mask < full; ++mask) {
    double r = fv[mask];
    for (int k = 1; k <= n2; ++k) r -= res.coefficients[k - 1] * sig[mask][k];
    resid[mask] = r;
  }
  double max_dot = 0.0;
  for (int k = 1; k <= n2; ++k) {
    double dot = 0.0;
    for (std::uint32_t mask = 0; mask < full; ++mask) dot += resid[mask] * sig[mask][k];
    max_dot = std::max(max_dot, std::abs(dot));
  }
  if (!(max_dot < 1e-8)) {
    return bad("orthogonality residual " + std::to_string(max_dot) + " above 1e-8");
  }
  std::uniform_real_distribution<double> unit(-1.0, 1.0), mag_exp(-3.0, 1.0);
  double min_gap = std::numeric_limits<double>::infinity();
  for (int t = 0; t < 1000; ++t) {
    const double mag = std::pow(10.0, mag_exp(rng));  // up to 10
    std::vector<double> c = res.coefficients;
    for (int k = 0; k < n2; ++k) c[k] += mag * unit(rng);
    const double s2 = s2_of(c);
    if (s2 < s2_star - 1e-9) return bad("a perturbed coefficient vector beat the fit");
    min_gap = std::min(min_gap, s2 - s2_star);
  }
  std::ostringstream note;
  note << "exact S^2 = 0 with coefficients recovered; S^2* = " << s2_star
       << ", min perturbation gap " << min_gap << ", orthogonality " << max_dot;
  return ok(note.str());
}

// ---- 9. integration ------------------------------------------------------
Outcome c09_integration() {
  MeasureConfig cfg;  // unit interval weight, H == 1
  HybridSet unit{IntervalSet::single(0.0, 1.0), {}, PointSet{}};

  Integrand fx;
  fx.name = "x";
  fx.f = [](double x) { return x; };
  fx.monotone_pieces = {{0.0, 1.0}};
  Integrand fx2;
  fx2.name = "x^2";
  fx2.f = [](double x) { return x * x; };
  fx2.monotone_pieces = {{0.0, 1.0}};

  const struct {
    const Integrand* f;
    double oracle;
  } cases[] = {{&fx, 0.5}, {&fx2, 1.0 / 3.0}};
  for (const auto& cse : cases) {
    const double j3 = integrate_scheme(*cse.f, unit, cfg, MeasureMode::Plain, 1000).j;
    if (std::abs(j3 - cse.oracle) > 1e-3) {
      return bad(cse.f->name + " at 1e3 levels missed by " + std::to_string(j3 - cse.oracle));
    }
    const double j6 = integrate_scheme(*cse.f, unit, cfg, MeasureMode::Plain, 1000000).j;
    if (std::abs(j6 - cse.oracle) > 1e-6) {
      return bad(cse.f->name + " at 1e6 levels missed by " + std::to_string(j6 - cse.oracle));
    }
  }

  // Discrete series over all integers with H = exp(-|x|) and f = 1:
  // 1 + 2*sum_{k>=1} e^-k = 1 + 2/(e-1).
  auto gen = [](int i) {
    if (i == 0) return 0.0;
    const int k = (i + 1) / 2;
    return i % 2 == 1 ? static_cast<double>(k) : -static_cast<double>(k);
  };
  auto series =
      integrate_discrete([](double) { return 1.0; }, gen, 1.0, PointWeight::exp_abs());
  const double series_oracle = 1.0 + 2.0 / (std::exp(1.0) - 1.0);
  if (std::abs(series.value - series_oracle) > 1e-10) {
    return bad("integer series missed the closed form by " +
               std::to_string(series.value - series_oracle));
  }

  // Mean-value bracket alpha*m(A) <= J <= beta*m(A) on 100 random cases.
  // Hybrid sets live on the unit carrier, so intervals and points stay in [0,1].
  std::mt19937 rng(909);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int t = 0; t < 100; ++t) {
    const double a = 0.7 * unif(rng);
    const double b = a + 0.1 + (0.9 - a) * unif(rng);
    double p = -3.0 + 6.0 * unif(rng);
    if (std::abs(p) < 0.05) p = 0.05;
    const double q = -2.0 + 4.0 * unif(rng);
    Integrand lin;
    lin.name = "affine";
    lin.f = [p, q](double x) { return p * x + q; };
    lin.monotone_pieces = {{a, b}};
    std::vector<double> pts(rng() % 5);
    for (auto& x : pts) x = unif(rng);
    HybridSet s{IntervalSet::single(a, b), {}, PointSet(pts)};
    MeasureConfig c2;
    c2.c = 0.1 + 1.9 * unif(rng);
    auto mv = mean_value_bounds(lin, s, c2, MeasureMode::Plain, 2000);
    if (!mv.holds) return bad("mean-value bracket failed at case " + std::to_string(t));
  }
  return ok("x -> 0.5, x^2 -> 1/3 at 1e-3/1e-6; series at 1e-10; 100/100 brackets hold");
}

// ---- 10. density recovery (derivative of J by m) -------------------------
Outcome c10_density() {
  std::mt19937 rng(1010);
  // Finite case: dyadic weights make (f*H)/H bitwise exact, so the one-step
  // quotient returns f at the element with no tolerance at all.
  const std::vector<double> dyadic = {0.25, 0.5, 1.0, 2.0, 4.0, 8.0, 0.125, 16.0};
  auto u = make_weighted_universe(dyadic);
  std::uniform_real_distribution<double> vd(-3.0, 3.0);
  for (int rep = 0; rep < 3; ++rep) {
    std::vector<double> fv(dyadic.size());
    for (auto& v : fv) v = vd(rng);
    for (std::size_t i = 0; i < dyadic.size(); ++i) {
      if (radon_nikodym_finite(u, fv, i) != fv[i]) {
        return bad("finite density not exact at element " + std::to_string(i));
      }
    }
  }

  MeasureConfig cfg;
  Integrand f;
  f.name = "x^2 + 1";
  f.f = [](double x) { return x * x + 1.0; };
  f.monotone_pieces = {{0.0, 2.0}};
  double worst = 0.0;
  for (int t = 0; t < 20; ++t) {
    const double x = 0.3 + 1.4 * std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    auto rep = radon_nikodym_check(f, x, cfg, MeasureMode::Plain, 14);
    if (!rep.stabilized) return bad("density quotients did not stabilize");
    const double err = std::abs(rep.estimate - (x * x + 1.0));
    if (err > 1e-3) return bad("density estimate missed f(x) by " + std::to_string(err));
    worst = std::max(worst, err);
  }
  std::ostringstream note;
  note << "24 finite elements exact; 20 interval points, worst error " << worst;
  return ok(note.str());
}

// ---- 11. partition argmin vs brute force ---------------------------------
Outcome c11_partition_bruteforce() {
  std::mt19937 rng(1111);
  // 12 cells, random per-cell tables, exhaustive 3^12 assignments.
  const int nc = 12;
  auto seg = GridDomain::segment(0.0, 1.0, nc);
  std::array<std::array<double, 12>, 3> table;
  std::uniform_real_distribution<double> td(-1.0, 2.0);
  for (auto& row : table) {
    for (auto& v : row) v = td(rng);
  }
  auto cell_index = [nc](const GridCell& c) {
    return std::min<std::size_t>(nc - 1, static_cast<std::size_t>(c.x1 * nc));
  };
  std::vector<std::function<double(const GridCell&)>> trio = {
      [&](const GridCell& c) { return table[0][cell_index(c)]; },
      [&](const GridCell& c) { return table[1][cell_index(c)]; },
      [&](const GridCell& c) { return table[2][cell_index(c)]; },
  };
  auto opt = partition_argmin(trio, seg);
  const auto& cells = seg->cells();
  double best = std::numeric_limits<double>::infinity();
  for (long long a = 0; a < 531441; ++a) {  // 3^12
    long long digits = a;
    double obj = 0.0;
    for (int c = 0; c < nc; ++c, digits /= 3) {
      obj += table[digits % 3][c] * cells[c].area;
    }
    best = std::min(best, obj);
  }
  if (opt.objective != best) {
    return bad("argmin objective " + std::to_string(opt.objective) +
               " differs from the exhaustive minimum " + std::to_string(best));
  }

  // ~7850-cell quarter disk: the argmin must beat every random assignment.
  auto qd = GridDomain::quarter_disk(0.01);
  std::vector<std::function<double(const GridCell&)>> trio2 = {
      [](const GridCell& c) { return c.x1 + c.x2; },
      [](const GridCell& c) { return (c.x1 - 1.0) * (c.x1 - 1.0) + c.x2 * c.x2; },
      [](const GridCell& c) { return c.x1 * c.x1 + (c.x2 - 1.0) * (c.x2 - 1.0); },
  };
  auto opt2 = partition_argmin(trio2, qd);
  const std::size_t m = qd->size();
  std::vector<std::array<double, 3>> cellv(m);
  for (std::size_t c = 0; c < m; ++c) {
    for (int s = 0; s < 3; ++s) cellv[c][s] = trio2[s](qd->cells()[c]) * qd->cells()[c].area;
  }
  double min_gap = std::numeric_limits<double>::infinity();
  for (int t = 0; t < 10000; ++t) {
    double obj = 0.0;
    for (std::size_t c = 0; c < m; ++c) obj += cellv[c][rng() % 3];
    if (obj < opt2.objective) return bad("a random partition beat the argmin");
    min_gap = std::min(min_gap, obj - opt2.objective);
  }
  std::ostringstream note;
  note << "3^12 exhaustive match exact; " << m << " cells, min random gap " << min_gap;
  return ok(note.str());
}

// ---- 12. trade-off chain -------------------------------------------------
Outcome c12_pareto_chain() {
  auto fam = pareto_family(1.0, 1.0, {1.0, 1.5, 2.0, 4.0, 10.0}, 0.01);
  auto ver = pareto_verify(fam);
  if (!ver.monotone_chain) return bad("objective chain is not monotone");
  if (!ver.no_dominance) return bad("a dominated pair slipped into the family");
  double worst = 0.0;
  int sampled = 0;
  for (std::size_t i = 0; i < fam.points.size(); ++i) {
    auto st = pareto_stationarity(fam, i);
    if (!st.holds) return bad("ray stationarity failed at index " + std::to_string(i));
    if (st.samples > 0 && !(st.max_residual <= 2.0 * 0.01)) {
      return bad("stationarity residual above 2h at index " + std::to_string(i));
    }
    worst = std::max(worst, st.max_residual);
    sampled += st.samples;
  }
  std::ostringstream note;
  note << fam.points.size() << "-point chain monotone and nondominated; " << sampled
       << " boundary samples, max residual " << worst;
  return ok(note.str());
}

// ---- 13. CLI determinism --------------------------------------------------
struct CmdResult {
  int code = -1;
  std::string out;
};

CmdResult run_cli(const std::string& args) {
  const std::string cmd = std::string(SETCALC_CLI_PATH) + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return {};
  std::string out;
  char buf[4096];
  while (std::size_t got = std::fread(buf, 1, sizeof buf, pipe)) out.append(buf, got);
  const int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

Outcome c13_cli_determinism() {
  const std::string uni = R"('{"elements":["a","b","c"],"weights":[1,1,1]}')";
  const std::vector<std::pair<std::string, std::string>> cmds = {
      {"example1", "--seed 3 example1 --values 1,2,3"},
      {"pareto", "--seed 3 --format csv pareto --a 1 --b 1 --lambdas 1,2,4 --h 0.05"},
      {"partition",
       "--seed 3 partition --f1 x1 --f2 '1 - x1' --f3 0.6 --grid segment --grid-a 0 "
       "--grid-b 1 --cells 48"},
      {"decompose", "--seed 3 decompose --f '2*s1 + 3*s2 - s3' --values 1,2,3"},
      {"integrate",
       "--seed 3 --tolerance 0.002 integrate --set '{\"intervals\":[{\"a\":0,\"b\":1}]}' "
       "--f x --levels 2000 --monotone 0:1"},
      {"limits", "--seed 3 limits --universe " + uni +
                     " --kind eventually_constant --set-a '[\"a\"]' --set-b "
                     "'[\"a\",\"b\"]' --switch 5"},
      {"derivative", "--seed 3 derivative --universe " + uni +
                         " --function measure --at '[\"a\"]' --schedule '[[\"b\"],[\"b\"]]'"},
      {"gamma", "--seed 3 --format json gamma --universe " + uni +
                    " --function linear_sum --values 1,2,3"},
  };
  for (const auto& [name, args] : cmds) {
    const CmdResult r1 = run_cli(args);
    const CmdResult r2 = run_cli(args);
    if (r1.code != 0 || r2.code != 0) {
      return bad(name + " exited nonzero (" + std::to_string(r1.code) + ")");
    }
    if (r1.out != r2.out) return bad(name + " produced different bytes across two runs");
    if (r1.out.empty()) return bad(name + " produced no output");
  }
  return ok(std::to_string(cmds.size()) + " subcommands byte-identical across repeated runs");
}

}  // namespace

int main() {
  struct Row {
    const char* label;
    double budget_s;  // 0 = no budget
    Outcome (*fn)();
  };
  const Row rows[] = {
      {"measure axioms: zero only at the empty set; modular additivity (exact, n<=12)", 5.0,
       c01_measure_axioms},
      {"metric axioms: identity, symmetry, triangle (exhaustive n=8; random n=20)", 10.0,
       c02_metric_axioms},
      {"set-theoretic and metric limits agree on a 50-sequence battery", 5.0,
       c03_limit_agreement},
      {"set operations commute with limits (100 sequences x 4 ops, <1e-12)", 10.0,
       c04_op_commutation},
      {"derivative rules: 1e3 instances at 1e-10 relative; chain witnesses at 1e-6", 10.0,
       c05_derivative_rules},
      {"minimizer condition: inner <= 1e-9, outer >= -1e-9; mutation flagged", 30.0,
       c06_minimizer_condition},
      {"composition suite (n=3, m=2): exactly the six expected functions", 1.0,
       c07_composition_suite},
      {"sigma decomposition: exact span recovery; unbeaten by 1e3 perturbations", 30.0,
       c08_decomposition},
      {"level-scheme integrals, integer series, 100 mean-value brackets", 60.0,
       c09_integration},
      {"density recovery: finite case bitwise exact; 20 interval points at 1e-3", 10.0,
       c10_density},
      {"partition argmin: equals 3^12 brute force; beats 1e4 random partitions", 60.0,
       c11_partition_bruteforce},
      {"trade-off chain a=b=1: monotone, nondominated, ray stationarity within 2h", 60.0,
       c12_pareto_chain},
      {"CLI determinism: byte-identical output across repeated seeded runs", 0.0,
       c13_cli_determinism},
  };

  int failures = 0;
  std::printf("acceptance gate: %zu criteria\n", std::size(rows));
  for (std::size_t i = 0; i < std::size(rows); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = rows[i].fn();
    } catch (const std::exception& e) {
      out = bad(std::string("unexpected exception: ") + e.what());
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (out.pass && rows[i].budget_s > 0.0 && secs > rows[i].budget_s) {
      out = bad("time budget of " + std::to_string(rows[i].budget_s) + " s exceeded");
    }
    if (!out.pass) ++failures;
    std::printf("%2zu  %s  %-76s  %6.2f s\n      %s\n", i + 1, out.pass ? "PASS" : "FAIL",
                rows[i].label, secs, out.note.c_str());
  }
  std::printf("summary: %zu/%zu criteria passed\n", std::size(rows) - failures,
              std::size(rows));
  return failures == 0 ? 0 : 1;
}
