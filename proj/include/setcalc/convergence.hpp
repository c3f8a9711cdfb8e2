#pragma once

#include <algorithm>
#include <functional>
#include <vector>

#include "setcalc/measure_space.hpp"

namespace setcalc {

/// A set sequence B_1, B_2, ... inspected up to a finite horizon. The
/// generator must be pure: same n, same set.
template <class Set>
struct SetSequence {
  std::function<Set(int)> generator;
  int horizon = 64;

  Set at(int n) const { return generator(n); }
};

enum class Verdict { Converged, Diverged, Inconclusive };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Converged: return "converged";
    case Verdict::Diverged: return "diverged";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "?";
}

/// Truncated lower/upper limits. The infinite unions/intersections are cut at
/// the horizon N; `stabilized` certifies that every inner tail was already
/// constant over the last `window` indices, i.e. extending the horizon by the
/// window changed nothing. Unstabilized results are to be treated as
/// inconclusive, not as answers.
template <class Set>
struct BorelReport {
  Set lower;
  Set upper;
  bool stabilized = false;
  bool limits_equal = false;

  bool limit_exists() const { return stabilized && limits_equal; }
};
// Set models (Subset, HybridSet) need not be default-constructible; reports
// are aggregate-built once the member sets exist.

namespace detail {

inline int effective_window(int horizon, int window) {
  int w = window > 0 ? window : horizon / 4;
  if (w < 1) w = 1;
  if (w >= horizon) w = horizon - 1;
  return w;
}

}  // namespace detail

template <class Set>
BorelReport<Set> borel_limits(const SetSequence<Set>& seq, const MeasureSpace<Set>& sp,
                              int window = 0) {
  const int n_max = seq.horizon;
  if (n_max < 4) throw Error("borel limits need a horizon of at least 4");
  int w = detail::effective_window(n_max, window);
  // The outer union/intersection over k stops at n_max - 2w so that every
  // inner tail spans at least w terms even at the shortened horizon the
  // stabilization check compares against.
  if (n_max - 2 * w < 1) w = (n_max - 1) / 2;
  const int cut = n_max - 2 * w;

  std::vector<Set> terms;
  terms.reserve(n_max);
  for (int n = 1; n <= n_max; ++n) terms.push_back(seq.at(n));

  // Suffix scans: tails[k] = op over terms[k..end]. Index 0-based.
  auto suffix = [&](SetOp op, int end_index) {
    std::vector<Set> tails(end_index + 1, terms[end_index]);
    for (int k = end_index - 1; k >= 0; --k) {
      tails[k] = sp.combine(terms[k], tails[k + 1], op);
    }
    return tails;
  };
  const std::vector<Set> tail_int_full = suffix(SetOp::Intersect, n_max - 1);
  const std::vector<Set> tail_int_short = suffix(SetOp::Intersect, n_max - w - 1);
  const std::vector<Set> tail_un_full = suffix(SetOp::Union, n_max - 1);
  const std::vector<Set> tail_un_short = suffix(SetOp::Union, n_max - w - 1);

  bool stable = true;
  for (int k = 0; k < cut; ++k) {
    if (!sp.equal(tail_int_full[k], tail_int_short[k]) ||
        !sp.equal(tail_un_full[k], tail_un_short[k])) {
      stable = false;
      break;
    }
  }

  Set lower = tail_int_full[0];
  for (int k = 1; k < cut; ++k) lower = sp.combine(lower, tail_int_full[k], SetOp::Union);
  Set upper = tail_un_full[0];
  for (int k = 1; k < cut; ++k) upper = sp.combine(upper, tail_un_full[k], SetOp::Intersect);
  const bool limits_equal = sp.equal(lower, upper);
  return BorelReport<Set>{std::move(lower), std::move(upper), stable, limits_equal};
}

template <class Set>
struct MetricLimitReport {
  Verdict verdict = Verdict::Inconclusive;
  int n_epsilon = 0;  // valid when converged: residual < eps for all n >= n_epsilon
  std::vector<double> residuals;
};

/// Tests m(B_n delta candidate) < eps for a tail. Converged needs the
/// violation-free tail to start no later than horizon - window, so the claim
/// is backed by at least `window` clean indices. When violations reach into
/// the final window: diverged if the final window shows no improvement over
/// the previous one (persistent oscillation), inconclusive otherwise (the
/// horizon may simply be too short).
template <class Set>
MetricLimitReport<Set> metric_limit(const SetSequence<Set>& seq, const Set& candidate,
                                    double eps, const MeasureSpace<Set>& sp, int window = 0) {
  if (!(eps > 0)) throw Error("metric limit needs eps > 0");
  const int n_max = seq.horizon;
  const int w = detail::effective_window(n_max, window);

  MetricLimitReport<Set> rep;
  rep.residuals.reserve(n_max);
  for (int n = 1; n <= n_max; ++n) {
    rep.residuals.push_back(sp.distance(seq.at(n), candidate));
  }

  int last_violation = 0;  // 1-based index, 0 = none
  for (int n = n_max; n >= 1; --n) {
    if (rep.residuals[n - 1] >= eps) {
      last_violation = n;
      break;
    }
  }
  if (last_violation <= n_max - w) {
    rep.verdict = Verdict::Converged;
    rep.n_epsilon = last_violation + 1;
    return rep;
  }

  auto window_max = [&](int lo, int hi) {  // 1-based inclusive
    double m = 0.0;
    for (int n = lo; n <= hi; ++n) m = std::max(m, rep.residuals[n - 1]);
    return m;
  };
  const double tail_max = window_max(n_max - w + 1, n_max);
  const double prev_max =
      n_max - w >= 1 ? window_max(std::max(1, n_max - 2 * w + 1), n_max - w) : tail_max;
  rep.verdict = tail_max < prev_max ? Verdict::Inconclusive : Verdict::Diverged;
  return rep;
}

template <class Set>
struct LimitAgreementReport {
  BorelReport<Set> borel;
  Verdict metric_verdict = Verdict::Inconclusive;
  bool inconclusive = false;  // stabilization window never reached
  bool agree = false;         // existence of the two limit notions coincides
};

/// Cross-checks the two limit notions on one sequence: when the truncated
/// Borel limits exist and coincide, the metric limit must converge to the
/// same set; when they differ, no metric limit exists (checked against both
/// the lower and upper set as candidates).
template <class Set>
LimitAgreementReport<Set> check_limit_agreement(const SetSequence<Set>& seq, const MeasureSpace<Set>& sp,
                                   double eps = 1e-9, int window = 0) {
  LimitAgreementReport<Set> rep{borel_limits(seq, sp, window)};
  if (!rep.borel.stabilized) {
    rep.inconclusive = true;
    return rep;
  }
  if (rep.borel.limit_exists()) {
    auto ml = metric_limit(seq, rep.borel.lower, eps, sp, window);
    rep.metric_verdict = ml.verdict;
    rep.inconclusive = ml.verdict == Verdict::Inconclusive;
    rep.agree = ml.verdict == Verdict::Converged;
  } else {
    auto ml_low = metric_limit(seq, rep.borel.lower, eps, sp, window);
    auto ml_up = metric_limit(seq, rep.borel.upper, eps, sp, window);
    rep.metric_verdict = ml_low.verdict;
    rep.inconclusive =
        ml_low.verdict == Verdict::Inconclusive || ml_up.verdict == Verdict::Inconclusive;
    rep.agree =
        ml_low.verdict != Verdict::Converged && ml_up.verdict != Verdict::Converged;
  }
  return rep;
}

template <class Set>
struct CommutationReport {
  Verdict verdict = Verdict::Inconclusive;
  double max_tail_residual = 0.0;  // max over the clean tail of m((B_n*A) delta (B*A))
  bool bound_holds = true;         // m((B_n*A) delta (B*A)) <= m(B_n delta B) everywhere
};

/// Commutation check: if B_n -> B then B_n * A -> B * A for * in {union,
/// intersect, minus, sym diff}. Also verifies the inequality that drives the
/// proof, m((B_n*A) delta (B*A)) <= m(B_n delta B), index by index.
template <class Set>
CommutationReport<Set> limit_op_commutes(const SetSequence<Set>& seq, const Set& limit,
                                         const Set& a, SetOp op, const MeasureSpace<Set>& sp,
                                         double eps = 1e-9, int window = 0) {
  SetSequence<Set> transformed{
      [&seq, &a, op, &sp](int n) { return sp.combine(seq.at(n), a, op); }, seq.horizon};
  const Set target = sp.combine(limit, a, op);
  auto ml = metric_limit(transformed, target, eps, sp, window);

  CommutationReport<Set> rep;
  rep.verdict = ml.verdict;
  for (int n = 1; n <= seq.horizon; ++n) {
    const double lhs = ml.residuals[n - 1];
    const double rhs = sp.distance(seq.at(n), limit);
    if (lhs > rhs + 1e-12) rep.bound_holds = false;
  }
  if (ml.verdict == Verdict::Converged) {
    for (int n = ml.n_epsilon; n <= seq.horizon; ++n) {
      rep.max_tail_residual = std::max(rep.max_tail_residual, ml.residuals[n - 1]);
    }
  }
  return rep;
}

/// Builders used by tests and the CLI; indices are 1-based.
template <class Set>
SetSequence<Set> constant_sequence(Set b, int horizon) {
  return {[b = std::move(b)](int) { return b; }, horizon};
}

template <class Set>
SetSequence<Set> alternating_sequence(Set odd, Set even, int horizon) {
  return {[odd = std::move(odd), even = std::move(even)](int n) {
            return n % 2 == 1 ? odd : even;
          },
          horizon};
}

template <class Set>
SetSequence<Set> eventually_constant_sequence(Set head, Set tail, int switch_index,
                                              int horizon) {
  return {[head = std::move(head), tail = std::move(tail), switch_index](int n) {
            return n < switch_index ? head : tail;
          },
          horizon};
}

/// Carries an extra piece up to index `drop_after`, then settles on `base`.
template <class Set>
SetSequence<Set> shrinking_tail_sequence(Set base, Set extra, const MeasureSpace<Set>& sp,
                                         int drop_after, int horizon) {
  return {[base = std::move(base), extra = std::move(extra), combine = sp.combine,
           drop_after](int n) {
            if (n <= drop_after) {
              return combine(base, extra, SetOp::Union);
            }
            return base;
          },
          horizon};
}

/// Subsequence by striding: n -> B_{stride * n}.
template <class Set>
SetSequence<Set> strided(SetSequence<Set> seq, int stride) {
  if (stride < 1) throw Error("stride must be >= 1");
  const int horizon = seq.horizon / stride;
  return {[seq = std::move(seq), stride](int n) { return seq.at(stride * n); }, horizon};
}

}  // namespace setcalc
