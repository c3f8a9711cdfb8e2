#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "setcalc/convergence.hpp"

namespace setcalc {

/// A real-valued function on sets. `continual` marks the metric-continuity
/// property (small m(A delta B) forces small |F(B) - F(A)|), which is what
/// licenses evaluating derivatives at the limit in closed form.
template <class Set>
struct SetFunction {
  std::string name;
  std::function<double(const Set&)> eval;
  bool continual = false;

  double operator()(const Set& a) const { return eval(a); }
};

/// (F(A delta B) - F(A)) / (m(A delta B) - m(A)) for one perturbation B.
/// A zero denominator means B is an inadmissible variation direction.
template <class Set>
double difference_quotient(const SetFunction<Set>& f, const MeasureSpace<Set>& sp,
                           const Set& a, const Set& b) {
  const Set perturbed = sp.sym_diff(a, b);
  const double dm = sp.measure(perturbed) - sp.measure(a);
  if (dm == 0.0) throw ZeroDenominator("measure unchanged by the perturbation");
  return (f(perturbed) - f(a)) / dm;
}

/// Closed-form derivative value at the limit of a converging sequence; only
/// valid for continual functions, where the quotient of the limit equals the
/// limit of the quotients.
template <class Set>
double derivative_at_limit(const SetFunction<Set>& f, const MeasureSpace<Set>& sp,
                           const Set& a, const Set& b) {
  if (!f.continual) throw NotContinual("derivative at the limit needs a continual function");
  return difference_quotient(f, sp, a, b);
}

struct DerivativeEstimates {
  std::vector<double> quotients;  // one per inspected index; NaN where skipped
  std::vector<int> skipped;       // indices with zero denominators (1-based)
  double lower = std::numeric_limits<double>::quiet_NaN();
  double upper = std::numeric_limits<double>::quiet_NaN();
  bool stabilized = false;
  std::optional<double> value;  // present when upper - lower < existence tol
};

/// Samples the difference quotients along the sequence and estimates the
/// lower/upper limit values from the trailing window; the two estimates are
/// declared stable when the preceding window already produced the same
/// numbers. The derivative exists when the stable estimates agree within
/// exist_tol (absolute).
template <class Set>
DerivativeEstimates derivative_along(const SetFunction<Set>& f, const MeasureSpace<Set>& sp,
                                     const Set& a, const SetSequence<Set>& seq,
                                     double exist_tol = 1e-8, int window = 0) {
  const int n_max = seq.horizon;
  const int w = detail::effective_window(n_max, window);

  DerivativeEstimates est;
  est.quotients.reserve(n_max);
  for (int n = 1; n <= n_max; ++n) {
    try {
      est.quotients.push_back(difference_quotient(f, sp, a, seq.at(n)));
    } catch (const ZeroDenominator&) {
      est.quotients.push_back(std::numeric_limits<double>::quiet_NaN());
      est.skipped.push_back(n);
    }
  }

  auto window_bounds = [&](int lo, int hi) {  // 1-based inclusive, NaNs skipped
    double mn = std::numeric_limits<double>::infinity();
    double mx = -std::numeric_limits<double>::infinity();
    for (int n = lo; n <= hi; ++n) {
      const double q = est.quotients[n - 1];
      if (std::isnan(q)) continue;
      mn = std::min(mn, q);
      mx = std::max(mx, q);
    }
    return std::pair<double, double>{mn, mx};
  };
  const auto tail = window_bounds(n_max - w + 1, n_max);
  const auto prev = window_bounds(std::max(1, n_max - 2 * w + 1), n_max - w);
  if (!std::isfinite(tail.first) || !std::isfinite(prev.first)) {
    return est;  // windows contained no usable quotients
  }
  est.lower = tail.first;
  est.upper = tail.second;
  est.stabilized = std::abs(tail.first - prev.first) <= exist_tol &&
                   std::abs(tail.second - prev.second) <= exist_tol;
  if (est.stabilized && est.upper - est.lower < exist_tol) {
    est.value = 0.5 * (est.lower + est.upper);
  }
  return est;
}

template <class Set>
struct MinimalityReport {
  bool minimality_verified = false;
  std::vector<double> inner_derivatives;
  std::vector<double> outer_derivatives;
  bool inner_nonpositive = true;  // every inner derivative <= tol
  bool outer_nonnegative = true;  // every outer derivative >= -tol
};

/// Necessary condition at a minimizer E: derivatives along sequences whose
/// limits sit inside E are <= 0, and those with limits outside E are >= 0.
/// The minimality premise is verified against the supplied candidate scan
/// first; a failed scan throws rather than asserting vacuous conclusions.
template <class Set>
MinimalityReport<Set> check_min_necessary(const SetFunction<Set>& f,
                                          const MeasureSpace<Set>& sp, const Set& e,
                                          const std::vector<Set>& candidates,
                                          const std::vector<SetSequence<Set>>& inner_seqs,
                                          const std::vector<SetSequence<Set>>& outer_seqs,
                                          double tol = 1e-9) {
  const double fe = f(e);
  for (const Set& a : candidates) {
    if (f(a) < fe - 1e-12) {
      throw MinimalityUnverified("candidate scan found a strictly better set than E");
    }
  }
  MinimalityReport<Set> rep;
  rep.minimality_verified = true;
  for (const auto& seq : inner_seqs) {
    auto est = derivative_along(f, sp, e, seq);
    const double d = est.value ? *est.value : est.upper;
    rep.inner_derivatives.push_back(d);
    if (!(d <= tol)) rep.inner_nonpositive = false;
  }
  for (const auto& seq : outer_seqs) {
    auto est = derivative_along(f, sp, e, seq);
    const double d = est.value ? *est.value : est.lower;
    rep.outer_derivatives.push_back(d);
    if (!(d >= -tol)) rep.outer_nonnegative = false;
  }
  return rep;
}

template <class Set>
struct ContinuityWitness {
  Set set;
  double distance;
  double jump;
};

template <class Set>
struct ContinuityProbe {
  bool holds = false;
  double delta = 0.0;  // largest schedule value that worked
  std::vector<ContinuityWitness<Set>> witnesses;
};

/// Diagnostic search: walk delta down a halving schedule from eps and return
/// the largest delta for which every candidate within distance delta of A
/// keeps |F(B) - F(A)| < eps. Not a proof — quality depends on the candidate
/// pool — but it reports concrete witnesses when it fails everywhere.
template <class Set>
ContinuityProbe<Set> continuity_probe(const SetFunction<Set>& f, const MeasureSpace<Set>& sp,
                                      const Set& a, double eps,
                                      const std::vector<Set>& candidates,
                                      int halvings = 12) {
  if (!(eps > 0)) throw Error("continuity probe needs eps > 0");
  const double fa = f(a);
  ContinuityProbe<Set> probe;
  double delta = eps;
  for (int step = 0; step <= halvings; ++step, delta *= 0.5) {
    bool ok = true;
    for (const Set& b : candidates) {
      const double d = sp.distance(a, b);
      if (d < delta && !(std::abs(f(b) - fa) < eps)) {
        ok = false;
        if (step == halvings) {
          probe.witnesses.push_back({b, d, std::abs(f(b) - fa)});
        }
      }
    }
    if (ok) {
      probe.holds = true;
      probe.delta = delta;
      return probe;
    }
  }
  return probe;
}

// ---- differentiation rules, checked as evaluable identities ----

struct RuleCheckResult {
  double lhs = 0.0;
  double rhs = 0.0;
  bool agree = false;
  double theta = std::numeric_limits<double>::quiet_NaN();  // chain rule only
};

namespace detail {

inline bool close(double x, double y, double tol) {
  return std::abs(x - y) <= tol * std::max({1.0, std::abs(x), std::abs(y)});
}

}  // namespace detail

/// Constant functions have derivative 0 along every admissible direction.
template <class Set>
RuleCheckResult rule1_check(const SetFunction<Set>& f_const, const MeasureSpace<Set>& sp,
                            const Set& a, const Set& b, double tol = 1e-10) {
  RuleCheckResult r;
  r.lhs = difference_quotient(f_const, sp, a, b);
  r.rhs = 0.0;
  r.agree = detail::close(r.lhs, r.rhs, tol);
  return r;
}

/// Scalar multiplier moves out of the derivative.
template <class Set>
RuleCheckResult rule2_check(double c, const SetFunction<Set>& f, const MeasureSpace<Set>& sp,
                            const Set& a, const Set& b, double tol = 1e-10) {
  SetFunction<Set> scaled{"scaled", [c, &f](const Set& s) { return c * f(s); }, f.continual};
  RuleCheckResult r;
  r.lhs = difference_quotient(scaled, sp, a, b);
  r.rhs = c * difference_quotient(f, sp, a, b);
  r.agree = detail::close(r.lhs, r.rhs, tol);
  return r;
}

/// Derivative of a sum is the sum of derivatives.
template <class Set>
RuleCheckResult rule3_check(const SetFunction<Set>& f1, const SetFunction<Set>& f2,
                            const MeasureSpace<Set>& sp, const Set& a, const Set& b,
                            double tol = 1e-10) {
  SetFunction<Set> sum{"sum", [&f1, &f2](const Set& s) { return f1(s) + f2(s); }, false};
  RuleCheckResult r;
  r.lhs = difference_quotient(sum, sp, a, b);
  r.rhs = difference_quotient(f1, sp, a, b) + difference_quotient(f2, sp, a, b);
  r.agree = detail::close(r.lhs, r.rhs, tol);
  return r;
}

/// Product rule with symmetrized cofactors: d(F1*F2) = avg(F2) dF1 + avg(F1) dF2,
/// the averages being taken between A and A delta B.
template <class Set>
RuleCheckResult rule4_check(const SetFunction<Set>& f1, const SetFunction<Set>& f2,
                            const MeasureSpace<Set>& sp, const Set& a, const Set& b,
                            double tol = 1e-10) {
  SetFunction<Set> prod{"product", [&f1, &f2](const Set& s) { return f1(s) * f2(s); }, false};
  const Set ab = sp.sym_diff(a, b);
  RuleCheckResult r;
  r.lhs = difference_quotient(prod, sp, a, b);
  r.rhs = 0.5 * (f2(ab) + f2(a)) * difference_quotient(f1, sp, a, b) +
          0.5 * (f1(ab) + f1(a)) * difference_quotient(f2, sp, a, b);
  r.agree = detail::close(r.lhs, r.rhs, tol);
  return r;
}

/// Quotient rule: d(F1/F2) = (F2(A) dF1 - F1(A) dF2) / (F2(A delta B) F2(A)).
template <class Set>
RuleCheckResult rule5_check(const SetFunction<Set>& f1, const SetFunction<Set>& f2,
                            const MeasureSpace<Set>& sp, const Set& a, const Set& b,
                            double tol = 1e-10) {
  const Set ab = sp.sym_diff(a, b);
  if (f2(a) == 0.0 || f2(ab) == 0.0) {
    throw ZeroDenominator("fraction rule needs F2 nonzero at A and at A delta B");
  }
  SetFunction<Set> frac{"fraction", [&f1, &f2](const Set& s) { return f1(s) / f2(s); }, false};
  RuleCheckResult r;
  r.lhs = difference_quotient(frac, sp, a, b);
  r.rhs = (f2(a) * difference_quotient(f1, sp, a, b) -
           f1(a) * difference_quotient(f2, sp, a, b)) /
          (f2(ab) * f2(a));
  r.agree = detail::close(r.lhs, r.rhs, tol);
  return r;
}

/// Scalar map with a known derivative, for the chain rule.
struct SmoothFn {
  std::string name;
  std::function<double(double)> f;
  std::function<double(double)> df;
};

/// Chain rule via the mean value on the segment F(A) -> F(A delta B): find
/// theta in [0,1] with phi'(F(A) + theta*dF) * dF/dm matching d(phi(F))/dm.
/// Grid scan (default 1e4 points) plus bisection refinement on sign changes;
/// throws NoWitness when nothing gets within tol.
template <class Set>
RuleCheckResult rule6_check(const SmoothFn& phi, const SetFunction<Set>& f,
                            const MeasureSpace<Set>& sp, const Set& a, const Set& b,
                            double tol = 1e-6, int grid = 10000) {
  SetFunction<Set> composed{"composed", [&phi, &f](const Set& s) { return phi.f(f(s)); },
                            false};
  RuleCheckResult r;
  r.lhs = difference_quotient(composed, sp, a, b);
  const double df_dm = difference_quotient(f, sp, a, b);
  const Set ab = sp.sym_diff(a, b);
  const double f0 = f(a), f1 = f(ab);

  auto rhs_at = [&](double theta) { return phi.df(f0 + theta * (f1 - f0)) * df_dm; };
  auto residual = [&](double theta) { return rhs_at(theta) - r.lhs; };

  double best_theta = 0.5, best_abs = std::abs(residual(0.5));
  double prev_res = residual(0.0);
  if (std::abs(prev_res) < best_abs) {
    best_abs = std::abs(prev_res);
    best_theta = 0.0;
  }
  for (int i = 1; i <= grid; ++i) {
    const double theta = double(i) / grid;
    const double res = residual(theta);
    if (std::abs(res) < best_abs) {
      best_abs = std::abs(res);
      best_theta = theta;
    }
    if ((prev_res < 0) != (res < 0)) {  // sign change: bisect
      double lo = double(i - 1) / grid, hi = theta;
      double flo = prev_res;
      for (int it = 0; it < 80; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = residual(mid);
        if (std::abs(fm) < best_abs) {
          best_abs = std::abs(fm);
          best_theta = mid;
        }
        if ((flo < 0) == (fm < 0)) {
          lo = mid;
          flo = fm;
        } else {
          hi = mid;
        }
      }
    }
    prev_res = res;
  }

  r.theta = best_theta;
  r.rhs = rhs_at(best_theta);
  r.agree = detail::close(r.lhs, r.rhs, tol);
  if (!r.agree) {
    throw NoWitness("no mean-value witness within tolerance; best residual " +
                    std::to_string(best_abs));
  }
  return r;
}

// ---- the registered closed-form family ----

template <class Set>
SetFunction<Set> sf_measure(const MeasureSpace<Set>& sp) {
  return {"measure", [m = sp.measure](const Set& s) { return m(s); }, true};
}

template <class Set>
SetFunction<Set> sf_measure_squared(const MeasureSpace<Set>& sp) {
  return {"measure_squared", [m = sp.measure](const Set& s) {
            const double v = m(s);
            return v * v;
          },
          true};
}

template <class Set>
SetFunction<Set> sf_constant(double c) {
  return {"constant", [c](const Set&) { return c; }, true};
}

/// m(A delta E0): distance to a fixed target set; continual with constant 1.
template <class Set>
SetFunction<Set> sf_distance_to(const MeasureSpace<Set>& sp, Set e0) {
  return {"distance_to",
          [sp, e0 = std::move(e0)](const Set& s) { return sp.measure(sp.sym_diff(s, e0)); },
          true};
}

/// Sum of per-element values over the subset (finite universes).
inline SetFunction<Subset> sf_linear_sum(std::vector<double> values) {
  return {"linear_sum",
          [values = std::move(values)](const Subset& s) {
            double total = 0.0;
            for (std::size_t i = 0; i < s.universe()->size(); ++i) {
              if (s.contains(i)) total += values[i];
            }
            return total;
          },
          true};
}

/// Explicit value per subset mask; the table owns the whole truth table.
inline SetFunction<Subset> sf_custom_table(UniversePtr u, std::vector<double> table) {
  if (table.size() != (std::size_t(1) << u->size())) {
    throw Error("custom table must list one value per subset");
  }
  return {"custom_table",
          [u = std::move(u), table = std::move(table)](const Subset& s) {
            return table[s.mask()];
          },
          false};
}

}  // namespace setcalc
