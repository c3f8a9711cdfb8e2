#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "setcalc/expr.hpp"
#include "setcalc/finite_core.hpp"
#include "setcalc/hybrid_measure.hpp"

namespace setcalc {

/// Interval on which the integrand is monotone (direction inferred from the
/// endpoint values). The annotations license exact level-set inversion.
struct MonotonePiece {
  double a, b;
};

/// Pointwise integrand with optional monotone-piece annotations and optional
/// supplied bounds (computed from the integration set when absent).
struct Integrand {
  std::string name;
  std::function<double(double)> f;
  std::vector<MonotonePiece> monotone_pieces;
  std::optional<double> alpha, beta;

  double operator()(double x) const { return f(x); }
};

/// Wraps a parsed expression in the single variable x (constants allowed).
Integrand integrand_from_expr(const Expr& e, std::vector<MonotonePiece> pieces = {});

struct SchemeResult {
  double lower = 0.0;  // sum of y_v * m(e_v)
  double upper = 0.0;  // sum of y_{v+1} * m(e_v)
  double j = 0.0;      // midpoint estimate
  bool converged = false;
  double alpha = 0.0, beta = 0.0;  // value bounds used for the levels
  bool grid_fallback = false;      // at least one interval lacked annotations
  double partition_defect = 0.0;   // |sum m(e_v) - m(A)|
  int levels = 0;
};

/// Level-scheme integral of f over the interval and point parts of A by the
/// hybrid measure. Uniform levels on [alpha, beta]; each level set e_v is
/// {x in A : y_v <= f(x) < y_{v+1}} with the top level closed at beta.
/// Interval-part measures come from bisection inversion (to 1e-12) on the
/// monotone pieces; unannotated intervals fall back to a uniform grid of at
/// least 10^4 cells and flag the result. Fractal parts are rejected.
SchemeResult integrate_scheme(const Integrand& f, const HybridSet& a,
                              const MeasureConfig& cfg, MeasureMode mode, int n_levels,
                              double tolerance = 1e-6);

/// Diagnostic variant exposing the level grid and per-level measures
/// (bounded level counts only).
struct LevelScheme {
  std::vector<double> levels;    // y_0..y_n
  std::vector<double> measures;  // m(e_0)..m(e_{n-1})
  SchemeResult result;
};
LevelScheme build_level_scheme(const Integrand& f, const HybridSet& a,
                               const MeasureConfig& cfg, MeasureMode mode, int n_levels,
                               double tolerance = 1e-6);

struct DiscreteResult {
  double value = 0.0;
  double last_term = 0.0;  // magnitude of the final included term
  int terms_used = 0;
  bool truncated = false;  // generator case: stopped by the tail criterion
};

/// c * sum f(x) H(x) over a finite point set.
DiscreteResult integrate_discrete(const std::function<double(double)>& f, const PointSet& q,
                                  double c, const PointWeight& h);

/// Same sum over a countable family x_0, x_1, ... produced by the generator;
/// truncates adaptively once |term| stays below term_tol. Throws
/// NonConvergent when the tail has not decayed within max_terms.
DiscreteResult integrate_discrete(const std::function<double(double)>& f,
                                  const std::function<double(int)>& generator, double c,
                                  const PointWeight& h, int max_terms = 1000000,
                                  double term_tol = 1e-12);

struct MixedResult {
  double value = 0.0;
  SchemeResult continuous;
  DiscreteResult discrete;
};

/// Integral over [a,b] plus the weighted sum over Q. Points of Q inside
/// [a,b] contribute to both terms (the source formula adds them verbatim);
/// no_double_count removes the interior points from the discrete term.
MixedResult integrate_mixed(const Integrand& f, double a, double b, const PointSet& q,
                            double c, const PointWeight& h, int n_levels,
                            bool no_double_count = false, double tolerance = 1e-6);

struct MeanValueReport {
  double lower_bound = 0.0;  // alpha * m(A)
  double j = 0.0;
  double upper_bound = 0.0;  // beta * m(A)
  bool holds = false;
};

/// Mean-value bracket alpha*m(A) <= J <= beta*m(A).
MeanValueReport mean_value_bounds(const Integrand& f, const HybridSet& a,
                                  const MeasureConfig& cfg, MeasureMode mode,
                                  int n_levels = 10000);

struct DensityReport {
  double estimate = 0.0;
  bool stabilized = false;
  std::vector<double> quotients;  // one per shrinking step
};

/// Density recovery: the derivative of J(.) by m(.) along intervals
/// shrinking onto x approaches f(x). Quotients J(B_n)/m(B_n) are reported
/// per step; stabilized when the last two agree within tol.
DensityReport radon_nikodym_check(const Integrand& f, double x, const MeasureConfig& cfg,
                                  MeasureMode mode, int steps = 18, double tol = 1e-6);

/// Finite-universe analogue: J(A) = sum of f(w)H(w) over members, perturbed
/// by the single element; the quotient is exactly f(element) at every step.
double radon_nikodym_finite(const UniversePtr& u, const std::vector<double>& f_values,
                            std::size_t element);

}  // namespace setcalc
