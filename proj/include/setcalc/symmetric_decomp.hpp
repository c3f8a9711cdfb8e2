#pragma once

#include <functional>
#include <string>
#include <vector>

#include "setcalc/calculus.hpp"
#include "setcalc/expr.hpp"
#include "setcalc/finite_core.hpp"

namespace setcalc {

/// sigma_k over the values selected by `a`, via the one-pass polynomial
/// coefficient recurrence. sigma_0 = 1; sigma_k = 0 when k exceeds |a|.
double elementary_symmetric(const Subset& a, const std::vector<double>& values, int k);
Rational elementary_symmetric(const Subset& a, const std::vector<Rational>& values, int k);

/// All of sigma_0..sigma_n for one subset in a single pass.
std::vector<double> elementary_symmetric_all(const Subset& a,
                                             const std::vector<double>& values);
std::vector<Rational> elementary_symmetric_all(const Subset& a,
                                               const std::vector<Rational>& values);

/// Number of m-ary compositions over n basis functions: n!/(n-m)!.
unsigned long long count_compositions(int n, int m);

/// Total count over all arities: sum of n!/(n-i)! for i = 1..n.
unsigned long long count_suite_variants(int n);

/// One set function per injective assignment of sigma-indices to the
/// expression's argument slots t1..tm, in lexicographic assignment order.
/// Function names substitute s<idx> for each slot, e.g. "t1^2 + t2^3" with
/// assignment (1,2) becomes "s1^2 + s2^3".
std::vector<SetFunction<Subset>> enumerate_compositions(const Expr& phi,
                                                        const std::vector<double>& values,
                                                        int n);

/// Sum of F1(A)*F2(A) over all 2^n subsets of the universe, empty set
/// included. Guarded to n <= 20.
double inner_product(const SetFunction<Subset>& f1, const SetFunction<Subset>& f2,
                     const UniversePtr& u);

struct DecompositionResult {
  std::vector<double> coefficients;  // c0 first when include_unit, then c1..cn
  double s_squared = 0.0;
  double condition = 0.0;  // Gram condition estimate
  bool flagged_min_norm = false;
  bool include_unit = false;
};

/// Least-squares projection of F onto span{sigma_1..sigma_n} (plus the
/// constant function when include_unit), solving the normal equations with a
/// rank-revealing factorization. Gram condition above 1e12 flags the
/// minimum-norm solution; exact linear dependence throws SingularGram.
DecompositionResult decompose(const SetFunction<Subset>& f, const UniversePtr& u,
                              const std::vector<double>& values, bool include_unit = false);

struct ExactDecompositionResult {
  std::vector<Rational> coefficients;
  Rational s_squared = 0;
  bool include_unit = false;
};

/// Same projection in exact rational arithmetic (Gaussian elimination on the
/// exact Gram matrix); recovers span members with s_squared identically 0.
ExactDecompositionResult decompose_exact(const std::function<Rational(const Subset&)>& f,
                                         const UniversePtr& u,
                                         const std::vector<Rational>& values,
                                         bool include_unit = false);

}  // namespace setcalc
