#include "setcalc/symmetric_decomp.hpp"

#include <Eigen/Dense>
#include <cctype>
#include <cmath>

namespace setcalc {

namespace {

constexpr int kMaxEnumerable = 20;  // 2^n subset sums stay tractable

template <class Num>
std::vector<Num> sigma_all(const Subset& a, const std::vector<Num>& values) {
  const std::size_t n = a.universe()->size();
  if (values.size() != n) throw Error("values list must match the universe size");
  std::vector<Num> e(n + 1, Num(0));
  e[0] = Num(1);
  std::size_t placed = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!a.contains(i)) continue;
    ++placed;
    for (std::size_t j = placed; j >= 1; --j) e[j] += values[i] * e[j - 1];
  }
  return e;
}

template <class Num>
Num sigma_k(const Subset& a, const std::vector<Num>& values, int k) {
  const int n = static_cast<int>(a.universe()->size());
  if (k < 0 || k > n) throw Error("symmetric function index out of range");
  return sigma_all(a, values)[k];
}

void check_enumerable(const UniversePtr& u) {
  if (u->size() > kMaxEnumerable) {
    throw Error("universe too large for full subset enumeration (max 20)");
  }
}

// Replace slot identifiers t<j> with s<assignment[j-1]> in the formula text.
std::string substitute_slots(const std::string& text, const std::vector<int>& assignment) {
  std::string out;
  std::size_t i = 0;
  while (i < text.size()) {
    const char c = text[i];
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < text.size() && (std::isalnum(static_cast<unsigned char>(text[j])) ||
                                 text[j] == '_')) {
        ++j;
      }
      std::string ident = text.substr(i, j - i);
      if (ident.size() >= 2 && ident[0] == 't' &&
          ident.find_first_not_of("0123456789", 1) == std::string::npos) {
        const int slot = std::stoi(ident.substr(1));
        if (slot >= 1 && slot <= static_cast<int>(assignment.size())) {
          ident = "s" + std::to_string(assignment[slot - 1]);
        }
      }
      out += ident;
      i = j;
    } else {
      out.push_back(c);
      ++i;
    }
  }
  return out;
}

}  // namespace

double elementary_symmetric(const Subset& a, const std::vector<double>& values, int k) {
  return sigma_k(a, values, k);
}

Rational elementary_symmetric(const Subset& a, const std::vector<Rational>& values, int k) {
  return sigma_k(a, values, k);
}

std::vector<double> elementary_symmetric_all(const Subset& a,
                                             const std::vector<double>& values) {
  return sigma_all(a, values);
}

std::vector<Rational> elementary_symmetric_all(const Subset& a,
                                               const std::vector<Rational>& values) {
  return sigma_all(a, values);
}

unsigned long long count_compositions(int n, int m) {
  if (m < 1 || m > n) throw Error("composition arity must satisfy 1 <= m <= n");
  if (n > kMaxEnumerable) throw Error("n too large for composition counting");
  unsigned long long acc = 1;
  for (int i = n - m + 1; i <= n; ++i) acc *= static_cast<unsigned long long>(i);
  return acc;
}

unsigned long long count_suite_variants(int n) {
  if (n < 1) throw Error("suite size must be positive");
  unsigned long long total = 0;
  for (int i = 1; i <= n; ++i) total += count_compositions(n, i);
  return total;
}

std::vector<SetFunction<Subset>> enumerate_compositions(const Expr& phi,
                                                        const std::vector<double>& values,
                                                        int n) {
  // The expression's arity is the largest slot index; every variable must be
  // a slot t1..tm.
  int m = 0;
  for (const auto& v : phi.variables()) {
    if (v.size() < 2 || v[0] != 't' ||
        v.find_first_not_of("0123456789", 1) != std::string::npos) {
      throw ParseError("composition expressions may only use variables t1..tm, got '" + v +
                       "'");
    }
    m = std::max(m, std::stoi(v.substr(1)));
  }
  if (m == 0) throw ParseError("composition expression uses no slots");
  if (m > n) throw Error("composition arity exceeds the number of basis functions");
  if (static_cast<int>(values.size()) != n) {
    throw Error("values list must have one entry per element");
  }

  // Walk injective assignments (sigma-index per slot) in lexicographic order.
  std::vector<SetFunction<Subset>> out;
  std::vector<int> assignment;
  std::vector<bool> used(n + 1, false);
  auto recurse = [&](auto&& self) -> void {
    if (static_cast<int>(assignment.size()) == m) {
      auto fn_values = values;
      auto fn_assignment = assignment;
      SetFunction<Subset> f;
      f.name = substitute_slots(phi.text(), assignment);
      f.continual = true;  // finite universes: trivially continual below the min weight
      f.eval = [phi, fn_values, fn_assignment](const Subset& a) {
        const auto sig = elementary_symmetric_all(a, fn_values);
        std::unordered_map<std::string, double> vars;
        for (std::size_t slot = 0; slot < fn_assignment.size(); ++slot) {
          vars["t" + std::to_string(slot + 1)] = sig[fn_assignment[slot]];
        }
        return phi.eval(vars);
      };
      out.push_back(std::move(f));
      return;
    }
    for (int idx = 1; idx <= n; ++idx) {
      if (used[idx]) continue;
      used[idx] = true;
      assignment.push_back(idx);
      self(self);
      assignment.pop_back();
      used[idx] = false;
    }
  };
  recurse(recurse);
  return out;
}

double inner_product(const SetFunction<Subset>& f1, const SetFunction<Subset>& f2,
                     const UniversePtr& u) {
  check_enumerable(u);
  const std::uint32_t count = 1u << u->size();
  double total = 0.0;
  for (std::uint32_t msk = 0; msk < count; ++msk) {
    const Subset a(u, msk);
    total += f1(a) * f2(a);
  }
  return total;
}

DecompositionResult decompose(const SetFunction<Subset>& f, const UniversePtr& u,
                              const std::vector<double>& values, bool include_unit) {
  check_enumerable(u);
  const int n = static_cast<int>(u->size());
  if (static_cast<int>(values.size()) != n) {
    throw Error("values list must have one entry per element");
  }
  const int dim = n + (include_unit ? 1 : 0);
  const std::uint32_t count = 1u << n;

  // Accumulate the normal equations over every subset: one sigma recurrence
  // pass gives the whole basis row.
  Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(dim, dim);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(dim);
  Eigen::VectorXd row(dim);
  for (std::uint32_t msk = 0; msk < count; ++msk) {
    const Subset a(u, msk);
    const auto sig = elementary_symmetric_all(a, values);
    int col = 0;
    if (include_unit) row(col++) = 1.0;
    for (int k = 1; k <= n; ++k) row(col++) = sig[k];
    gram.noalias() += row * row.transpose();
    rhs.noalias() += f(a) * row;
  }

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(gram);
  const double smax = svd.singularValues()(0);
  const double smin = svd.singularValues()(dim - 1);
  if (!(smax > 0.0) || smin / smax < 1e-14) {
    throw SingularGram("basis functions are linearly dependent for these values");
  }

  DecompositionResult res;
  res.include_unit = include_unit;
  res.condition = smax / smin;
  res.flagged_min_norm = res.condition > 1e12;

  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(gram);
  Eigen::VectorXd c = cod.solve(rhs);
  res.coefficients.assign(c.data(), c.data() + dim);

  double s2 = 0.0;
  for (std::uint32_t msk = 0; msk < count; ++msk) {
    const Subset a(u, msk);
    const auto sig = elementary_symmetric_all(a, values);
    double fitted = include_unit ? c(0) : 0.0;
    for (int k = 1; k <= n; ++k) fitted += c(include_unit ? k : k - 1) * sig[k];
    const double r = f(a) - fitted;
    s2 += r * r;
  }
  res.s_squared = s2;
  return res;
}

ExactDecompositionResult decompose_exact(const std::function<Rational(const Subset&)>& f,
                                         const UniversePtr& u,
                                         const std::vector<Rational>& values,
                                         bool include_unit) {
  check_enumerable(u);
  const int n = static_cast<int>(u->size());
  if (static_cast<int>(values.size()) != n) {
    throw Error("values list must have one entry per element");
  }
  const int dim = n + (include_unit ? 1 : 0);
  const std::uint32_t count = 1u << n;

  std::vector<std::vector<Rational>> gram(dim, std::vector<Rational>(dim, Rational(0)));
  std::vector<Rational> rhs(dim, Rational(0));
  std::vector<Rational> row(dim);
  for (std::uint32_t msk = 0; msk < count; ++msk) {
    const Subset a(u, msk);
    const auto sig = elementary_symmetric_all(a, values);
    int col = 0;
    if (include_unit) row[col++] = Rational(1);
    for (int k = 1; k <= n; ++k) row[col++] = sig[k];
    const Rational fv = f(a);
    for (int i = 0; i < dim; ++i) {
      for (int j = i; j < dim; ++j) gram[i][j] += row[i] * row[j];
      rhs[i] += fv * row[i];
    }
  }
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < i; ++j) gram[i][j] = gram[j][i];
  }

  // Gaussian elimination with exact pivoting; a missing pivot means the
  // basis is genuinely dependent.
  for (int col = 0; col < dim; ++col) {
    int pivot = -1;
    for (int r = col; r < dim; ++r) {
      if (gram[r][col] != 0) {
        pivot = r;
        break;
      }
    }
    if (pivot < 0) throw SingularGram("exact Gram matrix is singular");
    std::swap(gram[col], gram[pivot]);
    std::swap(rhs[col], rhs[pivot]);
    for (int r = col + 1; r < dim; ++r) {
      if (gram[r][col] == 0) continue;
      const Rational factor = gram[r][col] / gram[col][col];
      for (int cc = col; cc < dim; ++cc) gram[r][cc] -= factor * gram[col][cc];
      rhs[r] -= factor * rhs[col];
    }
  }
  std::vector<Rational> c(dim, Rational(0));
  for (int r = dim - 1; r >= 0; --r) {
    Rational acc = rhs[r];
    for (int cc = r + 1; cc < dim; ++cc) acc -= gram[r][cc] * c[cc];
    c[r] = acc / gram[r][r];
  }

  ExactDecompositionResult res;
  res.include_unit = include_unit;
  res.coefficients = c;
  Rational s2(0);
  for (std::uint32_t msk = 0; msk < count; ++msk) {
    const Subset a(u, msk);
    const auto sig = elementary_symmetric_all(a, values);
    Rational fitted = include_unit ? c[0] : Rational(0);
    for (int k = 1; k <= n; ++k) fitted += c[include_unit ? k : k - 1] * sig[k];
    const Rational r = f(a) - fitted;
    s2 += r * r;
  }
  res.s_squared = s2;
  return res;
}

}  // namespace setcalc
