#include "setcalc/lagrange.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <random>

namespace setcalc {

namespace {

// Two observed values count as one curve value when they agree to roundoff.
bool same_value(double y0, double y) {
  return std::abs(y - y0) <= 1e-9 * (1.0 + std::abs(y0));
}

}  // namespace

GammaCurve build_gamma(const SetFunction<Subset>& f, const MeasureSpace<Subset>& sp,
                       const UniversePtr& u, const GammaSampling& sampling) {
  GammaCurve curve;
  curve.func = f;
  curve.space = sp;

  double min_weight = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < u->size(); ++i) {
    const double w = u->weight(i);
    if (w > 0.0) min_weight = std::min(min_weight, w);
  }
  curve.bucket_width = std::isfinite(min_weight) ? min_weight / 2.0 : 1.0;

  const std::uint32_t total = std::uint32_t{1} << u->size();
  std::vector<std::uint32_t> masks;
  curve.exhaustive = static_cast<int>(u->size()) <= sampling.max_exhaustive;
  if (curve.exhaustive) {
    masks.resize(total);
    for (std::uint32_t m = 0; m < total; ++m) masks[m] = m;
  } else {
    masks.push_back(0);
    masks.push_back(total - 1);
    std::mt19937_64 gen(sampling.seed);
    std::uniform_int_distribution<std::uint32_t> pick(0, total - 1);
    for (int s = 0; s < sampling.samples; ++s) masks.push_back(pick(gen));
  }

  std::map<long long, std::size_t> index;  // bucket key -> position
  std::vector<Subset> first_set;           // first sampled set per bucket

  for (std::uint32_t mask : masks) {
    Subset s(u, mask);
    const double x = sp.measure(s);
    const double y = f.eval(s);
    curve.points.emplace_back(x, y);

    const long long key = std::llround(x / curve.bucket_width);
    auto [it, inserted] = index.try_emplace(key, curve.buckets.size());
    if (inserted) {
      curve.buckets.push_back({x, {y}});
      first_set.push_back(s);
    } else {
      GammaBucket& b = curve.buckets[it->second];
      if (!same_value(b.ys.front(), y)) {
        curve.single_valued = false;
        curve.witnesses.push_back(
            {first_set[it->second], s, b.x, b.ys.front(), y});
      }
      b.ys.push_back(y);
    }
  }

  // Re-emit buckets in ascending x (map order is ascending key).
  std::vector<GammaBucket> sorted;
  sorted.reserve(curve.buckets.size());
  for (const auto& [key, pos] : index) sorted.push_back(std::move(curve.buckets[pos]));
  curve.buckets = std::move(sorted);
  return curve;
}

GammaInterpolant::GammaInterpolant(std::vector<double> xs, std::vector<double> ys,
                                   InterpolantKind kind)
    : xs_(std::move(xs)), ys_(std::move(ys)), kind_(kind) {
  const std::size_t n = xs_.size();
  if (n < 2 || ys_.size() != n) throw Error("interpolant needs at least two nodes");
  for (std::size_t i = 1; i < n; ++i) {
    if (!(xs_[i] > xs_[i - 1])) throw Error("interpolant nodes must increase");
  }

  std::vector<double> h(n - 1), d(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    h[i] = xs_[i + 1] - xs_[i];
    d[i] = (ys_[i + 1] - ys_[i]) / h[i];
  }

  if (kind_ == InterpolantKind::PiecewiseLinear) {
    slopes_ = std::move(d);  // one secant per segment
    return;
  }

  slopes_.assign(n, 0.0);
  if (n == 2) {
    slopes_[0] = slopes_[1] = d[0];
  } else {
    // Three-point slopes: parabola derivative at each node, one-sided at the
    // ends. Quadratic data therefore reproduces its own derivative exactly.
    slopes_[0] = ((2.0 * h[0] + h[1]) * d[0] - h[0] * d[1]) / (h[0] + h[1]);
    for (std::size_t i = 1; i + 1 < n; ++i) {
      slopes_[i] = (h[i] * d[i - 1] + h[i - 1] * d[i]) / (h[i - 1] + h[i]);
    }
    slopes_[n - 1] = ((2.0 * h[n - 2] + h[n - 3]) * d[n - 2] - h[n - 2] * d[n - 3]) /
                     (h[n - 2] + h[n - 3]);
  }

  // Clamp so each segment stays monotone between its endpoints: zero slopes
  // across flat segments, drop sign-mismatched slopes, rescale overshoots.
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (d[i] == 0.0) {
      slopes_[i] = 0.0;
      slopes_[i + 1] = 0.0;
      continue;
    }
    double alpha = slopes_[i] / d[i];
    double beta = slopes_[i + 1] / d[i];
    if (alpha < 0.0) {
      slopes_[i] = 0.0;
      alpha = 0.0;
    }
    if (beta < 0.0) {
      slopes_[i + 1] = 0.0;
      beta = 0.0;
    }
    const double r2 = alpha * alpha + beta * beta;
    if (r2 > 9.0) {
      const double tau = 3.0 / std::sqrt(r2);
      slopes_[i] = tau * alpha * d[i];
      slopes_[i + 1] = tau * beta * d[i];
    }
  }
}

std::size_t GammaInterpolant::interval_of(double x) const {
  const auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
  std::size_t i = it - xs_.begin();
  if (i > 0) --i;
  if (i + 1 >= xs_.size()) i = xs_.size() - 2;
  return i;
}

double GammaInterpolant::value(double x) const {
  x = std::clamp(x, xs_.front(), xs_.back());
  const std::size_t i = interval_of(x);
  const double h = xs_[i + 1] - xs_[i];
  const double t = (x - xs_[i]) / h;
  if (kind_ == InterpolantKind::PiecewiseLinear) {
    return ys_[i] + slopes_[i] * (x - xs_[i]);
  }
  const double t2 = t * t, t3 = t2 * t;
  return (2.0 * t3 - 3.0 * t2 + 1.0) * ys_[i] + (t3 - 2.0 * t2 + t) * h * slopes_[i] +
         (-2.0 * t3 + 3.0 * t2) * ys_[i + 1] + (t3 - t2) * h * slopes_[i + 1];
}

double GammaInterpolant::derivative(double x) const {
  x = std::clamp(x, xs_.front(), xs_.back());
  const std::size_t i = interval_of(x);
  if (kind_ == InterpolantKind::PiecewiseLinear) return slopes_[i];
  const double h = xs_[i + 1] - xs_[i];
  const double t = (x - xs_[i]) / h;
  const double t2 = t * t;
  return (6.0 * t2 - 6.0 * t) * (ys_[i] - ys_[i + 1]) / h +
         (3.0 * t2 - 4.0 * t + 1.0) * slopes_[i] + (3.0 * t2 - 2.0 * t) * slopes_[i + 1];
}

namespace {

GammaInterpolant fit_buckets(const GammaCurve& curve, std::size_t lo, std::size_t hi) {
  std::vector<double> xs, ys;
  for (std::size_t i = lo; i <= hi; ++i) {
    const GammaBucket& b = curve.buckets[i];
    for (double y : b.ys) {
      if (!same_value(b.ys.front(), y)) {
        throw MultivaluedCurve("curve is not a function of x near x = " +
                               std::to_string(b.x));
      }
    }
    xs.push_back(b.x);
    ys.push_back(b.ys.front());
  }
  return GammaInterpolant(std::move(xs), std::move(ys), curve.kind);
}

bool bucket_single_valued(const GammaBucket& b) {
  for (double y : b.ys) {
    if (!same_value(b.ys.front(), y)) return false;
  }
  return true;
}

}  // namespace

GammaInterpolant fit_slice(const GammaCurve& curve, double x_lo, double x_hi) {
  if (x_lo > x_hi) std::swap(x_lo, x_hi);
  const double pad = curve.bucket_width / 2.0;
  std::size_t lo = curve.buckets.size(), hi = 0;
  for (std::size_t i = 0; i < curve.buckets.size(); ++i) {
    const double x = curve.buckets[i].x;
    if (x >= x_lo - pad && x <= x_hi + pad) {
      lo = std::min(lo, i);
      hi = std::max(hi, i);
    }
  }
  if (lo >= curve.buckets.size() || hi < lo + 1) {
    throw Error("slice holds fewer than two sampled measures");
  }
  return fit_buckets(curve, lo, hi);
}

GammaInterpolant fit_around(const GammaCurve& curve, double x, int span) {
  const double pad = curve.bucket_width / 2.0;
  std::size_t center = curve.buckets.size();
  for (std::size_t i = 0; i < curve.buckets.size(); ++i) {
    if (std::abs(curve.buckets[i].x - x) <= pad) {
      center = i;
      break;
    }
  }
  if (center >= curve.buckets.size()) throw Error("no sampled measure at x");
  if (!bucket_single_valued(curve.buckets[center])) {
    throw MultivaluedCurve("curve is not a function of x at x = " + std::to_string(x));
  }
  std::size_t lo = center, hi = center;
  while (lo > 0 && center - (lo - 1) <= static_cast<std::size_t>(span) &&
         bucket_single_valued(curve.buckets[lo - 1])) {
    --lo;
  }
  while (hi + 1 < curve.buckets.size() &&
         (hi + 1) - center <= static_cast<std::size_t>(span) &&
         bucket_single_valued(curve.buckets[hi + 1])) {
    ++hi;
  }
  if (hi < lo + 1) throw Error("too few single-valued neighbors around x");
  return fit_buckets(curve, lo, hi);
}

double mean_value_theta(const GammaCurve& curve, const Subset& a, const Subset& b,
                        double tol) {
  const double x_a = curve.space.measure(a);
  const double x_b = curve.space.measure(b);
  if (std::abs(x_b - x_a) <= curve.bucket_width / 2.0) {
    throw ZeroDenominator("the two sets share a measure bucket");
  }
  const double q = (curve.func.eval(b) - curve.func.eval(a)) / (x_b - x_a);
  const GammaInterpolant phi = fit_slice(curve, x_a, x_b);

  auto residual = [&](double theta) {
    return phi.derivative(x_a + theta * (x_b - x_a)) - q;
  };

  if (std::abs(residual(0.5)) <= tol) return 0.5;  // conventional pick

  const int grid = 2000;
  double prev = residual(0.0);
  if (std::abs(prev) <= tol) return 0.0;
  double prev_theta = 0.0;
  for (int k = 1; k <= grid; ++k) {
    const double theta = static_cast<double>(k) / grid;
    const double r = residual(theta);
    if (std::abs(r) <= tol) return theta;
    if ((prev < 0.0) != (r < 0.0)) {
      double lo = prev_theta, hi = theta;
      for (int it = 0; it < 100; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double rm = residual(mid);
        if (std::abs(rm) <= tol) return mid;
        if ((residual(lo) < 0.0) != (rm < 0.0)) {
          hi = mid;
        } else {
          lo = mid;
        }
      }
      // A sign change that never tightens below tol is a jump, not a root
      // (piecewise-linear kinks); keep scanning for a genuine match.
    }
    prev = r;
    prev_theta = theta;
  }
  throw NoWitness("no theta reproduces the difference quotient");
}

BridgeReport derivative_bridge_check(const GammaCurve& curve, const Subset& a,
                                     const SetSequence<Subset>& schedule, double tol) {
  const double x_a = curve.space.measure(a);
  const GammaInterpolant phi = fit_around(curve, x_a);

  BridgeReport rep{derivative_along(curve.func, curve.space, a, schedule),
                   phi.derivative(x_a), false, tol};
  if (rep.set_side.value) {
    rep.agree = std::abs(*rep.set_side.value - rep.curve_side) <= tol;
  }
  return rep;
}

}  // namespace setcalc
