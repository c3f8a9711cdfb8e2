#pragma once

#include <utility>
#include <vector>

#include "setcalc/calculus.hpp"
#include "setcalc/convergence.hpp"
#include "setcalc/finite_core.hpp"

namespace setcalc {

/// How the single-valued slice of a curve is turned into phi(x).
enum class InterpolantKind { MonotoneCubic, PiecewiseLinear };

/// One measure value and every function value observed at it.
struct GammaBucket {
  double x = 0.0;
  std::vector<double> ys;
};

/// Two sampled sets with equal measure but different function values; the
/// curve fails to be a function of x at this bucket.
struct GammaWitness {
  Subset first, second;
  double x = 0.0;
  double y1 = 0.0;
  double y2 = 0.0;
};

struct GammaSampling {
  int max_exhaustive = 16;  // enumerate all subsets up to this universe size
  int samples = 4096;       // random masks beyond it (plus empty and full)
  unsigned seed = 1;
};

/// The curve of (x, y) = (m(A), F(A)) pairs over a family of subsets,
/// bucketed by measure so single-valuedness can be decided per x.
struct GammaCurve {
  std::vector<std::pair<double, double>> points;  // every sampled pair
  std::vector<GammaBucket> buckets;               // sorted by x
  std::vector<GammaWitness> witnesses;
  bool single_valued = true;
  bool exhaustive = true;
  double bucket_width = 1.0;  // half the smallest positive weight
  InterpolantKind kind = InterpolantKind::MonotoneCubic;
  SetFunction<Subset> func;     // retained so queries can evaluate F
  MeasureSpace<Subset> space;   // and m on further sets
};

GammaCurve build_gamma(const SetFunction<Subset>& f, const MeasureSpace<Subset>& sp,
                       const UniversePtr& u, const GammaSampling& sampling = {});

/// phi(x) fitted over consecutive single-valued buckets. The cubic mode uses
/// three-point slopes clamped to preserve monotone runs, so quadratic data is
/// reproduced exactly; the linear mode keeps kinks visible to the theta search.
class GammaInterpolant {
 public:
  GammaInterpolant(std::vector<double> xs, std::vector<double> ys, InterpolantKind kind);

  double value(double x) const;
  double derivative(double x) const;  // at a kink: the right-hand slope
  const std::vector<double>& nodes() const { return xs_; }

 private:
  std::size_t interval_of(double x) const;

  std::vector<double> xs_, ys_, slopes_;
  InterpolantKind kind_;
};

/// Fit phi over all buckets whose x lies in [x_lo, x_hi]; throws
/// MultivaluedCurve if any bucket there carries two distinct values.
GammaInterpolant fit_slice(const GammaCurve& curve, double x_lo, double x_hi);

/// Fit phi over up to `span` single-valued buckets on each side of x.
GammaInterpolant fit_around(const GammaCurve& curve, double x, int span = 4);

/// The theta in [0,1] at which phi'(m(A) + theta (m(B) - m(A))) matches the
/// difference quotient (F(B) - F(A)) / (m(B) - m(A)) within tol. Returns 0.5
/// when that already matches (quotient equals the mid-slope), otherwise scans
/// a grid and bisects. Throws ZeroDenominator when both sets share a bucket,
/// MultivaluedCurve via the fit, NoWitness when no theta qualifies.
double mean_value_theta(const GammaCurve& curve, const Subset& a, const Subset& b,
                        double tol = 1e-6);

/// Comparison of the set-derivative limit along a shrinking schedule against
/// the fitted curve's slope at x = m(A).
struct BridgeReport {
  DerivativeEstimates set_side;
  double curve_side = 0.0;
  bool agree = false;  // set side resolved and within tolerance of curve side
  double tolerance = 0.0;
};

BridgeReport derivative_bridge_check(const GammaCurve& curve, const Subset& a,
                                     const SetSequence<Subset>& schedule,
                                     double tol = 1e-3);

}  // namespace setcalc
