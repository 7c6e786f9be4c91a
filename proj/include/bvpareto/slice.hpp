#ifndef BVPARETO_SLICE_HPP
#define BVPARETO_SLICE_HPP

#include <cstdint>
#include <functional>

#include "bvpareto/rng.hpp"

namespace bvpareto {

// Univariate slice sampling with linear step-out and shrinkage. The target
// is given by its log density up to an additive constant; points outside
// the support must evaluate to -infinity rather than throw.

struct SliceConfig {
  double width = 1.0;
  std::uint32_t max_stepout = 100;  // total width-units split between sides
  std::uint32_t max_shrink = 100;
};

// Open support interval; use 0/infinity style bounds for half-lines.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

struct SliceResult {
  double x = 0.0;
  bool shrink_exhausted = false;  // x is the unchanged input point
};

// One transition of the slice sampler from x0. Step-out intervals are
// truncated at the support boundary; if max_shrink rejections occur the
// input point is returned with the flag set.
SliceResult slice_step(const std::function<double(double)>& logf, double x0,
                       Interval support, const SliceConfig& cfg, Rng& rng);

}  // namespace bvpareto

#endif
