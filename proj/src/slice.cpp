#include "bvpareto/slice.hpp"

#include <cmath>

#include "bvpareto/errors.hpp"

namespace bvpareto {

SliceResult slice_step(const std::function<double(double)>& logf, double x0,
                       Interval support, const SliceConfig& cfg, Rng& rng) {
  if (!(cfg.width > 0.0)) throw domain_error("slice_step: width must be > 0");
  if (!(x0 > support.lo) || !(x0 < support.hi))
    throw domain_error("slice_step: x0 outside the support interval");
  const double fx0 = logf(x0);
  if (!std::isfinite(fx0))
    throw domain_error("slice_step: logf(x0) must be finite");

  // Slice level: ln(u * f(x0)), u uniform.
  const double level = fx0 - rng.exponential();

  // Random placement of the initial width around x0, then the step-out
  // budget split randomly between the two sides (keeps the transition
  // reversible with a bounded number of expansions).
  double lo = x0 - cfg.width * rng.uniform01();
  double hi = lo + cfg.width;
  const double split = rng.uniform01();
  std::uint32_t j = static_cast<std::uint32_t>(
      std::floor(static_cast<double>(cfg.max_stepout) * split));
  std::uint32_t k = cfg.max_stepout >= 1 ? cfg.max_stepout - 1 - j : 0;

  if (lo < support.lo) lo = support.lo;
  if (hi > support.hi) hi = support.hi;
  while (j > 0 && lo > support.lo && logf(lo) > level) {
    lo -= cfg.width;
    if (lo < support.lo) lo = support.lo;
    --j;
  }
  while (k > 0 && hi < support.hi && logf(hi) > level) {
    hi += cfg.width;
    if (hi > support.hi) hi = support.hi;
    --k;
  }

  for (std::uint32_t s = 0; s < cfg.max_shrink; ++s) {
    const double x1 = lo + (hi - lo) * rng.uniform01();
    if (logf(x1) >= level) return {x1, false};
    if (x1 < x0)
      lo = x1;
    else
      hi = x1;
  }
  return {x0, true};
}

}  // namespace bvpareto
