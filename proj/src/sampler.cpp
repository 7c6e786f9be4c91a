#include "bvpareto/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace bvpareto {

double sample_pareto2(double alpha, Rng& rng) {
  if (!(alpha > 0.0)) throw domain_error("sample_pareto2: alpha must be > 0");
  return std::expm1(-std::log1p(-rng.uniform01()) / alpha);
}

std::uint64_t sample_geometric_count(double theta, Rng& rng) {
  if (!(theta > 0.0) || !(theta <= 1.0))
    throw domain_error("sample_geometric_count: theta must lie in (0,1]");
  if (theta == 1.0) return 1;  // degenerate; consumes no randomness
  const double v = rng.uniform01();
  const double n = std::ceil(std::log1p(-v) / std::log1p(-theta));
  return n < 1.0 ? 1 : static_cast<std::uint64_t>(n);
}

namespace {

// Streaming componentwise minima over n Marshall-Olkin copies, in
// standardized coordinates. Ties between a copy's common and individual
// shock resolve to the common shock, so provenance equality is equivalent
// to exact coordinate equality.
LabeledDraw minima_over_copies(const ModelParams& p, std::uint64_t n,
                               Rng& rng) {
  LabeledDraw d;
  d.n_copies = n;
  double x1 = std::numeric_limits<double>::infinity();
  double x2 = x1;
  for (std::uint64_t k = 0; k < n; ++k) {
    const double u0 = sample_pareto2(p.alpha0, rng);
    const double u1 = sample_pareto2(p.alpha1, rng);
    const double u2 = sample_pareto2(p.alpha2, rng);
    const double v1 = std::min(u0, u1);
    const double v2 = std::min(u0, u2);
    if (v1 < x1) {
      x1 = v1;
      d.cause1 = {u0 <= u1 ? Shock::Common : Shock::First, k};
    }
    if (v2 < x2) {
      x2 = v2;
      d.cause2 = {u0 <= u2 ? Shock::Common : Shock::Second, k};
    }
  }
  d.pair = {p.loc_scale.mu1 + p.loc_scale.sigma1 * x1,
            p.loc_scale.mu2 + p.loc_scale.sigma2 * x2};
  return d;
}

}  // namespace

LabeledDraw sample_mobvpa(const ModelParams& p, Rng& rng) {
  validate(p);
  return minima_over_copies(p, 1, rng);
}

LabeledDraw sample_gmo(const ModelParams& p, Rng& rng) {
  validate(p);
  const std::uint64_t n = sample_geometric_count(p.theta, rng);
  return minima_over_copies(p, n, rng);
}

BivariateSample sample_gbb(const ModelParams& p, std::size_t n, Rng& rng,
                           RejectionStats* stats) {
  if (n < 1) throw domain_error("sample_gbb: n must be >= 1");
  validate(p);
  std::vector<PointPair> raw;
  raw.reserve(n);
  RejectionStats local;
  while (raw.size() < n) {
    const LabeledDraw d = sample_gmo(p, rng);
    ++local.raw_draws;
    if (d.structural_tie()) continue;
    ++local.accepted;
    raw.push_back(d.pair);
  }
  if (stats) *stats = local;
  return BivariateSample::partition(raw, p.loc_scale);
}

}  // namespace bvpareto
