#ifndef BVPARETO_BAYES_HPP
#define BVPARETO_BAYES_HPP

#include <cstddef>
#include <cstdint>
#include <vector>

#include "bvpareto/params.hpp"
#include "bvpareto/rng.hpp"
#include "bvpareto/sample_data.hpp"
#include "bvpareto/slice.hpp"

namespace bvpareto {

// Slice-within-Gibbs posterior sampling: Gamma priors on the three shapes,
// a Beta prior on theta, cycle theta -> alpha0 -> alpha1 -> alpha2. theta is
// sampled on the open interval (0,1); the pure Block-Basu boundary theta=1
// is inaccessible under the Beta prior.

struct PriorSpec {
  double k0 = 0.70, scale0 = 0.75;  // Gamma shape/scale for alpha0
  double k1 = 0.70, scale1 = 0.75;
  double k2 = 0.70, scale2 = 0.75;
  double a = 0.70, b = 0.75;  // Beta for theta
};

enum class ParamId { Theta, Alpha0, Alpha1, Alpha2 };

// Post-burn-in draws plus the run's bookkeeping.
struct Chain {
  std::vector<double> theta, alpha0, alpha1, alpha2;
  std::size_t total = 0;
  std::size_t burn_in = 0;
  RngStream seed{};
  std::uint64_t shrink_events = 0;  // slice steps that exhausted shrinkage

  std::size_t size() const { return theta.size(); }
  const std::vector<double>& draws(ParamId id) const;
};

struct ParamSummary {
  double mean = 0.0;
  double lo = 0.0, hi = 0.0;  // credible interval
};

struct PosteriorSummary {
  ParamSummary theta, alpha0, alpha1, alpha2;
  double level = 0.0;
  bool hpd = false;
};

// log Gamma(k, scale) density at x > 0.
double log_prior_alpha(double x, double k, double scale);

// log Beta(a, b) density at x in (0,1).
double log_prior_theta(double x, double a, double b);

// loglik(data, p-with-substitution) + the matching log prior, with all
// additive prior constants included. Out-of-support values (and numeric
// failures at extreme proposals) return -infinity so the slice sampler
// treats them as outside the slice.
double log_full_conditional(ParamId which, double value,
                            const ModelParams& others,
                            const BivariateSample& data,
                            const PriorSpec& prior);

// Full Gibbs run from `init` (which must have theta in (0,1), alphas > 0).
// Deterministic in (data, prior, init, cfg, total, burn_in, stream).
Chain gibbs_run(const BivariateSample& data, const PriorSpec& prior,
                const ModelParams& init, const SliceConfig& cfg,
                std::size_t total, std::size_t burn_in, RngStream stream);

// Linear-interpolation sample quantile of the order statistics:
// h = (n-1)p + 1 in 1-based indexing. Used for credible and bootstrap
// intervals alike.
double sample_quantile(std::vector<double> values, double p);

// Per-parameter posterior mean and credible interval at `level`:
// equal-tailed by default, highest-posterior-density (shortest window of
// consecutive order statistics) when hpd is set.
PosteriorSummary posterior_summary(const Chain& chain, double level,
                                   bool hpd = false);

}  // namespace bvpareto

#endif
