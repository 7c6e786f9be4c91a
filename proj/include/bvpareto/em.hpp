#ifndef BVPARETO_EM_HPP
#define BVPARETO_EM_HPP

#include <cstddef>
#include <vector>

#include "bvpareto/params.hpp"
#include "bvpareto/sample_data.hpp"

namespace bvpareto {

// Modified EM for the four-parameter absolutely continuous law. The
// singular block is fictitious: its count, per-observation latent mean, and
// log-scale value are plug-in estimates refreshed every iteration, and the
// closed-form M-step consumes them alongside the per-observation conditional
// means of the geometric count.

// One E-step's worth of latent summaries.
struct EStepQuantities {
  std::vector<double> a;   // E[N | y_i] for the off-diagonal observations
  double a0_tilde = 1.0;   // fictitious-singular plug-in mean of N (recursion)
  double n0_mean = 1.0;    // exact E[N | singular] = 1/theta
  double b0_star = 0.0;    // estimate of log(1+U0) for a fictitious point
  double m0_tilde = 0.0;   // fictitious singular count
  double u1 = 0.0, u2 = 0.0;  // cause split of the second-coordinate minimum
  double w1 = 0.0, w2 = 0.0;  // cause split of the first-coordinate minimum
};

struct EmTracePoint {
  double q = 0.0;       // pseudo-likelihood after the iteration's update
  double loglik = 0.0;  // observed-data log-likelihood at the same iterate
};

struct EMFit {
  ModelParams params;
  std::size_t iterations = 0;
  std::vector<EmTracePoint> trace;
  bool converged = false;
};

struct EmOptions {
  ModelParams init{0.5, 1.0, 1.0, 1.0, {}};
  double tol = 1e-5;          // absolute, on the loglik change
  std::size_t max_iter = 5000;
  // Superseded variant that plugs in an estimate of U0 itself, using
  // log1p(1/(a0_tilde*alpha_sum - 1)) for the log-scale value. Only valid
  // while a0_tilde*alpha_sum > 1 (throws numeric_error otherwise); kept for
  // comparison tests.
  bool superseded_u0 = false;
};

// Posterior mean of the geometric count given an off-diagonal observation,
// q = (1-theta)*survival_mo(y): sum n^3 q^(n-1) / sum n^2 q^(n-1)
// = (1+4q+q^2)/((1+q)(1-q)).
double cond_mean_N_ac(double q);

// Latent summaries at params p. prev supplies the previous a0_tilde (the
// update is a fixed-point iteration in it); prev.a0_tilde must be >= 1.
EStepQuantities estep(const BivariateSample& data, const ModelParams& p,
                      const EStepQuantities& prev,
                      const EmOptions& opts = {});

// Closed-form maximizer given the latent summaries. theta clamps to 1 at
// the boundary. Throws numeric_error on a vanishing denominator.
ModelParams mstep(const EStepQuantities& e, const BivariateSample& data);

// Pseudo-likelihood of the complete fictitious data: the stopping-rule
// objective. theta == 1 evaluates the geometric terms in their limit form
// (contribution 0: the count is degenerate at 1).
double pseudo_loglik(const BivariateSample& data, const ModelParams& p,
                     const EStepQuantities& e);

// Full fit: estep/mstep cycle until the observed-data log-likelihood moves
// by less than tol (absolute) or max_iter is hit. Deterministic
// in (data, opts). Returns the last iterate; converged=false on hitting
// max_iter.
EMFit fit_em(const BivariateSample& data, const EmOptions& opts = {});

}  // namespace bvpareto

#endif
