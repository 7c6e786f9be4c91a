#ifndef BVPARETO_EXPERIMENTS_HPP
#define BVPARETO_EXPERIMENTS_HPP

#include <cstddef>
#include <string>

#include "bvpareto/bayes.hpp"
#include "bvpareto/em.hpp"
#include "bvpareto/params.hpp"
#include "bvpareto/rng.hpp"
#include "bvpareto/slice.hpp"

namespace bvpareto {

// Simulation-study harness: simulate at known truth, estimate per
// replication, aggregate average estimates, mean squared errors, intervals,
// and (for Bayes) coverage. Replications run on independent substreams of
// the master seed, so reports are deterministic and scheduling-independent.

enum class Method { Em, Bayes };

struct StudyConfig {
  Method method = Method::Em;
  ModelParams truth{};
  std::size_t n = 100;
  std::size_t replications = 100;
  double level = 0.95;
  RngStream seed{};
  unsigned jobs = 1;

  EmOptions em{};  // EM path

  PriorSpec prior{};  // Bayes path
  SliceConfig slice{};
  std::size_t chain_total = 6000;
  std::size_t chain_burn_in = 1000;
  ModelParams bayes_init{0.5, 1.0, 1.0, 1.0, {}};
};

struct ParamStats {
  double ae = 0.0;   // mean of per-replication estimates
  double mse = 0.0;  // mean squared deviation from truth
  double ci_low = 0.0, ci_high = 0.0;
  double cp = 0.0;  // Bayes only: fraction of intervals covering truth
};

struct StudyReport {
  Method method = Method::Em;
  ModelParams truth{};
  std::size_t n = 0;
  std::size_t replications = 0;
  double level = 0.95;
  ParamStats theta, alpha0, alpha1, alpha2;
  double avg_iterations = 0.0;  // EM only
  std::size_t failures = 0;
  double wall_time_s = 0.0;
  std::size_t chain_total = 0, chain_burn_in = 0;  // Bayes only
};

// One EM study: per replication, simulate n pairs at truth on substream 2r
// and fit; AE/MSE over successful fits, CI as the level-percentile interval
// of the replication estimates. Replications that fail to converge (or
// throw) are skipped and counted; more than 1% of them is an error.
StudyReport run_em_study(const StudyConfig& cfg);

// One Bayes study: per replication, simulate on substream 2r, run the Gibbs
// chain on substream 2r+1, summarize. AE is the mean posterior mean, CI the
// mean equal-tailed credible interval, CP its empirical coverage of truth.
StudyReport run_bayes_study(const StudyConfig& cfg);

// Parametric bootstrap around a fitted point: an EM study with truth :=
// fitted, B replications of size n.
StudyReport bootstrap_from_fit(const ModelParams& fitted, std::size_t n,
                               std::size_t b, RngStream seed,
                               const EmOptions& em = {}, double level = 0.95,
                               unsigned jobs = 1);

// Machine and human renderings. JSON keys: ae, mse, ci_low, ci_high, cp
// (Bayes), avg_iterations (EM), failures, wall_time_s, plus the resolved
// study settings.
std::string report_to_json(const StudyReport& report);
std::string report_to_text(const StudyReport& report);

}  // namespace bvpareto

#endif
