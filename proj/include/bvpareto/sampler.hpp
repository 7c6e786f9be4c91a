#ifndef BVPARETO_SAMPLER_HPP
#define BVPARETO_SAMPLER_HPP

#include <cstdint>

#include "bvpareto/params.hpp"
#include "bvpareto/rng.hpp"
#include "bvpareto/sample_data.hpp"

namespace bvpareto {

// Exact generation for Pareto-II, the Marshall-Olkin bivariate Pareto, its
// geometric-minimum compound, and the absolutely continuous part via
// structural-tie rejection. Reproducibility contract: the same RngStream
// yields bit-identical sequences, and theta == 1 consumes exactly the same
// uniforms as the plain Marshall-Olkin path.

// Which latent exponential-clock shock produced a componentwise minimum.
enum class Shock : std::uint8_t { Common, First, Second };

struct Cause {
  Shock shock = Shock::Common;
  std::uint64_t copy = 0;  // which of the N compounded copies
  friend bool operator==(const Cause&, const Cause&) = default;
};

// One bivariate draw together with the provenance of both minima, so
// structural ties are detected exactly rather than by float comparison.
struct LabeledDraw {
  PointPair pair;  // raw coordinates (location-scale applied)
  Cause cause1, cause2;
  std::uint64_t n_copies = 1;

  // Both coordinates realized by the same copy's common shock.
  bool structural_tie() const {
    return cause1.shock == Shock::Common && cause1 == cause2;
  }
};

// Rejection bookkeeping for sample_gbb.
struct RejectionStats {
  std::uint64_t raw_draws = 0;
  std::uint64_t accepted = 0;
};

// Pareto-II(0,1,alpha) via quantile inversion (1-V)^(-1/alpha) - 1,
// evaluated as expm1(-log1p(-V)/alpha).
double sample_pareto2(double alpha, Rng& rng);

// Geometric count on {1,2,...} with success probability theta, by inversion.
// theta == 1 returns 1 without consuming randomness.
std::uint64_t sample_geometric_count(double theta, Rng& rng);

// X1 = min(U0,U1), X2 = min(U0,U2); theta is ignored.
LabeledDraw sample_mobvpa(const ModelParams& p, Rng& rng);

// Componentwise minima over N ~ Geom(theta) Marshall-Olkin copies,
// streamed (no N-length buffers).
LabeledDraw sample_gmo(const ModelParams& p, Rng& rng);

// n i.i.d. draws from the absolutely continuous part: sample_gmo with
// structural ties rejected. Expected raw draws per accepted pair is
// bb_normalizer(p). Optional stats out-param counts the rejection overhead.
BivariateSample sample_gbb(const ModelParams& p, std::size_t n, Rng& rng,
                           RejectionStats* stats = nullptr);

}  // namespace bvpareto

#endif
