#include "bvpareto/em.hpp"

#include <algorithm>
#include <cmath>

#include "bvpareto/dist.hpp"

namespace bvpareto {

double cond_mean_N_ac(double q) {
  if (!(q >= 0.0) || q >= 1.0)
    throw domain_error("cond_mean_N_ac: q must lie in [0,1)");
  return (1.0 + q * (4.0 + q)) / ((1.0 + q) * (1.0 - q));
}

namespace {

// The fictitious singular block's contribution to every M-step denominator:
// m0_tilde copies of a_i * log(1+U0), both replaced by their estimates.
double singular_block(const EStepQuantities& e) {
  return e.m0_tilde * e.a0_tilde * e.b0_star;
}

struct WeightedLogSums {
  double a_l1_below = 0.0, a_l2_below = 0.0;  // sums over I1 (y1 < y2)
  double a_l1_above = 0.0, a_l2_above = 0.0;  // sums over I2 (y1 > y2)
  double a_total = 0.0;
  double log_a_total = 0.0;
};

WeightedLogSums accumulate(const EStepQuantities& e,
                           const BivariateSample& data) {
  WeightedLogSums s;
  for (std::size_t i : data.below()) {
    const double a = e.a[i];
    s.a_l1_below += a * data.log1p_y1(i);
    s.a_l2_below += a * data.log1p_y2(i);
  }
  for (std::size_t i : data.above()) {
    const double a = e.a[i];
    s.a_l1_above += a * data.log1p_y1(i);
    s.a_l2_above += a * data.log1p_y2(i);
  }
  for (double a : e.a) {
    s.a_total += a;
    s.log_a_total += std::log(a);
  }
  return s;
}

}  // namespace

EStepQuantities estep(const BivariateSample& data, const ModelParams& p,
                      const EStepQuantities& prev, const EmOptions& opts) {
  validate(p);
  if (!(prev.a0_tilde >= 1.0))
    throw domain_error("estep: previous a0_tilde must be >= 1");
  EStepQuantities e;

  e.a.resize(data.size());
  const double one_minus_theta = 1.0 - p.theta;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const double q =
        one_minus_theta * std::exp(log_survival_mo_from_logs(
                              data.log1p_y1(i), data.log1p_y2(i),
                              data.region(i), p));
    if (q >= 1.0)
      throw numeric_error("estep: (1-theta)*S >= 1 (corrupted state)");
    e.a[i] = cond_mean_N_ac(q);
  }

  // Fixed-point refresh of the fictitious latent mean, then the log-scale
  // plug-in for a singular point whose common shock won the race.
  const double g = one_minus_theta * std::exp(-1.0 / prev.a0_tilde);
  e.a0_tilde = (1.0 + g) / (1.0 - g);
  // Exact latent-count mean for an unobserved singular point: integrating
  // its coordinate out of theta(1-theta)^(n-1) * n*alpha_sum*e^(-n*alpha_sum*L)
  // leaves a plain geometric, so E[N | singular] = 1/theta.  The a0_tilde
  // recursion plugs E[L] into E[N|L] and Jensen-gaps below this; it is kept
  // for the pseudo-likelihood record and the superseded variant.
  e.n0_mean = 1.0 / p.theta;
  if (opts.superseded_u0) {
    const double d = e.a0_tilde * p.alpha_sum() - 1.0;
    if (!(d > 0.0))
      throw numeric_error(
          "estep: superseded variant requires a0_tilde*alpha_sum > 1");
    e.b0_star = std::log1p(1.0 / d);
  } else {
    e.b0_star = 1.0 / (e.a0_tilde * p.alpha_sum());
  }

  e.m0_tilde = static_cast<double>(data.size()) * p.alpha0 /
               (p.alpha1 + p.alpha2);
  e.u1 = p.alpha0 / (p.alpha0 + p.alpha2);
  e.u2 = p.alpha2 / (p.alpha0 + p.alpha2);
  e.w1 = p.alpha0 / (p.alpha0 + p.alpha1);
  e.w2 = p.alpha1 / (p.alpha0 + p.alpha1);
  return e;
}

ModelParams mstep(const EStepQuantities& e, const BivariateSample& data) {
  const double m1 = static_cast<double>(data.m1());
  const double m2 = static_cast<double>(data.m2());
  const WeightedLogSums s = accumulate(e, data);
  const double d0 = singular_block(e);

  const double den0 = d0 + s.a_l2_below + s.a_l1_above;
  const double den1 = d0 + s.a_l1_below + s.a_l1_above;
  const double den2 = d0 + s.a_l2_below + s.a_l2_above;
  // The theta denominator counts expected geometric trials, so the
  // fictitious block contributes m0_tilde * E[N | singular] (a count), not
  // the log-weighted d0 used by the shape updates.
  const double dent = e.m0_tilde * e.n0_mean + s.a_total;
  if (!(den0 > 0.0) || !(den1 > 0.0) || !(den2 > 0.0) || !(dent > 0.0))
    throw numeric_error("mstep: vanishing update denominator");

  ModelParams p;
  p.alpha0 = (e.m0_tilde + e.u1 * m1 + e.w1 * m2) / den0;
  p.alpha1 = (m1 + e.w2 * m2) / den1;
  p.alpha2 = (m2 + e.u2 * m1) / den2;
  p.theta = std::min(1.0, (e.m0_tilde + m1 + m2) / dent);
  validate(p);
  return p;
}

double pseudo_loglik(const BivariateSample& data, const ModelParams& p,
                     const EStepQuantities& e) {
  validate(p);
  const double m1 = static_cast<double>(data.m1());
  const double m2 = static_cast<double>(data.m2());
  const WeightedLogSums s = accumulate(e, data);
  const double d0 = singular_block(e);

  double l1_plain = 0.0, l2_plain = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    l1_plain += data.log1p_y1(i);
    l2_plain += data.log1p_y2(i);
  }

  double q = e.m0_tilde * std::log(e.a0_tilde) + 2.0 * s.log_a_total;
  q += (e.m0_tilde + e.u1 * m1 + e.w1 * m2) * std::log(p.alpha0);
  q += (m1 + e.w2 * m2) * std::log(p.alpha1);
  q += (e.u2 * m1 + m2) * std::log(p.alpha2);
  q -= e.m0_tilde * e.b0_star + l1_plain + l2_plain;
  q -= p.alpha0 * (d0 + s.a_l2_below + s.a_l1_above);
  q -= p.alpha1 * (d0 + s.a_l1_below + s.a_l1_above);
  q -= p.alpha2 * (d0 + s.a_l2_below + s.a_l2_above);

  // Geometric-count terms m* ln(theta) + (sum a - m*) ln(1-theta); at the
  // theta = 1 boundary the count is degenerate at 1 and contributes nothing.
  if (p.theta < 1.0) {
    const double m_star = e.m0_tilde + m1 + m2;
    const double a_sum = e.m0_tilde * e.a0_tilde + s.a_total;
    q += m_star * std::log(p.theta) + (a_sum - m_star) * std::log1p(-p.theta);
  }
  if (!std::isfinite(q))
    throw numeric_error("pseudo_loglik: non-finite value");
  return q;
}

EMFit fit_em(const BivariateSample& data, const EmOptions& opts) {
  if (data.size() == 0) throw domain_error("fit_em: empty sample");
  if (!(opts.tol > 0.0)) throw domain_error("fit_em: tol must be > 0");
  validate(opts.init);

  EMFit fit;
  fit.params = opts.init;
  EStepQuantities e;  // a0_tilde starts at 1, the minimum of the count

  // Convergence watches the observed-data log-likelihood with an absolute
  // tolerance: the pseudo objective Q drifts with the refreshed fictitious
  // block and can plateau while the likelihood is still climbing, and the
  // likelihood's slow geometric tail makes a relative test quit while the
  // iterate is still shrunk toward its start.  Q stays in the trace as a
  // diagnostic.
  double prev_ll = 0.0;
  for (std::size_t t = 0; t < opts.max_iter; ++t) {
    e = estep(data, fit.params, e, opts);
    fit.params = mstep(e, data);
    fit.params.loc_scale = opts.init.loc_scale;  // fixed, never re-estimated
    const double q = pseudo_loglik(data, fit.params, e);
    const double ll = loglik(data, fit.params);
    fit.trace.push_back({q, ll});
    fit.iterations = t + 1;
    if (t > 0 && std::abs(ll - prev_ll) < opts.tol) {
      fit.converged = true;
      break;
    }
    prev_ll = ll;
  }
  return fit;
}

}  // namespace bvpareto
