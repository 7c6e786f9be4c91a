#include "bvpareto/bayes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "bvpareto/dist.hpp"

namespace bvpareto {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
}

const std::vector<double>& Chain::draws(ParamId id) const {
  switch (id) {
    case ParamId::Theta:
      return theta;
    case ParamId::Alpha0:
      return alpha0;
    case ParamId::Alpha1:
      return alpha1;
    default:
      return alpha2;
  }
}

double log_prior_alpha(double x, double k, double scale) {
  if (!(k > 0.0) || !(scale > 0.0))
    throw domain_error("log_prior_alpha: k and scale must be > 0");
  if (!(x > 0.0)) throw domain_error("log_prior_alpha: x must be > 0");
  return -std::lgamma(k) - k * std::log(scale) + (k - 1.0) * std::log(x) -
         x / scale;
}

double log_prior_theta(double x, double a, double b) {
  if (!(a > 0.0) || !(b > 0.0))
    throw domain_error("log_prior_theta: a and b must be > 0");
  if (!(x > 0.0) || !(x < 1.0))
    throw domain_error("log_prior_theta: x must lie in (0,1)");
  const double log_beta =
      std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
  return -log_beta + (a - 1.0) * std::log(x) + (b - 1.0) * std::log1p(-x);
}

double log_full_conditional(ParamId which, double value,
                            const ModelParams& others,
                            const BivariateSample& data,
                            const PriorSpec& prior) {
  ModelParams p = others;
  double lp;
  switch (which) {
    case ParamId::Theta:
      if (!(value > 0.0) || !(value < 1.0)) return kNegInf;
      p.theta = value;
      lp = log_prior_theta(value, prior.a, prior.b);
      break;
    case ParamId::Alpha0:
      if (!(value > 0.0)) return kNegInf;
      p.alpha0 = value;
      lp = log_prior_alpha(value, prior.k0, prior.scale0);
      break;
    case ParamId::Alpha1:
      if (!(value > 0.0)) return kNegInf;
      p.alpha1 = value;
      lp = log_prior_alpha(value, prior.k1, prior.scale1);
      break;
    default:
      if (!(value > 0.0)) return kNegInf;
      p.alpha2 = value;
      lp = log_prior_alpha(value, prior.k2, prior.scale2);
      break;
  }
  try {
    return loglik(data, p) + lp;
  } catch (const numeric_error&) {
    return kNegInf;  // extreme proposal: outside the slice
  }
}

Chain gibbs_run(const BivariateSample& data, const PriorSpec& prior,
                const ModelParams& init, const SliceConfig& cfg,
                std::size_t total, std::size_t burn_in, RngStream stream) {
  if (total <= burn_in)
    throw domain_error("gibbs_run: total must exceed burn_in");
  validate(init);
  if (!(init.theta < 1.0))
    throw domain_error("gibbs_run: init theta must lie in (0,1)");
  if (data.size() == 0) throw domain_error("gibbs_run: empty sample");

  constexpr double inf = std::numeric_limits<double>::infinity();
  const Interval theta_support{0.0, 1.0};
  const Interval alpha_support{0.0, inf};

  Chain chain;
  chain.total = total;
  chain.burn_in = burn_in;
  chain.seed = stream;
  const std::size_t kept = total - burn_in;
  chain.theta.reserve(kept);
  chain.alpha0.reserve(kept);
  chain.alpha1.reserve(kept);
  chain.alpha2.reserve(kept);

  Rng rng(stream);
  ModelParams cur = init;
  const struct {
    ParamId id;
    double ModelParams::* field;
    const Interval& support;
  } coords[] = {
      {ParamId::Theta, &ModelParams::theta, theta_support},
      {ParamId::Alpha0, &ModelParams::alpha0, alpha_support},
      {ParamId::Alpha1, &ModelParams::alpha1, alpha_support},
      {ParamId::Alpha2, &ModelParams::alpha2, alpha_support},
  };

  for (std::size_t t = 0; t < total; ++t) {
    for (const auto& c : coords) {
      const auto logf = [&](double v) {
        return log_full_conditional(c.id, v, cur, data, prior);
      };
      const SliceResult r =
          slice_step(logf, cur.*(c.field), c.support, cfg, rng);
      if (r.shrink_exhausted) ++chain.shrink_events;
      cur.*(c.field) = r.x;
    }
    validate(cur);
    if (t >= burn_in) {
      chain.theta.push_back(cur.theta);
      chain.alpha0.push_back(cur.alpha0);
      chain.alpha1.push_back(cur.alpha1);
      chain.alpha2.push_back(cur.alpha2);
    }
  }
  return chain;
}

double sample_quantile(std::vector<double> values, double p) {
  if (values.empty()) throw domain_error("sample_quantile: empty input");
  if (!(p >= 0.0) || !(p <= 1.0))
    throw domain_error("sample_quantile: p must lie in [0,1]");
  std::sort(values.begin(), values.end());
  const double h = (static_cast<double>(values.size()) - 1.0) * p;
  const std::size_t i = static_cast<std::size_t>(h);
  if (i + 1 >= values.size()) return values.back();
  return values[i] + (h - static_cast<double>(i)) * (values[i + 1] - values[i]);
}

namespace {

ParamSummary summarize_one(const std::vector<double>& draws, double level,
                           bool hpd) {
  ParamSummary s;
  s.mean = std::accumulate(draws.begin(), draws.end(), 0.0) /
           static_cast<double>(draws.size());
  if (hpd) {
    // Shortest window of consecutive order statistics covering `level`.
    std::vector<double> sorted = draws;
    std::sort(sorted.begin(), sorted.end());
    const std::size_t n = sorted.size();
    std::size_t span = static_cast<std::size_t>(
        std::ceil(level * static_cast<double>(n)));
    span = std::min(std::max<std::size_t>(span, 1), n);
    std::size_t best = 0;
    double best_width = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i + span <= n; ++i) {
      const double w = sorted[i + span - 1] - sorted[i];
      if (w < best_width) {
        best_width = w;
        best = i;
      }
    }
    s.lo = sorted[best];
    s.hi = sorted[best + span - 1];
  } else {
    const double tail = (1.0 - level) / 2.0;
    s.lo = sample_quantile(draws, tail);
    s.hi = sample_quantile(draws, 1.0 - tail);
  }
  return s;
}

}  // namespace

PosteriorSummary posterior_summary(const Chain& chain, double level,
                                   bool hpd) {
  if (chain.size() == 0)
    throw domain_error("posterior_summary: empty chain");
  if (!(level > 0.0) || !(level < 1.0))
    throw domain_error("posterior_summary: level must lie in (0,1)");
  PosteriorSummary out;
  out.level = level;
  out.hpd = hpd;
  out.theta = summarize_one(chain.theta, level, hpd);
  out.alpha0 = summarize_one(chain.alpha0, level, hpd);
  out.alpha1 = summarize_one(chain.alpha1, level, hpd);
  out.alpha2 = summarize_one(chain.alpha2, level, hpd);
  return out;
}

}  // namespace bvpareto
