#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "bvpareto/bayes.hpp"
#include "bvpareto/dist.hpp"
#include "bvpareto/errors.hpp"
#include "bvpareto/rng.hpp"
#include "bvpareto/sampler.hpp"

using namespace bvpareto;

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

BivariateSample small_sample(std::size_t n, RngStream s) {
  Rng rng(s);
  return sample_gbb({0.2, 0.1, 0.2, 0.4, {}}, n, rng);
}
}  // namespace

TEST_CASE("prior log densities at frozen points") {
  CHECK(log_prior_alpha(0.5, 0.70, 0.75) ==
        doctest::Approx(-0.51821230831410294).epsilon(1e-14));
  CHECK(log_prior_alpha(2.0, 1.3, 2.0) ==
        doctest::Approx(-1.5849723710520848).epsilon(1e-14));
  CHECK(log_prior_theta(0.3, 0.70, 0.75) ==
        doctest::Approx(-0.13520821142080491).epsilon(1e-14));
  CHECK(log_prior_theta(0.8, 2.0, 3.0) ==
        doctest::Approx(-0.95711272639441019).epsilon(1e-14));

  CHECK_THROWS_AS(log_prior_alpha(0.0, 0.7, 0.75), domain_error);
  CHECK_THROWS_AS(log_prior_alpha(1.0, -0.7, 0.75), domain_error);
  CHECK_THROWS_AS(log_prior_theta(0.0, 0.7, 0.75), domain_error);
  CHECK_THROWS_AS(log_prior_theta(1.0, 0.7, 0.75), domain_error);
}

TEST_CASE("beta prior integrates to one") {
  // Trapezoid over (0,1); a,b > 1 keeps the density bounded.
  const double a = 2.0, b = 3.0;
  const int n = 20000;
  double sum = 0.0;
  for (int i = 1; i < n; ++i) {
    const double x = static_cast<double>(i) / n;
    sum += std::exp(log_prior_theta(x, a, b));
  }
  CHECK(sum / n == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("full conditional is loglik plus matching prior") {
  const BivariateSample data = small_sample(80, {11, 2});
  const ModelParams at{0.3, 0.15, 0.25, 0.45, {}};
  const PriorSpec prior{};

  ModelParams sub = at;
  sub.alpha1 = 0.6;
  CHECK(log_full_conditional(ParamId::Alpha1, 0.6, at, data, prior) ==
        doctest::Approx(loglik(data, sub) +
                        log_prior_alpha(0.6, prior.k1, prior.scale1))
            .epsilon(1e-13));

  sub = at;
  sub.theta = 0.7;
  CHECK(log_full_conditional(ParamId::Theta, 0.7, at, data, prior) ==
        doctest::Approx(loglik(data, sub) +
                        log_prior_theta(0.7, prior.a, prior.b))
            .epsilon(1e-13));

  // Out-of-support proposals sit outside every slice.
  CHECK(log_full_conditional(ParamId::Theta, 1.0, at, data, prior) == -kInf);
  CHECK(log_full_conditional(ParamId::Theta, -0.1, at, data, prior) == -kInf);
  CHECK(log_full_conditional(ParamId::Alpha0, 0.0, at, data, prior) == -kInf);
  CHECK(log_full_conditional(ParamId::Alpha2, -2.0, at, data, prior) == -kInf);
}

TEST_CASE("sample quantile interpolates order statistics") {
  std::vector<double> v(100);
  for (int i = 0; i < 100; ++i) v[i] = 100 - i;  // unsorted on purpose
  CHECK(sample_quantile(v, 0.025) == doctest::Approx(3.475).epsilon(1e-14));
  CHECK(sample_quantile(v, 0.975) == doctest::Approx(97.525).epsilon(1e-14));
  CHECK(sample_quantile(v, 0.0) == 1.0);
  CHECK(sample_quantile(v, 1.0) == 100.0);
  CHECK(sample_quantile({1.0, 2.0, 3.0, 4.0}, 0.5) == doctest::Approx(2.5));
  CHECK(sample_quantile({7.0}, 0.3) == 7.0);
  CHECK_THROWS_AS(sample_quantile({}, 0.5), domain_error);
  CHECK_THROWS_AS(sample_quantile({1.0}, 1.5), domain_error);
  CHECK_THROWS_AS(sample_quantile({1.0}, -0.5), domain_error);
}

TEST_CASE("posterior summary: equal tails vs shortest window") {
  Chain chain;
  // Heavy right outlier: the shortest 60% window hugs the left cluster.
  chain.theta = {0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 10.0, 20.0, 30.0, 100.0};
  chain.alpha0 = chain.theta;
  chain.alpha1 = chain.theta;
  chain.alpha2 = chain.theta;

  const PosteriorSummary et = posterior_summary(chain, 0.6, false);
  CHECK(et.level == 0.6);
  CHECK_FALSE(et.hpd);
  CHECK(et.theta.mean == doctest::Approx(16.15));
  CHECK(et.theta.lo == doctest::Approx(sample_quantile(chain.theta, 0.2)));
  CHECK(et.theta.hi == doctest::Approx(sample_quantile(chain.theta, 0.8)));

  const PosteriorSummary hpd = posterior_summary(chain, 0.6, true);
  CHECK(hpd.hpd);
  CHECK(hpd.theta.lo == 0.0);
  CHECK(hpd.theta.hi == 0.5);
  CHECK(hpd.theta.hi - hpd.theta.lo < et.theta.hi - et.theta.lo);

  CHECK_THROWS_AS(posterior_summary(Chain{}, 0.95), domain_error);
  CHECK_THROWS_AS(posterior_summary(chain, 0.0), domain_error);
  CHECK_THROWS_AS(posterior_summary(chain, 1.0), domain_error);
}

TEST_CASE("chain draw accessor maps ids to columns") {
  Chain chain;
  chain.theta = {0.1};
  chain.alpha0 = {0.2};
  chain.alpha1 = {0.3};
  chain.alpha2 = {0.4};
  CHECK(&chain.draws(ParamId::Theta) == &chain.theta);
  CHECK(&chain.draws(ParamId::Alpha0) == &chain.alpha0);
  CHECK(&chain.draws(ParamId::Alpha1) == &chain.alpha1);
  CHECK(&chain.draws(ParamId::Alpha2) == &chain.alpha2);
  CHECK(chain.size() == 1);
}

TEST_CASE("gibbs run bookkeeping and reproducibility") {
  const BivariateSample data = small_sample(60, {21, 4});
  const PriorSpec prior{};
  const ModelParams init{0.5, 0.9, 0.8, 0.6, {}};
  const SliceConfig cfg{};
  const RngStream stream{77, 9};

  const Chain a = gibbs_run(data, prior, init, cfg, 250, 50, stream);
  CHECK(a.size() == 200);
  CHECK(a.total == 250);
  CHECK(a.burn_in == 50);
  CHECK(a.seed.seed == stream.seed);
  CHECK(a.seed.stream == stream.stream);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a.theta[i] > 0.0);
    CHECK(a.theta[i] < 1.0);
    CHECK(a.alpha0[i] > 0.0);
    CHECK(a.alpha1[i] > 0.0);
    CHECK(a.alpha2[i] > 0.0);
  }

  const Chain b = gibbs_run(data, prior, init, cfg, 250, 50, stream);
  CHECK(std::equal(a.theta.begin(), a.theta.end(), b.theta.begin()));
  CHECK(std::equal(a.alpha2.begin(), a.alpha2.end(), b.alpha2.begin()));
  CHECK(a.shrink_events == b.shrink_events);

  const Chain c = gibbs_run(data, prior, init, cfg, 250, 50, {77, 10});
  CHECK(c.theta != a.theta);
}

TEST_CASE("gibbs run rejects degenerate configurations") {
  const BivariateSample data = small_sample(20, {3, 3});
  const PriorSpec prior{};
  const SliceConfig cfg{};
  CHECK_THROWS_AS(
      gibbs_run(data, prior, {0.5, 1, 1, 1, {}}, cfg, 100, 100, {1, 1}),
      domain_error);
  CHECK_THROWS_AS(
      gibbs_run(data, prior, {1.0, 1, 1, 1, {}}, cfg, 100, 10, {1, 1}),
      domain_error);
  CHECK_THROWS_AS(
      gibbs_run(BivariateSample{}, prior, {0.5, 1, 1, 1, {}}, cfg, 100, 10,
                {1, 1}),
      domain_error);
}

TEST_CASE("posterior concentrates near the generating parameters") {
  const BivariateSample data = small_sample(400, {20260819, 6});
  const PriorSpec prior{};
  const ModelParams init{0.4794, 0.8654, 0.7781, 0.5386, {}};
  const Chain chain =
      gibbs_run(data, prior, init, SliceConfig{}, 1200, 200, {20260819, 7});
  const PosteriorSummary s = posterior_summary(chain, 0.95);

  CHECK(s.theta.mean == doctest::Approx(0.2).epsilon(0.8));
  CHECK(s.alpha0.mean == doctest::Approx(0.1).epsilon(1.0));
  CHECK(s.alpha1.mean == doctest::Approx(0.2).epsilon(0.7));
  CHECK(s.alpha2.mean == doctest::Approx(0.4).epsilon(0.7));
  CHECK(s.theta.lo < s.theta.mean);
  CHECK(s.theta.mean < s.theta.hi);
  CHECK(s.alpha2.lo < s.alpha2.hi);

  // HPD intervals are never wider than equal-tailed ones on the same draws.
  const PosteriorSummary h = posterior_summary(chain, 0.95, true);
  CHECK(h.theta.hi - h.theta.lo <= s.theta.hi - s.theta.lo + 1e-12);
  CHECK(h.alpha0.hi - h.alpha0.lo <= s.alpha0.hi - s.alpha0.lo + 1e-12);
}
