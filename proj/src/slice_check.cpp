#include "bvpareto/slice_check.hpp"

#include <cmath>
#include <limits>

#include "bvpareto/errors.hpp"

namespace bvpareto {

namespace {

// Batch-means standard error of the mean of f(x) over the chain.
double batch_se(const std::vector<double>& x, double center, bool squared) {
  const std::size_t b = static_cast<std::size_t>(
      std::sqrt(static_cast<double>(x.size())));
  const std::size_t len = x.size() / b;
  double grand = 0.0;
  std::vector<double> means(b, 0.0);
  for (std::size_t i = 0; i < b; ++i) {
    double s = 0.0;
    for (std::size_t j = i * len; j < (i + 1) * len; ++j) {
      const double v = squared ? (x[j] - center) * (x[j] - center) : x[j];
      s += v;
    }
    means[i] = s / static_cast<double>(len);
    grand += means[i];
  }
  grand /= static_cast<double>(b);
  double ss = 0.0;
  for (double m : means) ss += (m - grand) * (m - grand);
  return std::sqrt(ss / static_cast<double>(b - 1) /
                   static_cast<double>(b));
}

SliceCheckResult run_target(const char* name,
                            const std::function<double(double)>& logf,
                            Interval support, double x0, double a_mean,
                            double a_var, std::size_t iters,
                            const SliceConfig& cfg, Rng& rng) {
  std::vector<double> chain;
  chain.reserve(iters);
  double x = x0;
  for (std::size_t t = 0; t < iters; ++t) {
    x = slice_step(logf, x, support, cfg, rng).x;
    chain.push_back(x);
  }
  double mean = 0.0;
  for (double v : chain) mean += v;
  mean /= static_cast<double>(chain.size());
  double var = 0.0;
  for (double v : chain) var += (v - mean) * (v - mean);
  var /= static_cast<double>(chain.size() - 1);

  SliceCheckResult r;
  r.target = name;
  r.mean = mean;
  r.analytic_mean = a_mean;
  r.mean_se = batch_se(chain, 0.0, false);
  r.var = var;
  r.analytic_var = a_var;
  r.var_se = batch_se(chain, a_mean, true);
  r.pass = std::abs(mean - a_mean) <= 4.0 * r.mean_se &&
           std::abs(var - a_var) <= 4.0 * r.var_se;
  return r;
}

}  // namespace

std::vector<SliceCheckResult> slice_self_test(std::size_t iters,
                                              RngStream seed,
                                              const SliceConfig& cfg) {
  if (iters < 100) throw domain_error("slice_self_test: iters must be >= 100");
  Rng rng(seed);
  constexpr double inf = std::numeric_limits<double>::infinity();
  std::vector<SliceCheckResult> out;

  out.push_back(run_target(
      "uniform(0,1)", [](double) { return 0.0; }, {0.0, 1.0}, 0.5, 0.5,
      1.0 / 12.0, iters, cfg, rng));

  // Beta(2,5): mean a/(a+b), var ab/((a+b)^2 (a+b+1)).
  out.push_back(run_target(
      "beta(2,5)",
      [](double x) { return std::log(x) + 4.0 * std::log1p(-x); },
      {0.0, 1.0}, 0.3, 2.0 / 7.0, 10.0 / (49.0 * 8.0), iters, cfg, rng));

  // Gamma(0.7, 0.75): mean k*scale, var k*scale^2.
  out.push_back(run_target(
      "gamma(0.7,0.75)",
      [](double x) { return -0.3 * std::log(x) - x / 0.75; }, {0.0, inf},
      0.5, 0.7 * 0.75, 0.7 * 0.75 * 0.75, iters, cfg, rng));
  return out;
}

}  // namespace bvpareto
