#include "bvpareto/experiments.hpp"

#include <array>
#include <atomic>
#include <chrono>
#include <cmath>
#include <sstream>
#include <thread>
#include <vector>

#include <json.hpp>

#include "bvpareto/sampler.hpp"

namespace bvpareto {

namespace {

using Clock = std::chrono::steady_clock;

std::array<double, 4> as_array(const ModelParams& p) {
  return {p.theta, p.alpha0, p.alpha1, p.alpha2};
}

struct RepOutcome {
  bool ok = false;
  std::array<double, 4> estimate{};
  std::array<double, 4> ci_lo{}, ci_hi{};  // Bayes per-replication intervals
  std::array<bool, 4> covered{};
  double iterations = 0.0;
};

void validate_study(const StudyConfig& cfg) {
  validate(cfg.truth);
  if (cfg.replications < 1)
    throw domain_error("study: replications must be >= 1");
  if (!(cfg.level > 0.0) || !(cfg.level < 1.0))
    throw domain_error("study: level must lie in (0,1)");
  if (cfg.n < 1) throw domain_error("study: n must be >= 1");
}

// Runs fn(r) for r in [0, reps) on a bounded pool, results indexed by r.
template <typename Fn>
std::vector<RepOutcome> run_replications(std::size_t reps, unsigned jobs,
                                         Fn fn) {
  std::vector<RepOutcome> out(reps);
  const unsigned workers =
      std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(reps)));
  if (workers == 1) {
    for (std::size_t r = 0; r < reps; ++r) out[r] = fn(r);
    return out;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (std::size_t r = next.fetch_add(1); r < reps;
           r = next.fetch_add(1))
        out[r] = fn(r);
    });
  for (auto& t : pool) t.join();
  return out;
}

// Deterministic fold over the successful replications, ordered by index.
StudyReport aggregate(const StudyConfig& cfg,
                      const std::vector<RepOutcome>& reps, bool bayes) {
  StudyReport rep;
  rep.method = bayes ? Method::Bayes : Method::Em;
  rep.truth = cfg.truth;
  rep.n = cfg.n;
  rep.replications = cfg.replications;
  rep.level = cfg.level;
  if (bayes) {
    rep.chain_total = cfg.chain_total;
    rep.chain_burn_in = cfg.chain_burn_in;
  }

  std::size_t ok = 0;
  for (const auto& r : reps) ok += r.ok;
  rep.failures = reps.size() - ok;
  if (rep.failures * 100 > reps.size())
    throw nonconvergence_error(
        "study: more than 1% of replications failed (" +
        std::to_string(rep.failures) + " of " + std::to_string(reps.size()) +
        ")");
  if (ok == 0) throw nonconvergence_error("study: all replications failed");

  const std::array<double, 4> truth = as_array(cfg.truth);
  std::array<ParamStats, 4> stats{};
  for (std::size_t k = 0; k < 4; ++k) {
    std::vector<double> est;
    est.reserve(ok);
    double mse = 0.0, lo = 0.0, hi = 0.0, cov = 0.0;
    for (const auto& r : reps) {
      if (!r.ok) continue;
      est.push_back(r.estimate[k]);
      const double d = r.estimate[k] - truth[k];
      mse += d * d;
      lo += r.ci_lo[k];
      hi += r.ci_hi[k];
      cov += r.covered[k] ? 1.0 : 0.0;
    }
    const double nok = static_cast<double>(ok);
    ParamStats& s = stats[k];
    s.ae = 0.0;
    for (double e : est) s.ae += e;
    s.ae /= nok;
    s.mse = mse / nok;
    if (bayes) {
      s.ci_low = lo / nok;
      s.ci_high = hi / nok;
      s.cp = cov / nok;
    } else {
      const double tail = (1.0 - cfg.level) / 2.0;
      s.ci_low = sample_quantile(est, tail);
      s.ci_high = sample_quantile(est, 1.0 - tail);
    }
  }
  rep.theta = stats[0];
  rep.alpha0 = stats[1];
  rep.alpha1 = stats[2];
  rep.alpha2 = stats[3];

  if (!bayes) {
    double iters = 0.0;
    for (const auto& r : reps)
      if (r.ok) iters += r.iterations;
    rep.avg_iterations = iters / static_cast<double>(ok);
  }
  return rep;
}

RngStream substream(RngStream master, std::size_t offset) {
  return {master.seed, master.stream + offset};
}

}  // namespace

StudyReport run_em_study(const StudyConfig& cfg) {
  validate_study(cfg);
  const auto t0 = Clock::now();
  auto reps = run_replications(
      cfg.replications, cfg.jobs, [&](std::size_t r) {
        RepOutcome out;
        try {
          Rng rng(substream(cfg.seed, 2 * r));
          const BivariateSample data = sample_gbb(cfg.truth, cfg.n, rng);
          const EMFit fit = fit_em(data, cfg.em);
          if (!fit.converged) return out;
          out.ok = true;
          out.estimate = as_array(fit.params);
          out.iterations = static_cast<double>(fit.iterations);
        } catch (const error&) {
          out.ok = false;
        }
        return out;
      });
  StudyReport report = aggregate(cfg, reps, false);
  report.wall_time_s =
      std::chrono::duration<double>(Clock::now() - t0).count();
  return report;
}

StudyReport run_bayes_study(const StudyConfig& cfg) {
  validate_study(cfg);
  const auto t0 = Clock::now();
  const std::array<double, 4> truth = as_array(cfg.truth);
  auto reps = run_replications(
      cfg.replications, cfg.jobs, [&](std::size_t r) {
        RepOutcome out;
        try {
          Rng rng(substream(cfg.seed, 2 * r));
          const BivariateSample data = sample_gbb(cfg.truth, cfg.n, rng);
          const Chain chain =
              gibbs_run(data, cfg.prior, cfg.bayes_init, cfg.slice,
                        cfg.chain_total, cfg.chain_burn_in,
                        substream(cfg.seed, 2 * r + 1));
          const PosteriorSummary s = posterior_summary(chain, cfg.level);
          out.ok = true;
          const std::array<const ParamSummary*, 4> per = {
              &s.theta, &s.alpha0, &s.alpha1, &s.alpha2};
          for (std::size_t k = 0; k < 4; ++k) {
            out.estimate[k] = per[k]->mean;
            out.ci_lo[k] = per[k]->lo;
            out.ci_hi[k] = per[k]->hi;
            out.covered[k] =
                per[k]->lo <= truth[k] && truth[k] <= per[k]->hi;
          }
        } catch (const error&) {
          out.ok = false;
        }
        return out;
      });
  StudyReport report = aggregate(cfg, reps, true);
  report.wall_time_s =
      std::chrono::duration<double>(Clock::now() - t0).count();
  return report;
}

StudyReport bootstrap_from_fit(const ModelParams& fitted, std::size_t n,
                               std::size_t b, RngStream seed,
                               const EmOptions& em, double level,
                               unsigned jobs) {
  StudyConfig cfg;
  cfg.method = Method::Em;
  cfg.truth = fitted;
  cfg.n = n;
  cfg.replications = b;
  cfg.level = level;
  cfg.seed = seed;
  cfg.em = em;
  cfg.jobs = jobs;
  return run_em_study(cfg);
}

namespace {

nlohmann::json params_json(const ModelParams& p) {
  return {{"theta", p.theta},       {"alpha0", p.alpha0},
          {"alpha1", p.alpha1},     {"alpha2", p.alpha2},
          {"mu1", p.loc_scale.mu1}, {"mu2", p.loc_scale.mu2},
          {"sigma1", p.loc_scale.sigma1},
          {"sigma2", p.loc_scale.sigma2}};
}

nlohmann::json stats_json(const ParamStats& s, bool bayes) {
  nlohmann::json j{{"ae", s.ae},
                   {"mse", s.mse},
                   {"ci_low", s.ci_low},
                   {"ci_high", s.ci_high}};
  if (bayes) j["cp"] = s.cp;
  return j;
}

}  // namespace

std::string report_to_json(const StudyReport& r) {
  const bool bayes = r.method == Method::Bayes;
  nlohmann::json j;
  j["method"] = bayes ? "bayes" : "em";
  j["truth"] = params_json(r.truth);
  j["n"] = r.n;
  j["replications"] = r.replications;
  j["level"] = r.level;
  j["interval_type"] =
      bayes ? "equal-tailed credible (mean endpoints)" : "percentile";
  j["parameters"] = {{"theta", stats_json(r.theta, bayes)},
                     {"alpha0", stats_json(r.alpha0, bayes)},
                     {"alpha1", stats_json(r.alpha1, bayes)},
                     {"alpha2", stats_json(r.alpha2, bayes)}};
  if (bayes) {
    j["chain_total"] = r.chain_total;
    j["chain_burn_in"] = r.chain_burn_in;
  } else {
    j["avg_iterations"] = r.avg_iterations;
  }
  j["failures"] = r.failures;
  j["wall_time_s"] = r.wall_time_s;
  return j.dump(2) + "\n";
}

std::string report_to_text(const StudyReport& r) {
  const bool bayes = r.method == Method::Bayes;
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(4);
  os << (bayes ? "Bayes study" : "EM study") << "  n=" << r.n
     << "  replications=" << r.replications << "  level=" << r.level
     << "\n";
  os << "truth: theta=" << r.truth.theta << " alpha0=" << r.truth.alpha0
     << " alpha1=" << r.truth.alpha1 << " alpha2=" << r.truth.alpha2 << "\n";

  const char* names[4] = {"theta", "alpha0", "alpha1", "alpha2"};
  const ParamStats* stats[4] = {&r.theta, &r.alpha0, &r.alpha1, &r.alpha2};
  os << "param     ae        mse       ci_low    ci_high";
  if (bayes) os << "   cp";
  os << "\n";
  for (int k = 0; k < 4; ++k) {
    os.width(8);
    os << std::left << names[k] << std::right << "  ";
    os.width(8);
    os << stats[k]->ae << "  ";
    os.width(8);
    os << stats[k]->mse << "  ";
    os.width(8);
    os << stats[k]->ci_low << "  ";
    os.width(8);
    os << stats[k]->ci_high;
    if (bayes) {
      os << "  ";
      os.width(5);
      os << stats[k]->cp;
    }
    os << "\n";
  }
  if (bayes)
    os << "chain_total=" << r.chain_total
       << " chain_burn_in=" << r.chain_burn_in << "\n";
  else
    os << "avg_iterations=" << r.avg_iterations << "\n";
  os << "failures=" << r.failures << " wall_time_s=" << r.wall_time_s
     << "\n";
  return os.str();
}

}  // namespace bvpareto
