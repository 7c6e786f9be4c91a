// Command-line front end: simulate | fit-em | fit-bayes | study | prep-data
// | eval. Every run writes a manifest (resolved config, seed, output
// digests) next to its primary output; re-running a manifest's config with
// the same seed reproduces the outputs byte-for-byte.

#include <chrono>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "bvpareto/bayes.hpp"
#include "bvpareto/dataio.hpp"
#include "bvpareto/dist.hpp"
#include "bvpareto/em.hpp"
#include "bvpareto/experiments.hpp"
#include "bvpareto/sampler.hpp"
#include "bvpareto/slice_check.hpp"

namespace {

using bvpareto::ModelParams;
using nlohmann::json;

constexpr const char* kVersion = "0.1.0";

// Exit codes: 0 success, 2 usage/config error, 3 data error, 4 numeric
// error.
constexpr int kUsageError = 2;
constexpr int kDataError = 3;
constexpr int kNumericError = 4;

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string digest_hex(std::string_view bytes) {
  std::ostringstream os;
  os << "fnv1a64:" << std::hex << std::setw(16) << std::setfill('0')
     << fnv1a64(bytes);
  return os.str();
}

// Collects written outputs so the manifest can list them with digests.
class RunWriter {
 public:
  void write(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw bvpareto::io_error("cannot write '" + path + "'");
    out << content;
    if (!out) throw bvpareto::io_error("write to '" + path + "' failed");
    entries_.push_back({{"path", path}, {"digest", digest_hex(content)}});
  }
  const json& entries() const { return entries_; }

 private:
  json entries_ = json::array();
};

struct SeedChoice {
  bvpareto::RngStream stream{};
  bool from_entropy = false;
};

json seed_json(const SeedChoice& s) {
  return {{"seed", s.stream.seed},
          {"stream", s.stream.stream},
          {"source", s.from_entropy ? "os-entropy" : "explicit"}};
}

void write_manifest(const std::string& primary_out,
                    const std::string& subcommand, const SeedChoice& seed,
                    const json& config, const RunWriter& writer,
                    std::chrono::steady_clock::time_point t0) {
  json m;
  m["subcommand"] = subcommand;
  m["version"] = kVersion;
  m["seed"] = seed_json(seed);
  m["config"] = config;
  m["outputs"] = writer.entries();
  m["wall_time_s"] =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  const std::string path = primary_out + ".manifest.json";
  std::ofstream out(path, std::ios::binary);
  if (!out) throw bvpareto::io_error("cannot write '" + path + "'");
  out << m.dump(2) << "\n";
}

// ---- configuration plumbing -------------------------------------------

// Loads --config if given; a manifest file is accepted too (its "config"
// object is unwrapped), so a past run can be replayed directly.
json load_config(const std::string& path) {
  if (path.empty()) return json::object();
  std::ifstream in(path);
  if (!in) throw bvpareto::io_error("cannot open config '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw bvpareto::schema_error("config '" + path + "': " + e.what());
  }
  if (!j.is_object())
    throw bvpareto::schema_error("config '" + path +
                                 "' must be a JSON object");
  if (j.contains("config") && j["config"].is_object() &&
      j.contains("subcommand"))
    return j["config"];  // a manifest: replay its resolved configuration
  return j;
}

// Flag value if the flag was given, else the config value at `ptr`, else
// the current (default) value.
template <typename T>
T resolved(const CLI::Option* opt, T current, const json& cfg,
           const char* ptr) {
  if (opt != nullptr && opt->count() > 0) return current;
  return cfg.value(json::json_pointer(ptr), current);
}

json params_to_json(const ModelParams& p) {
  return {{"theta", p.theta},       {"alpha0", p.alpha0},
          {"alpha1", p.alpha1},     {"alpha2", p.alpha2},
          {"mu1", p.loc_scale.mu1}, {"mu2", p.loc_scale.mu2},
          {"sigma1", p.loc_scale.sigma1},
          {"sigma2", p.loc_scale.sigma2}};
}

ModelParams params_from_json(const json& j, ModelParams base) {
  base.theta = j.value("theta", base.theta);
  base.alpha0 = j.value("alpha0", base.alpha0);
  base.alpha1 = j.value("alpha1", base.alpha1);
  base.alpha2 = j.value("alpha2", base.alpha2);
  base.loc_scale.mu1 = j.value("mu1", base.loc_scale.mu1);
  base.loc_scale.mu2 = j.value("mu2", base.loc_scale.mu2);
  base.loc_scale.sigma1 = j.value("sigma1", base.loc_scale.sigma1);
  base.loc_scale.sigma2 = j.value("sigma2", base.loc_scale.sigma2);
  return base;
}

// Shared per-command option bundles ------------------------------------

struct ParamFlags {
  ModelParams value{};
  CLI::Option* theta = nullptr;
  CLI::Option* alpha0 = nullptr;
  CLI::Option* alpha1 = nullptr;
  CLI::Option* alpha2 = nullptr;
  CLI::Option* mu1 = nullptr;
  CLI::Option* mu2 = nullptr;
  CLI::Option* sigma1 = nullptr;
  CLI::Option* sigma2 = nullptr;

  void add(CLI::App* cmd, const ModelParams& defaults,
           const char* what) {
    value = defaults;
    theta = cmd->add_option("--theta", value.theta,
                            std::string("geometric parameter ") + what);
    alpha0 = cmd->add_option("--alpha0", value.alpha0,
                             std::string("common-shock shape ") + what);
    alpha1 = cmd->add_option("--alpha1", value.alpha1,
                             std::string("first-component shape ") + what);
    alpha2 = cmd->add_option("--alpha2", value.alpha2,
                             std::string("second-component shape ") + what);
    mu1 = cmd->add_option("--mu1", value.loc_scale.mu1, "location of y1");
    mu2 = cmd->add_option("--mu2", value.loc_scale.mu2, "location of y2");
    sigma1 =
        cmd->add_option("--sigma1", value.loc_scale.sigma1, "scale of y1");
    sigma2 =
        cmd->add_option("--sigma2", value.loc_scale.sigma2, "scale of y2");
  }

  // Merge precedence flags > cfg[key] > defaults already in `value`.
  ModelParams resolve(const json& cfg, const std::string& key) const {
    ModelParams p = value;
    const json sub = cfg.value(key, json::object());
    if (theta->count() == 0) p.theta = sub.value("theta", p.theta);
    if (alpha0->count() == 0) p.alpha0 = sub.value("alpha0", p.alpha0);
    if (alpha1->count() == 0) p.alpha1 = sub.value("alpha1", p.alpha1);
    if (alpha2->count() == 0) p.alpha2 = sub.value("alpha2", p.alpha2);
    if (mu1->count() == 0)
      p.loc_scale.mu1 = sub.value("mu1", p.loc_scale.mu1);
    if (mu2->count() == 0)
      p.loc_scale.mu2 = sub.value("mu2", p.loc_scale.mu2);
    if (sigma1->count() == 0)
      p.loc_scale.sigma1 = sub.value("sigma1", p.loc_scale.sigma1);
    if (sigma2->count() == 0)
      p.loc_scale.sigma2 = sub.value("sigma2", p.loc_scale.sigma2);
    return p;
  }
};

struct SeedFlags {
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
  CLI::Option* seed_opt = nullptr;
  CLI::Option* stream_opt = nullptr;

  void add(CLI::App* cmd) {
    seed_opt = cmd->add_option("--seed", seed, "master RNG seed");
    stream_opt =
        cmd->add_option("--stream", stream, "RNG substream id (default 0)");
  }

  // required: error when neither flag nor config supplies a seed.
  SeedChoice resolve(const json& cfg, bool required) const {
    SeedChoice c;
    const json sub = cfg.value("seed", json::object());
    if (seed_opt->count() > 0) {
      c.stream.seed = seed;
    } else if (sub.contains("seed")) {
      c.stream.seed = sub["seed"].get<std::uint64_t>();
    } else if (required) {
      throw bvpareto::domain_error(
          "--seed is required for reproducible studies");
    } else {
      c.stream.seed = std::random_device{}();
      c.stream.seed = (c.stream.seed << 32) ^ std::random_device{}();
      c.from_entropy = true;
    }
    if (stream_opt->count() > 0)
      c.stream.stream = stream;
    else
      c.stream.stream = sub.value("stream", std::uint64_t{0});
    return c;
  }
};

struct DataFlags {
  std::string path;
  std::string col1 = "y1", col2 = "y2";
  std::string schema = "auto";
  std::string filter;
  CLI::Option* col1_opt = nullptr;
  CLI::Option* col2_opt = nullptr;
  CLI::Option* schema_opt = nullptr;
  CLI::Option* filter_opt = nullptr;

  void add(CLI::App* cmd) {
    cmd->add_option("--data", path, "input CSV")->required();
    col1_opt = cmd->add_option("--col1", col1, "first-coordinate column");
    col2_opt = cmd->add_option("--col2", col2, "second-coordinate column");
    schema_opt = cmd->add_option(
        "--schema", schema, "auto | header | positional | abalone");
    filter_opt = cmd->add_option("--filter", filter,
                                 "keep rows with column=value");
  }

  bvpareto::ReadOptions read_options(const json& cfg) const {
    bvpareto::ReadOptions opts;
    const std::string mode = resolved(schema_opt, schema, cfg, "/schema");
    if (mode == "auto")
      opts.schema = bvpareto::SchemaMode::Auto;
    else if (mode == "header")
      opts.schema = bvpareto::SchemaMode::Header;
    else if (mode == "positional")
      opts.schema = bvpareto::SchemaMode::Positional;
    else if (mode == "abalone")
      opts.schema = bvpareto::SchemaMode::Abalone;
    else
      throw bvpareto::domain_error("unknown schema '" + mode + "'");
    const std::string f = resolved(filter_opt, filter, cfg, "/filter");
    if (!f.empty()) {
      const auto eq = f.find('=');
      if (eq == std::string::npos || eq == 0)
        throw bvpareto::domain_error("--filter expects column=value");
      opts.filter_column = f.substr(0, eq);
      opts.filter_value = f.substr(eq + 1);
    }
    return opts;
  }

  std::vector<bvpareto::PointPair> load(const json& cfg) const {
    return bvpareto::read_pairs(
        path, resolved(col1_opt, col1, cfg, "/col1"),
        resolved(col2_opt, col2, cfg, "/col2"), read_options(cfg));
  }
};

// ---- subcommand payloads ----------------------------------------------

struct SimulateCmd {
  ParamFlags params;
  SeedFlags seeds;
  std::string config_path, out;
  std::size_t n = 100;
  CLI::Option* n_opt = nullptr;
};

struct FitEmCmd {
  DataFlags data;
  ParamFlags init;
  SeedFlags seeds;
  std::string config_path, out;
  double tol = 1e-5;
  std::size_t max_iter = 5000;
  bool superseded_u0 = false;
  CLI::Option* tol_opt = nullptr;
  CLI::Option* max_iter_opt = nullptr;
  CLI::Option* superseded_opt = nullptr;
};

struct FitBayesCmd {
  DataFlags data;
  ParamFlags init;
  SeedFlags seeds;
  std::string config_path, out, chain_out;
  double k0 = 0.70, scale0 = 0.75, k1 = 0.70, scale1 = 0.75, k2 = 0.70,
         scale2 = 0.75, a = 0.70, b = 0.75;
  double width = 1.0;
  std::uint32_t max_stepout = 100, max_shrink = 100;
  std::size_t total = 6000, burn_in = 1000;
  double level = 0.95;
  bool hpd = false;
  bool self_test = false;
  CLI::Option* opt_k0 = nullptr; CLI::Option* opt_scale0 = nullptr;
  CLI::Option* opt_k1 = nullptr; CLI::Option* opt_scale1 = nullptr;
  CLI::Option* opt_k2 = nullptr; CLI::Option* opt_scale2 = nullptr;
  CLI::Option* opt_a = nullptr; CLI::Option* opt_b = nullptr;
  CLI::Option* opt_width = nullptr;
  CLI::Option* opt_stepout = nullptr;
  CLI::Option* opt_shrink = nullptr;
  CLI::Option* opt_total = nullptr;
  CLI::Option* opt_burnin = nullptr;
  CLI::Option* opt_level = nullptr;
  CLI::Option* opt_hpd = nullptr;
};

struct StudyCmd {
  SeedFlags seeds;
  std::string config_path, out;
  std::size_t replications = 0, n = 0;
  unsigned jobs = 1;
  std::string method;
  CLI::Option* reps_opt = nullptr;
  CLI::Option* n_opt = nullptr;
  CLI::Option* method_opt = nullptr;
};

struct PrepDataCmd {
  DataFlags data;
  SeedFlags seeds;
  std::string config_path, out, survival_out;
  double t1 = 0.0, t2 = 0.0;
  CLI::Option* t1_opt = nullptr;
  CLI::Option* t2_opt = nullptr;
};

struct EvalCmd {
  ParamFlags params;
  SeedFlags seeds;
  std::string config_path, out;
  double y1 = 0.0, y2 = 0.0;
  std::string grid_y1, grid_y2;
  CLI::Option* y1_opt = nullptr;
  CLI::Option* y2_opt = nullptr;
  CLI::Option* grid1_opt = nullptr;
  CLI::Option* grid2_opt = nullptr;
};

// "min:max:steps"
void parse_axis(const std::string& spec, double& lo, double& hi,
                std::size_t& steps) {
  std::istringstream is(spec);
  std::string a, b, c;
  if (!std::getline(is, a, ':') || !std::getline(is, b, ':') ||
      !std::getline(is, c))
    throw bvpareto::domain_error("grid axis '" + spec +
                                 "' must be min:max:steps");
  try {
    lo = std::stod(a);
    hi = std::stod(b);
    steps = std::stoul(c);
  } catch (const std::exception&) {
    throw bvpareto::domain_error("grid axis '" + spec +
                                 "' must be min:max:steps");
  }
}

// ---- subcommand implementations ----------------------------------------

int run_simulate(const SimulateCmd& c) {
  const auto t0 = std::chrono::steady_clock::now();
  const json cfg = load_config(c.config_path);
  const ModelParams p = c.params.resolve(cfg, "params");
  const std::size_t n = resolved(c.n_opt, c.n, cfg, "/n");
  const SeedChoice seed = c.seeds.resolve(cfg, false);

  bvpareto::Rng rng(seed.stream);
  bvpareto::RejectionStats stats;
  const bvpareto::BivariateSample sample =
      bvpareto::sample_gbb(p, n, rng, &stats);
  // Emit raw coordinates: undo the standardization that partition applied.
  std::vector<bvpareto::PointPair> raw;
  raw.reserve(n);
  for (const auto& q : sample.pairs())
    raw.push_back({p.loc_scale.mu1 + p.loc_scale.sigma1 * q.y1,
                   p.loc_scale.mu2 + p.loc_scale.sigma2 * q.y2});

  RunWriter w;
  w.write(c.out, bvpareto::pairs_to_csv(raw));

  json config{{"params", params_to_json(p)},
              {"n", n},
              {"seed", {{"seed", seed.stream.seed},
                        {"stream", seed.stream.stream}}}};
  write_manifest(c.out, "simulate", seed, config, w, t0);
  std::cout << "wrote " << n << " pairs to " << c.out << " ("
            << stats.raw_draws << " raw draws)\n";
  return 0;
}

json emfit_to_json(const bvpareto::EMFit& fit) {
  json trace = json::array();
  for (const auto& pt : fit.trace)
    trace.push_back({{"q", pt.q}, {"loglik", pt.loglik}});
  return {{"params", params_to_json(fit.params)},
          {"iterations", fit.iterations},
          {"converged", fit.converged},
          {"final_q", fit.trace.empty() ? 0.0 : fit.trace.back().q},
          {"final_loglik",
           fit.trace.empty() ? 0.0 : fit.trace.back().loglik},
          {"trace", trace}};
}

int run_fit_em(const FitEmCmd& c) {
  const auto t0 = std::chrono::steady_clock::now();
  const json cfg = load_config(c.config_path);
  bvpareto::EmOptions opts;
  opts.init = c.init.resolve(cfg, "init");
  opts.tol = resolved(c.tol_opt, c.tol, cfg, "/tol");
  opts.max_iter = resolved(c.max_iter_opt, c.max_iter, cfg, "/max_iter");
  opts.superseded_u0 =
      resolved(c.superseded_opt, c.superseded_u0, cfg, "/superseded_u0");
  const SeedChoice seed = c.seeds.resolve(cfg, false);

  const auto raw = c.data.load(cfg);
  const auto sample =
      bvpareto::BivariateSample::partition(raw, opts.init.loc_scale);
  const bvpareto::EMFit fit = bvpareto::fit_em(sample, opts);

  RunWriter w;
  w.write(c.out, emfit_to_json(fit).dump(2) + "\n");

  json config{{"data", c.data.path},
              {"col1", resolved(c.data.col1_opt, c.data.col1, cfg, "/col1")},
              {"col2", resolved(c.data.col2_opt, c.data.col2, cfg, "/col2")},
              {"schema",
               resolved(c.data.schema_opt, c.data.schema, cfg, "/schema")},
              {"filter",
               resolved(c.data.filter_opt, c.data.filter, cfg, "/filter")},
              {"init", params_to_json(opts.init)},
              {"tol", opts.tol},
              {"max_iter", opts.max_iter},
              {"superseded_u0", opts.superseded_u0}};
  write_manifest(c.out, "fit-em", seed, config, w, t0);
  std::cout << "fit-em: theta=" << fit.params.theta
            << " alpha0=" << fit.params.alpha0
            << " alpha1=" << fit.params.alpha1
            << " alpha2=" << fit.params.alpha2 << " iterations="
            << fit.iterations << (fit.converged ? "" : " (not converged)")
            << "\n";
  return fit.converged ? 0 : kNumericError;
}

int run_slice_self_test() {
  const auto results =
      bvpareto::slice_self_test(100000, bvpareto::RngStream{20260819, 0});
  bool ok = true;
  for (const auto& r : results) {
    ok = ok && r.pass;
    std::cout << (r.pass ? "pass" : "FAIL") << " " << r.target << " mean "
              << r.mean << " vs " << r.analytic_mean << " (se " << r.mean_se
              << "), var " << r.var << " vs " << r.analytic_var << " (se "
              << r.var_se << ")\n";
  }
  return ok ? 0 : kNumericError;
}

int run_fit_bayes(const FitBayesCmd& c) {
  if (c.self_test) return run_slice_self_test();
  const auto t0 = std::chrono::steady_clock::now();
  if (c.data.path.empty())
    throw bvpareto::domain_error("--data is required");
  if (c.out.empty()) throw bvpareto::domain_error("--out is required");
  const json cfg = load_config(c.config_path);

  bvpareto::PriorSpec prior;
  prior.k0 = resolved(c.opt_k0, c.k0, cfg, "/prior/k0");
  prior.scale0 = resolved(c.opt_scale0, c.scale0, cfg, "/prior/scale0");
  prior.k1 = resolved(c.opt_k1, c.k1, cfg, "/prior/k1");
  prior.scale1 = resolved(c.opt_scale1, c.scale1, cfg, "/prior/scale1");
  prior.k2 = resolved(c.opt_k2, c.k2, cfg, "/prior/k2");
  prior.scale2 = resolved(c.opt_scale2, c.scale2, cfg, "/prior/scale2");
  prior.a = resolved(c.opt_a, c.a, cfg, "/prior/a");
  prior.b = resolved(c.opt_b, c.b, cfg, "/prior/b");

  bvpareto::SliceConfig slice;
  slice.width = resolved(c.opt_width, c.width, cfg, "/slice/width");
  slice.max_stepout =
      resolved(c.opt_stepout, c.max_stepout, cfg, "/slice/max_stepout");
  slice.max_shrink =
      resolved(c.opt_shrink, c.max_shrink, cfg, "/slice/max_shrink");

  const ModelParams init = c.init.resolve(cfg, "init");
  const std::size_t total = resolved(c.opt_total, c.total, cfg, "/total");
  const std::size_t burn_in =
      resolved(c.opt_burnin, c.burn_in, cfg, "/burn_in");
  const double level = resolved(c.opt_level, c.level, cfg, "/level");
  const bool hpd = resolved(c.opt_hpd, c.hpd, cfg, "/hpd");
  const SeedChoice seed = c.seeds.resolve(cfg, false);

  const auto raw = c.data.load(cfg);
  const auto sample =
      bvpareto::BivariateSample::partition(raw, init.loc_scale);
  const bvpareto::Chain chain = bvpareto::gibbs_run(
      sample, prior, init, slice, total, burn_in, seed.stream);
  const bvpareto::PosteriorSummary post =
      bvpareto::posterior_summary(chain, level, hpd);

  const auto summary_json = [](const bvpareto::ParamSummary& s) {
    return json{{"mean", s.mean}, {"lo", s.lo}, {"hi", s.hi}};
  };
  json out{{"posterior",
            {{"theta", summary_json(post.theta)},
             {"alpha0", summary_json(post.alpha0)},
             {"alpha1", summary_json(post.alpha1)},
             {"alpha2", summary_json(post.alpha2)}}},
           {"level", level},
           {"interval", hpd ? "hpd" : "equal-tailed"},
           {"total", total},
           {"burn_in", burn_in},
           {"shrink_events", chain.shrink_events}};

  RunWriter w;
  w.write(c.out, out.dump(2) + "\n");
  if (!c.chain_out.empty()) {
    std::ostringstream os;
    os.precision(17);
    os << "theta,alpha0,alpha1,alpha2\n";
    for (std::size_t i = 0; i < chain.size(); ++i)
      os << chain.theta[i] << "," << chain.alpha0[i] << ","
         << chain.alpha1[i] << "," << chain.alpha2[i] << "\n";
    w.write(c.chain_out, os.str());
  }

  json config{{"data", c.data.path},
              {"col1", resolved(c.data.col1_opt, c.data.col1, cfg, "/col1")},
              {"col2", resolved(c.data.col2_opt, c.data.col2, cfg, "/col2")},
              {"schema",
               resolved(c.data.schema_opt, c.data.schema, cfg, "/schema")},
              {"filter",
               resolved(c.data.filter_opt, c.data.filter, cfg, "/filter")},
              {"init", params_to_json(init)},
              {"prior",
               {{"k0", prior.k0},
                {"scale0", prior.scale0},
                {"k1", prior.k1},
                {"scale1", prior.scale1},
                {"k2", prior.k2},
                {"scale2", prior.scale2},
                {"a", prior.a},
                {"b", prior.b}}},
              {"slice",
               {{"width", slice.width},
                {"max_stepout", slice.max_stepout},
                {"max_shrink", slice.max_shrink}}},
              {"total", total},
              {"burn_in", burn_in},
              {"level", level},
              {"hpd", hpd},
              {"seed", {{"seed", seed.stream.seed},
                        {"stream", seed.stream.stream}}}};
  write_manifest(c.out, "fit-bayes", seed, config, w, t0);
  std::cout << "fit-bayes: posterior means theta=" << post.theta.mean
            << " alpha0=" << post.alpha0.mean
            << " alpha1=" << post.alpha1.mean
            << " alpha2=" << post.alpha2.mean << "\n";
  return 0;
}

int run_study(const StudyCmd& c) {
  const auto t0 = std::chrono::steady_clock::now();
  const json cfg = load_config(c.config_path);
  if (c.out.empty()) throw bvpareto::domain_error("--out is required");

  bvpareto::StudyConfig sc;
  const std::string method =
      resolved(c.method_opt, c.method.empty() ? std::string("em") : c.method,
               cfg, "/method");
  if (method == "em")
    sc.method = bvpareto::Method::Em;
  else if (method == "bayes")
    sc.method = bvpareto::Method::Bayes;
  else
    throw bvpareto::domain_error("method must be em or bayes, got '" +
                                 method + "'");
  if (!cfg.contains("truth"))
    throw bvpareto::domain_error("study config must define truth");
  sc.truth = params_from_json(cfg["truth"], ModelParams{});
  sc.n = resolved(c.n_opt, c.n ? c.n : std::size_t{100}, cfg, "/n");
  sc.replications = resolved(
      c.reps_opt, c.replications ? c.replications : std::size_t{100}, cfg,
      "/replications");
  sc.level = cfg.value("level", sc.level);
  sc.jobs = c.jobs;

  if (cfg.contains("em")) {
    const json& em = cfg["em"];
    if (em.contains("init"))
      sc.em.init = params_from_json(em["init"], sc.em.init);
    sc.em.tol = em.value("tol", sc.em.tol);
    sc.em.max_iter = em.value("max_iter", sc.em.max_iter);
    sc.em.superseded_u0 = em.value("superseded_u0", sc.em.superseded_u0);
  }
  if (cfg.contains("prior")) {
    const json& pr = cfg["prior"];
    sc.prior.k0 = pr.value("k0", sc.prior.k0);
    sc.prior.scale0 = pr.value("scale0", sc.prior.scale0);
    sc.prior.k1 = pr.value("k1", sc.prior.k1);
    sc.prior.scale1 = pr.value("scale1", sc.prior.scale1);
    sc.prior.k2 = pr.value("k2", sc.prior.k2);
    sc.prior.scale2 = pr.value("scale2", sc.prior.scale2);
    sc.prior.a = pr.value("a", sc.prior.a);
    sc.prior.b = pr.value("b", sc.prior.b);
  }
  if (cfg.contains("slice")) {
    const json& sl = cfg["slice"];
    sc.slice.width = sl.value("width", sc.slice.width);
    sc.slice.max_stepout = sl.value("max_stepout", sc.slice.max_stepout);
    sc.slice.max_shrink = sl.value("max_shrink", sc.slice.max_shrink);
  }
  sc.chain_total = cfg.value("chain_total", sc.chain_total);
  sc.chain_burn_in = cfg.value("chain_burn_in", sc.chain_burn_in);
  if (cfg.contains("bayes_init"))
    sc.bayes_init = params_from_json(cfg["bayes_init"], sc.bayes_init);

  const SeedChoice seed = c.seeds.resolve(cfg, true);
  sc.seed = seed.stream;

  const bvpareto::StudyReport report = sc.method == bvpareto::Method::Em
                                           ? run_em_study(sc)
                                           : run_bayes_study(sc);

  RunWriter w;
  w.write(c.out + ".json", bvpareto::report_to_json(report));
  w.write(c.out + ".txt", bvpareto::report_to_text(report));

  json config{{"method", method},
              {"truth", params_to_json(sc.truth)},
              {"n", sc.n},
              {"replications", sc.replications},
              {"level", sc.level},
              {"em",
               {{"init", params_to_json(sc.em.init)},
                {"tol", sc.em.tol},
                {"max_iter", sc.em.max_iter},
                {"superseded_u0", sc.em.superseded_u0}}},
              {"prior",
               {{"k0", sc.prior.k0},
                {"scale0", sc.prior.scale0},
                {"k1", sc.prior.k1},
                {"scale1", sc.prior.scale1},
                {"k2", sc.prior.k2},
                {"scale2", sc.prior.scale2},
                {"a", sc.prior.a},
                {"b", sc.prior.b}}},
              {"slice",
               {{"width", sc.slice.width},
                {"max_stepout", sc.slice.max_stepout},
                {"max_shrink", sc.slice.max_shrink}}},
              {"chain_total", sc.chain_total},
              {"chain_burn_in", sc.chain_burn_in},
              {"bayes_init", params_to_json(sc.bayes_init)},
              {"seed", {{"seed", seed.stream.seed},
                        {"stream", seed.stream.stream}}}};
  write_manifest(c.out, "study", seed, config, w, t0);
  std::cout << bvpareto::report_to_text(report);
  return 0;
}

int run_prep_data(const PrepDataCmd& c) {
  const auto t0 = std::chrono::steady_clock::now();
  const json cfg = load_config(c.config_path);
  const SeedChoice seed = c.seeds.resolve(cfg, false);

  bvpareto::PotConfig pot;
  pot.threshold1 = resolved(c.t1_opt, c.t1, cfg, "/threshold1");
  pot.threshold2 = resolved(c.t2_opt, c.t2, cfg, "/threshold2");

  const auto pairs = c.data.load(cfg);
  const bvpareto::PotResult res = bvpareto::pot_transform(pairs, pot);

  RunWriter w;
  w.write(c.out, bvpareto::pairs_to_csv(res.excesses));
  if (!c.survival_out.empty()) {
    std::vector<double> v1, v2;
    v1.reserve(res.excesses.size());
    v2.reserve(res.excesses.size());
    for (const auto& p : res.excesses) {
      v1.push_back(p.y1);
      v2.push_back(p.y2);
    }
    if (!v1.empty()) {
      w.write(c.survival_out + ".y1.csv",
              bvpareto::survival_to_csv(bvpareto::empirical_survival(v1)));
      w.write(c.survival_out + ".y2.csv",
              bvpareto::survival_to_csv(bvpareto::empirical_survival(v2)));
    }
  }

  json config{{"data", c.data.path},
              {"col1", resolved(c.data.col1_opt, c.data.col1, cfg, "/col1")},
              {"col2", resolved(c.data.col2_opt, c.data.col2, cfg, "/col2")},
              {"schema",
               resolved(c.data.schema_opt, c.data.schema, cfg, "/schema")},
              {"filter",
               resolved(c.data.filter_opt, c.data.filter, cfg, "/filter")},
              {"threshold1", pot.threshold1},
              {"threshold2", pot.threshold2},
              {"pot_mode", "both-exceed, strict, excess shift"}};
  write_manifest(c.out, "prep-data", seed, config, w, t0);
  std::cout << "retained " << res.retained << " of " << res.input_count
            << " pairs\n";
  return 0;
}

int run_eval(const EvalCmd& c) {
  const auto t0 = std::chrono::steady_clock::now();
  const json cfg = load_config(c.config_path);
  const ModelParams p = c.params.resolve(cfg, "params");
  const SeedChoice seed = c.seeds.resolve(cfg, false);
  if (c.out.empty()) throw bvpareto::domain_error("--out is required");

  const bool have_point = c.y1_opt->count() > 0 || c.y2_opt->count() > 0 ||
                          cfg.contains("point");
  const bool have_grid = c.grid1_opt->count() > 0 ||
                         c.grid2_opt->count() > 0 || cfg.contains("grid");
  if (have_point == have_grid)
    throw bvpareto::domain_error(
        "eval needs exactly one of --y1/--y2 or --grid-y1/--grid-y2");

  RunWriter w;
  json config{{"params", params_to_json(p)}};
  if (have_point) {
    double y1 = c.y1, y2 = c.y2;
    if (c.y1_opt->count() == 0)
      y1 = cfg.value(json::json_pointer("/point/y1"), y1);
    if (c.y2_opt->count() == 0)
      y2 = cfg.value(json::json_pointer("/point/y2"), y2);
    const bvpareto::PointPair y{y1, y2};

    json out{{"point", {{"y1", y1}, {"y2", y2}}}};
    const bvpareto::Density gmo = bvpareto::pdf_gmo(y, p);
    out["singular"] = gmo.singular;
    out["density_gmo"] = gmo.value;
    if (gmo.singular)
      out["density_gbb"] = nullptr;
    else
      out["density_gbb"] = bvpareto::pdf_gbb(y, p);
    out["survival_mo"] = bvpareto::survival_mo(y, p);
    out["survival_geo"] = bvpareto::survival_geo(y, p);
    if (y1 > p.loc_scale.mu1)
      out["marginal_survival1"] = bvpareto::marginal_survival(y1, 1, p);
    else
      out["marginal_survival1"] = nullptr;
    if (y2 > p.loc_scale.mu2)
      out["marginal_survival2"] = bvpareto::marginal_survival(y2, 2, p);
    else
      out["marginal_survival2"] = nullptr;
    w.write(c.out, out.dump(2) + "\n");
    config["point"] = {{"y1", y1}, {"y2", y2}};
  } else {
    bvpareto::GridSpec g;
    std::string s1 = c.grid_y1, s2 = c.grid_y2;
    if (c.grid1_opt->count() == 0)
      s1 = cfg.value(json::json_pointer("/grid/y1"), s1);
    if (c.grid2_opt->count() == 0)
      s2 = cfg.value(json::json_pointer("/grid/y2"), s2);
    if (s1.empty() || s2.empty())
      throw bvpareto::domain_error(
          "grid mode needs both --grid-y1 and --grid-y2");
    parse_axis(s1, g.y1_min, g.y1_max, g.steps1);
    parse_axis(s2, g.y2_min, g.y2_max, g.steps2);
    const auto cells = bvpareto::density_grid(p, g);
    w.write(c.out, bvpareto::grid_to_csv(cells));
    config["grid"] = {{"y1", s1}, {"y2", s2}};
  }
  write_manifest(c.out, "eval", seed, config, w, t0);
  std::cout << "wrote " << c.out << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Four-parameter geometric absolutely-continuous bivariate "
               "Pareto: simulation, fitting, studies"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  SimulateCmd sim;
  auto* sim_cmd =
      app.add_subcommand("simulate", "draw pairs from the model");
  sim.params.add(sim_cmd, ModelParams{}, "");
  sim.n_opt = sim_cmd->add_option("--n", sim.n, "number of pairs");
  sim_cmd->add_option("--out", sim.out, "output CSV")->required();
  sim_cmd->add_option("--config", sim.config_path, "JSON config");
  sim.seeds.add(sim_cmd);

  FitEmCmd em;
  auto* em_cmd = app.add_subcommand("fit-em", "maximum likelihood via EM");
  em.data.add(em_cmd);
  em.init.add(em_cmd, bvpareto::EmOptions{}.init, "initial value");
  em.tol_opt = em_cmd->add_option("--tol", em.tol,
                                  "absolute log-likelihood tolerance");
  em.max_iter_opt =
      em_cmd->add_option("--max-iter", em.max_iter, "iteration cap");
  em.superseded_opt = em_cmd->add_flag(
      "--superseded-u0", em.superseded_u0,
      "use the replaced-U0 estimate variant (comparison only)");
  em_cmd->add_option("--out", em.out, "output JSON")->required();
  em_cmd->add_option("--config", em.config_path, "JSON config");
  em.seeds.add(em_cmd);

  FitBayesCmd fb;
  auto* fb_cmd =
      app.add_subcommand("fit-bayes", "posterior sampling via slice-Gibbs");
  fb_cmd->add_option("--data", fb.data.path, "input CSV");
  fb.data.col1_opt =
      fb_cmd->add_option("--col1", fb.data.col1, "first-coordinate column");
  fb.data.col2_opt =
      fb_cmd->add_option("--col2", fb.data.col2, "second-coordinate column");
  fb.data.schema_opt = fb_cmd->add_option(
      "--schema", fb.data.schema, "auto | header | positional | abalone");
  fb.data.filter_opt = fb_cmd->add_option("--filter", fb.data.filter,
                                          "keep rows with column=value");
  fb.init.add(fb_cmd, ModelParams{0.5, 1.0, 1.0, 1.0, {}}, "chain start");
  fb.opt_k0 = fb_cmd->add_option("--k0", fb.k0, "alpha0 prior shape");
  fb.opt_scale0 =
      fb_cmd->add_option("--scale0", fb.scale0, "alpha0 prior scale");
  fb.opt_k1 = fb_cmd->add_option("--k1", fb.k1, "alpha1 prior shape");
  fb.opt_scale1 =
      fb_cmd->add_option("--scale1", fb.scale1, "alpha1 prior scale");
  fb.opt_k2 = fb_cmd->add_option("--k2", fb.k2, "alpha2 prior shape");
  fb.opt_scale2 =
      fb_cmd->add_option("--scale2", fb.scale2, "alpha2 prior scale");
  fb.opt_a = fb_cmd->add_option("--a", fb.a, "theta prior Beta a");
  fb.opt_b = fb_cmd->add_option("--b", fb.b, "theta prior Beta b");
  fb.opt_width = fb_cmd->add_option("--width", fb.width, "slice width");
  fb.opt_stepout = fb_cmd->add_option("--max-stepout", fb.max_stepout,
                                      "step-out budget");
  fb.opt_shrink =
      fb_cmd->add_option("--max-shrink", fb.max_shrink, "shrinkage cap");
  fb.opt_total = fb_cmd->add_option("--total", fb.total, "chain length");
  fb.opt_burnin =
      fb_cmd->add_option("--burn-in", fb.burn_in, "discarded prefix");
  fb.opt_level =
      fb_cmd->add_option("--level", fb.level, "credible level");
  fb.opt_hpd = fb_cmd->add_flag("--hpd", fb.hpd,
                                "highest-posterior-density intervals");
  fb_cmd->add_option("--out", fb.out, "summary JSON");
  fb_cmd->add_option("--chain-out", fb.chain_out, "post-burn-in chain CSV");
  fb_cmd->add_option("--config", fb.config_path, "JSON config");
  fb_cmd
      ->add_flag("--slice-self-test", fb.self_test,
                 "run the analytic-target slice check and exit")
      ->group("");  // hidden
  fb.seeds.add(fb_cmd);

  StudyCmd st;
  auto* st_cmd = app.add_subcommand("study", "simulation study");
  st_cmd->add_option("--config", st.config_path, "study JSON config")
      ->required();
  st_cmd->add_option("--out", st.out, "output prefix")->required();
  st.reps_opt = st_cmd->add_option("--replications", st.replications,
                                   "override replication count");
  st.n_opt = st_cmd->add_option("--n", st.n, "override sample size");
  st.method_opt =
      st_cmd->add_option("--method", st.method, "override method: em|bayes");
  st_cmd->add_option("--jobs", st.jobs, "worker threads");
  st.seeds.add(st_cmd);

  PrepDataCmd pd;
  auto* pd_cmd = app.add_subcommand(
      "prep-data", "extract pairs and apply peak-over-threshold");
  pd.data.add(pd_cmd);
  pd.t1_opt =
      pd_cmd->add_option("--t1", pd.t1, "first-coordinate threshold");
  pd.t2_opt =
      pd_cmd->add_option("--t2", pd.t2, "second-coordinate threshold");
  pd_cmd->add_option("--out", pd.out, "excess pairs CSV")->required();
  pd_cmd->add_option("--survival-out", pd.survival_out,
                     "also write empirical survival tables to this prefix");
  pd_cmd->add_option("--config", pd.config_path, "JSON config");
  pd.seeds.add(pd_cmd);

  EvalCmd ev;
  auto* ev_cmd =
      app.add_subcommand("eval", "evaluate densities and survival");
  ev.params.add(ev_cmd, ModelParams{}, "");
  ev.y1_opt = ev_cmd->add_option("--y1", ev.y1, "point first coordinate");
  ev.y2_opt = ev_cmd->add_option("--y2", ev.y2, "point second coordinate");
  ev.grid1_opt =
      ev_cmd->add_option("--grid-y1", ev.grid_y1, "axis spec min:max:steps");
  ev.grid2_opt =
      ev_cmd->add_option("--grid-y2", ev.grid_y2, "axis spec min:max:steps");
  ev_cmd->add_option("--out", ev.out, "output file")->required();
  ev_cmd->add_option("--config", ev.config_path, "JSON config");
  ev.seeds.add(ev_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsageError;
  }

  try {
    if (sim_cmd->parsed()) return run_simulate(sim);
    if (em_cmd->parsed()) return run_fit_em(em);
    if (fb_cmd->parsed()) return run_fit_bayes(fb);
    if (st_cmd->parsed()) return run_study(st);
    if (pd_cmd->parsed()) return run_prep_data(pd);
    if (ev_cmd->parsed()) return run_eval(ev);
  } catch (const bvpareto::parse_error& e) {
    std::cerr << "data error (line " << e.line() << "): " << e.what()
              << "\n";
    return kDataError;
  } catch (const bvpareto::io_error& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kDataError;
  } catch (const bvpareto::schema_error& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kDataError;
  } catch (const bvpareto::diagonal_error& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kDataError;
  } catch (const bvpareto::domain_error& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsageError;
  } catch (const bvpareto::error& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return kNumericError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kNumericError;
  }
  return 0;
}
