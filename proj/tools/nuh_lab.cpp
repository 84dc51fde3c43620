// nuh-lab: experiment driver.
//
//   nuh-lab <experiment> --config <file.json> [--seed N] [--workers K] [--out DIR]
//
// Exit status: 0 all invariants passed, 1 numerical failure, 2 usage/config
// error. Each run writes its artifacts into a fresh timestamped directory
// under --out and updates the `latest` pointer file there.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "nuhlab/hyperbolic_times.hpp"
#include "nuhlab/io.hpp"
#include "nuhlab/measures.hpp"
#include "nuhlab/stats.hpp"

using json = nlohmann::json;
using namespace nuhlab;
namespace fs = std::filesystem;

namespace {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void check_keys(const json& j, const std::set<std::string>& allowed,
                const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + " must be a JSON object");
  for (const auto& [key, value] : j.items())
    if (!allowed.count(key))
      throw ConfigError("unknown key \"" + key + "\" in " + where);
}

template <typename T>
T get_or(const json& j, const std::string& key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError("key \"" + key + "\" has the wrong type");
  }
}

TorusMap parse_map(const json& cfg) {
  if (!cfg.contains("map")) return TorusMap::derived_anosov({});
  const json& m = cfg.at("map");
  check_keys(m, {"kind", "base", "center", "radius", "strength"}, "map");
  const std::string kind = get_or<std::string>(m, "kind", "derived-anosov");
  DAParams p;
  if (m.contains("base")) {
    const auto b = m.at("base").get<std::vector<double>>();
    if (b.size() != 4) throw ConfigError("map.base needs 4 entries");
    p.base = {b[0], b[1], b[2], b[3]};
  }
  if (m.contains("center")) {
    const auto c = m.at("center").get<std::vector<double>>();
    if (c.size() != 2) throw ConfigError("map.center needs 2 entries");
    p.center = {c[0], c[1]};
  }
  p.radius = get_or(m, "radius", p.radius);
  p.strength = get_or(m, "strength", p.strength);
  if (kind == "linear") return TorusMap::linear(p.base);
  if (kind == "derived-anosov") return TorusMap::derived_anosov(p);
  if (kind == "two-attractor") return TorusMap::two_attractor_fixture();
  throw ConfigError("map.kind must be linear, derived-anosov or two-attractor");
}

json echo_map(const TorusMap& map) {
  const DAParams& p = map.params();
  const char* kind = map.kind() == TorusMap::Kind::Linear ? "linear"
                     : map.kind() == TorusMap::Kind::DerivedAnosov
                         ? "derived-anosov"
                         : "two-attractor";
  return {{"kind", kind},
          {"base", {p.base.m11, p.base.m12, p.base.m21, p.base.m22}},
          {"center", {p.center.x, p.center.y}},
          {"radius", p.radius},
          {"strength", p.strength}};
}

struct RunContext {
  TorusMap map = TorusMap::derived_anosov({});
  json cfg;
  double epsilon = 0.0;
  std::uint64_t seed = 1;
  int workers = 1;
  fs::path dir;  // created output directory for this run

  std::string path(const std::string& name) const {
    return (dir / name).string();
  }
};

fs::path make_run_dir(const fs::path& out, const std::string& experiment) {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  char stamp[32];
  std::strftime(stamp, sizeof stamp, "%Y%m%d-%H%M%S", std::gmtime(&t));
  fs::path dir = out / (experiment + "-" + stamp);
  for (int k = 1; fs::exists(dir); ++k)
    dir = out / (experiment + "-" + std::string(stamp) + "-" +
                 std::to_string(k));
  fs::create_directories(dir);
  std::ofstream(out / "latest") << dir.filename().string() << "\n";
  return dir;
}

void write_summary(const RunContext& ctx, const std::string& experiment,
                   const json& results, bool pass) {
  json s;
  s["experiment"] = experiment;
  s["config"] = ctx.cfg;
  s["config"]["map"] = echo_map(ctx.map);
  s["config"]["epsilon"] = ctx.epsilon;
  s["config"]["seed"] = ctx.seed;
  s["config"]["workers"] = ctx.workers;
  s["results"] = results;
  s["pass"] = pass;
  std::ofstream(ctx.path("summary.json")) << s.dump(2) << "\n";
}

// ---------------------------------------------------------------------------

bool run_verify_map(RunContext& ctx) {
  const int grid = get_or(ctx.cfg, "grid", 64);
  const double width = get_or(ctx.cfg, "cone_width", 0.2);
  const double lambda = get_or(ctx.cfg, "lambda", 0.5);
  const auto rep = verify_conditions(ctx.map, width, grid, lambda);
  if (!rep.violations.empty()) {
    std::vector<std::vector<double>> rows;
    for (const auto& [at, tag] : rep.violations)
      rows.push_back({at.x, at.y, double(tag.size())});
    write_csv(ctx.path("violations.csv"), {"x", "y", "tag_len"}, rows);
  }
  json res{{"sigma1", rep.sigma1},
           {"sigma2", rep.sigma2},
           {"delta0", rep.delta0},
           {"max_domination", rep.max_domination},
           {"violations", rep.violations.size()},
           {"certified", rep.certified()}};
  write_summary(ctx, "verify-map", res, rep.certified());
  return rep.certified();
}

bool run_pliss_demo(RunContext& ctx) {
  PlissInput in;
  in.values = get_or<std::vector<double>>(ctx.cfg, "values", {2, 2, -1, 2, 2});
  in.c1 = get_or(ctx.cfg, "c1", 0.5);
  in.c2 = get_or(ctx.cfg, "c2", 1.0);
  in.H = get_or(ctx.cfg, "H", 2.0);
  const auto indices = pliss_select(in);
  write_indices_csv(indices, ctx.path("indices.csv"));
  const double zeta = (in.c2 - in.c1) / (in.H - in.c1);
  json res{{"selected", indices.size()},
           {"density", double(indices.size()) / double(in.values.size())},
           {"zeta", zeta}};
  write_summary(ctx, "pliss-demo", res, true);
  return true;
}

bool run_hyp_times(RunContext& ctx) {
  const int n = get_or(ctx.cfg, "n", 2000);
  const int ensemble = get_or(ctx.cfg, "ensemble", 100);
  double alpha = get_or(ctx.cfg, "alpha", 0.0);
  const NoiseModel model{ctx.epsilon};
  if (alpha <= 0.0) alpha = calibrate_alpha(ctx.map, model, ctx.seed);
  const DensityStats ds =
      estimate_density(ctx.map, model, ensemble, n, alpha, ctx.seed,
                       ctx.workers);
  // one concrete trace for inspection
  RngStream rng(ctx.seed, 0);
  const RandomOrbit orbit =
      random_orbit(ctx.map, model, random_point(rng), n + 30, rng);
  const CocycleTrace trace = cocycle_log_norms(ctx.map, orbit, 30);
  write_trace_csv(trace, ctx.path("trace.csv"));
  write_indices_csv(detect_hyperbolic_times(trace, alpha).indices,
                    ctx.path("indices.csv"));
  json res{{"alpha", alpha}, {"density_mean", ds.mean},
           {"density_min", ds.min}, {"density_p5", ds.p5},
           {"density_p50", ds.p50}, {"orbits", ds.orbits}};
  const bool pass = ds.mean > 0.0;
  write_summary(ctx, "hyp-times", res, pass);
  return pass;
}

bool run_rnue(RunContext& ctx) {
  const int ensemble = get_or(ctx.cfg, "ensemble", 1000);
  const int n = get_or(ctx.cfg, "n", 10000);
  const RnueStats st = rnue_experiment(ctx.map, {ctx.epsilon}, ensemble, n,
                                       ctx.seed, ctx.workers);
  std::vector<std::vector<double>> rows;
  for (double m : st.orbit_means) rows.push_back({m});
  write_csv(ctx.path("orbit_means.csv"), {"mean_a"}, rows);
  rows.clear();
  for (size_t l = 0; l < st.n_ladder.size(); ++l)
    rows.push_back({double(st.n_ladder[l]), st.bad_fraction[l]});
  write_csv(ctx.path("bad_fraction.csv"), {"n", "bad_fraction"}, rows);
  json res{{"mean", st.mean},   {"max", st.max},
           {"p5", st.p5},       {"fitted_rate", st.fitted_rate},
           {"c_ladder", st.c_ladder}, {"fraction_above", st.fraction_above}};
  const bool pass = st.max < 0.0;
  write_summary(ctx, "rnue", res, pass);
  return pass;
}

bool run_frequency(RunContext& ctx) {
  const int ensemble = get_or(ctx.cfg, "ensemble", 500);
  const auto ladder =
      get_or<std::vector<int>>(ctx.cfg, "ladder", {100, 1000, 10000});
  const double radius = get_or(ctx.cfg, "partition_radius", 0.0);
  const FrequencyStats st =
      frequency_experiment(ctx.map, {ctx.epsilon}, radius, ensemble, ladder,
                           ctx.seed, ctx.workers);
  std::vector<std::vector<double>> rows;
  for (size_t l = 0; l < st.n_ladder.size(); ++l)
    rows.push_back({double(st.n_ladder[l]), st.mean_fraction[l],
                    st.p5_fraction[l], st.bad_fraction[l]});
  write_csv(ctx.path("frequency.csv"),
            {"n", "mean_fraction", "p5_fraction", "bad_fraction"}, rows);
  json res{{"zeta", st.zeta}, {"fitted_rate", st.fitted_rate},
           {"mean_fraction", st.mean_fraction}};
  const bool pass = st.fitted_rate <= 0.0;
  write_summary(ctx, "frequency", res, pass);
  return pass;
}

bool run_ulam(RunContext& ctx) {
  const int grid = get_or(ctx.cfg, "grid", 32);
  const int samples = get_or(ctx.cfg, "samples_per_cell", 256);
  const double tol = get_or(ctx.cfg, "tol", 1e-10);
  const int max_iters = get_or(ctx.cfg, "max_iters", 2000);
  const UlamOperator op = ulam_operator(ctx.map, {ctx.epsilon}, grid, samples);
  const GridHistogram stat = stationary_density(op, tol, max_iters);
  write_histogram_csv(stat, ctx.path("stationary.csv"));
  write_histogram_binary(stat, ctx.path("stationary.bin"));
  const double d = l1_distance(stat, GridHistogram::uniform(grid));
  json res{{"grid", grid}, {"l1_to_uniform", d}};
  write_summary(ctx, "ulam", res, true);
  return true;
}

bool run_stability(RunContext& ctx) {
  const auto epsilons =
      get_or<std::vector<double>>(ctx.cfg, "epsilons", {0.1, 0.05, 0.02, 0.01});
  const std::string ref_kind =
      get_or<std::string>(ctx.cfg, "reference", "deterministic");
  const double band = get_or(ctx.cfg, "band", 0.02);
  EnsembleConfig cfg;
  cfg.orbits = get_or(ctx.cfg, "orbits", 200);
  cfg.steps = get_or(ctx.cfg, "steps", 10000);
  cfg.burn_in = get_or(ctx.cfg, "burn_in", 500);
  cfg.grid_n = get_or(ctx.cfg, "grid", 32);
  cfg.seed = ctx.seed;
  cfg.workers = ctx.workers;

  GridHistogram ref;
  if (ref_kind == "uniform") {
    ref = GridHistogram::uniform(cfg.grid_n);
  } else if (ref_kind == "deterministic") {
    // zero-noise reference from fully expanding orbits: starts trapped by an
    // attracting fixed point are excluded by their cocycle average
    const int want = get_or(ctx.cfg, "ref_orbits", 200);
    const int steps = get_or(ctx.cfg, "ref_steps", 3000);
    ref.n = cfg.grid_n;
    ref.mass.assign(size_t(cfg.grid_n) * cfg.grid_n, 0.0);
    int kept = 0;
    for (int t = 0; kept < want && t < 20 * want; ++t) {
      RngStream rng(ctx.seed + 500000, std::uint64_t(t));
      const RandomOrbit orbit =
          random_orbit(ctx.map, {0.0}, random_point(rng), steps + 30, rng);
      const CocycleTrace trace = cocycle_log_norms(ctx.map, orbit, 30);
      if (mean(trace.values) > -0.9 * std::log(ctx.map.lambda_u())) continue;
      ++kept;
      for (size_t j = cfg.burn_in; j < orbit.points.size(); ++j)
        ref.mass[GridHistogram::cell_of(orbit.points[j], cfg.grid_n)] += 1.0;
    }
    if (kept == 0)
      throw std::runtime_error("stability: no expanding zero-noise orbit found");
    ref.normalize();
  } else {
    throw ConfigError("reference must be uniform or deterministic");
  }

  const auto curve = stability_curve(ctx.map, epsilons, ref, cfg);
  write_stability_csv(curve, cfg.orbits, cfg.steps, ctx.path("stability.csv"));
  std::vector<std::pair<double, double>> plot;
  for (const auto& pt : curve) plot.emplace_back(pt.epsilon, pt.l1_to_reference);
  emit_plot_data(plot, ctx.path("stability_plot.csv"));

  bool pass = true;
  std::vector<double> l1s;
  for (size_t k = 0; k < curve.size(); ++k) {
    l1s.push_back(curve[k].l1_to_reference);
    if (k > 0 && curve[k].l1_to_reference >
                     curve[k - 1].l1_to_reference + band)
      pass = false;
  }
  json res{{"epsilons", epsilons}, {"l1", l1s}, {"band", band},
           {"reference", ref_kind}};
  write_summary(ctx, "stability", res, pass);
  return pass;
}

bool run_basins(RunContext& ctx) {
  const int ensemble = get_or(ctx.cfg, "ensemble", 40);
  const int n = get_or(ctx.cfg, "n", 3000);
  const int modes = get_or(ctx.cfg, "modes", 2);
  const double threshold = get_or(ctx.cfg, "threshold", 1.0);
  const int expected = get_or(ctx.cfg, "expected_clusters", 0);
  if (ensemble < 2) throw std::invalid_argument("basins: ensemble must be >= 2");
  const BasinReport rep = cluster_basins(ctx.map, {ctx.epsilon}, ensemble, n,
                                         modes, threshold, ctx.seed,
                                         ctx.workers);
  std::vector<std::vector<double>> rows;
  for (int i = 0; i < ensemble; ++i) {
    std::vector<double> row{double(rep.assignments[i])};
    row.insert(row.end(), rep.averages[i].begin(), rep.averages[i].end());
    rows.push_back(row);
  }
  std::vector<std::string> header{"cluster"};
  for (size_t o = 0; o < rep.averages[0].size(); ++o)
    header.push_back("obs" + std::to_string(o));
  write_csv(ctx.path("basins.csv"), header, rows);
  json res{{"clusters", rep.clusters}, {"threshold", threshold}};
  const bool pass = expected == 0 || rep.clusters == expected;
  write_summary(ctx, "basins", res, pass);
  return pass;
}

bool run_contraction(RunContext& ctx) {
  const int orbits = get_or(ctx.cfg, "orbits", 20);
  const int n = get_or(ctx.cfg, "n", 90);
  const double delta1 = get_or(ctx.cfg, "delta1", 0.01);
  const int max_time = get_or(ctx.cfg, "max_time", 25);
  double alpha = get_or(ctx.cfg, "alpha", 0.0);
  const NoiseModel model{ctx.epsilon};
  if (alpha <= 0.0)
    alpha = calibrate_alpha(ctx.map, ctx.epsilon > 0 ? model : NoiseModel{0.01},
                            ctx.seed);
  std::vector<std::vector<double>> rows;
  int checked = 0;
  bool pass = true;
  for (int t = 0; t < orbits; ++t) {
    RngStream rng(ctx.seed, std::uint64_t(t));
    const RandomOrbit orbit =
        random_orbit(ctx.map, model, random_point(rng), n, rng);
    const CocycleTrace trace = cocycle_log_norms(ctx.map, orbit, 30);
    for (int ht : detect_hyperbolic_times(trace, alpha).indices) {
      if (ht > max_time) continue;
      ContractionCheck chk;
      try {
        chk = check_backward_contraction(ctx.map, orbit, trace, ht, delta1);
      } catch (const std::invalid_argument&) {
        continue;  // half-length underflow at this depth
      }
      if (chk.pairs == 0) continue;
      ++checked;
      for (int k = 1; k <= ht; ++k) {
        const double bound = std::pow(alpha, k / 2.0) * 1.05;
        rows.push_back({double(ht), double(k), chk.max_ratio[k - 1], bound});
        if (chk.max_ratio[k - 1] > bound) pass = false;
      }
    }
  }
  write_csv(ctx.path("contraction.csv"),
            {"hyp_time", "k", "max_ratio", "bound"}, rows);
  json res{{"alpha", alpha}, {"checked", checked}, {"delta1", delta1}};
  pass = pass && checked > 0;
  write_summary(ctx, "contraction", res, pass);
  return pass;
}

bool run_distortion(RunContext& ctx) {
  const auto ladder =
      get_or<std::vector<int>>(ctx.cfg, "ladder", {50, 100, 300, 1000, 3000, 10000});
  const int per_rung = get_or(ctx.cfg, "per_rung", 12);
  const double delta1 = get_or(ctx.cfg, "delta1", 0.01);
  const double c2 = get_or(ctx.cfg, "c2", 1.25);
  const NoiseModel model{ctx.epsilon};
  const double alpha = calibrate_alpha(
      ctx.map, ctx.epsilon > 0 ? model : NoiseModel{0.01}, ctx.seed);
  std::vector<double> xs, ys;
  for (const int rung : ladder) {
    for (int t = 0; t < per_rung; ++t) {
      RngStream rng(ctx.seed, std::uint64_t(1000) * rung + t);
      const RandomOrbit orbit =
          random_orbit(ctx.map, model, random_point(rng), rung + 30, rng);
      const CocycleTrace trace = cocycle_log_norms(ctx.map, orbit, 30);
      int pick = 0;
      for (int ht : detect_hyperbolic_times(trace, alpha).indices)
        if (ht >= rung / 2) pick = ht;
      if (pick == 0) continue;
      const auto d = check_distortion(ctx.map, orbit, trace, pick, delta1, c2);
      if (d.pairs_checked == 0) continue;
      xs.push_back(double(pick));
      ys.push_back(d.max_ratio);
    }
  }
  std::vector<std::vector<double>> rows;
  for (size_t i = 0; i < xs.size(); ++i) rows.push_back({xs[i], ys[i]});
  write_csv(ctx.path("distortion.csv"), {"hyp_time", "max_ratio"}, rows);
  json res{{"alpha", alpha}, {"points", xs.size()}, {"c2", c2}};
  bool pass = xs.size() >= 3;
  if (pass) {
    const LinFit fit = linear_fit(xs, ys);
    res["slope"] = fit.slope;
    res["slope_ci"] = {fit.ci_lo, fit.ci_hi};
    pass = fit.ci_lo <= 0.0 && 0.0 <= fit.ci_hi;
  }
  write_summary(ctx, "distortion", res, pass);
  return pass;
}

const std::set<std::string> kExperiments{
    "verify-map", "pliss-demo", "hyp-times", "rnue",        "frequency",
    "ulam",       "stability",  "basins",    "contraction", "distortion"};

const std::set<std::string> kCommonKeys{"map", "epsilon", "seed", "workers"};

std::set<std::string> allowed_keys(const std::string& experiment) {
  std::set<std::string> keys = kCommonKeys;
  auto add = [&](std::initializer_list<const char*> extra) {
    for (const char* k : extra) keys.insert(k);
  };
  if (experiment == "verify-map") add({"grid", "cone_width", "lambda"});
  if (experiment == "pliss-demo") add({"values", "c1", "c2", "H"});
  if (experiment == "hyp-times") add({"n", "ensemble", "alpha"});
  if (experiment == "rnue") add({"ensemble", "n"});
  if (experiment == "frequency") add({"ensemble", "ladder", "partition_radius"});
  if (experiment == "ulam") add({"grid", "samples_per_cell", "tol", "max_iters"});
  if (experiment == "stability")
    add({"epsilons", "reference", "band", "orbits", "steps", "burn_in", "grid",
         "ref_orbits", "ref_steps"});
  if (experiment == "basins")
    add({"ensemble", "n", "modes", "threshold", "expected_clusters"});
  if (experiment == "contraction")
    add({"orbits", "n", "delta1", "max_time", "alpha"});
  if (experiment == "distortion") add({"ladder", "per_rung", "delta1", "c2"});
  return keys;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"numerical laboratory for noisy non-uniformly hyperbolic "
               "torus maps"};
  std::string experiment, config_path, out_dir = "runs";
  long long seed_flag = -1;
  int workers_flag = 0;
  app.add_option("experiment", experiment, "experiment name")->required();
  app.add_option("--config", config_path, "JSON config file")->required();
  app.add_option("--seed", seed_flag, "override the config seed");
  app.add_option("--workers", workers_flag, "override the config worker count");
  app.add_option("--out", out_dir, "output root directory");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  RunContext ctx;
  try {
    if (!kExperiments.count(experiment))
      throw ConfigError("unknown experiment \"" + experiment + "\"");
    std::ifstream in(config_path);
    if (!in) throw ConfigError("cannot open config file " + config_path);
    try {
      ctx.cfg = json::parse(in);
    } catch (const json::exception& e) {
      throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    check_keys(ctx.cfg, allowed_keys(experiment), "config");
    ctx.map = parse_map(ctx.cfg);
    ctx.epsilon = get_or(ctx.cfg, "epsilon", 0.01);
    if (ctx.epsilon < 0.0) throw ConfigError("epsilon must be >= 0");
    ctx.seed = get_or<std::uint64_t>(ctx.cfg, "seed", 1);
    ctx.workers = get_or(ctx.cfg, "workers", 1);
    if (seed_flag >= 0) ctx.seed = std::uint64_t(seed_flag);
    if (workers_flag > 0) ctx.workers = workers_flag;
    if (ctx.workers < 1) throw ConfigError("workers must be >= 1");
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  }

  try {
    ctx.dir = make_run_dir(out_dir, experiment);
    bool pass = false;
    if (experiment == "verify-map") pass = run_verify_map(ctx);
    else if (experiment == "pliss-demo") pass = run_pliss_demo(ctx);
    else if (experiment == "hyp-times") pass = run_hyp_times(ctx);
    else if (experiment == "rnue") pass = run_rnue(ctx);
    else if (experiment == "frequency") pass = run_frequency(ctx);
    else if (experiment == "ulam") pass = run_ulam(ctx);
    else if (experiment == "stability") pass = run_stability(ctx);
    else if (experiment == "basins") pass = run_basins(ctx);
    else if (experiment == "contraction") pass = run_contraction(ctx);
    else if (experiment == "distortion") pass = run_distortion(ctx);
    std::printf("%s: %s (%s)\n", experiment.c_str(), pass ? "PASS" : "FAIL",
                ctx.dir.string().c_str());
    return pass ? 0 : 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    if (!ctx.dir.empty()) {
      json diag{{"experiment", experiment}, {"error", e.what()}};
      std::ofstream(ctx.path("error.json")) << diag.dump(2) << "\n";
    }
    return 1;
  }
}
