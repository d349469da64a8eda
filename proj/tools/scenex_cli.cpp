// Command-line front end: explore / grid / analyze / reduce / plot / report.
// Flags mirror the JSON config keys; a --config file provides the base and
// explicit flags override it.

#include <cstdio>
#include <exception>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "scenex/config.hpp"
#include "scenex/io.hpp"
#include "scenex/pipeline.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

/// Holders for every overridable config key plus the CLI11 wiring to overlay
/// them onto the config JSON. Validation stays in parse_config.
struct RunFlags {
  std::string config_path;
  std::string template_name;
  std::string metric;
  std::string actor_a;
  std::string actor_b;
  std::string direction;
  std::string cluster_space;
  std::string reduction_branch;
  std::string output;
  std::uint64_t seed = 0;
  std::uint64_t budget = 0;
  std::uint64_t initial_design = 0;
  std::uint64_t pool_size = 0;
  std::uint64_t rff_features = 0;
  std::uint64_t stride = 0;
  std::uint64_t embedding_k = 0;
  std::uint64_t min_pts = 0;
  std::uint64_t archetypes = 0;
  std::uint64_t prototypes = 0;
  std::uint64_t dtw_band = 0;
  int grid_steps = 0;
  double target_objective = 0.0;
  double gamma = 0.0;
  double median_target = 0.0;
  double eps = 0.0;

  void attach(CLI::App* app) {
    app->add_option("--config", config_path, "JSON config file (flags override it)");
    app->add_option("--template", template_name, "scenario1 or scenario2");
    app->add_option("--metric", metric, "euclidean|trajectory_distance|ttc|wttc|pet");
    app->add_option("--actor-a", actor_a, "first objective actor");
    app->add_option("--actor-b", actor_b, "second objective actor");
    app->add_option("--direction", direction, "minimize or maximize");
    app->add_option("--budget", budget, "total simulation budget");
    app->add_option("--grid-steps", grid_steps, "grid values per dimension");
    app->add_option("--seed", seed, "master random seed");
    app->add_option("--target-objective", target_objective, "early-stop threshold");
    app->add_option("--initial-design", initial_design, "quasi-random warmup evaluations");
    app->add_option("--pool-size", pool_size, "candidate pool size");
    app->add_option("--rff-features", rff_features, "random Fourier features");
    app->add_option("--stride", stride, "trace downsampling stride");
    app->add_option("--dtw-band", dtw_band, "Sakoe-Chiba band width");
    app->add_option("--gamma", gamma, "RBF kernel gamma");
    app->add_option("--median-target", median_target, "distance rescale target");
    app->add_option("--embedding-k", embedding_k, "embedding dimensions");
    app->add_option("--eps", eps, "DBSCAN neighborhood radius");
    app->add_option("--min-pts", min_pts, "DBSCAN core threshold");
    app->add_option("--cluster-space", cluster_space, "kernel or distance");
    app->add_option("--archetypes", archetypes, "archetypes per cluster");
    app->add_option("--prototypes", prototypes, "prototypes per cluster");
    app->add_option("--reduction-branch", reduction_branch, "behavior or criticality");
    app->add_option("--output", output, "run output directory");
  }

  json overlay(const CLI::App* app, json base) const {
    auto set = [&](const char* flag, const char* key, const json& value) {
      if (app->count(flag) > 0) base[key] = value;
    };
    set("--template", "template", template_name);
    set("--metric", "metric", metric);
    set("--actor-a", "actor_a", actor_a);
    set("--actor-b", "actor_b", actor_b);
    set("--direction", "direction", direction);
    set("--budget", "budget", budget);
    set("--grid-steps", "grid_steps", grid_steps);
    set("--seed", "seed", seed);
    set("--target-objective", "target_objective", target_objective);
    set("--initial-design", "initial_design", initial_design);
    set("--pool-size", "pool_size", pool_size);
    set("--rff-features", "rff_features", rff_features);
    set("--stride", "stride", stride);
    set("--dtw-band", "dtw_band", dtw_band);
    set("--gamma", "gamma", gamma);
    set("--median-target", "median_target", median_target);
    set("--embedding-k", "embedding_k", embedding_k);
    set("--eps", "eps", eps);
    set("--min-pts", "min_pts", min_pts);
    set("--cluster-space", "cluster_space", cluster_space);
    set("--archetypes", "archetypes_per_cluster", archetypes);
    set("--prototypes", "prototypes_per_cluster", prototypes);
    set("--reduction-branch", "reduction_branch", reduction_branch);
    set("--output", "output_dir", output);
    return base;
  }

  scenex::RunConfig build(const CLI::App* app, scenex::RunMode mode) const {
    json base = json::object();
    if (!config_path.empty()) {
      base = json::parse(scenex::read_text_file(config_path));
      if (!base.is_object()) throw std::runtime_error("config file must hold a JSON object");
    }
    base = overlay(app, std::move(base));
    base["mode"] = scenex::to_string(mode);
    return scenex::parse_config(base);
  }
};

void print_summary(const json& manifest) {
  const json& s = manifest.at("summary");
  std::cout << "evaluations: " << s.at("evaluations") << "\n";
  std::cout << "best objective: " << s.at("best_objective") << " (scenario "
            << s.at("best_scenario_id") << ")\n";
  for (const char* branch : {"behavior", "criticality"}) {
    if (!s.contains(branch)) continue;
    const json& b = s.at(branch);
    std::cout << branch << ": " << b.at("n_clusters") << " clusters, noise fraction "
              << b.at("noise_fraction") << ", reduced to " << b.at("reduced_size")
              << " scenarios\n";
  }
  if (!manifest.at("warnings").empty())
    std::cout << manifest.at("warnings").size() << " warning(s); see manifest.json\n";
}

int run_and_plot(const scenex::RunConfig& config) {
  const scenex::PipelineResult result = scenex::run(config);
  scenex::emit_plots(result.run_dir);
  print_summary(result.manifest);
  std::cout << "manifest: " << (result.run_dir / "manifest.json").string() << "\n";
  std::cout << "fingerprint: " << scenex::manifest_fingerprint(result.manifest) << "\n";
  return 0;
}

struct ReduceFlags {
  std::string output = "run_output";
  std::string reduction_branch;
  std::uint64_t archetypes = 0;
  std::uint64_t prototypes = 0;
  std::uint64_t seed = 0;

  void attach(CLI::App* app) {
    app->add_option("--output", output, "run output directory");
    app->add_option("--archetypes", archetypes, "archetypes per cluster");
    app->add_option("--prototypes", prototypes, "prototypes per cluster");
    app->add_option("--seed", seed, "reduction seed");
    app->add_option("--reduction-branch", reduction_branch, "behavior or criticality");
  }
};

int cmd_reduce(const CLI::App* app, const ReduceFlags& flags) {
  const fs::path run_dir = flags.output;
  const json manifest = json::parse(scenex::read_text_file(run_dir / "manifest.json"));
  json base = manifest.at("config");
  if (app->count("--archetypes") > 0) base["archetypes_per_cluster"] = flags.archetypes;
  if (app->count("--prototypes") > 0) base["prototypes_per_cluster"] = flags.prototypes;
  if (app->count("--seed") > 0) base["seed"] = flags.seed;
  if (app->count("--reduction-branch") > 0) base["reduction_branch"] = flags.reduction_branch;
  base["output_dir"] = run_dir.string();
  const scenex::RunConfig config = scenex::parse_config(base);
  const scenex::PipelineResult result = scenex::rerun_reduction(run_dir, config);
  scenex::emit_plots(result.run_dir);
  const json& s = result.manifest.at("summary").at("reduction");
  std::cout << "reduced set (" << s.at("branch").get<std::string>()
            << "): " << s.at("size") << " scenarios, fraction "
            << s.at("fraction_of_explored") << "\n";
  return 0;
}

int cmd_plot(const fs::path& run_dir) {
  const std::vector<fs::path> files = scenex::emit_plots(run_dir);
  for (const fs::path& p : files) std::cout << p.string() << "\n";
  return 0;
}

int cmd_report(const fs::path& run_dir) {
  const json manifest = json::parse(scenex::read_text_file(run_dir / "manifest.json"));
  std::cout << "run directory: " << run_dir.string() << "\n";
  const json& cfg = manifest.at("config");
  std::cout << "template: " << cfg.at("template").get<std::string>() << ", metric "
            << cfg.at("metric").get<std::string>() << ", mode "
            << cfg.at("mode").get<std::string>() << ", seed " << cfg.at("seed") << "\n";
  if (!manifest.at("failure_stage").get<std::string>().empty()) {
    std::cout << "FAILED at stage: " << manifest.at("failure_stage").get<std::string>() << "\n";
    if (manifest.contains("error"))
      std::cout << "error: " << manifest.at("error").get<std::string>() << "\n";
  }
  for (const json& stage : manifest.at("stages")) {
    std::printf("stage %-11s %8.2fs  %zu artifact(s)\n",
                stage.at("name").get<std::string>().c_str(), stage.at("seconds").get<double>(),
                stage.at("artifacts").size());
  }
  if (manifest.at("summary").contains("evaluations")) print_summary(manifest);
  for (const json& w : manifest.at("warnings"))
    std::cout << "warning: " << w.get<std::string>() << "\n";
  std::cout << "fingerprint: " << scenex::manifest_fingerprint(manifest) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"scenario exploration, clustering, and reduction toolkit"};
  app.require_subcommand(1);

  RunFlags explore_flags;
  RunFlags grid_flags;
  RunFlags analyze_flags;
  ReduceFlags reduce_flags;
  std::string plot_dir = "run_output";
  std::string report_dir = "run_output";

  CLI::App* explore = app.add_subcommand("explore", "search the parameter space with the surrogate optimizer");
  explore_flags.attach(explore);
  CLI::App* grid = app.add_subcommand("grid", "evaluate an exhaustive parameter grid");
  grid_flags.attach(grid);
  CLI::App* analyze = app.add_subcommand("analyze", "re-run the analysis stages from persisted traces");
  analyze_flags.attach(analyze);
  CLI::App* reduce = app.add_subcommand("reduce", "recompute the reduced set from persisted artifacts");
  reduce_flags.attach(reduce);
  CLI::App* plot = app.add_subcommand("plot", "emit SVG plots for a completed run");
  plot->add_option("--output", plot_dir, "run output directory");
  CLI::App* report = app.add_subcommand("report", "print a summary of a completed run");
  report->add_option("--output", report_dir, "run output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (explore->parsed()) return run_and_plot(explore_flags.build(explore, scenex::RunMode::Explore));
    if (grid->parsed()) return run_and_plot(grid_flags.build(grid, scenex::RunMode::Grid));
    if (analyze->parsed())
      return run_and_plot(analyze_flags.build(analyze, scenex::RunMode::AnalyzeOnly));
    if (reduce->parsed()) return cmd_reduce(reduce, reduce_flags);
    if (plot->parsed()) return cmd_plot(plot_dir);
    if (report->parsed()) return cmd_report(report_dir);
  } catch (const scenex::PipelineError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
