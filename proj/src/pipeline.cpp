#include "scenex/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "scenex/dbscan.hpp"
#include "scenex/dtw.hpp"
#include "scenex/embedding.hpp"
#include "scenex/explorer.hpp"
#include "scenex/io.hpp"
#include "scenex/metrics.hpp"
#include "scenex/quasirandom.hpp"
#include "scenex/reduction.hpp"
#include "scenex/simulator.hpp"
#include "scenex/svg.hpp"

namespace scenex {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string trace_filename(std::uint64_t id) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "trace_%06llu.csv", static_cast<unsigned long long>(id));
  return buf;
}

ScenarioSource scenario_source_from_string(const std::string& s) {
  if (s == "grid") return ScenarioSource::Grid;
  if (s == "initial") return ScenarioSource::Initial;
  if (s == "optimizer") return ScenarioSource::Optimizer;
  throw std::invalid_argument("unknown scenario source: " + s);
}

/// Everything later stages need about one evaluated scenario.
struct ScenarioRecord {
  ConcreteScenario scenario;
  double objective = 0.0;
  Termination termination = Termination::Timeout;
  Sequence ego_seq;     // downsampled ego (x, y) trajectory
  Sequence metric_seq;  // downsampled criticality course
};

struct BranchState {
  DistanceMatrix rescaled;
  double rescale_factor = 1.0;
  std::size_t dtw_evaluations = 0;
  Embedding embedding;
  ClusterAssignment clusters;
};

std::size_t best_record_index(const std::vector<ScenarioRecord>& records, Direction dir) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < records.size(); ++i) {
    const bool better = dir == Direction::Minimize
                            ? records[i].objective < records[best].objective
                            : records[i].objective > records[best].objective;
    if (better) best = i;
  }
  return best;
}

/// scenario id -> (parameter values, objective)
using RecordIndex = std::map<std::uint64_t, std::pair<std::vector<double>, double>>;

struct BranchReduction {
  json branch_json;   // reduced_set.json slice for one branch
  json summary_json;  // manifest summary fields for the branch
  std::vector<std::string> warnings;
};

BranchReduction reduce_one_branch(const ClusterAssignment& clusters, const Embedding& embedding,
                                  const DistanceMatrix& rescaled, const RecordIndex& by_id,
                                  std::size_t explored, const ReduceOptions& opts) {
  BranchReduction out;
  const ReducedScenarioSet reduced = reduce(clusters, embedding, rescaled, opts);
  out.warnings = reduced.warnings;

  json entries = json::array();
  std::size_t prototypes = 0;
  for (const ReducedEntry& e : reduced.entries) {
    const auto it = by_id.find(e.scenario_id);
    if (it == by_id.end()) throw std::logic_error("reduced entry references unknown scenario");
    json entry;
    entry["scenario_id"] = e.scenario_id;
    entry["role"] = to_string(e.role);
    entry["cluster"] = e.cluster_id;
    entry["parameters"] = it->second.first;
    entry["objective"] = it->second.second;
    entries.push_back(entry);
    if (e.role == ReducedRole::Prototype) ++prototypes;
  }
  const double fraction =
      static_cast<double>(reduced.entries.size()) / static_cast<double>(explored);

  out.branch_json["entries"] = entries;
  out.branch_json["fallback_clusters"] = reduced.fallback_clusters;
  out.branch_json["warnings"] = reduced.warnings;
  out.branch_json["size"] = reduced.entries.size();
  out.branch_json["fraction_of_explored"] = fraction;

  out.summary_json["reduced_size"] = reduced.entries.size();
  out.summary_json["reduced_fraction"] = fraction;
  out.summary_json["prototype_count"] = prototypes;
  out.summary_json["archetype_count"] = reduced.entries.size() - prototypes;
  out.summary_json["fallback_clusters"] = reduced.fallback_clusters;
  return out;
}

void merge_summary(json& slot, const json& fields) {
  if (!slot.is_object()) slot = json::object();
  slot.update(fields);
}

}  // namespace

PipelineResult run(const RunConfig& config) {
  const ScenarioTemplate tmpl = ScenarioTemplate::for_id(config.template_id);
  const ScenarioSpace space = config.space(tmpl);
  const ActorId actor_a = config.resolved_actor_a(tmpl);
  const ActorId actor_b = config.resolved_actor_b(tmpl);
  const Direction direction = config.resolved_direction();

  const fs::path run_dir = config.output_dir;
  fs::create_directories(run_dir / "traces");
  fs::create_directories(run_dir / "matrices");
  fs::create_directories(run_dir / "embedding");
  fs::create_directories(run_dir / "clusters");

  json manifest;
  manifest["config"] = config_to_json(config);
  manifest["stages"] = json::array();
  manifest["summary"] = json::object();
  manifest["warnings"] = json::array();
  manifest["failure_stage"] = "";

  auto write_manifest = [&]() {
    write_text_file(run_dir / "manifest.json", manifest.dump(2) + "\n");
  };
  auto warn = [&](const std::string& message) { manifest["warnings"].push_back(message); };

  json* current_stage = nullptr;
  auto record_artifact = [&](const std::string& rel) {
    json art;
    art["path"] = rel;
    art["hash"] = hex64(fnv1a64_file(run_dir / rel));
    (*current_stage)["artifacts"].push_back(art);
  };
  auto persist = [&](const std::string& rel, std::string_view content) {
    write_text_file(run_dir / rel, content);
    record_artifact(rel);
  };

  auto run_stage = [&](const std::string& name, auto&& body) {
    json stage;
    stage["name"] = name;
    stage["artifacts"] = json::array();
    current_stage = &stage;
    const auto start = std::chrono::steady_clock::now();
    auto elapsed = [&start]() {
      return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    };
    try {
      body();
    } catch (const std::exception& e) {
      stage["seconds"] = elapsed();
      manifest["stages"].push_back(std::move(stage));
      manifest["failure_stage"] = name;
      manifest["error"] = e.what();
      write_manifest();
      throw PipelineError(name, e.what());
    }
    stage["seconds"] = elapsed();
    manifest["stages"].push_back(std::move(stage));
    current_stage = nullptr;
  };

  std::vector<ScenarioRecord> records;
  std::string termination_text;
  DistanceMatrix ego_matrix;
  DistanceMatrix metric_matrix;
  BranchState behavior;
  BranchState criticality;

  run_stage("exploration", [&]() {
    if (config.mode == RunMode::AnalyzeOnly) {
      const std::string ex_text = read_text_file(run_dir / "exploration.json");
      const json ex = json::parse(ex_text);
      if (ex.at("template").get<std::string>() != to_string(config.template_id))
        throw std::runtime_error("persisted exploration used template " +
                                 ex.at("template").get<std::string>());
      if (ex.at("metric").get<std::string>() != to_string(config.metric))
        throw std::runtime_error("persisted exploration used metric " +
                                 ex.at("metric").get<std::string>());
      termination_text = ex.at("termination").get<std::string>();
      record_artifact("exploration.json");
      if (fs::exists(run_dir / "exploration.csv")) record_artifact("exploration.csv");
      for (const json& entry : ex.at("entries")) {
        ScenarioRecord rec;
        rec.scenario.id = entry.at("id").get<std::uint64_t>();
        rec.scenario.values = entry.at("parameters").get<std::vector<double>>();
        rec.scenario.source = scenario_source_from_string(entry.at("source").get<std::string>());
        if (rec.scenario.values.size() != space.dim())
          throw std::runtime_error("persisted entry dimension mismatch");
        const std::string rel = "traces/" + trace_filename(rec.scenario.id);
        const SimulationTrace trace = read_trace_csv(run_dir / rel);
        const CriticalitySeries series =
            compute_series(trace, config.metric, actor_a, actor_b, tmpl);
        rec.objective = series.summary;
        rec.termination = trace.termination;
        rec.ego_seq = extract_trajectory(trace, ActorId::Ego, config.stride);
        rec.metric_seq = downsample_scalars(rec.scenario.id, series.values, config.stride);
        const double stored = entry.at("objective").get<double>();
        if (std::abs(stored - rec.objective) > 1e-9)
          warn("scenario " + std::to_string(rec.scenario.id) +
               ": objective recomputed from the trace differs from the stored value");
        record_artifact(rel);
        records.push_back(std::move(rec));
      }
      if (records.empty()) throw std::runtime_error("persisted exploration has no entries");
    } else {
      ScenarioIdAllocator ids;
      auto objective = [&](const ConcreteScenario& scenario) {
        const SimulationTrace trace = simulate(scenario, tmpl);
        write_trace_csv(run_dir / "traces" / trace_filename(scenario.id), trace);
        const CriticalitySeries series =
            compute_series(trace, config.metric, actor_a, actor_b, tmpl);
        ScenarioRecord rec;
        rec.scenario = scenario;
        rec.objective = series.summary;
        rec.termination = trace.termination;
        rec.ego_seq = extract_trajectory(trace, ActorId::Ego, config.stride);
        rec.metric_seq = downsample_scalars(scenario.id, series.values, config.stride);
        records.push_back(std::move(rec));
        return records.back().objective;
      };

      ExplorationLog log;
      if (config.mode == RunMode::Explore) {
        ExploreOptions opts;
        opts.budget = config.budget;
        opts.seed = config.seed;
        opts.initial_design = config.initial_design;
        opts.pool_size = config.pool_size;
        opts.rff_features = config.rff_features;
        opts.target_objective = config.target_objective;
        log = explore(space, objective, direction, opts, ids);
      } else {
        log = grid_explore(space, objective, direction,
                           static_cast<std::size_t>(config.grid_steps), ids);
      }
      termination_text = to_string(log.termination);
      if (log.entries.size() != records.size())
        throw std::logic_error("exploration log and record count diverged");

      json ex;
      ex["template"] = to_string(config.template_id);
      ex["mode"] = to_string(config.mode);
      ex["metric"] = to_string(config.metric);
      ex["actor_a"] = to_string(actor_a);
      ex["actor_b"] = to_string(actor_b);
      ex["direction"] = direction == Direction::Minimize ? "minimize" : "maximize";
      ex["seed"] = config.seed;
      ex["stride"] = config.stride;
      ex["evaluations"] = records.size();
      ex["termination"] = termination_text;
      json space_json = json::array();
      for (const ParameterRange& r : space.parameters()) {
        json p;
        p["name"] = r.name;
        p["lower"] = r.lower;
        p["upper"] = r.upper;
        p["unit"] = r.unit;
        space_json.push_back(p);
      }
      ex["space"] = space_json;
      json entries = json::array();
      for (std::size_t i = 0; i < records.size(); ++i) {
        const ScenarioRecord& rec = records[i];
        json entry;
        entry["id"] = rec.scenario.id;
        entry["iteration"] = log.entries[i].iteration;
        entry["source"] = to_string(rec.scenario.source);
        entry["parameters"] = rec.scenario.values;
        entry["objective"] = rec.objective;
        entry["best_so_far"] = log.best_so_far[i];
        entry["termination"] = to_string(rec.termination);
        entries.push_back(entry);
      }
      ex["entries"] = entries;
      persist("exploration.json", ex.dump(2) + "\n");
      persist("exploration.csv", log.to_csv(space));
      for (const ScenarioRecord& rec : records)
        record_artifact("traces/" + trace_filename(rec.scenario.id));
    }

    json& summary = manifest["summary"];
    const std::size_t best = best_record_index(records, direction);
    summary["evaluations"] = records.size();
    summary["best_objective"] = records[best].objective;
    summary["best_scenario_id"] = records[best].scenario.id;
    summary["best_parameters"] = records[best].scenario.values;
    summary["termination"] = termination_text;
    std::size_t collisions = 0;
    for (const ScenarioRecord& rec : records)
      if (rec.termination == Termination::Collision) ++collisions;
    summary["collision_count"] = collisions;
  });

  run_stage("similarity", [&]() {
    if (records.size() < 2)
      throw std::runtime_error("pairwise comparison needs at least 2 evaluated scenarios");
    std::vector<Sequence> ego_seqs;
    std::vector<Sequence> metric_seqs;
    ego_seqs.reserve(records.size());
    metric_seqs.reserve(records.size());
    for (const ScenarioRecord& rec : records) {
      ego_seqs.push_back(rec.ego_seq);
      metric_seqs.push_back(rec.metric_seq);
    }
    ego_matrix = build_distance_matrix(ego_seqs, kKindEgoTrajectoryDtw, config.dtw_band,
                                       &behavior.dtw_evaluations);
    metric_matrix = build_distance_matrix(metric_seqs, metric_dtw_kind(to_string(config.metric)),
                                          config.dtw_band, &criticality.dtw_evaluations);
    persist("matrices/ego_dtw.csv", ego_matrix.to_csv());
    persist("matrices/metric_dtw.csv", metric_matrix.to_csv());
  });

  auto branch_name = [](AnalysisBranch b) { return to_string(b); };

  run_stage("embedding", [&]() {
    auto embed = [&](BranchState& st, const DistanceMatrix& matrix, AnalysisBranch b) {
      const RescaledDistances rescaled = rescale_to_median(matrix, config.median_target);
      st.rescaled = rescaled.matrix;
      st.rescale_factor = rescaled.factor;
      const KernelMatrix kernel = rbf_kernel(st.rescaled, config.gamma);
      const std::size_t n = st.rescaled.ids.size();
      const std::size_t k = std::min(config.embedding_k, n);
      if (k < config.embedding_k)
        warn(branch_name(b) + ": embedding dimensions lowered to the sample count " +
             std::to_string(n));
      st.embedding = kernel_pca(kernel, k, st.rescaled.ids);
      persist("embedding/" + branch_name(b) + ".csv", st.embedding.to_csv());
      json& s = manifest["summary"][branch_name(b)];
      s["rescale_factor"] = st.rescale_factor;
      s["negative_eigen_mass"] = st.embedding.negative_eigen_mass;
      s["dtw_evaluations"] = st.dtw_evaluations;
    };
    embed(behavior, ego_matrix, AnalysisBranch::Behavior);
    embed(criticality, metric_matrix, AnalysisBranch::Criticality);
  });

  run_stage("clustering", [&]() {
    auto cluster = [&](BranchState& st, AnalysisBranch b) {
      st.clusters = config.cluster_space == ClusterSpace::Kernel
                        ? dbscan_points(st.embedding.coordinates, config.eps, config.min_pts)
                        : dbscan_distances(st.rescaled.D, config.eps, config.min_pts);
      persist("clusters/" + branch_name(b) + ".csv", st.clusters.to_csv(st.embedding.ids));
      std::size_t noise = 0;
      for (int label : st.clusters.labels)
        if (label < 0) ++noise;
      json& s = manifest["summary"][branch_name(b)];
      s["n_clusters"] = st.clusters.n_clusters;
      s["noise_fraction"] =
          static_cast<double>(noise) / static_cast<double>(st.clusters.labels.size());
    };
    cluster(behavior, AnalysisBranch::Behavior);
    cluster(criticality, AnalysisBranch::Criticality);
  });

  run_stage("reduction", [&]() {
    RecordIndex by_id;
    for (const ScenarioRecord& rec : records)
      by_id[rec.scenario.id] = {rec.scenario.values, rec.objective};

    json red;
    red["primary_branch"] = branch_name(config.reduction_branch);
    red["explored_count"] = records.size();
    red["branches"] = json::object();

    ReduceOptions opts;
    opts.archetypes_per_cluster = config.archetypes_per_cluster;
    opts.prototypes_per_cluster = config.prototypes_per_cluster;
    opts.seed = mix_seed(config.seed, 7001);

    auto reduce_branch = [&](BranchState& st, AnalysisBranch b) {
      BranchReduction br =
          reduce_one_branch(st.clusters, st.embedding, st.rescaled, by_id, records.size(), opts);
      for (const std::string& w : br.warnings) warn(branch_name(b) + ": " + w);
      red["branches"][branch_name(b)] = std::move(br.branch_json);
      merge_summary(manifest["summary"][branch_name(b)], br.summary_json);
    };
    reduce_branch(behavior, AnalysisBranch::Behavior);
    reduce_branch(criticality, AnalysisBranch::Criticality);
    persist("reduced_set.json", red.dump(2) + "\n");

    const std::string primary = branch_name(config.reduction_branch);
    json& s = manifest["summary"]["reduction"];
    s["branch"] = primary;
    s["size"] = manifest["summary"][primary]["reduced_size"];
    s["fraction_of_explored"] = manifest["summary"][primary]["reduced_fraction"];
  });

  write_manifest();
  return PipelineResult{std::move(manifest), run_dir};
}

json strip_timings(json manifest) {
  if (manifest.is_object()) manifest.erase("seconds");
  if (manifest.is_object() || manifest.is_array()) {
    for (auto it = manifest.begin(); it != manifest.end(); ++it)
      *it = strip_timings(std::move(*it));
  }
  return manifest;
}

std::string manifest_fingerprint(const json& manifest) {
  return hex64(fnv1a64(strip_timings(manifest).dump()));
}

namespace {

struct ClusterLabels {
  std::vector<std::uint64_t> ids;
  std::vector<int> labels;
  std::vector<bool> core;

  int label_of(std::uint64_t id) const {
    for (std::size_t i = 0; i < ids.size(); ++i)
      if (ids[i] == id) return labels[i];
    return -1;
  }
};

ClusterLabels parse_cluster_csv(const std::string& text) {
  ClusterLabels out;
  std::size_t pos = 0;
  bool header = true;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string::npos) end = text.size();
    const std::string line = text.substr(pos, end - pos);
    pos = end + 1;
    if (line.empty()) continue;
    if (header) {
      header = false;
      continue;
    }
    const std::vector<std::string> fields = split_csv_line(line);
    if (fields.size() < 3) throw std::runtime_error("malformed cluster row: " + line);
    out.ids.push_back(parse_uint(fields[0]));
    out.labels.push_back(static_cast<int>(parse_double(fields[1])));
    out.core.push_back(fields[2] == "1");
  }
  return out;
}

}  // namespace

std::vector<fs::path> emit_plots(const fs::path& run_dir) {
  auto require = [&](const std::string& rel) {
    const fs::path p = run_dir / rel;
    if (!fs::exists(p))
      throw PipelineError("plots", "missing artifact " + rel + "; run the pipeline first");
    return read_text_file(p);
  };

  const json manifest = json::parse(require("manifest.json"));
  const json ex = json::parse(require("exploration.json"));
  const json& cfg = manifest.at("config");
  const std::size_t min_pts = cfg.at("min_pts").get<std::size_t>();
  const double eps = cfg.at("eps").get<double>();
  const std::string cluster_space = cfg.at("cluster_space").get<std::string>();
  const std::string reduction_branch = cfg.at("reduction_branch").get<std::string>();
  const std::string metric_name = cfg.at("metric").get<std::string>();

  fs::create_directories(run_dir / "plots");
  std::vector<fs::path> produced;
  auto emit = [&](const std::string& name, const SvgPlot& plot) {
    const fs::path p = run_dir / "plots" / name;
    write_text_file(p, plot.render());
    produced.push_back(p);
  };

  {
    SvgPlot plot("best objective so far", "evaluation", metric_name + " best so far");
    std::vector<std::pair<double, double>> line;
    for (const json& entry : ex.at("entries"))
      line.emplace_back(static_cast<double>(entry.at("iteration").get<std::uint64_t>()),
                        entry.at("best_so_far").get<double>());
    plot.add_line(line, "#1f77b4");
    emit("best_so_far.svg", plot);
  }

  ClusterLabels reduction_labels;
  for (const char* branch_name : {"behavior", "criticality"}) {
    const std::string branch = branch_name;
    const Embedding emb = Embedding::from_csv(require("embedding/" + branch + ".csv"));
    const ClusterLabels labels = parse_cluster_csv(require("clusters/" + branch + ".csv"));
    if (branch == reduction_branch) reduction_labels = labels;
    const std::size_t n = emb.ids.size();

    if (n >= 2) {
      const std::size_t k = std::min(min_pts, n - 1);
      std::vector<double> profile;
      if (cluster_space == "kernel") {
        profile = k_distance_profile(emb.coordinates, k);
      } else {
        const DistanceMatrix raw = DistanceMatrix::from_csv(
            require(branch == "behavior" ? "matrices/ego_dtw.csv" : "matrices/metric_dtw.csv"));
        const double factor = manifest.at("summary").at(branch).at("rescale_factor").get<double>();
        profile = k_distance_profile_from_distances(raw.D * factor, k);
      }
      SvgPlot plot("k-distance profile (" + branch + ")", "point rank",
                   "distance to neighbor k=" + std::to_string(k));
      std::vector<std::pair<double, double>> line;
      for (std::size_t i = 0; i < profile.size(); ++i)
        line.emplace_back(static_cast<double>(i + 1), profile[i]);
      plot.add_line(line, "#1f77b4");
      plot.add_line({{1.0, eps}, {static_cast<double>(profile.size()), eps}}, "#d62728");
      emit("k_distance_" + branch + ".svg", plot);
    }

    const std::size_t dims = static_cast<std::size_t>(emb.coordinates.cols());
    for (std::size_t i = 0; i < dims; ++i) {
      for (std::size_t j = i + 1; j < dims; ++j) {
        SvgPlot plot("embedding (" + branch + ")", "component " + std::to_string(i + 1),
                     "component " + std::to_string(j + 1));
        for (std::size_t r = 0; r < n; ++r)
          plot.add_point(emb.coordinates(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(i)),
                         emb.coordinates(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(j)),
                         cluster_color(labels.labels[r]));
        emit("embedding_" + branch + "_c" + std::to_string(i + 1) + std::to_string(j + 1) + ".svg",
             plot);
      }
    }
  }

  const json& space = ex.at("space");
  const std::size_t dim = space.size();
  auto axis_label = [&](std::size_t i) {
    const std::string name = space[i].at("name").get<std::string>();
    const std::string unit = space[i].at("unit").get<std::string>();
    return unit.empty() ? name : name + " [" + unit + "]";
  };

  double obj_min = 0.0;
  double obj_max = 0.0;
  bool first = true;
  for (const json& entry : ex.at("entries")) {
    const double v = entry.at("objective").get<double>();
    obj_min = first ? v : std::min(obj_min, v);
    obj_max = first ? v : std::max(obj_max, v);
    first = false;
  }
  auto heat_of = [&](double v) {
    if (obj_max <= obj_min) return heat_color(0.5);
    return heat_color((v - obj_min) / (obj_max - obj_min));
  };

  auto param_scatter = [&](std::size_t i, std::size_t j, const std::string& stem, bool by_cluster) {
    SvgPlot plot(by_cluster ? "parameters by cluster (" + reduction_branch + ")"
                            : "parameters by " + metric_name,
                 axis_label(i), axis_label(j));
    for (const json& entry : ex.at("entries")) {
      const json& params = entry.at("parameters");
      const std::string color =
          by_cluster ? cluster_color(reduction_labels.label_of(entry.at("id").get<std::uint64_t>()))
                     : heat_of(entry.at("objective").get<double>());
      plot.add_point(params[i].get<double>(), params[j].get<double>(), color);
    }
    emit(stem + "_" + std::to_string(i + 1) + std::to_string(j + 1) + ".svg", plot);
  };

  if (dim >= 2) {
    for (std::size_t i = 0; i < dim; ++i)
      for (std::size_t j = i + 1; j < dim; ++j) param_scatter(i, j, "params_clusters", true);
    for (std::size_t i = 0; i < dim; ++i)
      for (std::size_t j = i + 1; j < dim; ++j) param_scatter(i, j, "params_criticality", false);
  } else if (dim == 1) {
    SvgPlot by_cluster("parameters by cluster (" + reduction_branch + ")", axis_label(0),
                       metric_name);
    SvgPlot by_value("parameters by " + metric_name, axis_label(0), metric_name);
    for (const json& entry : ex.at("entries")) {
      const double x = entry.at("parameters")[0].get<double>();
      const double y = entry.at("objective").get<double>();
      by_cluster.add_point(
          x, y, cluster_color(reduction_labels.label_of(entry.at("id").get<std::uint64_t>())));
      by_value.add_point(x, y, heat_of(y));
    }
    emit("params_clusters_1.svg", by_cluster);
    emit("params_criticality_1.svg", by_value);
  }

  return produced;
}

PipelineResult rerun_reduction(const fs::path& run_dir, const RunConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  json manifest;
  RecordIndex by_id;
  try {
    manifest = json::parse(read_text_file(run_dir / "manifest.json"));
    const json ex = json::parse(read_text_file(run_dir / "exploration.json"));
    for (const json& entry : ex.at("entries"))
      by_id[entry.at("id").get<std::uint64_t>()] = {
          entry.at("parameters").get<std::vector<double>>(),
          entry.at("objective").get<double>()};
  } catch (const std::exception& e) {
    throw PipelineError("reduction", std::string("cannot load run artifacts: ") + e.what());
  }
  if (by_id.empty()) throw PipelineError("reduction", "persisted exploration has no entries");

  json red;
  red["primary_branch"] = to_string(config.reduction_branch);
  red["explored_count"] = by_id.size();
  red["branches"] = json::object();

  ReduceOptions opts;
  opts.archetypes_per_cluster = config.archetypes_per_cluster;
  opts.prototypes_per_cluster = config.prototypes_per_cluster;
  opts.seed = mix_seed(config.seed, 7001);

  try {
    for (const AnalysisBranch b : {AnalysisBranch::Behavior, AnalysisBranch::Criticality}) {
      const std::string name = to_string(b);
      const Embedding emb =
          Embedding::from_csv(read_text_file(run_dir / "embedding" / (name + ".csv")));
      const ClusterLabels parsed =
          parse_cluster_csv(read_text_file(run_dir / "clusters" / (name + ".csv")));
      ClusterAssignment clusters;
      clusters.labels = parsed.labels;
      clusters.core = parsed.core;
      clusters.eps = config.eps;
      clusters.min_pts = config.min_pts;
      for (int label : clusters.labels)
        clusters.n_clusters = std::max(clusters.n_clusters, label + 1);
      const DistanceMatrix raw = DistanceMatrix::from_csv(read_text_file(
          run_dir / "matrices" /
          (b == AnalysisBranch::Behavior ? "ego_dtw.csv" : "metric_dtw.csv")));
      const RescaledDistances rescaled = rescale_to_median(raw, config.median_target);

      BranchReduction br =
          reduce_one_branch(clusters, emb, rescaled.matrix, by_id, by_id.size(), opts);
      red["branches"][name] = std::move(br.branch_json);
      merge_summary(manifest["summary"][name], br.summary_json);
      for (const std::string& w : br.warnings) {
        const json tagged = name + ": " + w;
        bool seen = false;
        for (const json& existing : manifest["warnings"])
          if (existing == tagged) seen = true;
        if (!seen) manifest["warnings"].push_back(tagged);
      }
    }
  } catch (const PipelineError&) {
    throw;
  } catch (const std::exception& e) {
    throw PipelineError("reduction", e.what());
  }

  write_text_file(run_dir / "reduced_set.json", red.dump(2) + "\n");

  json artifact;
  artifact["path"] = "reduced_set.json";
  artifact["hash"] = hex64(fnv1a64_file(run_dir / "reduced_set.json"));
  json* stage = nullptr;
  for (json& s : manifest["stages"])
    if (s.at("name") == "reduction") stage = &s;
  if (stage == nullptr) {
    manifest["stages"].push_back(
        json{{"name", "reduction"}, {"artifacts", json::array()}, {"seconds", 0.0}});
    stage = &manifest["stages"].back();
  }
  (*stage)["artifacts"] = json::array({artifact});
  (*stage)["seconds"] =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  manifest["config"] = config_to_json(config);
  const std::string primary = to_string(config.reduction_branch);
  json& s = manifest["summary"]["reduction"];
  s["branch"] = primary;
  s["size"] = manifest["summary"][primary]["reduced_size"];
  s["fraction_of_explored"] = manifest["summary"][primary]["reduced_fraction"];

  write_text_file(run_dir / "manifest.json", manifest.dump(2) + "\n");
  return PipelineResult{std::move(manifest), run_dir};
}

}  // namespace scenex
