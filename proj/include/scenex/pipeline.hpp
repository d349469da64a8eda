#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "scenex/config.hpp"

namespace scenex {

struct PipelineError : std::runtime_error {
  PipelineError(std::string stage_name, const std::string& message)
      : std::runtime_error("stage '" + stage_name + "' failed: " + message),
        stage(std::move(stage_name)) {}
  std::string stage;
};

struct PipelineResult {
  nlohmann::json manifest;
  std::filesystem::path run_dir;
};

/// Execute exploration (or reload persisted traces in analyze-only mode),
/// pairwise DTW, embedding and clustering per branch, and reduction. Every
/// stage's artifacts are persisted before the next stage starts; the manifest
/// is written last. On failure the manifest still lands with `failure_stage`
/// set and a PipelineError is thrown.
PipelineResult run(const RunConfig& config);

/// Emit the SVG plots of a completed run from its persisted artifacts.
std::vector<std::filesystem::path> emit_plots(const std::filesystem::path& run_dir);

/// Recompute only the reduced set of a completed run from its persisted
/// embedding, cluster, and distance-matrix artifacts (no simulation, no DTW),
/// honoring the reduction-related fields of `config`. Rewrites
/// reduced_set.json and patches the manifest in place.
PipelineResult rerun_reduction(const std::filesystem::path& run_dir, const RunConfig& config);

/// Manifest with all stage timings removed; basis of the fingerprint.
nlohmann::json strip_timings(nlohmann::json manifest);

/// Content hash over the timing-stripped manifest.
std::string manifest_fingerprint(const nlohmann::json& manifest);

}  // namespace scenex
