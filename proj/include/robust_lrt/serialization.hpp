#pragma once

#include <filesystem>
#include <optional>
#include <vector>

#include <json.hpp>

#include "robust_lrt/densities.hpp"
#include "robust_lrt/detector.hpp"
#include "robust_lrt/lfd.hpp"
#include "robust_lrt/synth.hpp"
#include "robust_lrt/training.hpp"
#include "robust_lrt/uncertainty.hpp"

namespace robust_lrt {

using json = nlohmann::json;

// All readers throw input_error on missing or mistyped fields.

json read_json_file(const std::filesystem::path& path);
void write_json_file(const std::filesystem::path& path, const json& doc);

// {"h0": {"sigma0"}, "h1": {"weights", "means", "sigmas"}}
json to_json(const NominalModel& model);
NominalModel model_from_json(const json& doc);

// {"kind": "band"|"outlier", "lower_factor", "upper_factor": x|"unbounded"}
// An outlier spec may give "epsilon" instead of the factors.
json to_json(const BandSpec& spec);
BandSpec band_spec_from_json(const json& doc);

// {a0, a1, iterations, grid: {n_points, lo, hi}, g0_values, g1_values}
json to_json(const LfdPair& pair);
LfdPair lfd_from_json(const json& doc);

json to_json(const IntensityGrid& grid);
IntensityGrid grid_from_json(const json& doc);

// {alpha, ln_gamma, fa_count, md_count, per_target: [{id, detected}]}
json report_to_json(const EvaluationReport& report, double alpha, double ln_gamma, CountUnit unit);

// {"seeds": [{"i", "j"}]} or the bare array.
std::vector<SeedPoint> seeds_from_json(const json& doc);

json to_json(const SceneSpec& spec);
SceneSpec scene_spec_from_json(const json& doc);

// Columns x, log_lr, case.
void write_log_lr_csv(const std::filesystem::path& path, const LogLrFunction& lr);

} // namespace robust_lrt
