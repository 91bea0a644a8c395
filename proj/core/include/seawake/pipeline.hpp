#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "seawake/conditioning.hpp"
#include "seawake/flowlab.hpp"
#include "seawake/geoproject.hpp"
#include "seawake/metrics.hpp"
#include "seawake/synthscene.hpp"

namespace seawake::pipeline {

// Geographic placement of synthetic scenes (the only knobs that cannot be
// derived from a real log).
struct SynthPlacement {
    double origin_lon = 25.0;
    double origin_lat = 37.0;
    std::optional<PixelPoint> origin_px;  // defaults to the frame centre
};

// Full pipeline configuration. Defaults carry the reference clip's
// constants: theta 100 deg, clock offset 21 s, 7 fps, 14 frames, 1024x576,
// corner boxes 35 px at 30 px inset.
struct PipelineConfig {
    std::filesystem::path telemetry_csv;
    std::filesystem::path frames_dir;
    std::filesystem::path out_dir = "out";
    double align_offset_s = 21.0;
    geo::CameraFrameModel camera;
    double vessel_box_px = 40.0;
    double corner_box_px = 35.0;
    double corner_inset_px = 30.0;
    flow::FlowParams flow_params;
    flow::TrackParams track_params;
    SynthPlacement synth;
};

PipelineConfig config_from_json(std::string_view text);
std::string config_to_json(const PipelineConfig& config);
PipelineConfig load_config(const std::filesystem::path& path);

// Per-vessel trajectory document (written by `project`, also the ground-truth
// format written by `synth` and consumed by `evaluate`).
struct TrajectoryDocument {
    double scale_px_per_m = 0.0;
    geo::CameraFrameModel model;  // timing + anchors echoed for downstream steps
    std::vector<geo::PixelTrajectory> trajectories;  // config vessel order

    std::map<std::int64_t, geo::PixelTrajectory> by_vessel() const;
};

std::string trajectories_to_json(const TrajectoryDocument& doc);
TrajectoryDocument trajectories_from_json(std::string_view text);

struct ProjectResult {
    double scale_px_per_m = 0.0;
    bool degenerate_annotation = false;
    TrajectoryDocument document;
    std::filesystem::path document_path;
};

// parse -> align -> window -> origin -> scale -> per-vessel projection;
// writes <out>/trajectories.json and returns the computed scale.
ProjectResult cmd_project(const PipelineConfig& config);

struct ConditionResult {
    conditioning::ConditioningPayload payload;
    std::filesystem::path payload_path;
    std::optional<std::filesystem::path> overlay_path;
    std::vector<std::string> warnings;
};

// Builds the six-entry payload from the trajectory document (running
// cmd_project first when the document is missing); optionally renders the
// annotated reference frame.
ConditionResult cmd_condition(const PipelineConfig& config, bool overlay);

// Optical-flow extrapolation of n frames between two bounding frames,
// written as <out>/frame_%04d.png numbered from start_index.
std::vector<std::filesystem::path> cmd_baseline(const PipelineConfig& config,
                                                const std::filesystem::path& first_frame,
                                                const std::filesystem::path& last_frame, int n,
                                                int start_index = 2);

struct EvaluateResult {
    metrics::EvaluationReport report;
    std::filesystem::path report_json_path;
    std::filesystem::path report_table_path;
};

// Scores a generated frame directory against reference trajectories
// (<out>/trajectories.json unless overridden). gt_frames_dir, when given,
// adds a mean PSNR against matching ground-truth frames.
EvaluateResult cmd_evaluate(const PipelineConfig& config,
                            const std::filesystem::path& generated_dir,
                            const std::string& method_name,
                            const std::optional<std::filesystem::path>& trajectories_path = {},
                            const std::optional<std::filesystem::path>& gt_frames_dir = {});

struct SynthResult {
    std::vector<std::filesystem::path> frame_paths;
    std::filesystem::path csv_path;
    std::filesystem::path ground_truth_path;
    std::filesystem::path derived_config_path;
};

// Renders the scripted scene into <out>/: frames, a telemetry CSV consistent
// with them (log clock = video clock + align offset), the ground-truth
// trajectory document, and a derived config wired to those files so
// project/condition/evaluate run downstream without edits.
SynthResult cmd_synth(const std::filesystem::path& script_path, const PipelineConfig& config,
                      std::optional<std::uint64_t> seed_override = {});

}  // namespace seawake::pipeline
