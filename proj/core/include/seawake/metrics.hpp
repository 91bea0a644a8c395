#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "seawake/flowlab.hpp"
#include "seawake/geoproject.hpp"

namespace seawake::metrics {

// One row of the quantitative comparison: motion realism, GPS trajectory
// adherence and tracking health for a single method's frame sequence.
struct EvaluationReport {
    std::string method_name;
    double temporal_smoothness = 0.0;  // px/frame
    std::map<std::int64_t, double> trajectory_error_per_vessel;  // mean px; NaN = never tracked
    double trajectory_error_mean = 0.0;
    std::optional<double> psnr_mean_db;  // populated on synthetic-oracle runs only
    int frames_evaluated = 0;
    double tracking_validity = 0.0;  // fraction of tracked points flagged valid
};

// Mean dense-flow magnitude over consecutive pairs, px/frame.
double temporal_smoothness(std::span<const flow::Frame> frames,
                           const flow::FlowParams& params = {});

struct TrajectoryErrorResult {
    std::map<std::int64_t, double> per_vessel;  // mean px over frames tracked as valid
    double mean = 0.0;                          // unweighted mean of the per-vessel means
    double validity = 0.0;
};

// Mean Euclidean distance between tracked and reference positions, per
// vessel over frames with valid tracking; invalid frames are excluded and
// surface through the validity fraction instead.
TrajectoryErrorResult trajectory_error(const std::map<std::int64_t, flow::Track>& tracked,
                                       const std::map<std::int64_t, geo::PixelTrajectory>& reference);

// 10 log10(1 / MSE) on [0, 1] intensities; +infinity for identical frames.
double psnr(const flow::Frame& a, const flow::Frame& b);

// Full protocol: LK-track the seeds through the generated frames, score the
// tracks against GPS-projected reference trajectories, measure smoothness.
EvaluationReport evaluate_method(std::span<const flow::Frame> generated,
                                 const std::map<std::int64_t, geo::PixelTrajectory>& reference,
                                 const std::map<std::int64_t, PixelPoint>& seeds,
                                 std::string method_name, const flow::FlowParams& flow_params = {},
                                 const flow::TrackParams& track_params = {});

std::string report_to_json(const EvaluationReport& report);
EvaluationReport report_from_json(std::string_view text);

// Fixed-width table, one row per report: method, temporal smoothness,
// per-vessel trajectory errors, their mean, tracking validity.
std::string render_table(std::span<const EvaluationReport> reports);

}  // namespace seawake::metrics
