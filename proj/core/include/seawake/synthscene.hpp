#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "seawake/frame.hpp"
#include "seawake/geoproject.hpp"
#include "seawake/telemetry.hpp"
#include "seawake/types.hpp"

namespace seawake::synth {

struct Waypoint {
    double t = 0.0;  // seconds, video clock
    double x = 0.0;  // pixels
    double y = 0.0;
};

struct VesselSpec {
    std::int64_t id = 0;
    std::vector<Waypoint> waypoints;  // strictly increasing t, inside the frame
    double radius_px = 6.0;
    double intensity = 0.95;  // blob brightness in (0, 1]
};

struct BackgroundSpec {
    std::uint64_t seed = 0;
    int octaves = 3;
    double drift_x = 0.0;  // background translation, px/frame
    double drift_y = 0.0;
};

// Scripted scene: vessel motion as pixel-space waypoints plus a value-noise
// water background with optional uniform drift.
struct MotionScript {
    std::vector<VesselSpec> vessels;
    BackgroundSpec background;

    // Waypoint ordering/bounds and 1 Hz GPS-grid coverage of the clip.
    void validate(const geo::ClipTiming& timing) const;
};

// Piecewise-linear waypoint interpolation. Throws Error(out_of_range)
// outside the vessel's waypoint span, Error(lookup) for unknown vessels.
PixelPoint interpolate_script(const MotionScript& script, std::int64_t vessel_id, double t);

struct SceneOutput {
    std::vector<flow::Frame> frames;                       // luma, one per clip frame
    telemetry::TelemetryLog log;                           // 1 Hz fixes, video clock
    std::map<std::int64_t, geo::PixelTrajectory> ground_truth;  // exact scripted paths
};

// Renders the scripted scene and emits a GPS log consistent with it through
// the model's inverse projection, so projecting the log reproduces the
// scripted pixel paths. Deterministic for a fixed (script, timing, model).
SceneOutput generate_scene(const MotionScript& script, const geo::ClipTiming& timing,
                           const geo::CameraFrameModel& model);

// Camera model whose per-vessel anchors pin the scripted start positions to
// one global geo<->pixel map: the origin's geographic point sits at
// origin_px in the image.
geo::CameraFrameModel make_scene_model(const MotionScript& script, const geo::ClipTiming& timing,
                                       const geo::LocalOrigin& origin, const PixelPoint& origin_px,
                                       double theta_deg, double scale_px_per_m);

// Script document:
// {"vessels": [{"id", "waypoints": [[t, x, y], ...], "radius_px"}],
//  "background": {"seed", "octaves", "drift": [dx, dy]}}
// Optional per-vessel "intensity" defaults to 0.95.
MotionScript script_from_json(std::string_view text);
std::string script_to_json(const MotionScript& script);

// Condition number of the gradient structure tensor in a window around p;
// used to check that rendered blobs are trackable.
double structure_tensor_condition(const flow::Frame& luma, const PixelPoint& p, int window = 21);

}  // namespace seawake::synth
