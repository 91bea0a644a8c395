#include "seawake/synthscene.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "json_util.hpp"
#include "seawake/errors.hpp"
#include "seawake/parallel.hpp"

namespace seawake::synth {

namespace {

[[noreturn]] void fail(ErrorCode code, const std::string& msg) {
    throw Error(code, "synthscene: " + msg);
}

// Water rendering range: dark enough to contrast with vessel blobs, textured
// enough for flow estimation.
constexpr double kWaterLo = 0.30;
constexpr double kWaterHi = 0.62;
constexpr double kBasePeriodPx = 48.0;
constexpr double kKnotsPerMps = 1.9438444924406048;

inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

// Lattice value in [0, 1), a pure function of (seed, cell, octave).
double lattice_value(std::uint64_t seed, std::int64_t xi, std::int64_t yi, int octave) {
    std::uint64_t h = mix64(seed ^ 0xA24BAED4963EE407ull);
    h = mix64(h ^ static_cast<std::uint64_t>(xi) * 0x9E3779B97F4A7C15ull);
    h = mix64(h ^ static_cast<std::uint64_t>(yi) * 0xC2B2AE3D27D4EB4Full);
    h = mix64(h ^ static_cast<std::uint64_t>(octave) * 0x165667B19E3779F9ull);
    return static_cast<double>(h >> 11) * (1.0 / 9007199254740992.0);
}

inline double fade(double t) { return t * t * t * (t * (t * 6.0 - 15.0) + 10.0); }

double value_noise(std::uint64_t seed, double x, double y, int octave) {
    const double fx = std::floor(x);
    const double fy = std::floor(y);
    const auto xi = static_cast<std::int64_t>(fx);
    const auto yi = static_cast<std::int64_t>(fy);
    const double u = fade(x - fx);
    const double v = fade(y - fy);
    const double v00 = lattice_value(seed, xi, yi, octave);
    const double v10 = lattice_value(seed, xi + 1, yi, octave);
    const double v01 = lattice_value(seed, xi, yi + 1, octave);
    const double v11 = lattice_value(seed, xi + 1, yi + 1, octave);
    const double top = v00 + (v10 - v00) * u;
    const double bot = v01 + (v11 - v01) * u;
    return top + (bot - top) * v;
}

// Multi-octave value noise in [0, 1]; pure in (seed, x, y).
double octave_noise(const BackgroundSpec& bg, double x, double y) {
    double sum = 0.0, norm = 0.0, amp = 1.0;
    double freq = 1.0 / kBasePeriodPx;
    for (int o = 0; o < bg.octaves; ++o) {
        sum += amp * value_noise(bg.seed, x * freq, y * freq, o);
        norm += amp;
        amp *= 0.55;
        freq *= 2.0;
    }
    return sum / norm;
}

double water_value(const BackgroundSpec& bg, double x, double y, int frame_index) {
    // Uniform drift: the texture translates by drift px per frame.
    const double sx = x - bg.drift_x * frame_index;
    const double sy = y - bg.drift_y * frame_index;
    return kWaterLo + (kWaterHi - kWaterLo) * octave_noise(bg, sx, sy);
}

struct BlobState {
    PixelPoint center;
    double dir_x = 1.0;  // unit direction of instantaneous velocity
    double dir_y = 0.0;
    bool moving = false;
};

// Segment direction at time t (right-continuous at waypoints).
BlobState blob_state(const VesselSpec& vessel, double t, const PixelPoint& center) {
    BlobState s;
    s.center = center;
    const auto& wp = vessel.waypoints;
    std::size_t seg = 0;
    for (std::size_t i = 0; i + 1 < wp.size(); ++i) {
        seg = i;
        if (t < wp[i + 1].t) break;
    }
    if (wp.size() >= 2) {
        const double vx = wp[seg + 1].x - wp[seg].x;
        const double vy = wp[seg + 1].y - wp[seg].y;
        const double norm = std::hypot(vx, vy);
        if (norm > 1e-12) {
            s.dir_x = vx / norm;
            s.dir_y = vy / norm;
            s.moving = true;
        }
    }
    return s;
}

void render_vessel(flow::Frame& frame, const VesselSpec& vessel, const BlobState& state) {
    // Anisotropic Gaussian blob, major axis along the motion direction.
    const double sigma_along = vessel.radius_px;
    const double sigma_across = state.moving ? 0.6 * vessel.radius_px : vessel.radius_px;
    const double extent = 4.0 * sigma_along;
    const int x0 = std::max(0, static_cast<int>(std::floor(state.center.x - extent)));
    const int x1 = std::min(frame.width - 1, static_cast<int>(std::ceil(state.center.x + extent)));
    const int y0 = std::max(0, static_cast<int>(std::floor(state.center.y - extent)));
    const int y1 = std::min(frame.height - 1, static_cast<int>(std::ceil(state.center.y + extent)));
    for (int y = y0; y <= y1; ++y) {
        for (int x = x0; x <= x1; ++x) {
            const double rx = x - state.center.x;
            const double ry = y - state.center.y;
            const double along = rx * state.dir_x + ry * state.dir_y;
            const double across = -rx * state.dir_y + ry * state.dir_x;
            const double g = std::exp(-0.5 * (along * along / (sigma_along * sigma_along) +
                                              across * across / (sigma_across * sigma_across)));
            double& px = frame.at(x, y);
            px = px + (vessel.intensity - px) * g;
        }
    }
}

const VesselSpec& find_vessel(const MotionScript& script, std::int64_t vessel_id) {
    for (const auto& v : script.vessels)
        if (v.id == vessel_id) return v;
    fail(ErrorCode::lookup, "script has no vessel " + std::to_string(vessel_id));
}

// Emission grid: 1 Hz fixes at t_start + 0..K with K the first whole second
// at or past the last frame, so every frame time has brackets.
int grid_count(const geo::ClipTiming& timing) {
    const double span = timing.t_end() - timing.t_start;
    return std::max(1, static_cast<int>(std::ceil(span - 1e-12)));
}

}  // namespace

void MotionScript::validate(const geo::ClipTiming& timing) const {
    timing.validate();
    if (vessels.empty()) fail(ErrorCode::validation, "script needs at least one vessel");
    const int grid_k = grid_count(timing);
    for (const auto& vessel : vessels) {
        if (vessel.waypoints.size() < 1)
            fail(ErrorCode::validation,
                 "vessel " + std::to_string(vessel.id) + " has no waypoints");
        for (std::size_t i = 0; i < vessel.waypoints.size(); ++i) {
            const auto& wp = vessel.waypoints[i];
            if (i > 0 && !(wp.t > vessel.waypoints[i - 1].t))
                fail(ErrorCode::validation, "vessel " + std::to_string(vessel.id) +
                                                " waypoint timestamps must be strictly increasing");
            if (!timing.contains({wp.x, wp.y}))
                fail(ErrorCode::validation, "vessel " + std::to_string(vessel.id) + " waypoint " +
                                                std::to_string(i) + " lies outside the frame");
        }
        if (!(vessel.radius_px > 0.0))
            fail(ErrorCode::validation, "vessel blob radius must be positive");
        if (!(vessel.intensity > 0.0 && vessel.intensity <= 1.0))
            fail(ErrorCode::validation, "vessel intensity must lie in (0, 1]");
        if (vessel.waypoints.front().t > timing.t_start ||
            vessel.waypoints.back().t < timing.t_start + grid_k)
            fail(ErrorCode::contract,
                 "vessel " + std::to_string(vessel.id) + " waypoints must cover [" +
                     std::to_string(timing.t_start) + ", " +
                     std::to_string(timing.t_start + grid_k) + "] for the 1 Hz GPS grid");
    }
}

PixelPoint interpolate_script(const MotionScript& script, std::int64_t vessel_id, double t) {
    const VesselSpec& vessel = find_vessel(script, vessel_id);
    const auto& wp = vessel.waypoints;
    if (t < wp.front().t || t > wp.back().t)
        fail(ErrorCode::out_of_range, "t=" + std::to_string(t) + " outside vessel " +
                                          std::to_string(vessel_id) + " waypoint span");
    for (std::size_t i = 0; i + 1 < wp.size(); ++i) {
        if (t <= wp[i + 1].t) {
            const double u = (t - wp[i].t) / (wp[i + 1].t - wp[i].t);
            return {wp[i].x + u * (wp[i + 1].x - wp[i].x), wp[i].y + u * (wp[i + 1].y - wp[i].y)};
        }
    }
    return {wp.back().x, wp.back().y};
}

geo::CameraFrameModel make_scene_model(const MotionScript& script, const geo::ClipTiming& timing,
                                       const geo::LocalOrigin& origin, const PixelPoint& origin_px,
                                       double theta_deg, double scale_px_per_m) {
    if (!(scale_px_per_m > 0.0)) fail(ErrorCode::validation, "scene scale must be > 0 px/m");
    script.validate(timing);

    geo::CameraFrameModel model;
    model.origin = origin;
    model.theta_deg = theta_deg;
    model.scale_px_per_m = scale_px_per_m;
    model.timing = timing;

    // Pin the global map: pixel p corresponds to the geographic point at
    //   origin + M^-1 R(-theta) ((p - origin_px) / s, flipped y).
    for (const auto& vessel : script.vessels) {
        const PixelPoint start = interpolate_script(script, vessel.id, timing.t_start);
        const geo::FrameVec f{(start.x - origin_px.x) / scale_px_per_m,
                              (origin_px.y - start.y) / scale_px_per_m};
        const geo::EastNorth en = geo::unrotate(f, theta_deg);
        telemetry::GeoFix fix;
        fix.timestamp = timing.t_start;
        fix.vessel_id = vessel.id;
        fix.lon = origin.lon_bar + en.e / origin.m_lon;
        fix.lat = origin.lat_bar + en.n / origin.m_lat;
        geo::VesselAnchor anchor;
        anchor.cx = start.x;
        anchor.cy = start.y;
        anchor.fix = fix;
        model.anchors[vessel.id] = anchor;
    }
    return model;
}

SceneOutput generate_scene(const MotionScript& script, const geo::ClipTiming& timing,
                           const geo::CameraFrameModel& model) {
    script.validate(timing);
    model.validate();
    for (const auto& vessel : script.vessels) {
        if (model.anchors.find(vessel.id) == model.anchors.end())
            fail(ErrorCode::contract,
                 "model lacks an anchor for scripted vessel " + std::to_string(vessel.id));
        if (!model.anchors.at(vessel.id).fix)
            fail(ErrorCode::contract,
                 "anchor fix of vessel " + std::to_string(vessel.id) + " is unresolved");
    }

    SceneOutput out;

    // Frames at t_i = t_start + i / fps.
    out.frames.reserve(static_cast<std::size_t>(timing.n_frames));
    for (int i = 0; i < timing.n_frames; ++i) {
        const double t_i = timing.frame_time(i);
        flow::Frame frame = flow::Frame::make(timing.width, timing.height, 1);
        parallel_for(0, timing.height, [&](int y) {
            for (int x = 0; x < timing.width; ++x)
                frame.at(x, y) = water_value(script.background, x, y, i);
        });
        for (const auto& vessel : script.vessels) {
            const PixelPoint c = interpolate_script(script, vessel.id, t_i);
            render_vessel(frame, vessel, blob_state(vessel, t_i, c));
        }
        out.frames.push_back(std::move(frame));
    }

    // Ground truth: the exact scripted pixel path at frame times.
    for (const auto& vessel : script.vessels) {
        geo::PixelTrajectory gt;
        gt.vessel_id = vessel.id;
        for (int i = 0; i < timing.n_frames; ++i) {
            const double t_i = timing.frame_time(i);
            gt.points.push_back(interpolate_script(script, vessel.id, t_i));
            gt.timestamps.push_back(t_i);
        }
        out.ground_truth[vessel.id] = std::move(gt);
    }

    // GPS log: inverse-projected scripted positions on the 1 Hz grid, with
    // SOG/COG derived from the segment velocity in the metric frame.
    const int grid_k = grid_count(timing);
    std::vector<telemetry::GeoFix> fixes;
    for (const auto& vessel : script.vessels) {
        for (int k = 0; k <= grid_k; ++k) {
            const double tau = timing.t_start + static_cast<double>(k);
            const PixelPoint p = interpolate_script(script, vessel.id, tau);
            telemetry::GeoFix fix = geo::inverse_project(p, tau, model, vessel.id);

            const double dt = 0.25;
            const double t_a = std::max(vessel.waypoints.front().t, tau - dt);
            const double t_b = std::min(vessel.waypoints.back().t, tau + dt);
            if (t_b > t_a) {
                const PixelPoint pa = interpolate_script(script, vessel.id, t_a);
                const PixelPoint pb = interpolate_script(script, vessel.id, t_b);
                const geo::FrameVec vf{(pb.x - pa.x) / model.scale_px_per_m / (t_b - t_a),
                                       (pa.y - pb.y) / model.scale_px_per_m / (t_b - t_a)};
                const geo::EastNorth ven = geo::unrotate(vf, model.theta_deg);
                const double speed_mps = std::hypot(ven.e, ven.n);
                fix.sog = speed_mps * kKnotsPerMps;
                if (speed_mps > 1e-9) {
                    double cog = std::atan2(ven.e, ven.n) * 180.0 / 3.14159265358979323846;
                    if (cog < 0.0) cog += 360.0;
                    fix.cog = cog == 360.0 ? 0.0 : cog;
                }
            }
            fixes.push_back(std::move(fix));
        }
    }
    out.log = telemetry::TelemetryLog::from_fixes(std::move(fixes));
    return out;
}

MotionScript script_from_json(std::string_view text) {
    namespace ju = jsonutil;
    const std::string module = "synthscene";
    const auto doc = ju::parse_document(module, text);

    MotionScript script;
    const auto& vessels = ju::require_array(module, ju::require_key(module, doc, "", "vessels"),
                                            "vessels");
    for (std::size_t i = 0; i < vessels.size(); ++i) {
        const std::string path = "vessels[" + std::to_string(i) + "]";
        const auto& v = vessels[i];
        VesselSpec spec;
        spec.id = ju::require_integer(module, ju::require_key(module, v, path, "id"), path + ".id");
        const auto& wps = ju::require_array(module, ju::require_key(module, v, path, "waypoints"),
                                            path + ".waypoints");
        for (std::size_t j = 0; j < wps.size(); ++j) {
            const std::string wpath = path + ".waypoints[" + std::to_string(j) + "]";
            const auto& wp = ju::require_array(module, wps[j], wpath);
            if (wp.size() != 3) ju::schema_fail(module, wpath, "expected [t, x, y]");
            spec.waypoints.push_back({ju::require_number(module, wp[0], wpath + "[0]"),
                                      ju::require_number(module, wp[1], wpath + "[1]"),
                                      ju::require_number(module, wp[2], wpath + "[2]")});
        }
        spec.radius_px = ju::require_number(module, ju::require_key(module, v, path, "radius_px"),
                                            path + ".radius_px");
        if (v.contains("intensity"))
            spec.intensity = ju::require_number(module, v["intensity"], path + ".intensity");
        script.vessels.push_back(std::move(spec));
    }

    const auto& bg = ju::require_key(module, doc, "", "background");
    script.background.seed = static_cast<std::uint64_t>(
        ju::require_integer(module, ju::require_key(module, bg, "background", "seed"),
                            "background.seed"));
    script.background.octaves = static_cast<int>(
        ju::require_integer(module, ju::require_key(module, bg, "background", "octaves"),
                            "background.octaves"));
    if (script.background.octaves < 1)
        ju::schema_fail(module, "background.octaves", "must be >= 1");
    const auto& drift = ju::require_array(module,
                                          ju::require_key(module, bg, "background", "drift"),
                                          "background.drift");
    if (drift.size() != 2) ju::schema_fail(module, "background.drift", "expected [dx, dy]");
    script.background.drift_x = ju::require_number(module, drift[0], "background.drift[0]");
    script.background.drift_y = ju::require_number(module, drift[1], "background.drift[1]");
    return script;
}

std::string script_to_json(const MotionScript& script) {
    using jsonutil::ordered_json;
    ordered_json doc;
    ordered_json vessels = ordered_json::array();
    for (const auto& v : script.vessels) {
        ordered_json vj;
        vj["id"] = v.id;
        ordered_json wps = ordered_json::array();
        for (const auto& wp : v.waypoints) wps.push_back({wp.t, wp.x, wp.y});
        vj["waypoints"] = std::move(wps);
        vj["radius_px"] = v.radius_px;
        vj["intensity"] = v.intensity;
        vessels.push_back(std::move(vj));
    }
    doc["vessels"] = std::move(vessels);
    doc["background"] = ordered_json::object();
    doc["background"]["seed"] = script.background.seed;
    doc["background"]["octaves"] = script.background.octaves;
    doc["background"]["drift"] = {script.background.drift_x, script.background.drift_y};
    return doc.dump(2) + "\n";
}

double structure_tensor_condition(const flow::Frame& luma, const PixelPoint& p, int window) {
    if (luma.channels != 1) fail(ErrorCode::contract, "structure tensor expects a luma frame");
    const int radius = window / 2;
    double g11 = 0.0, g12 = 0.0, g22 = 0.0;
    for (int oy = -radius; oy <= radius; ++oy) {
        for (int ox = -radius; ox <= radius; ++ox) {
            const double x = p.x + ox;
            const double y = p.y + oy;
            const double ix = 0.5 * (flow::sample_bilinear(luma, x + 1, y) -
                                     flow::sample_bilinear(luma, x - 1, y));
            const double iy = 0.5 * (flow::sample_bilinear(luma, x, y + 1) -
                                     flow::sample_bilinear(luma, x, y - 1));
            g11 += ix * ix;
            g12 += ix * iy;
            g22 += iy * iy;
        }
    }
    const double trace = g11 + g22;
    const double disc = std::sqrt((g11 - g22) * (g11 - g22) + 4.0 * g12 * g12);
    const double lo = 0.5 * (trace - disc);
    const double hi = 0.5 * (trace + disc);
    if (lo <= 0.0) return std::numeric_limits<double>::infinity();
    return hi / lo;
}

}  // namespace seawake::synth
