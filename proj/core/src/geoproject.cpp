#include "seawake/geoproject.hpp"

#include <cmath>

#include "json_util.hpp"
#include "model_json.hpp"
#include "seawake/errors.hpp"

namespace seawake::geo {

namespace {

constexpr double kDegToRad = 3.14159265358979323846 / 180.0;

[[noreturn]] void fail(ErrorCode code, const std::string& msg) {
    throw Error(code, "geoproject: " + msg);
}

}  // namespace

LocalOrigin LocalOrigin::at(double lon_bar, double lat_bar) {
    if (!(std::abs(lat_bar) < 90.0))
        fail(ErrorCode::validation, "origin latitude must satisfy |lat| < 90");
    LocalOrigin origin;
    origin.lon_bar = lon_bar;
    origin.lat_bar = lat_bar;
    origin.m_lat = kMetresPerDegreeLat;
    origin.m_lon = kMetresPerDegreeLat * std::cos(lat_bar * kDegToRad);
    return origin;
}

void ClipTiming::validate() const {
    if (!(fps > 0.0)) fail(ErrorCode::validation, "fps must be > 0");
    if (n_frames < 1) fail(ErrorCode::validation, "n_frames must be >= 1");
    if (width <= 0 || height <= 0) fail(ErrorCode::validation, "frame dimensions must be positive");
}

const VesselAnchor& CameraFrameModel::anchor_for(std::int64_t vessel_id) const {
    auto it = anchors.find(vessel_id);
    if (it == anchors.end())
        fail(ErrorCode::lookup, "no anchor for vessel " + std::to_string(vessel_id));
    return it->second;
}

void CameraFrameModel::validate() const {
    timing.validate();
    if (!(scale_px_per_m > 0.0)) fail(ErrorCode::validation, "scale must be > 0 px/m");
    for (const auto& [id, anchor] : anchors) {
        if (!timing.contains({anchor.cx, anchor.cy}))
            fail(ErrorCode::validation,
                 "anchor centre of vessel " + std::to_string(id) + " lies outside the frame");
    }
}

LocalOrigin make_origin(const telemetry::TelemetryLog& log) {
    if (log.empty()) fail(ErrorCode::empty_input, "cannot build an origin from an empty log");
    double lon_sum = 0.0, lat_sum = 0.0;
    std::size_t n = 0;
    for (const auto& [id, group] : log.groups()) {
        for (const auto& fix : group) {
            lon_sum += fix.lon;
            lat_sum += fix.lat;
            ++n;
        }
    }
    return LocalOrigin::at(lon_sum / static_cast<double>(n), lat_sum / static_cast<double>(n));
}

EastNorth to_local_metric(const telemetry::GeoFix& fix, const LocalOrigin& origin) {
    return {(fix.lon - origin.lon_bar) * origin.m_lon, (fix.lat - origin.lat_bar) * origin.m_lat};
}

FrameVec rotate(const EastNorth& v, double theta_deg) {
    const double c = std::cos(theta_deg * kDegToRad);
    const double s = std::sin(theta_deg * kDegToRad);
    return {v.e * c - v.n * s, v.e * s + v.n * c};
}

EastNorth unrotate(const FrameVec& v, double theta_deg) {
    const double c = std::cos(theta_deg * kDegToRad);
    const double s = std::sin(theta_deg * kDegToRad);
    return {v.f_x * c + v.f_y * s, -v.f_x * s + v.f_y * c};
}

ScaleEstimate estimate_scale(const telemetry::GeoFix& fix_a, const telemetry::GeoFix& fix_b,
                             const PixelPoint& px_a, const PixelPoint& px_b,
                             const LocalOrigin& origin, double min_metric_distance_m) {
    const EastNorth a = to_local_metric(fix_a, origin);
    const EastNorth b = to_local_metric(fix_b, origin);
    const double d_m = std::hypot(a.e - b.e, a.n - b.n);
    if (d_m < min_metric_distance_m)
        fail(ErrorCode::scale_undefined,
             "metre baseline " + std::to_string(d_m) + " m is below the " +
                 std::to_string(min_metric_distance_m) + " m threshold");
    const double d_p = pixel_distance(px_a, px_b);
    if (d_p == 0.0) return {0.0, true};
    return {d_p / d_m, false};
}

PixelPoint project_point(const telemetry::GeoFix& fix, const CameraFrameModel& model,
                         std::int64_t vessel_id) {
    model.validate();
    const VesselAnchor& anchor = model.anchor_for(vessel_id);
    if (!anchor.fix)
        fail(ErrorCode::lookup,
             "anchor fix of vessel " + std::to_string(vessel_id) + " is unresolved");
    const EastNorth p = to_local_metric(fix, model.origin);
    const EastNorth a = to_local_metric(*anchor.fix, model.origin);
    const FrameVec d = rotate({p.e - a.e, p.n - a.n}, model.theta_deg);
    return {anchor.cx + d.f_x * model.scale_px_per_m, anchor.cy - d.f_y * model.scale_px_per_m};
}

telemetry::GeoFix inverse_project(const PixelPoint& p, double t, const CameraFrameModel& model,
                                  std::int64_t vessel_id) {
    model.validate();
    const VesselAnchor& anchor = model.anchor_for(vessel_id);
    if (!anchor.fix)
        fail(ErrorCode::lookup,
             "anchor fix of vessel " + std::to_string(vessel_id) + " is unresolved");
    const FrameVec d = {(p.x - anchor.cx) / model.scale_px_per_m,
                        (anchor.cy - p.y) / model.scale_px_per_m};
    const EastNorth en = unrotate(d, model.theta_deg);
    telemetry::GeoFix fix;
    fix.timestamp = t;
    fix.vessel_id = vessel_id;
    fix.lon = anchor.fix->lon + en.e / model.origin.m_lon;
    fix.lat = anchor.fix->lat + en.n / model.origin.m_lat;
    return fix;
}

CameraFrameModel resolve_anchors(CameraFrameModel model, const telemetry::TelemetryLog& log) {
    for (auto& [id, anchor] : model.anchors)
        anchor.fix = telemetry::interpolate(log, id, model.timing.t_start);
    return model;
}

PixelTrajectory project_trajectory(const telemetry::TelemetryLog& log, std::int64_t vessel_id,
                                   const CameraFrameModel& model) {
    model.validate();
    CameraFrameModel resolved = model;
    auto it = resolved.anchors.find(vessel_id);
    if (it == resolved.anchors.end())
        fail(ErrorCode::lookup, "no anchor for vessel " + std::to_string(vessel_id));
    it->second.fix = telemetry::interpolate(log, vessel_id, model.timing.t_start);

    PixelTrajectory out;
    out.vessel_id = vessel_id;
    out.points.reserve(static_cast<std::size_t>(model.timing.n_frames));
    out.timestamps.reserve(static_cast<std::size_t>(model.timing.n_frames));
    for (int i = 0; i < model.timing.n_frames; ++i) {
        const double t_i = model.timing.frame_time(i);
        const telemetry::GeoFix fix = telemetry::interpolate(log, vessel_id, t_i);
        out.points.push_back(project_point(fix, resolved, vessel_id));
        out.timestamps.push_back(t_i);
    }
    return out;
}

nlohmann::ordered_json model_to_document(const CameraFrameModel& model) {
    using jsonutil::ordered_json;
    ordered_json doc;
    doc["theta_deg"] = model.theta_deg;
    if (model.scale_px_per_m > 0.0)
        doc["scale_px_per_m"] = model.scale_px_per_m;
    else
        doc["scale_px_per_m"] = nullptr;
    doc["t_start"] = model.timing.t_start;
    doc["fps"] = model.timing.fps;
    doc["n_frames"] = model.timing.n_frames;
    doc["width"] = model.timing.width;
    doc["height"] = model.timing.height;
    ordered_json vessels = ordered_json::array();
    for (const auto& [id, anchor] : model.anchors) {
        ordered_json v;
        v["id"] = id;
        v["cx"] = anchor.cx;
        v["cy"] = anchor.cy;
        vessels.push_back(std::move(v));
    }
    doc["vessels"] = std::move(vessels);
    return doc;
}

std::string model_to_json(const CameraFrameModel& model) {
    return model_to_document(model).dump(2) + "\n";
}

CameraFrameModel model_from_json(std::string_view text) {
    namespace ju = jsonutil;
    const std::string module = "geoproject";
    const auto doc = ju::parse_document(module, text);
    return model_from_document(doc);
}

CameraFrameModel model_from_document(const nlohmann::ordered_json& doc) {
    namespace ju = jsonutil;
    const std::string module = "geoproject";
    CameraFrameModel model;
    model.theta_deg =
        ju::require_number(module, ju::require_key(module, doc, "", "theta_deg"), "theta_deg");
    const auto& scale = ju::require_key(module, doc, "", "scale_px_per_m");
    if (scale.is_null())
        model.scale_px_per_m = 0.0;  // to be computed from the anchor baseline
    else
        model.scale_px_per_m = ju::require_number(module, scale, "scale_px_per_m");
    model.timing.t_start =
        ju::require_number(module, ju::require_key(module, doc, "", "t_start"), "t_start");
    model.timing.fps = ju::require_number(module, ju::require_key(module, doc, "", "fps"), "fps");
    model.timing.n_frames = static_cast<int>(
        ju::require_integer(module, ju::require_key(module, doc, "", "n_frames"), "n_frames"));
    model.timing.width = static_cast<int>(
        ju::require_integer(module, ju::require_key(module, doc, "", "width"), "width"));
    model.timing.height = static_cast<int>(
        ju::require_integer(module, ju::require_key(module, doc, "", "height"), "height"));
    model.timing.validate();
    const auto& vessels =
        ju::require_array(module, ju::require_key(module, doc, "", "vessels"), "vessels");
    for (std::size_t i = 0; i < vessels.size(); ++i) {
        const std::string path = "vessels[" + std::to_string(i) + "]";
        const auto& v = vessels[i];
        VesselAnchor anchor;
        const std::int64_t id =
            ju::require_integer(module, ju::require_key(module, v, path, "id"), path + ".id");
        anchor.cx = ju::require_number(module, ju::require_key(module, v, path, "cx"), path + ".cx");
        anchor.cy = ju::require_number(module, ju::require_key(module, v, path, "cy"), path + ".cy");
        model.anchors[id] = anchor;
    }
    return model;
}

}  // namespace seawake::geo
