#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "seawake/telemetry.hpp"
#include "seawake/types.hpp"

namespace seawake::geo {

// Metres per degree of latitude along a meridian (standard geodetic constant).
inline constexpr double kMetresPerDegreeLat = 111320.0;

// Local flat-earth frame: a reference geographic point plus the metre-per-degree
// factors of the equirectangular approximation at that point.
struct LocalOrigin {
    double lon_bar = 0.0;
    double lat_bar = 0.0;
    double m_lat = kMetresPerDegreeLat;
    double m_lon = kMetresPerDegreeLat;

    // Builds an origin at (lon_bar, lat_bar) with m_lon = m_lat * cos(lat_bar).
    // Throws Error(validation) unless |lat_bar| < 90.
    static LocalOrigin at(double lon_bar, double lat_bar);
};

// Metres east/north of a LocalOrigin.
struct EastNorth {
    double e = 0.0;
    double n = 0.0;
};

// Metres along the image axes (x right, y up) after yaw rotation.
struct FrameVec {
    double f_x = 0.0;
    double f_y = 0.0;
};

// Clip timing and raster geometry. Frame i is taken at t_start + i / fps.
struct ClipTiming {
    double t_start = 0.0;
    double fps = 7.0;
    int n_frames = 14;
    int width = 1024;
    int height = 576;

    double frame_time(int i) const { return t_start + static_cast<double>(i) / fps; }
    double t_end() const { return frame_time(n_frames - 1); }
    bool contains(const PixelPoint& p) const {
        return p.x >= 0.0 && p.x <= width - 1.0 && p.y >= 0.0 && p.y <= height - 1.0;
    }
    void validate() const;  // fps > 0, n_frames >= 1, width/height > 0
};

// A vessel's tie between image and geography: the annotated centre pixel at
// the anchor timestamp, plus (once resolved) the GPS fix interpolated there.
struct VesselAnchor {
    double cx = 0.0;
    double cy = 0.0;
    std::optional<telemetry::GeoFix> fix;
};

// Everything needed to map geography to pixels for one clip.
struct CameraFrameModel {
    LocalOrigin origin;
    double theta_deg = 100.0;       // camera yaw: compass direction of image-up
    double scale_px_per_m = 0.0;    // s; must be > 0 before projecting
    std::map<std::int64_t, VesselAnchor> anchors;
    ClipTiming timing;

    const VesselAnchor& anchor_for(std::int64_t vessel_id) const;
    void validate() const;  // scale > 0, anchors inside the frame
};

// N pixel positions with their video timestamps for one object.
struct PixelTrajectory {
    std::int64_t vessel_id = 0;
    std::vector<PixelPoint> points;
    std::vector<double> timestamps;
};

struct ScaleEstimate {
    double px_per_m = 0.0;
    // Set when the pixel baseline is zero while the metre baseline is not:
    // the annotation is degenerate and the returned scale is 0.
    bool degenerate_annotation = false;
};

// Mean position over every fix in the log; m_lon recomputed at the mean latitude.
LocalOrigin make_origin(const telemetry::TelemetryLog& log);

// Equirectangular degrees -> metres: e = (lon - lon_bar) m_lon, n = (lat - lat_bar) m_lat.
EastNorth to_local_metric(const telemetry::GeoFix& fix, const LocalOrigin& origin);

// Yaw rotation into image-aligned axes:
//   f_x = e cos(theta) - n sin(theta),  f_y = e sin(theta) + n cos(theta).
FrameVec rotate(const EastNorth& v, double theta_deg);

// Exact inverse of rotate (rotation by -theta).
EastNorth unrotate(const FrameVec& v, double theta_deg);

// s = pixel distance of the two annotated centres / metre distance of the two
// fixes. Throws Error(scale_undefined) when the metre baseline is below
// min_metric_distance_m.
ScaleEstimate estimate_scale(const telemetry::GeoFix& fix_a, const telemetry::GeoFix& fix_b,
                             const PixelPoint& px_a, const PixelPoint& px_b,
                             const LocalOrigin& origin, double min_metric_distance_m = 0.01);

// Pixel position of a fix relative to the vessel's anchor:
//   p = (c_x + dF_x * s, c_y - dF_y * s)
// The y sign flip converts image-up metres to the row-down pixel axis.
// Requires the anchor fix to be resolved.
PixelPoint project_point(const telemetry::GeoFix& fix, const CameraFrameModel& model,
                         std::int64_t vessel_id);

// Exact algebraic inverse of project_point; the returned fix is stamped t.
telemetry::GeoFix inverse_project(const PixelPoint& p, double t, const CameraFrameModel& model,
                                  std::int64_t vessel_id);

// Fills every anchor's fix with the log interpolant at timing.t_start.
CameraFrameModel resolve_anchors(CameraFrameModel model, const telemetry::TelemetryLog& log);

// Interpolates the log at each frame time and projects it. The anchor fix is
// re-derived from the log at t_start, so point 0 lands on (c_x, c_y) exactly.
PixelTrajectory project_trajectory(const telemetry::TelemetryLog& log, std::int64_t vessel_id,
                                   const CameraFrameModel& model);

// Config-document form (origin and anchor fixes are runtime-derived, not stored):
// keys theta_deg, scale_px_per_m (null when unknown), t_start, fps, n_frames,
// width, height, vessels: [{id, cx, cy}].
std::string model_to_json(const CameraFrameModel& model);
CameraFrameModel model_from_json(std::string_view text);

}  // namespace seawake::geo
