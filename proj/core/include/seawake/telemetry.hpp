#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace seawake::telemetry {

// One GPS position report. Timestamps are fractional UTC epoch seconds;
// angles are degrees. cog/heading follow the compass convention
// (clockwise from North), cog normalized to [0, 360).
struct GeoFix {
    double timestamp = 0.0;
    std::int64_t vessel_id = 0;
    double lon = 0.0;
    double lat = 0.0;
    std::optional<double> sog;      // knots
    std::optional<double> cog;      // degrees, [0, 360)
    std::optional<double> heading;  // degrees
    std::string phase_id;           // opaque mission phase tag, may be empty
};

// Per-vessel fix sequences, each strictly increasing in timestamp.
class TelemetryLog {
public:
    TelemetryLog() = default;

    // Groups by vessel and sorts by timestamp. Throws Error(validation) on
    // duplicate timestamps within a vessel, Error(empty_input) when empty.
    static TelemetryLog from_fixes(std::vector<GeoFix> fixes);

    bool empty() const { return groups_.empty(); }
    std::size_t fix_count() const;
    std::vector<std::int64_t> vessel_ids() const;
    bool has_vessel(std::int64_t id) const { return groups_.count(id) != 0; }

    // Throws Error(lookup) for an unknown vessel.
    std::span<const GeoFix> fixes_for(std::int64_t vessel_id) const;

    const std::map<std::int64_t, std::vector<GeoFix>>& groups() const { return groups_; }

private:
    std::map<std::int64_t, std::vector<GeoFix>> groups_;
};

// Parses CSV text with header columns (case-insensitive)
//   timestamp,id,lon,lat,sog,cog,heading,phase
// Extra columns are ignored; optional columns may be absent or empty.
// Timestamps are epoch seconds or ISO-8601 UTC strings.
TelemetryLog parse_log(std::string_view csv_text);

// Writes the canonical CSV schema; parse_log(write_csv(log)) preserves the
// fix set exactly (numbers are emitted in shortest round-trip form).
void write_csv(const TelemetryLog& log, std::ostream& out);
std::string to_csv(const TelemetryLog& log);

// Shifts timestamps so that a video-clock query t addresses the fix that
// was originally stamped t + offset_s (t_log = t_video + offset).
TelemetryLog align(const TelemetryLog& log, double offset_s);

// Keeps fixes inside [t_start, t_end] plus, per vessel, one bracketing fix
// on each side when present, so interpolation stays defined at the edges.
// Throws Error(empty_window) when some vessel ends up unaddressable.
TelemetryLog window(const TelemetryLog& log, double t_start, double t_end);

// Drops vessels not in keep_ids. Unknown ids in keep_ids throw Error(lookup).
TelemetryLog filter_vessels(const TelemetryLog& log, std::span<const std::int64_t> keep_ids);

// Linear interpolation at time t between the bracketing fixes: lon/lat/sog
// component-wise, cog/heading along the shortest circular arc. Exact at
// knots. Throws Error(out_of_range) outside the vessel's span.
GeoFix interpolate(const TelemetryLog& log, std::int64_t vessel_id, double t);

// Shortest-arc circular interpolation between two compass angles, result in
// [0, 360). u is the blend weight in [0, 1].
double lerp_angle_deg(double a, double b, double u);

}  // namespace seawake::telemetry
