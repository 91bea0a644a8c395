#include "seawake/telemetry.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <sstream>

#include "seawake/errors.hpp"

namespace seawake::telemetry {

namespace {

std::string lower(std::string_view s) {
    std::string out(s);
    for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    if (s.size() >= 2 && s.front() == '"' && s.back() == '"') {
        s.remove_prefix(1);
        s.remove_suffix(1);
    }
    return s;
}

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= line.size(); ++i) {
        if (i == line.size() || line[i] == ',') {
            fields.push_back(trim(line.substr(start, i - start)));
            start = i + 1;
        }
    }
    return fields;
}

bool parse_double(std::string_view s, double& out) {
    const char* first = s.data();
    const char* last = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc() && ptr == last && std::isfinite(out);
}

bool parse_int(std::string_view s, std::int64_t& out) {
    const char* first = s.data();
    const char* last = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc() && ptr == last;
}

// Hinnant's civil-date algorithm: days since 1970-01-01.
std::int64_t days_from_civil(std::int64_t y, int m, int d) {
    y -= m <= 2;
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = static_cast<unsigned>((153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1);
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

bool parse_fixed_uint(std::string_view s, std::size_t pos, std::size_t len, int& out) {
    if (pos + len > s.size()) return false;
    out = 0;
    for (std::size_t i = pos; i < pos + len; ++i) {
        if (s[i] < '0' || s[i] > '9') return false;
        out = out * 10 + (s[i] - '0');
    }
    return true;
}

// Accepts "YYYY-MM-DD[T ]HH:MM:SS[.frac][Z|±HH:MM|±HHMM]"; returns epoch seconds.
bool parse_iso8601(std::string_view s, double& out) {
    int year, month, day, hour, minute, second;
    if (!parse_fixed_uint(s, 0, 4, year)) return false;
    if (s.size() < 19 || s[4] != '-' || s[7] != '-') return false;
    if (s[10] != 'T' && s[10] != ' ') return false;
    if (s[13] != ':' || s[16] != ':') return false;
    if (!parse_fixed_uint(s, 5, 2, month) || !parse_fixed_uint(s, 8, 2, day) ||
        !parse_fixed_uint(s, 11, 2, hour) || !parse_fixed_uint(s, 14, 2, minute) ||
        !parse_fixed_uint(s, 17, 2, second))
        return false;
    if (month < 1 || month > 12 || day < 1 || day > 31 || hour > 23 || minute > 59 || second > 60)
        return false;

    std::size_t pos = 19;
    double frac = 0.0;
    if (pos < s.size() && s[pos] == '.') {
        ++pos;
        double scale = 0.1;
        bool any = false;
        while (pos < s.size() && s[pos] >= '0' && s[pos] <= '9') {
            frac += (s[pos] - '0') * scale;
            scale *= 0.1;
            ++pos;
            any = true;
        }
        if (!any) return false;
    }

    int offset_min = 0;
    if (pos < s.size()) {
        if (s[pos] == 'Z' && pos + 1 == s.size()) {
            pos = s.size();
        } else if (s[pos] == '+' || s[pos] == '-') {
            const int sign = s[pos] == '+' ? 1 : -1;
            ++pos;
            int oh = 0, om = 0;
            if (!parse_fixed_uint(s, pos, 2, oh)) return false;
            pos += 2;
            if (pos < s.size() && s[pos] == ':') ++pos;
            if (pos < s.size()) {
                if (!parse_fixed_uint(s, pos, 2, om)) return false;
                pos += 2;
            }
            if (pos != s.size()) return false;
            offset_min = sign * (oh * 60 + om);
        } else {
            return false;
        }
    }

    const std::int64_t days = days_from_civil(year, month, day);
    out = static_cast<double>(days) * 86400.0 + hour * 3600.0 + minute * 60.0 + second + frac -
          offset_min * 60.0;
    return true;
}

bool parse_timestamp(std::string_view s, double& out) {
    if (parse_double(s, out)) return true;
    return parse_iso8601(s, out);
}

void append_number(std::string& out, double v) {
    std::array<char, 32> buf;
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    out.append(buf.data(), ptr);
}

[[noreturn]] void fail(ErrorCode code, const std::string& msg, long line = -1) {
    throw Error(code, "telemetry: " + msg, line);
}

}  // namespace

TelemetryLog TelemetryLog::from_fixes(std::vector<GeoFix> fixes) {
    if (fixes.empty()) fail(ErrorCode::empty_input, "no fixes supplied");
    TelemetryLog log;
    for (auto& fix : fixes) log.groups_[fix.vessel_id].push_back(std::move(fix));
    for (auto& [id, group] : log.groups_) {
        std::stable_sort(group.begin(), group.end(),
                         [](const GeoFix& a, const GeoFix& b) { return a.timestamp < b.timestamp; });
        for (std::size_t i = 1; i < group.size(); ++i) {
            if (group[i].timestamp == group[i - 1].timestamp)
                fail(ErrorCode::validation,
                     "duplicate timestamp " + std::to_string(group[i].timestamp) + " for vessel " +
                         std::to_string(id));
        }
    }
    return log;
}

std::size_t TelemetryLog::fix_count() const {
    std::size_t n = 0;
    for (const auto& [id, group] : groups_) n += group.size();
    return n;
}

std::vector<std::int64_t> TelemetryLog::vessel_ids() const {
    std::vector<std::int64_t> ids;
    ids.reserve(groups_.size());
    for (const auto& [id, group] : groups_) ids.push_back(id);
    return ids;
}

std::span<const GeoFix> TelemetryLog::fixes_for(std::int64_t vessel_id) const {
    auto it = groups_.find(vessel_id);
    if (it == groups_.end())
        fail(ErrorCode::lookup, "unknown vessel " + std::to_string(vessel_id));
    return it->second;
}

TelemetryLog parse_log(std::string_view csv_text) {
    if (csv_text.empty()) fail(ErrorCode::empty_input, "empty CSV input");

    // header
    std::size_t pos = csv_text.find('\n');
    std::string_view header = csv_text.substr(0, pos == std::string_view::npos ? csv_text.size() : pos);
    const auto header_fields = split_fields(header);

    constexpr int kMissing = -1;
    int col_ts = kMissing, col_id = kMissing, col_lon = kMissing, col_lat = kMissing;
    int col_sog = kMissing, col_cog = kMissing, col_heading = kMissing, col_phase = kMissing;
    for (int i = 0; i < static_cast<int>(header_fields.size()); ++i) {
        const std::string name = lower(header_fields[i]);
        if (name == "timestamp") col_ts = i;
        else if (name == "id") col_id = i;
        else if (name == "lon") col_lon = i;
        else if (name == "lat") col_lat = i;
        else if (name == "sog") col_sog = i;
        else if (name == "cog") col_cog = i;
        else if (name == "heading") col_heading = i;
        else if (name == "phase") col_phase = i;
    }
    if (col_ts == kMissing || col_id == kMissing || col_lon == kMissing || col_lat == kMissing)
        fail(ErrorCode::parse, "header must name timestamp, id, lon and lat columns", 1);

    std::vector<GeoFix> fixes;
    long line_no = 1;
    while (pos != std::string_view::npos) {
        const std::size_t start = pos + 1;
        pos = csv_text.find('\n', start);
        std::string_view line =
            csv_text.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start);
        ++line_no;
        if (trim(line).empty()) continue;
        const auto fields = split_fields(line);
        auto field = [&](int col) -> std::string_view {
            return (col != kMissing && col < static_cast<int>(fields.size())) ? fields[col]
                                                                              : std::string_view{};
        };

        GeoFix fix;
        if (!parse_timestamp(field(col_ts), fix.timestamp))
            fail(ErrorCode::parse, "line " + std::to_string(line_no) + ": unparseable timestamp '" +
                                       std::string(field(col_ts)) + "'", line_no);
        if (!parse_int(field(col_id), fix.vessel_id))
            fail(ErrorCode::parse, "line " + std::to_string(line_no) + ": bad vessel id", line_no);
        if (!parse_double(field(col_lon), fix.lon))
            fail(ErrorCode::parse, "line " + std::to_string(line_no) + ": non-numeric lon", line_no);
        if (!parse_double(field(col_lat), fix.lat))
            fail(ErrorCode::parse, "line " + std::to_string(line_no) + ": non-numeric lat", line_no);
        if (fix.lat < -90.0 || fix.lat > 90.0)
            fail(ErrorCode::validation,
                 "line " + std::to_string(line_no) + ": lat out of [-90, 90]");
        if (fix.lon < -180.0 || fix.lon > 180.0)
            fail(ErrorCode::validation,
                 "line " + std::to_string(line_no) + ": lon out of [-180, 180]");

        double v;
        if (!field(col_sog).empty()) {
            if (!parse_double(field(col_sog), v))
                fail(ErrorCode::parse, "line " + std::to_string(line_no) + ": non-numeric sog", line_no);
            fix.sog = v;
        }
        if (!field(col_cog).empty()) {
            if (!parse_double(field(col_cog), v))
                fail(ErrorCode::parse, "line " + std::to_string(line_no) + ": non-numeric cog", line_no);
            if (v == 360.0) v = 0.0;
            if (v < 0.0 || v >= 360.0)
                fail(ErrorCode::validation,
                     "line " + std::to_string(line_no) + ": cog out of [0, 360)");
            fix.cog = v;
        }
        if (!field(col_heading).empty()) {
            if (!parse_double(field(col_heading), v))
                fail(ErrorCode::parse, "line " + std::to_string(line_no) + ": non-numeric heading",
                     line_no);
            fix.heading = v;
        }
        fix.phase_id = std::string(field(col_phase));
        fixes.push_back(std::move(fix));
    }

    if (fixes.empty()) fail(ErrorCode::empty_input, "CSV contains a header but no data rows");
    return TelemetryLog::from_fixes(std::move(fixes));
}

void write_csv(const TelemetryLog& log, std::ostream& out) {
    out << "timestamp,id,lon,lat,sog,cog,heading,phase\n";
    for (const auto& [id, group] : log.groups()) {
        for (const GeoFix& fix : group) {
            std::string row;
            append_number(row, fix.timestamp);
            row += ',';
            row += std::to_string(fix.vessel_id);
            row += ',';
            append_number(row, fix.lon);
            row += ',';
            append_number(row, fix.lat);
            row += ',';
            if (fix.sog) append_number(row, *fix.sog);
            row += ',';
            if (fix.cog) append_number(row, *fix.cog);
            row += ',';
            if (fix.heading) append_number(row, *fix.heading);
            row += ',';
            row += fix.phase_id;
            row += '\n';
            out << row;
        }
    }
}

std::string to_csv(const TelemetryLog& log) {
    std::ostringstream out;
    write_csv(log, out);
    return out.str();
}

TelemetryLog align(const TelemetryLog& log, double offset_s) {
    if (!std::isfinite(offset_s)) fail(ErrorCode::validation, "alignment offset must be finite");
    std::vector<GeoFix> fixes;
    fixes.reserve(log.fix_count());
    for (const auto& [id, group] : log.groups()) {
        for (GeoFix fix : group) {
            fix.timestamp -= offset_s;
            fixes.push_back(std::move(fix));
        }
    }
    return TelemetryLog::from_fixes(std::move(fixes));
}

TelemetryLog window(const TelemetryLog& log, double t_start, double t_end) {
    if (!(t_start < t_end)) fail(ErrorCode::contract, "window requires t_start < t_end");
    std::vector<GeoFix> kept;
    for (const auto& [id, group] : log.groups()) {
        const GeoFix* before = nullptr;  // latest fix strictly before t_start
        const GeoFix* after = nullptr;   // earliest fix strictly after t_end
        bool any_inside = false;
        for (const GeoFix& fix : group) {
            if (fix.timestamp < t_start) {
                before = &fix;
            } else if (fix.timestamp > t_end) {
                if (!after) after = &fix;
            } else {
                kept.push_back(fix);
                any_inside = true;
            }
        }
        // A vessel stays addressable if it has an interior fix, or brackets on
        // both sides so interpolation inside the window remains defined.
        if (!any_inside && !(before && after))
            fail(ErrorCode::empty_window,
                 "window [" + std::to_string(t_start) + ", " + std::to_string(t_end) +
                     "] excludes all fixes of vessel " + std::to_string(id));
        if (before) kept.push_back(*before);
        if (after) kept.push_back(*after);
    }
    return TelemetryLog::from_fixes(std::move(kept));
}

TelemetryLog filter_vessels(const TelemetryLog& log, std::span<const std::int64_t> keep_ids) {
    std::vector<GeoFix> kept;
    for (std::int64_t id : keep_ids) {
        const auto fixes = log.fixes_for(id);  // throws lookup when unknown
        kept.insert(kept.end(), fixes.begin(), fixes.end());
    }
    return TelemetryLog::from_fixes(std::move(kept));
}

double lerp_angle_deg(double a, double b, double u) {
    double delta = std::fmod(b - a, 360.0);
    if (delta > 180.0) delta -= 360.0;
    if (delta <= -180.0) delta += 360.0;
    double out = std::fmod(a + u * delta, 360.0);
    if (out < 0.0) out += 360.0;
    return out;
}

GeoFix interpolate(const TelemetryLog& log, std::int64_t vessel_id, double t) {
    const auto fixes = log.fixes_for(vessel_id);
    if (t < fixes.front().timestamp || t > fixes.back().timestamp)
        fail(ErrorCode::out_of_range,
             "t=" + std::to_string(t) + " outside vessel " + std::to_string(vessel_id) +
                 " log span [" + std::to_string(fixes.front().timestamp) + ", " +
                 std::to_string(fixes.back().timestamp) + "]");

    const auto upper = std::lower_bound(
        fixes.begin(), fixes.end(), t,
        [](const GeoFix& fix, double value) { return fix.timestamp < value; });
    if (upper->timestamp == t) {
        GeoFix out = *upper;
        out.timestamp = t;
        return out;
    }
    const GeoFix& hi = *upper;
    const GeoFix& lo = *(upper - 1);
    const double u = (t - lo.timestamp) / (hi.timestamp - lo.timestamp);

    GeoFix out;
    out.timestamp = t;
    out.vessel_id = vessel_id;
    out.lon = lo.lon + u * (hi.lon - lo.lon);
    out.lat = lo.lat + u * (hi.lat - lo.lat);
    if (lo.sog && hi.sog) out.sog = *lo.sog + u * (*hi.sog - *lo.sog);
    if (lo.cog && hi.cog) out.cog = lerp_angle_deg(*lo.cog, *hi.cog, u);
    if (lo.heading && hi.heading) out.heading = lerp_angle_deg(*lo.heading, *hi.heading, u);
    out.phase_id = lo.phase_id;  // phase persists until the next report
    return out;
}

}  // namespace seawake::telemetry
