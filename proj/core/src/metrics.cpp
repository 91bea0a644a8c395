#include "seawake/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <set>

#include "json_util.hpp"
#include "seawake/errors.hpp"

namespace seawake::metrics {

namespace {

[[noreturn]] void fail(ErrorCode code, const std::string& msg) {
    throw Error(code, "metrics: " + msg);
}

std::string format_fixed(double v, int decimals) {
    if (std::isnan(v)) return "n/a";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
    return buf;
}

}  // namespace

double temporal_smoothness(std::span<const flow::Frame> frames, const flow::FlowParams& params) {
    if (frames.size() < 2)
        fail(ErrorCode::contract, "temporal smoothness requires at least two frames");
    double pair_sum = 0.0;
    flow::Frame prev_luma = flow::to_luma(frames[0]);
    for (std::size_t i = 1; i < frames.size(); ++i) {
        flow::Frame next_luma = flow::to_luma(frames[i]);
        const flow::FlowField field = flow::farneback_flow(prev_luma, next_luma, params);
        double mag_sum = 0.0;
        const std::size_t n = field.dx.size();
        for (std::size_t j = 0; j < n; ++j) mag_sum += std::hypot(field.dx[j], field.dy[j]);
        pair_sum += mag_sum / static_cast<double>(n);
        prev_luma = std::move(next_luma);
    }
    return pair_sum / static_cast<double>(frames.size() - 1);
}

TrajectoryErrorResult trajectory_error(const std::map<std::int64_t, flow::Track>& tracked,
                                       const std::map<std::int64_t, geo::PixelTrajectory>& reference) {
    if (tracked.size() != reference.size())
        fail(ErrorCode::contract, "tracked and reference vessel sets differ in size");
    for (const auto& [id, track] : tracked)
        if (reference.find(id) == reference.end())
            fail(ErrorCode::contract, "no reference trajectory for vessel " + std::to_string(id));

    TrajectoryErrorResult out;
    std::size_t valid_points = 0, total_points = 0;
    double mean_sum = 0.0;
    std::size_t vessels_with_data = 0;
    for (const auto& [id, track] : tracked) {
        const geo::PixelTrajectory& ref = reference.at(id);
        if (track.points.size() != ref.points.size())
            fail(ErrorCode::contract,
                 "vessel " + std::to_string(id) + ": tracked frame count " +
                     std::to_string(track.points.size()) + " != reference " +
                     std::to_string(ref.points.size()));
        double err_sum = 0.0;
        std::size_t err_n = 0;
        for (std::size_t i = 0; i < track.points.size(); ++i) {
            ++total_points;
            if (!track.points[i].valid) continue;
            ++valid_points;
            err_sum += std::hypot(track.points[i].x - ref.points[i].x,
                                  track.points[i].y - ref.points[i].y);
            ++err_n;
        }
        if (err_n > 0) {
            const double mean = err_sum / static_cast<double>(err_n);
            out.per_vessel[id] = mean;
            mean_sum += mean;
            ++vessels_with_data;
        } else {
            out.per_vessel[id] = std::numeric_limits<double>::quiet_NaN();
        }
    }
    out.mean = vessels_with_data > 0 ? mean_sum / static_cast<double>(vessels_with_data)
                                     : std::numeric_limits<double>::quiet_NaN();
    out.validity =
        total_points > 0 ? static_cast<double>(valid_points) / static_cast<double>(total_points) : 0.0;
    return out;
}

double psnr(const flow::Frame& a, const flow::Frame& b) {
    if (a.width != b.width || a.height != b.height || a.channels != b.channels)
        fail(ErrorCode::contract, "psnr frames must have identical shape");
    double se = 0.0;
    for (std::size_t i = 0; i < a.samples.size(); ++i) {
        const double d = a.samples[i] - b.samples[i];
        se += d * d;
    }
    const double mse = se / static_cast<double>(a.samples.size());
    if (mse == 0.0) return std::numeric_limits<double>::infinity();
    return 10.0 * std::log10(1.0 / mse);
}

EvaluationReport evaluate_method(std::span<const flow::Frame> generated,
                                 const std::map<std::int64_t, geo::PixelTrajectory>& reference,
                                 const std::map<std::int64_t, PixelPoint>& seeds,
                                 std::string method_name, const flow::FlowParams& flow_params,
                                 const flow::TrackParams& track_params) {
    if (generated.empty()) fail(ErrorCode::contract, "no generated frames to evaluate");
    if (seeds.size() != reference.size())
        fail(ErrorCode::contract, "seed set does not match the reference vessels");
    for (const auto& [id, seed] : seeds)
        if (reference.find(id) == reference.end())
            fail(ErrorCode::contract, "seed for unknown vessel " + std::to_string(id));
    for (const auto& [id, ref] : reference)
        if (ref.points.size() != generated.size())
            fail(ErrorCode::contract,
                 "vessel " + std::to_string(id) + " reference has " +
                     std::to_string(ref.points.size()) + " points but " +
                     std::to_string(generated.size()) + " frames were supplied");

    std::vector<PixelPoint> seed_points;
    std::vector<std::int64_t> seed_ids;
    for (const auto& [id, seed] : seeds) {
        seed_ids.push_back(id);
        seed_points.push_back(seed);
    }
    const std::vector<flow::Track> tracks = flow::lk_track(generated, seed_points, track_params);
    std::map<std::int64_t, flow::Track> tracked;
    for (std::size_t i = 0; i < seed_ids.size(); ++i) tracked[seed_ids[i]] = tracks[i];

    const TrajectoryErrorResult err = trajectory_error(tracked, reference);

    EvaluationReport report;
    report.method_name = std::move(method_name);
    report.temporal_smoothness = temporal_smoothness(generated, flow_params);
    report.trajectory_error_per_vessel = err.per_vessel;
    report.trajectory_error_mean = err.mean;
    report.frames_evaluated = static_cast<int>(generated.size());
    report.tracking_validity = err.validity;
    return report;
}

std::string report_to_json(const EvaluationReport& report) {
    using jsonutil::ordered_json;
    ordered_json doc;
    doc["method"] = report.method_name;
    doc["temporal_smoothness_px_per_frame"] = report.temporal_smoothness;
    ordered_json per_vessel;
    for (const auto& [id, err] : report.trajectory_error_per_vessel) {
        if (std::isnan(err))
            per_vessel[std::to_string(id)] = nullptr;
        else
            per_vessel[std::to_string(id)] = err;
    }
    doc["trajectory_error_px"] = ordered_json::object();
    doc["trajectory_error_px"]["per_vessel"] = std::move(per_vessel);
    if (std::isnan(report.trajectory_error_mean))
        doc["trajectory_error_px"]["mean"] = nullptr;
    else
        doc["trajectory_error_px"]["mean"] = report.trajectory_error_mean;
    doc["tracking_validity"] = report.tracking_validity;
    doc["frames_evaluated"] = report.frames_evaluated;
    if (!report.psnr_mean_db)
        doc["psnr_mean_db"] = nullptr;
    else if (std::isinf(*report.psnr_mean_db))
        doc["psnr_mean_db"] = "infinity";
    else
        doc["psnr_mean_db"] = *report.psnr_mean_db;
    return doc.dump(2) + "\n";
}

EvaluationReport report_from_json(std::string_view text) {
    namespace ju = jsonutil;
    const std::string module = "metrics";
    const auto doc = ju::parse_document(module, text);
    EvaluationReport report;
    report.method_name = ju::require_string(module, ju::require_key(module, doc, "", "method"),
                                            "method");
    report.temporal_smoothness = ju::require_number(
        module, ju::require_key(module, doc, "", "temporal_smoothness_px_per_frame"),
        "temporal_smoothness_px_per_frame");
    const auto& err = ju::require_key(module, doc, "", "trajectory_error_px");
    const auto& per_vessel = ju::require_key(module, err, "trajectory_error_px", "per_vessel");
    if (!per_vessel.is_object())
        ju::schema_fail(module, "trajectory_error_px.per_vessel", "expected an object");
    for (auto it = per_vessel.begin(); it != per_vessel.end(); ++it) {
        const std::int64_t id = std::stoll(it.key());
        report.trajectory_error_per_vessel[id] =
            it.value().is_null() ? std::numeric_limits<double>::quiet_NaN()
                                 : ju::require_number(module, it.value(),
                                                      "trajectory_error_px.per_vessel." + it.key());
    }
    const auto& mean = ju::require_key(module, err, "trajectory_error_px", "mean");
    report.trajectory_error_mean = mean.is_null() ? std::numeric_limits<double>::quiet_NaN()
                                                  : ju::require_number(module, mean,
                                                                       "trajectory_error_px.mean");
    report.tracking_validity = ju::require_number(
        module, ju::require_key(module, doc, "", "tracking_validity"), "tracking_validity");
    report.frames_evaluated = static_cast<int>(ju::require_integer(
        module, ju::require_key(module, doc, "", "frames_evaluated"), "frames_evaluated"));
    const auto& psnr_field = ju::require_key(module, doc, "", "psnr_mean_db");
    if (psnr_field.is_string()) {
        report.psnr_mean_db = std::numeric_limits<double>::infinity();
    } else if (!psnr_field.is_null()) {
        report.psnr_mean_db = ju::require_number(module, psnr_field, "psnr_mean_db");
    }
    return report;
}

std::string render_table(std::span<const EvaluationReport> reports) {
    // Column set: union of vessel ids across reports, ascending.
    std::set<std::int64_t> ids;
    for (const auto& r : reports)
        for (const auto& [id, err] : r.trajectory_error_per_vessel) ids.insert(id);

    std::vector<std::string> headers{"method", "temp_smooth_px"};
    for (std::int64_t id : ids) headers.push_back("traj_err_" + std::to_string(id));
    headers.push_back("traj_err_mean");
    headers.push_back("validity");
    headers.push_back("frames");

    std::vector<std::vector<std::string>> rows;
    for (const auto& r : reports) {
        std::vector<std::string> row{r.method_name, format_fixed(r.temporal_smoothness, 2)};
        for (std::int64_t id : ids) {
            auto it = r.trajectory_error_per_vessel.find(id);
            row.push_back(it == r.trajectory_error_per_vessel.end() ? "-"
                                                                    : format_fixed(it->second, 2));
        }
        row.push_back(format_fixed(r.trajectory_error_mean, 2));
        row.push_back(format_fixed(r.tracking_validity, 2));
        row.push_back(std::to_string(r.frames_evaluated));
        rows.push_back(std::move(row));
    }

    std::vector<std::size_t> widths(headers.size());
    for (std::size_t c = 0; c < headers.size(); ++c) {
        widths[c] = headers[c].size();
        for (const auto& row : rows) widths[c] = std::max(widths[c], row[c].size());
    }

    std::string out;
    auto emit_row = [&](const std::vector<std::string>& cells) {
        for (std::size_t c = 0; c < cells.size(); ++c) {
            out += cells[c];
            out.append(widths[c] - cells[c].size() + (c + 1 < cells.size() ? 2 : 0), ' ');
        }
        out += '\n';
    };
    emit_row(headers);
    std::size_t rule = 0;
    for (std::size_t c = 0; c < widths.size(); ++c) rule += widths[c] + (c + 1 < widths.size() ? 2 : 0);
    out.append(rule, '-');
    out += '\n';
    for (const auto& row : rows) emit_row(row);
    return out;
}

}  // namespace seawake::metrics
