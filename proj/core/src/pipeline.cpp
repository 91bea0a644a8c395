#include "seawake/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "json_util.hpp"
#include "model_json.hpp"
#include "seawake/errors.hpp"
#include "seawake/image_io.hpp"
#include "seawake/telemetry.hpp"

namespace seawake::pipeline {

namespace ju = jsonutil;
using ju::ordered_json;

namespace {

[[noreturn]] void fail(ErrorCode code, const std::string& msg) {
    throw Error(code, "cli: " + msg);
}

std::string frame_name(int index) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "frame_%04d.png", index);
    return buf;
}

void ensure_out_dir(const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) fail(ErrorCode::io, "cannot create output directory '" + dir.string() + "'");
}

std::string sanitize_method_name(const std::string& name) {
    std::string out;
    for (char c : name)
        out += (std::isalnum(static_cast<unsigned char>(c)) != 0) ? c : '_';
    return out.empty() ? std::string("method") : out;
}

flow::FlowParams flow_params_from(const ordered_json& obj, const std::string& path) {
    flow::FlowParams p;
    p.pyramid_levels = static_cast<int>(
        ju::require_integer("cli", ju::require_key("cli", obj, path, "pyramid_levels"),
                            path + ".pyramid_levels"));
    p.pyramid_scale = ju::require_number("cli", ju::require_key("cli", obj, path, "pyramid_scale"),
                                         path + ".pyramid_scale");
    p.window = static_cast<int>(ju::require_integer(
        "cli", ju::require_key("cli", obj, path, "window"), path + ".window"));
    p.poly_n = static_cast<int>(ju::require_integer(
        "cli", ju::require_key("cli", obj, path, "poly_n"), path + ".poly_n"));
    p.poly_sigma = ju::require_number("cli", ju::require_key("cli", obj, path, "poly_sigma"),
                                      path + ".poly_sigma");
    p.iterations = static_cast<int>(ju::require_integer(
        "cli", ju::require_key("cli", obj, path, "iterations"), path + ".iterations"));
    p.validate();
    return p;
}

flow::TrackParams track_params_from(const ordered_json& obj, const std::string& path) {
    flow::TrackParams p;
    p.window = static_cast<int>(ju::require_integer(
        "cli", ju::require_key("cli", obj, path, "window"), path + ".window"));
    p.pyramid_levels = static_cast<int>(
        ju::require_integer("cli", ju::require_key("cli", obj, path, "pyramid_levels"),
                            path + ".pyramid_levels"));
    p.max_iterations = static_cast<int>(
        ju::require_integer("cli", ju::require_key("cli", obj, path, "max_iterations"),
                            path + ".max_iterations"));
    p.epsilon = ju::require_number("cli", ju::require_key("cli", obj, path, "epsilon"),
                                   path + ".epsilon");
    p.validate();
    return p;
}

ordered_json flow_params_to(const flow::FlowParams& p) {
    ordered_json obj;
    obj["pyramid_levels"] = p.pyramid_levels;
    obj["pyramid_scale"] = p.pyramid_scale;
    obj["window"] = p.window;
    obj["poly_n"] = p.poly_n;
    obj["poly_sigma"] = p.poly_sigma;
    obj["iterations"] = p.iterations;
    return obj;
}

ordered_json track_params_to(const flow::TrackParams& p) {
    ordered_json obj;
    obj["window"] = p.window;
    obj["pyramid_levels"] = p.pyramid_levels;
    obj["max_iterations"] = p.max_iterations;
    obj["epsilon"] = p.epsilon;
    return obj;
}

}  // namespace

PipelineConfig config_from_json(std::string_view text) {
    const auto doc = ju::parse_document("cli", text);
    PipelineConfig config;
    if (doc.contains("telemetry_csv"))
        config.telemetry_csv = ju::require_string("cli", doc["telemetry_csv"], "telemetry_csv");
    if (doc.contains("frames_dir"))
        config.frames_dir = ju::require_string("cli", doc["frames_dir"], "frames_dir");
    if (doc.contains("out_dir"))
        config.out_dir = ju::require_string("cli", doc["out_dir"], "out_dir");
    if (doc.contains("align_offset_s")) {
        config.align_offset_s = ju::require_number("cli", doc["align_offset_s"], "align_offset_s");
        if (!std::isfinite(config.align_offset_s))
            fail(ErrorCode::validation, "align_offset_s must be finite");
    }
    config.camera = geo::model_from_document(ju::require_key("cli", doc, "", "camera"));
    if (doc.contains("conditioning")) {
        const auto& c = doc["conditioning"];
        if (c.contains("vessel_box_px"))
            config.vessel_box_px =
                ju::require_number("cli", c["vessel_box_px"], "conditioning.vessel_box_px");
        if (c.contains("corner_box_px"))
            config.corner_box_px =
                ju::require_number("cli", c["corner_box_px"], "conditioning.corner_box_px");
        if (c.contains("corner_inset_px"))
            config.corner_inset_px =
                ju::require_number("cli", c["corner_inset_px"], "conditioning.corner_inset_px");
    }
    if (doc.contains("flow")) config.flow_params = flow_params_from(doc["flow"], "flow");
    if (doc.contains("track")) config.track_params = track_params_from(doc["track"], "track");
    if (doc.contains("synth")) {
        const auto& s = doc["synth"];
        if (s.contains("origin_lon"))
            config.synth.origin_lon = ju::require_number("cli", s["origin_lon"], "synth.origin_lon");
        if (s.contains("origin_lat"))
            config.synth.origin_lat = ju::require_number("cli", s["origin_lat"], "synth.origin_lat");
        if (s.contains("origin_px")) {
            const auto& px = ju::require_array("cli", s["origin_px"], "synth.origin_px");
            if (px.size() != 2) ju::schema_fail("cli", "synth.origin_px", "expected [x, y]");
            config.synth.origin_px = PixelPoint{
                ju::require_number("cli", px[0], "synth.origin_px[0]"),
                ju::require_number("cli", px[1], "synth.origin_px[1]")};
        }
    }
    return config;
}

std::string config_to_json(const PipelineConfig& config) {
    ordered_json doc;
    doc["telemetry_csv"] = config.telemetry_csv.string();
    doc["frames_dir"] = config.frames_dir.string();
    doc["out_dir"] = config.out_dir.string();
    doc["align_offset_s"] = config.align_offset_s;
    doc["camera"] = geo::model_to_document(config.camera);
    doc["conditioning"] = ordered_json::object();
    doc["conditioning"]["vessel_box_px"] = config.vessel_box_px;
    doc["conditioning"]["corner_box_px"] = config.corner_box_px;
    doc["conditioning"]["corner_inset_px"] = config.corner_inset_px;
    doc["flow"] = flow_params_to(config.flow_params);
    doc["track"] = track_params_to(config.track_params);
    doc["synth"] = ordered_json::object();
    doc["synth"]["origin_lon"] = config.synth.origin_lon;
    doc["synth"]["origin_lat"] = config.synth.origin_lat;
    if (config.synth.origin_px)
        doc["synth"]["origin_px"] = {config.synth.origin_px->x, config.synth.origin_px->y};
    return doc.dump(2) + "\n";
}

PipelineConfig load_config(const std::filesystem::path& path) {
    return config_from_json(io::read_text_file(path));
}

std::map<std::int64_t, geo::PixelTrajectory> TrajectoryDocument::by_vessel() const {
    std::map<std::int64_t, geo::PixelTrajectory> out;
    for (const auto& t : trajectories) out[t.vessel_id] = t;
    return out;
}

std::string trajectories_to_json(const TrajectoryDocument& doc) {
    ordered_json j;
    j["version"] = 1;
    j["scale_px_per_m"] = doc.scale_px_per_m;
    j["theta_deg"] = doc.model.theta_deg;
    j["t_start"] = doc.model.timing.t_start;
    j["fps"] = doc.model.timing.fps;
    j["n_frames"] = doc.model.timing.n_frames;
    j["width"] = doc.model.timing.width;
    j["height"] = doc.model.timing.height;
    ordered_json vessels = ordered_json::array();
    for (const auto& t : doc.trajectories) {
        const auto& anchor = doc.model.anchor_for(t.vessel_id);
        ordered_json v;
        v["id"] = t.vessel_id;
        v["cx"] = anchor.cx;
        v["cy"] = anchor.cy;
        ordered_json pts = ordered_json::array();
        for (const auto& p : t.points) pts.push_back({p.x, p.y});
        v["points"] = std::move(pts);
        v["timestamps"] = t.timestamps;
        vessels.push_back(std::move(v));
    }
    j["vessels"] = std::move(vessels);
    return j.dump(2) + "\n";
}

TrajectoryDocument trajectories_from_json(std::string_view text) {
    const std::string module = "cli";
    const auto j = ju::parse_document(module, text);
    TrajectoryDocument doc;
    doc.scale_px_per_m = ju::require_number(
        module, ju::require_key(module, j, "", "scale_px_per_m"), "scale_px_per_m");
    doc.model.theta_deg =
        ju::require_number(module, ju::require_key(module, j, "", "theta_deg"), "theta_deg");
    doc.model.scale_px_per_m = doc.scale_px_per_m;
    doc.model.timing.t_start =
        ju::require_number(module, ju::require_key(module, j, "", "t_start"), "t_start");
    doc.model.timing.fps = ju::require_number(module, ju::require_key(module, j, "", "fps"), "fps");
    doc.model.timing.n_frames = static_cast<int>(
        ju::require_integer(module, ju::require_key(module, j, "", "n_frames"), "n_frames"));
    doc.model.timing.width = static_cast<int>(
        ju::require_integer(module, ju::require_key(module, j, "", "width"), "width"));
    doc.model.timing.height = static_cast<int>(
        ju::require_integer(module, ju::require_key(module, j, "", "height"), "height"));
    const auto& vessels =
        ju::require_array(module, ju::require_key(module, j, "", "vessels"), "vessels");
    for (std::size_t i = 0; i < vessels.size(); ++i) {
        const std::string path = "vessels[" + std::to_string(i) + "]";
        const auto& v = vessels[i];
        geo::PixelTrajectory t;
        t.vessel_id =
            ju::require_integer(module, ju::require_key(module, v, path, "id"), path + ".id");
        geo::VesselAnchor anchor;
        anchor.cx = ju::require_number(module, ju::require_key(module, v, path, "cx"), path + ".cx");
        anchor.cy = ju::require_number(module, ju::require_key(module, v, path, "cy"), path + ".cy");
        doc.model.anchors[t.vessel_id] = anchor;
        const auto& pts = ju::require_array(module, ju::require_key(module, v, path, "points"),
                                            path + ".points");
        for (std::size_t k = 0; k < pts.size(); ++k) {
            const std::string ppath = path + ".points[" + std::to_string(k) + "]";
            const auto& p = ju::require_array(module, pts[k], ppath);
            if (p.size() != 2) ju::schema_fail(module, ppath, "expected [x, y]");
            t.points.push_back({ju::require_number(module, p[0], ppath + "[0]"),
                                ju::require_number(module, p[1], ppath + "[1]")});
        }
        const auto& ts = ju::require_array(module, ju::require_key(module, v, path, "timestamps"),
                                           path + ".timestamps");
        for (std::size_t k = 0; k < ts.size(); ++k)
            t.timestamps.push_back(
                ju::require_number(module, ts[k], path + ".timestamps[" + std::to_string(k) + "]"));
        if (t.timestamps.size() != t.points.size())
            ju::schema_fail(module, path, "points/timestamps length mismatch");
        doc.trajectories.push_back(std::move(t));
    }
    return doc;
}

ProjectResult cmd_project(const PipelineConfig& config) {
    if (config.camera.anchors.empty())
        fail(ErrorCode::contract, "no vessel anchors configured (camera.vessels)");
    if (!std::filesystem::exists(config.telemetry_csv))
        fail(ErrorCode::io, "telemetry CSV '" + config.telemetry_csv.string() + "' does not exist");

    const auto raw = telemetry::parse_log(io::read_text_file(config.telemetry_csv));
    const std::vector<std::int64_t> wanted = [&] {
        std::vector<std::int64_t> ids;
        for (const auto& [id, anchor] : config.camera.anchors) ids.push_back(id);
        return ids;
    }();
    const auto own = telemetry::filter_vessels(raw, wanted);
    const auto aligned = telemetry::align(own, config.align_offset_s);
    const geo::ClipTiming& timing = config.camera.timing;
    const auto windowed = telemetry::window(aligned, timing.t_start, timing.t_end());

    geo::CameraFrameModel model = config.camera;
    model.origin = geo::make_origin(windowed);
    model = geo::resolve_anchors(std::move(model), windowed);

    ProjectResult result;
    if (model.scale_px_per_m > 0.0) {
        result.scale_px_per_m = model.scale_px_per_m;
    } else {
        if (model.anchors.size() != 2)
            fail(ErrorCode::contract,
                 "scale estimation needs exactly two vessel anchors, got " +
                     std::to_string(model.anchors.size()));
        const auto a = model.anchors.begin();
        const auto b = std::next(a);
        const geo::ScaleEstimate estimate = geo::estimate_scale(
            *a->second.fix, *b->second.fix, {a->second.cx, a->second.cy},
            {b->second.cx, b->second.cy}, model.origin);
        result.scale_px_per_m = estimate.px_per_m;
        result.degenerate_annotation = estimate.degenerate_annotation;
        model.scale_px_per_m = estimate.px_per_m;
    }

    result.document.scale_px_per_m = result.scale_px_per_m;
    result.document.model = model;
    for (const auto& [id, anchor] : model.anchors)
        result.document.trajectories.push_back(geo::project_trajectory(windowed, id, model));

    ensure_out_dir(config.out_dir);
    result.document_path = config.out_dir / "trajectories.json";
    io::write_text_file(result.document_path, trajectories_to_json(result.document));
    return result;
}

ConditionResult cmd_condition(const PipelineConfig& config, bool overlay) {
    const std::filesystem::path doc_path = config.out_dir / "trajectories.json";
    TrajectoryDocument doc;
    if (std::filesystem::exists(doc_path)) {
        doc = trajectories_from_json(io::read_text_file(doc_path));
    } else {
        doc = cmd_project(config).document;
    }
    if (doc.trajectories.size() != 2)
        fail(ErrorCode::contract, "payload assembly needs exactly two vessel trajectories, got " +
                                      std::to_string(doc.trajectories.size()));

    const geo::ClipTiming& timing = doc.model.timing;
    std::array<std::pair<conditioning::BBox, geo::PixelTrajectory>, 2> vessels;
    for (std::size_t i = 0; i < 2; ++i) {
        const geo::PixelTrajectory& t = doc.trajectories[i];
        vessels[i] = {conditioning::vessel_box(t.points.front(), config.vessel_box_px, timing), t};
    }

    const std::filesystem::path reference = config.frames_dir / frame_name(1);
    ConditionResult result;
    result.payload = conditioning::build_payload(timing, vessels, config.corner_box_px,
                                                 config.corner_inset_px, reference.string(),
                                                 &result.warnings);

    ensure_out_dir(config.out_dir);
    result.payload_path = config.out_dir / "payload.json";
    io::write_text_file(result.payload_path, conditioning::serialize_payload(result.payload));

    if (overlay) {
        const flow::Frame ref_frame = io::read_png(reference);
        const flow::Frame annotated = conditioning::render_overlay(ref_frame, result.payload);
        result.overlay_path = config.out_dir / "overlay.png";
        io::write_png(annotated, *result.overlay_path);
    }
    return result;
}

std::vector<std::filesystem::path> cmd_baseline(const PipelineConfig& config,
                                                const std::filesystem::path& first_frame,
                                                const std::filesystem::path& last_frame, int n,
                                                int start_index) {
    if (n < 1) fail(ErrorCode::contract, "baseline frame count must be >= 1");
    if (start_index < 0) fail(ErrorCode::contract, "start index must be >= 0");
    const flow::Frame first = io::read_png(first_frame);
    const flow::Frame last = io::read_png(last_frame);
    const auto frames = flow::extrapolate_sequence(first, last, n, config.flow_params);

    ensure_out_dir(config.out_dir);
    std::vector<std::filesystem::path> paths;
    for (int i = 0; i < n; ++i) {
        paths.push_back(config.out_dir / frame_name(start_index + i));
        io::write_png(frames[static_cast<std::size_t>(i)], paths.back());
    }
    return paths;
}

EvaluateResult cmd_evaluate(const PipelineConfig& config,
                            const std::filesystem::path& generated_dir,
                            const std::string& method_name,
                            const std::optional<std::filesystem::path>& trajectories_path,
                            const std::optional<std::filesystem::path>& gt_frames_dir) {
    const auto frame_paths = io::list_frames(generated_dir);
    if (frame_paths.empty())
        fail(ErrorCode::contract, "no frame_*.png files in '" + generated_dir.string() + "'");
    std::vector<flow::Frame> frames;
    frames.reserve(frame_paths.size());
    for (const auto& p : frame_paths) frames.push_back(io::read_png(p));

    const std::filesystem::path doc_path =
        trajectories_path ? *trajectories_path : config.out_dir / "trajectories.json";
    const TrajectoryDocument doc = trajectories_from_json(io::read_text_file(doc_path));
    const auto reference = doc.by_vessel();

    std::map<std::int64_t, PixelPoint> seeds;
    for (const auto& [id, trajectory] : reference) seeds[id] = trajectory.points.front();

    EvaluateResult result;
    result.report = metrics::evaluate_method(frames, reference, seeds, method_name,
                                             config.flow_params, config.track_params);

    if (gt_frames_dir) {
        const auto gt_paths = io::list_frames(*gt_frames_dir);
        if (gt_paths.size() != frame_paths.size())
            fail(ErrorCode::contract,
                 "ground-truth frame count " + std::to_string(gt_paths.size()) +
                     " does not match generated count " + std::to_string(frame_paths.size()));
        double sum = 0.0;
        for (std::size_t i = 0; i < gt_paths.size(); ++i)
            sum += metrics::psnr(frames[i], io::read_png(gt_paths[i]));
        result.report.psnr_mean_db = sum / static_cast<double>(gt_paths.size());
    }

    ensure_out_dir(config.out_dir);
    const std::string stem = "report_" + sanitize_method_name(method_name);
    result.report_json_path = config.out_dir / (stem + ".json");
    result.report_table_path = config.out_dir / (stem + ".txt");
    io::write_text_file(result.report_json_path, metrics::report_to_json(result.report));
    const metrics::EvaluationReport table_rows[] = {result.report};
    io::write_text_file(result.report_table_path, metrics::render_table(table_rows));
    return result;
}

SynthResult cmd_synth(const std::filesystem::path& script_path, const PipelineConfig& config,
                      std::optional<std::uint64_t> seed_override) {
    synth::MotionScript script = synth::script_from_json(io::read_text_file(script_path));
    if (seed_override) script.background.seed = *seed_override;

    const geo::ClipTiming& timing = config.camera.timing;
    if (!(config.camera.scale_px_per_m > 0.0))
        fail(ErrorCode::contract, "synth requires camera.scale_px_per_m to be set");
    const geo::LocalOrigin origin =
        geo::LocalOrigin::at(config.synth.origin_lon, config.synth.origin_lat);
    const PixelPoint origin_px = config.synth.origin_px
                                     ? *config.synth.origin_px
                                     : PixelPoint{timing.width / 2.0, timing.height / 2.0};
    const geo::CameraFrameModel model = synth::make_scene_model(
        script, timing, origin, origin_px, config.camera.theta_deg, config.camera.scale_px_per_m);

    const synth::SceneOutput scene = synth::generate_scene(script, timing, model);

    ensure_out_dir(config.out_dir);
    SynthResult result;
    for (int i = 0; i < timing.n_frames; ++i) {
        result.frame_paths.push_back(config.out_dir / frame_name(i + 1));
        io::write_png(scene.frames[static_cast<std::size_t>(i)], result.frame_paths.back());
    }

    // CSV carries log-clock timestamps: t_log = t_video + offset.
    const auto log_clock = telemetry::align(scene.log, -config.align_offset_s);
    result.csv_path = config.out_dir / "telemetry.csv";
    io::write_text_file(result.csv_path, telemetry::to_csv(log_clock));

    TrajectoryDocument gt_doc;
    gt_doc.scale_px_per_m = model.scale_px_per_m;
    gt_doc.model = model;
    for (const auto& [id, trajectory] : scene.ground_truth)
        gt_doc.trajectories.push_back(trajectory);
    result.ground_truth_path = config.out_dir / "gt_trajectories.json";
    io::write_text_file(result.ground_truth_path, trajectories_to_json(gt_doc));

    PipelineConfig derived = config;
    derived.telemetry_csv = result.csv_path;
    derived.frames_dir = config.out_dir;
    derived.camera = model;
    result.derived_config_path = config.out_dir / "config.synth.json";
    io::write_text_file(result.derived_config_path, config_to_json(derived));
    return result;
}

}  // namespace seawake::pipeline
