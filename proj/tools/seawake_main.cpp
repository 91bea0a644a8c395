// seawake: GPS telemetry -> pixel-space trajectory conditioning for
// image-to-video generation, plus the classical extrapolation baseline and
// the evaluation harness.

#include <cstdint>
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "seawake/errors.hpp"
#include "seawake/pipeline.hpp"

namespace {

using seawake::pipeline::PipelineConfig;

struct GlobalOpts {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::string out_dir;
    std::vector<std::string> vessel_flags;  // id:cx,cy
};

PipelineConfig make_config(const GlobalOpts& opts) {
    if (opts.config_path.empty())
        throw seawake::Error(seawake::ErrorCode::contract, "cli: --config is required");
    PipelineConfig config = seawake::pipeline::load_config(opts.config_path);
    if (!opts.out_dir.empty()) config.out_dir = opts.out_dir;
    for (const std::string& flag : opts.vessel_flags) {
        const auto colon = flag.find(':');
        const auto comma = flag.find(',', colon == std::string::npos ? 0 : colon);
        if (colon == std::string::npos || comma == std::string::npos)
            throw seawake::Error(seawake::ErrorCode::contract,
                                 "cli: --vessel expects id:cx,cy, got '" + flag + "'");
        try {
            const std::int64_t id = std::stoll(flag.substr(0, colon));
            seawake::geo::VesselAnchor anchor;
            anchor.cx = std::stod(flag.substr(colon + 1, comma - colon - 1));
            anchor.cy = std::stod(flag.substr(comma + 1));
            config.camera.anchors[id] = anchor;
        } catch (const seawake::Error&) {
            throw;
        } catch (...) {
            throw seawake::Error(seawake::ErrorCode::contract,
                                 "cli: --vessel expects id:cx,cy, got '" + flag + "'");
        }
    }
    return config;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Vessel telemetry to trajectory-conditioned video tooling"};
    app.require_subcommand(1);
    app.fallthrough();  // let global flags appear after the subcommand

    GlobalOpts opts;
    app.add_option("--config", opts.config_path, "Pipeline configuration JSON")->envname("SEAWAKE_CONFIG");
    app.add_option("--seed", opts.seed, "Seed override for synthetic generation");
    app.add_option("--out", opts.out_dir, "Output directory override");
    app.add_option("--vessel", opts.vessel_flags,
                   "Vessel centre annotation id:cx,cy (repeatable, overrides config)");

    auto* project = app.add_subcommand("project", "Project GPS logs to pixel trajectories");

    auto* condition = app.add_subcommand("condition", "Assemble the conditioning payload");
    bool overlay = false;
    condition->add_flag("--overlay", overlay, "Also render the annotated reference frame");

    auto* baseline = app.add_subcommand("baseline", "Optical-flow extrapolation between two frames");
    std::string first_path, last_path;
    int baseline_n = 14;
    int start_index = 2;
    baseline->add_option("--first", first_path, "First bounding frame (PNG)")->required();
    baseline->add_option("--last", last_path, "Last bounding frame (PNG)")->required();
    baseline->add_option("--n", baseline_n, "Number of frames to synthesize");
    baseline->add_option("--start-index", start_index, "Index of the first written frame file");

    auto* evaluate = app.add_subcommand("evaluate", "Score a generated frame sequence");
    std::string frames_dir, method_name = "method";
    std::string trajectories_path, gt_frames_dir;
    evaluate->add_option("--frames", frames_dir, "Directory of generated frame_*.png")->required();
    evaluate->add_option("--method", method_name, "Method name for the report");
    evaluate->add_option("--trajectories", trajectories_path,
                         "Reference trajectory document (default <out>/trajectories.json)");
    evaluate->add_option("--gt-frames", gt_frames_dir,
                         "Ground-truth frames for PSNR (synthetic-oracle runs)");

    auto* synth = app.add_subcommand("synth", "Render a synthetic scene with a consistent GPS log");
    std::string script_path;
    synth->add_option("--script", script_path, "Motion script JSON")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (project->parsed()) {
            const auto result = seawake::pipeline::cmd_project(make_config(opts));
            if (result.degenerate_annotation)
                std::fprintf(stderr, "warning: coincident vessel centres, scale degenerate\n");
            std::printf("scale_px_per_m = %.6f\n", result.scale_px_per_m);
            std::printf("wrote %s\n", result.document_path.string().c_str());
        } else if (condition->parsed()) {
            const auto result = seawake::pipeline::cmd_condition(make_config(opts), overlay);
            for (const auto& warning : result.warnings)
                std::fprintf(stderr, "warning: %s\n", warning.c_str());
            std::printf("wrote %s\n", result.payload_path.string().c_str());
            if (result.overlay_path)
                std::printf("wrote %s\n", result.overlay_path->string().c_str());
        } else if (baseline->parsed()) {
            const auto paths = seawake::pipeline::cmd_baseline(make_config(opts), first_path,
                                                               last_path, baseline_n, start_index);
            std::printf("wrote %zu frames (%s .. %s)\n", paths.size(),
                        paths.front().filename().string().c_str(),
                        paths.back().filename().string().c_str());
        } else if (evaluate->parsed()) {
            std::optional<std::filesystem::path> traj_opt, gt_opt;
            if (!trajectories_path.empty()) traj_opt = trajectories_path;
            if (!gt_frames_dir.empty()) gt_opt = gt_frames_dir;
            const auto result = seawake::pipeline::cmd_evaluate(make_config(opts), frames_dir,
                                                                method_name, traj_opt, gt_opt);
            std::printf("%s", seawake::metrics::render_table({&result.report, 1}).c_str());
            std::printf("wrote %s\n", result.report_json_path.string().c_str());
        } else if (synth->parsed()) {
            const auto result =
                seawake::pipeline::cmd_synth(script_path, make_config(opts), opts.seed);
            std::printf("wrote %zu frames, %s, %s\n", result.frame_paths.size(),
                        result.csv_path.filename().string().c_str(),
                        result.ground_truth_path.filename().string().c_str());
            std::printf("derived config: %s\n", result.derived_config_path.string().c_str());
        }
    } catch (const seawake::Error& err) {
        std::fprintf(stderr, "error: %s\n", err.what());
        return 1;
    } catch (const std::exception& err) {
        std::fprintf(stderr, "error: %s\n", err.what());
        return 1;
    }
    return 0;
}
