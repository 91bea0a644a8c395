#pragma once

#include <span>
#include <vector>

#include "seawake/frame.hpp"
#include "seawake/types.hpp"

namespace seawake::flow {

// Dense per-pixel displacement field between two frames, in pixels.
// vector_at(x, y) tells where the content at (x, y) in the earlier frame has
// moved to by the later frame.
struct FlowField {
    int width = 0;
    int height = 0;
    std::vector<double> dx;
    std::vector<double> dy;

    static FlowField make(int width, int height);
    double& dx_at(int x, int y) { return dx[static_cast<std::size_t>(y) * width + x]; }
    double& dy_at(int x, int y) { return dy[static_cast<std::size_t>(y) * width + x]; }
    double dx_at(int x, int y) const { return dx[static_cast<std::size_t>(y) * width + x]; }
    double dy_at(int x, int y) const { return dy[static_cast<std::size_t>(y) * width + x]; }
};

struct FlowParams {
    int pyramid_levels = 3;
    double pyramid_scale = 0.5;  // in (0, 1)
    int window = 15;             // odd; normal-equation averaging window
    int poly_n = 5;              // odd; polynomial-expansion neighborhood side
    double poly_sigma = 1.1;     // Gaussian applicability std
    int iterations = 3;          // refinement passes per level
    void validate() const;
};

struct TrackParams {
    int window = 21;          // odd, >= 3; search window side
    int pyramid_levels = 3;
    int max_iterations = 30;
    double epsilon = 0.01;    // px; iteration stop on update norm
    double min_eigen = 1e-9;  // per-pixel-normalized structure tensor floor
    void validate() const;
};

// Per-pixel quadratic fit f(p + t) ~ t'At + b't + c over a Gaussian-weighted
// neighborhood. Channel order per pixel: c, b_x, b_y, a_xx, a_yy, a_xy
// (f = a_xx x^2 + a_yy y^2 + a_xy xy + b_x x + b_y y + c).
struct PolyExpansion {
    int width = 0;
    int height = 0;
    std::vector<double> coeff;  // width * height * 6

    const double* at(int x, int y) const {
        return &coeff[(static_cast<std::size_t>(y) * width + x) * 6];
    }
    double* at(int x, int y) { return &coeff[(static_cast<std::size_t>(y) * width + x) * 6]; }
};

// Weighted least-squares quadratic expansion of a luma frame; borders use
// edge replication. poly_n must be odd.
PolyExpansion polynomial_expansion(const Frame& luma, int poly_n, double poly_sigma);

// Dense displacement between two equal-size luma frames: coarse-to-fine over
// a Gaussian pyramid, solving the Gaussian-averaged normal equations of the
// polynomial coefficient differences, warm-started from the coarser level.
FlowField farneback_flow(const Frame& prev, const Frame& next, const FlowParams& params = {});

// Backward warp: out(p) = frame(p - factor * flow(p)), bilinear with edge
// replication. factor 0 returns the frame unchanged.
Frame warp(const Frame& frame, const FlowField& flow, double factor);

// Optical-flow extrapolation baseline: estimates flow between the bounding
// frames and back-warps the first by i/(n_missing+1) for i = 1..n_missing.
std::vector<Frame> extrapolate_sequence(const Frame& first, const Frame& last, int n_missing,
                                        const FlowParams& params = {});

struct TrackedPoint {
    double x = 0.0;
    double y = 0.0;
    bool valid = true;
};

// One tracked point per input frame; points[0] is the seed itself.
struct Track {
    std::vector<TrackedPoint> points;
};

// Pyramidal Lucas-Kanade tracking of each seed through the frame sequence,
// chaining frame to frame. A point is flagged invalid when it leaves the
// frame or its structure tensor falls below min_eigen, and stops moving.
std::vector<Track> lk_track(std::span<const Frame> frames, std::span<const PixelPoint> seeds,
                            const TrackParams& params = {});

}  // namespace seawake::flow
