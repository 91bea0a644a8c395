#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "seawake/errors.hpp"
#include "seawake/flowlab.hpp"
#include "seawake/parallel.hpp"

namespace seawake::flow {

namespace {

[[noreturn]] void fail(ErrorCode code, const std::string& msg) {
    throw Error(code, "flowlab: " + msg);
}

// Flat regions give a singular 2x2 system; below this determinant the prior
// displacement is kept instead of amplifying noise.
constexpr double kDetFloor = 1e-12;

struct LevelPair {
    Frame i0;
    Frame i1;
};

inline int clamp_int(int v, int lo, int hi) { return v < lo ? lo : (v > hi ? hi : v); }

void sample_poly(const PolyExpansion& p, double x, double y, double out[6]) {
    x = std::clamp(x, 0.0, static_cast<double>(p.width - 1));
    y = std::clamp(y, 0.0, static_cast<double>(p.height - 1));
    const int x0 = clamp_int(static_cast<int>(std::floor(x)), 0, p.width - 1);
    const int y0 = clamp_int(static_cast<int>(std::floor(y)), 0, p.height - 1);
    const int x1 = clamp_int(x0 + 1, 0, p.width - 1);
    const int y1 = clamp_int(y0 + 1, 0, p.height - 1);
    const double fx = x - x0;
    const double fy = y - y0;
    const double w00 = (1.0 - fx) * (1.0 - fy);
    const double w10 = fx * (1.0 - fy);
    const double w01 = (1.0 - fx) * fy;
    const double w11 = fx * fy;
    const double* p00 = p.at(x0, y0);
    const double* p10 = p.at(x1, y0);
    const double* p01 = p.at(x0, y1);
    const double* p11 = p.at(x1, y1);
    for (int c = 0; c < 6; ++c) out[c] = w00 * p00[c] + w10 * p10[c] + w01 * p01[c] + w11 * p11[c];
}

// Per-pixel normal-equation terms of ||A d - db||^2 with
//   A  = (A0(x) + A1(x + d~)) / 2
//   db = -(b1(x + d~) - b0(x)) / 2 + A d~
// Channel order: g11, g12, g22, h1, h2 (G = A'A, h = A'db); solving G d = h
// yields the total displacement, not the increment.
void update_matrices(const PolyExpansion& r0, const PolyExpansion& r1, const FlowField& flow,
                     std::vector<double>& m) {
    const int w = r0.width, h = r0.height;
    parallel_for(0, h, [&](int y) {
        double s[6];
        for (int x = 0; x < w; ++x) {
            const double dx = flow.dx_at(x, y);
            const double dy = flow.dy_at(x, y);
            sample_poly(r1, x + dx, y + dy, s);
            const double* c0 = r0.at(x, y);
            const double a11 = 0.5 * (c0[3] + s[3]);
            const double a22 = 0.5 * (c0[4] + s[4]);
            const double a12 = 0.25 * (c0[5] + s[5]);
            const double db1 = -0.5 * (s[1] - c0[1]) + a11 * dx + a12 * dy;
            const double db2 = -0.5 * (s[2] - c0[2]) + a12 * dx + a22 * dy;
            double* out = &m[(static_cast<std::size_t>(y) * w + x) * 5];
            out[0] = a11 * a11 + a12 * a12;
            out[1] = a12 * (a11 + a22);
            out[2] = a12 * a12 + a22 * a22;
            out[3] = a11 * db1 + a12 * db2;
            out[4] = a12 * db1 + a22 * db2;
        }
    });
}

// Separable Gaussian over the averaging window applied to the 5 channels.
void blur_matrices(std::vector<double>& m, std::vector<double>& tmp, int w, int h, int window) {
    const int radius = window / 2;
    const double sigma = std::max(0.3 * radius, 1.0);
    std::vector<double> kernel(static_cast<std::size_t>(2 * radius + 1));
    double sum = 0.0;
    for (int i = -radius; i <= radius; ++i) {
        const double v = std::exp(-0.5 * i * i / (sigma * sigma));
        kernel[static_cast<std::size_t>(i + radius)] = v;
        sum += v;
    }
    for (double& v : kernel) v /= sum;

    tmp.resize(m.size());
    parallel_for(0, h, [&](int y) {
        for (int x = 0; x < w; ++x) {
            double acc[5] = {0, 0, 0, 0, 0};
            for (int k = -radius; k <= radius; ++k) {
                const int xx = clamp_int(x + k, 0, w - 1);
                const double* src = &m[(static_cast<std::size_t>(y) * w + xx) * 5];
                const double kv = kernel[static_cast<std::size_t>(k + radius)];
                for (int c = 0; c < 5; ++c) acc[c] += kv * src[c];
            }
            double* dst = &tmp[(static_cast<std::size_t>(y) * w + x) * 5];
            for (int c = 0; c < 5; ++c) dst[c] = acc[c];
        }
    });
    parallel_for(0, h, [&](int y) {
        for (int x = 0; x < w; ++x) {
            double acc[5] = {0, 0, 0, 0, 0};
            for (int k = -radius; k <= radius; ++k) {
                const int yy = clamp_int(y + k, 0, h - 1);
                const double* src = &tmp[(static_cast<std::size_t>(yy) * w + x) * 5];
                const double kv = kernel[static_cast<std::size_t>(k + radius)];
                for (int c = 0; c < 5; ++c) acc[c] += kv * src[c];
            }
            double* dst = &m[(static_cast<std::size_t>(y) * w + x) * 5];
            for (int c = 0; c < 5; ++c) dst[c] = acc[c];
        }
    });
}

void solve_flow(const std::vector<double>& m, FlowField& flow) {
    const int w = flow.width, h = flow.height;
    parallel_for(0, h, [&](int y) {
        for (int x = 0; x < w; ++x) {
            const double* e = &m[(static_cast<std::size_t>(y) * w + x) * 5];
            const double det = e[0] * e[2] - e[1] * e[1];
            if (det > kDetFloor) {
                flow.dx_at(x, y) = (e[2] * e[3] - e[1] * e[4]) / det;
                flow.dy_at(x, y) = (e[0] * e[4] - e[1] * e[3]) / det;
            }
            // else: keep the warm-started displacement
        }
    });
}

std::vector<double> resample_plane(const std::vector<double>& src, int w, int h, int nw, int nh) {
    std::vector<double> out(static_cast<std::size_t>(nw) * nh);
    const double sx = static_cast<double>(w) / nw;
    const double sy = static_cast<double>(h) / nh;
    parallel_for(0, nh, [&](int y) {
        double fy = (y + 0.5) * sy - 0.5;
        fy = std::clamp(fy, 0.0, static_cast<double>(h - 1));
        const int y0 = clamp_int(static_cast<int>(std::floor(fy)), 0, h - 1);
        const int y1 = clamp_int(y0 + 1, 0, h - 1);
        const double wy = fy - y0;
        for (int x = 0; x < nw; ++x) {
            double fx = (x + 0.5) * sx - 0.5;
            fx = std::clamp(fx, 0.0, static_cast<double>(w - 1));
            const int x0 = clamp_int(static_cast<int>(std::floor(fx)), 0, w - 1);
            const int x1 = clamp_int(x0 + 1, 0, w - 1);
            const double wx = fx - x0;
            const double top = src[static_cast<std::size_t>(y0) * w + x0] * (1.0 - wx) +
                               src[static_cast<std::size_t>(y0) * w + x1] * wx;
            const double bot = src[static_cast<std::size_t>(y1) * w + x0] * (1.0 - wx) +
                               src[static_cast<std::size_t>(y1) * w + x1] * wx;
            out[static_cast<std::size_t>(y) * nw + x] = top * (1.0 - wy) + bot * wy;
        }
    });
    return out;
}

}  // namespace

FlowField FlowField::make(int width, int height) {
    FlowField f;
    f.width = width;
    f.height = height;
    f.dx.assign(static_cast<std::size_t>(width) * height, 0.0);
    f.dy.assign(static_cast<std::size_t>(width) * height, 0.0);
    return f;
}

void FlowParams::validate() const {
    if (pyramid_levels < 1) fail(ErrorCode::validation, "pyramid_levels must be >= 1");
    if (!(pyramid_scale > 0.0 && pyramid_scale < 1.0))
        fail(ErrorCode::validation, "pyramid_scale must lie in (0, 1)");
    if (window < 3 || window % 2 == 0) fail(ErrorCode::validation, "window must be odd and >= 3");
    if (poly_n < 3 || poly_n % 2 == 0) fail(ErrorCode::validation, "poly_n must be odd and >= 3");
    if (!(poly_sigma > 0.0)) fail(ErrorCode::validation, "poly_sigma must be > 0");
    if (iterations < 1) fail(ErrorCode::validation, "iterations must be >= 1");
}

FlowField farneback_flow(const Frame& prev, const Frame& next, const FlowParams& params) {
    params.validate();
    if (prev.channels != 1 || next.channels != 1)
        fail(ErrorCode::contract, "farneback_flow expects luma frames");
    if (prev.width != next.width || prev.height != next.height)
        fail(ErrorCode::contract, "farneback_flow frames must have equal dimensions");

    // Level geometry: size_k = round(size * scale^k), dropping levels that
    // would be smaller than the expansion neighborhood.
    struct LevelDims {
        int w, h;
        double scale;
    };
    std::vector<LevelDims> dims;
    for (int k = 0; k < params.pyramid_levels; ++k) {
        const double scale = std::pow(params.pyramid_scale, k);
        const int wk = static_cast<int>(std::lround(prev.width * scale));
        const int hk = static_cast<int>(std::lround(prev.height * scale));
        if (k > 0 && (wk < params.poly_n + 2 || hk < params.poly_n + 2)) break;
        dims.push_back({wk, hk, scale});
    }

    FlowField flow;
    std::vector<double> m, tmp;
    for (int k = static_cast<int>(dims.size()) - 1; k >= 0; --k) {
        const auto [wk, hk, scale] = dims[static_cast<std::size_t>(k)];
        LevelPair level;
        if (k == 0) {
            level.i0 = prev;
            level.i1 = next;
        } else {
            const double sigma = (1.0 / scale - 1.0) * 0.5;
            level.i0 = resize_bilinear(gaussian_smooth(prev, sigma), wk, hk);
            level.i1 = resize_bilinear(gaussian_smooth(next, sigma), wk, hk);
        }

        if (k == static_cast<int>(dims.size()) - 1) {
            flow = FlowField::make(wk, hk);
        } else {
            FlowField up = FlowField::make(wk, hk);
            up.dx = resample_plane(flow.dx, flow.width, flow.height, wk, hk);
            up.dy = resample_plane(flow.dy, flow.width, flow.height, wk, hk);
            const double rx = static_cast<double>(wk) / flow.width;
            const double ry = static_cast<double>(hk) / flow.height;
            for (double& v : up.dx) v *= rx;
            for (double& v : up.dy) v *= ry;
            flow = std::move(up);
        }

        const PolyExpansion r0 = polynomial_expansion(level.i0, params.poly_n, params.poly_sigma);
        const PolyExpansion r1 = polynomial_expansion(level.i1, params.poly_n, params.poly_sigma);
        m.resize(static_cast<std::size_t>(wk) * hk * 5);
        for (int it = 0; it < params.iterations; ++it) {
            update_matrices(r0, r1, flow, m);
            blur_matrices(m, tmp, wk, hk, params.window);
            solve_flow(m, flow);
        }
    }
    return flow;
}

}  // namespace seawake::flow
