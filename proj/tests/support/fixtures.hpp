#pragma once

// Deterministic raster fixtures shared by the flow/metric tests: smooth
// noise canvases with known sub-canvas shifts, rendered blob sequences, and
// scratch directories.

#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "seawake/frame.hpp"

namespace testfix {

inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

// White noise blurred into a smooth texture with values in [lo, hi].
inline seawake::flow::Frame smooth_noise(int w, int h, std::uint64_t seed, double sigma = 6.0,
                                         double lo = 0.2, double hi = 0.8) {
    seawake::flow::Frame canvas = seawake::flow::Frame::make(w, h, 1);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            const std::uint64_t v = mix64(seed ^ (static_cast<std::uint64_t>(y) << 32 ^
                                          static_cast<std::uint64_t>(x)));
            canvas.at(x, y) = static_cast<double>(v >> 11) * (1.0 / 9007199254740992.0);
        }
    canvas = seawake::flow::gaussian_smooth(canvas, sigma);
    double mn = 1e9, mx = -1e9;
    for (double v : canvas.samples) {
        mn = std::min(mn, v);
        mx = std::max(mx, v);
    }
    for (double& v : canvas.samples) v = lo + (hi - lo) * (v - mn) / (mx - mn);
    return canvas;
}

// View of the canvas at integer offset (x0, y0).
inline seawake::flow::Frame crop_view(const seawake::flow::Frame& canvas, int x0, int y0, int w,
                                      int h) {
    return seawake::flow::crop(canvas, x0, y0, w, h);
}

// Bilinear view shifted by a fractional offset: content appears moved by
// (+dx, +dy) relative to crop_view(canvas, x0, y0, ...).
inline seawake::flow::Frame sampled_view(const seawake::flow::Frame& canvas, double x0, double y0,
                                         int w, int h) {
    seawake::flow::Frame out = seawake::flow::Frame::make(w, h, 1);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            out.at(x, y) = seawake::flow::sample_bilinear(canvas, x0 + x, y0 + y);
    return out;
}

// Adds a bright isotropic Gaussian blob at (cx, cy).
inline void add_blob(seawake::flow::Frame& frame, double cx, double cy, double sigma,
                     double intensity = 0.95) {
    const double extent = 4.0 * sigma;
    const int x0 = std::max(0, static_cast<int>(cx - extent));
    const int x1 = std::min(frame.width - 1, static_cast<int>(cx + extent) + 1);
    const int y0 = std::max(0, static_cast<int>(cy - extent));
    const int y1 = std::min(frame.height - 1, static_cast<int>(cy + extent) + 1);
    for (int y = y0; y <= y1; ++y)
        for (int x = x0; x <= x1; ++x) {
            const double r2 = (x - cx) * (x - cx) + (y - cy) * (y - cy);
            const double g = std::exp(-0.5 * r2 / (sigma * sigma));
            double& px = frame.at(x, y);
            px = px + (intensity - px) * g;
        }
}

// Unique scratch directory, removed on destruction.
struct TempDir {
    std::filesystem::path path;

    explicit TempDir(const std::string& tag) {
        static int counter = 0;
        path = std::filesystem::temp_directory_path() /
               ("seawake_" + tag + "_" + std::to_string(++counter) + "_" +
                std::to_string(static_cast<unsigned>(::getpid())));
        std::filesystem::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;
};

}  // namespace testfix
