#include "seawake/frame.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "seawake/errors.hpp"
#include "seawake/parallel.hpp"

namespace seawake::flow {

namespace {

[[noreturn]] void fail(ErrorCode code, const std::string& msg) {
    throw Error(code, "flowlab: " + msg);
}

inline int clamp_int(int v, int lo, int hi) { return v < lo ? lo : (v > hi ? hi : v); }

std::vector<double> gaussian_kernel(double sigma, int radius) {
    std::vector<double> k(static_cast<std::size_t>(2 * radius + 1));
    double sum = 0.0;
    for (int i = -radius; i <= radius; ++i) {
        const double w = std::exp(-0.5 * (i * i) / (sigma * sigma));
        k[static_cast<std::size_t>(i + radius)] = w;
        sum += w;
    }
    for (double& w : k) w /= sum;
    return k;
}

}  // namespace

Frame Frame::make(int width, int height, int channels, double fill) {
    if (width <= 0 || height <= 0) fail(ErrorCode::validation, "frame dimensions must be positive");
    if (channels != 1 && channels != 3) fail(ErrorCode::validation, "frame must have 1 or 3 channels");
    Frame f;
    f.width = width;
    f.height = height;
    f.channels = channels;
    f.samples.assign(static_cast<std::size_t>(width) * height * channels, fill);
    return f;
}

void Frame::validate() const {
    if (width <= 0 || height <= 0) fail(ErrorCode::validation, "frame dimensions must be positive");
    if (channels != 1 && channels != 3) fail(ErrorCode::validation, "frame must have 1 or 3 channels");
    if (samples.size() != static_cast<std::size_t>(width) * height * channels)
        fail(ErrorCode::validation, "sample buffer size does not match dimensions");
    for (double v : samples)
        if (!(v >= 0.0 && v <= 1.0)) fail(ErrorCode::validation, "sample outside [0, 1]");
}

Frame to_luma(const Frame& frame) {
    if (frame.channels == 1) return frame;
    Frame out = Frame::make(frame.width, frame.height, 1);
    const std::size_t n = static_cast<std::size_t>(frame.width) * frame.height;
    for (std::size_t i = 0; i < n; ++i) {
        const double* px = &frame.samples[i * 3];
        out.samples[i] = 0.299 * px[0] + 0.587 * px[1] + 0.114 * px[2];
    }
    return out;
}

double sample_bilinear(const Frame& frame, double x, double y, int c) {
    // Edge replication: clamp the continuous coordinate into the valid square.
    x = std::clamp(x, 0.0, static_cast<double>(frame.width - 1));
    y = std::clamp(y, 0.0, static_cast<double>(frame.height - 1));
    const int x0 = clamp_int(static_cast<int>(std::floor(x)), 0, frame.width - 1);
    const int y0 = clamp_int(static_cast<int>(std::floor(y)), 0, frame.height - 1);
    const int x1 = clamp_int(x0 + 1, 0, frame.width - 1);
    const int y1 = clamp_int(y0 + 1, 0, frame.height - 1);
    const double fx = x - x0;
    const double fy = y - y0;
    const double top = frame.at(x0, y0, c) * (1.0 - fx) + frame.at(x1, y0, c) * fx;
    const double bot = frame.at(x0, y1, c) * (1.0 - fx) + frame.at(x1, y1, c) * fx;
    return top * (1.0 - fy) + bot * fy;
}

Frame crop(const Frame& frame, int x, int y, int w, int h) {
    if (x < 0 || y < 0 || w <= 0 || h <= 0 || x + w > frame.width || y + h > frame.height)
        fail(ErrorCode::contract, "crop region outside the frame");
    Frame out = Frame::make(w, h, frame.channels);
    for (int row = 0; row < h; ++row)
        for (int col = 0; col < w; ++col)
            for (int c = 0; c < frame.channels; ++c)
                out.at(col, row, c) = frame.at(x + col, y + row, c);
    return out;
}

Frame gaussian_smooth(const Frame& frame, double sigma) {
    if (sigma <= 0.0) return frame;
    const int radius = std::max(1, static_cast<int>(std::lround(2.5 * sigma)));
    const auto kernel = gaussian_kernel(sigma, radius);

    Frame tmp = Frame::make(frame.width, frame.height, frame.channels);
    parallel_for(0, frame.height, [&](int y) {
        for (int x = 0; x < frame.width; ++x) {
            for (int c = 0; c < frame.channels; ++c) {
                double acc = 0.0;
                for (int k = -radius; k <= radius; ++k) {
                    const int xx = clamp_int(x + k, 0, frame.width - 1);
                    acc += kernel[static_cast<std::size_t>(k + radius)] * frame.at(xx, y, c);
                }
                tmp.at(x, y, c) = acc;
            }
        }
    });
    Frame out = Frame::make(frame.width, frame.height, frame.channels);
    parallel_for(0, frame.height, [&](int y) {
        for (int x = 0; x < frame.width; ++x) {
            for (int c = 0; c < frame.channels; ++c) {
                double acc = 0.0;
                for (int k = -radius; k <= radius; ++k) {
                    const int yy = clamp_int(y + k, 0, frame.height - 1);
                    acc += kernel[static_cast<std::size_t>(k + radius)] * tmp.at(x, yy, c);
                }
                out.at(x, y, c) = acc;
            }
        }
    });
    return out;
}

Frame resize_bilinear(const Frame& frame, int new_width, int new_height) {
    if (new_width <= 0 || new_height <= 0)
        fail(ErrorCode::contract, "resize target must be positive");
    Frame out = Frame::make(new_width, new_height, frame.channels);
    const double sx = static_cast<double>(frame.width) / new_width;
    const double sy = static_cast<double>(frame.height) / new_height;
    parallel_for(0, new_height, [&](int y) {
        const double src_y = (y + 0.5) * sy - 0.5;
        for (int x = 0; x < new_width; ++x) {
            const double src_x = (x + 0.5) * sx - 0.5;
            for (int c = 0; c < frame.channels; ++c)
                out.at(x, y, c) = sample_bilinear(frame, src_x, src_y, c);
        }
    });
    return out;
}

Frame pyr_down(const Frame& frame) {
    static const double k[5] = {1.0 / 16, 4.0 / 16, 6.0 / 16, 4.0 / 16, 1.0 / 16};
    Frame tmp = Frame::make(frame.width, frame.height, frame.channels);
    parallel_for(0, frame.height, [&](int y) {
        for (int x = 0; x < frame.width; ++x)
            for (int c = 0; c < frame.channels; ++c) {
                double acc = 0.0;
                for (int i = -2; i <= 2; ++i)
                    acc += k[i + 2] * frame.at(clamp_int(x + i, 0, frame.width - 1), y, c);
                tmp.at(x, y, c) = acc;
            }
    });
    const int w2 = (frame.width + 1) / 2;
    const int h2 = (frame.height + 1) / 2;
    Frame out = Frame::make(w2, h2, frame.channels);
    parallel_for(0, h2, [&](int y) {
        for (int x = 0; x < w2; ++x)
            for (int c = 0; c < frame.channels; ++c) {
                double acc = 0.0;
                for (int i = -2; i <= 2; ++i)
                    acc += k[i + 2] * tmp.at(x * 2, clamp_int(y * 2 + i, 0, frame.height - 1), c);
                out.at(x, y, c) = acc;
            }
    });
    return out;
}

}  // namespace seawake::flow
