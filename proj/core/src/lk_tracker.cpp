#include <cmath>
#include <string>
#include <vector>

#include "seawake/errors.hpp"
#include "seawake/flowlab.hpp"

namespace seawake::flow {

namespace {

[[noreturn]] void fail(ErrorCode code, const std::string& msg) {
    throw Error(code, "flowlab: " + msg);
}

struct PyrLevel {
    Frame img;
    Frame gx;
    Frame gy;
};

Frame gradient_x(const Frame& f) {
    Frame g = Frame::make(f.width, f.height, 1);
    for (int y = 0; y < f.height; ++y)
        for (int x = 0; x < f.width; ++x) {
            const int x0 = x > 0 ? x - 1 : 0;
            const int x1 = x < f.width - 1 ? x + 1 : f.width - 1;
            g.samples[static_cast<std::size_t>(y) * f.width + x] = 0.5 * (f.at(x1, y) - f.at(x0, y));
        }
    return g;
}

Frame gradient_y(const Frame& f) {
    Frame g = Frame::make(f.width, f.height, 1);
    for (int y = 0; y < f.height; ++y) {
        const int y0 = y > 0 ? y - 1 : 0;
        const int y1 = y < f.height - 1 ? y + 1 : f.height - 1;
        for (int x = 0; x < f.width; ++x)
            g.samples[static_cast<std::size_t>(y) * f.width + x] = 0.5 * (f.at(x, y1) - f.at(x, y0));
    }
    return g;
}

std::vector<PyrLevel> build_pyramid(const Frame& luma, int levels, int window) {
    std::vector<PyrLevel> pyr;
    for (int l = 0; l < levels; ++l) {
        Frame img;
        if (l == 0) {
            img = luma;
        } else {
            const Frame& prev = pyr.back().img;
            if (prev.width < 2 * window || prev.height < 2 * window) break;
            img = pyr_down(prev);
        }
        PyrLevel level;
        level.gx = gradient_x(img);
        level.gy = gradient_y(img);
        level.img = std::move(img);
        pyr.push_back(std::move(level));
    }
    return pyr;
}

struct StepResult {
    PixelPoint point;
    bool valid = false;
};

// One Lucas-Kanade step of a single point between two pyramids, coarse to
// fine. The template window and its structure tensor come from frame A; the
// residual is evaluated against frame B at the current displacement guess.
StepResult lk_step(const std::vector<PyrLevel>& pyr_a, const std::vector<PyrLevel>& pyr_b,
                   const PixelPoint& p, const TrackParams& params) {
    const int radius = params.window / 2;
    const double area = static_cast<double>(params.window) * params.window;
    double dx = 0.0, dy = 0.0;  // displacement guess carried across levels

    for (int l = static_cast<int>(pyr_a.size()) - 1; l >= 0; --l) {
        const PyrLevel& a = pyr_a[static_cast<std::size_t>(l)];
        const PyrLevel& b = pyr_b[static_cast<std::size_t>(l)];
        const double inv_scale = 1.0 / static_cast<double>(1 << l);
        const double px = p.x * inv_scale;
        const double py = p.y * inv_scale;

        double g11 = 0.0, g12 = 0.0, g22 = 0.0;
        for (int oy = -radius; oy <= radius; ++oy)
            for (int ox = -radius; ox <= radius; ++ox) {
                const double ix = sample_bilinear(a.gx, px + ox, py + oy);
                const double iy = sample_bilinear(a.gy, px + ox, py + oy);
                g11 += ix * ix;
                g12 += ix * iy;
                g22 += iy * iy;
            }
        const double trace = g11 + g22;
        const double disc = std::sqrt((g11 - g22) * (g11 - g22) + 4.0 * g12 * g12);
        const double min_eig = 0.5 * (trace - disc) / area;
        if (min_eig < params.min_eigen) return {{p.x + dx, p.y + dy}, false};
        const double det = g11 * g22 - g12 * g12;

        double nx = 0.0, ny = 0.0;  // refinement at this level
        for (int it = 0; it < params.max_iterations; ++it) {
            const double bx_center = px + dx + nx;
            const double by_center = py + dy + ny;
            if (bx_center < -radius || bx_center > b.img.width - 1 + radius ||
                by_center < -radius || by_center > b.img.height - 1 + radius)
                return {{p.x + dx + nx, p.y + dy + ny}, false};
            double b1 = 0.0, b2 = 0.0;
            for (int oy = -radius; oy <= radius; ++oy)
                for (int ox = -radius; ox <= radius; ++ox) {
                    const double diff = sample_bilinear(a.img, px + ox, py + oy) -
                                        sample_bilinear(b.img, bx_center + ox, by_center + oy);
                    b1 += diff * sample_bilinear(a.gx, px + ox, py + oy);
                    b2 += diff * sample_bilinear(a.gy, px + ox, py + oy);
                }
            const double ex = (g22 * b1 - g12 * b2) / det;
            const double ey = (g11 * b2 - g12 * b1) / det;
            nx += ex;
            ny += ey;
            if (std::hypot(ex, ey) < params.epsilon) break;
        }
        dx += nx;
        dy += ny;
        if (l > 0) {
            dx *= 2.0;
            dy *= 2.0;
        }
    }

    const PixelPoint out{p.x + dx, p.y + dy};
    const bool inside = out.x >= 0.0 && out.x <= pyr_a[0].img.width - 1.0 && out.y >= 0.0 &&
                        out.y <= pyr_a[0].img.height - 1.0;
    return {out, inside};
}

}  // namespace

void TrackParams::validate() const {
    if (window < 3 || window % 2 == 0) fail(ErrorCode::validation, "window must be odd and >= 3");
    if (pyramid_levels < 1) fail(ErrorCode::validation, "pyramid_levels must be >= 1");
    if (max_iterations < 1) fail(ErrorCode::validation, "max_iterations must be >= 1");
    if (!(epsilon > 0.0)) fail(ErrorCode::validation, "epsilon must be > 0");
    if (min_eigen < 0.0) fail(ErrorCode::validation, "min_eigen must be >= 0");
}

std::vector<Track> lk_track(std::span<const Frame> frames, std::span<const PixelPoint> seeds,
                            const TrackParams& params) {
    params.validate();
    if (frames.size() < 2) fail(ErrorCode::contract, "lk_track requires at least two frames");
    if (seeds.empty()) fail(ErrorCode::contract, "lk_track requires at least one seed");
    for (const auto& f : frames)
        if (f.width != frames[0].width || f.height != frames[0].height)
            fail(ErrorCode::contract, "lk_track frames must share dimensions");
    for (const auto& s : seeds)
        if (!(s.x >= 0.0 && s.x <= frames[0].width - 1.0 && s.y >= 0.0 &&
              s.y <= frames[0].height - 1.0))
            fail(ErrorCode::contract, "lk_track seed lies outside the first frame");

    std::vector<Track> tracks(seeds.size());
    std::vector<PixelPoint> current(seeds.begin(), seeds.end());
    std::vector<bool> alive(seeds.size(), true);
    for (std::size_t i = 0; i < seeds.size(); ++i)
        tracks[i].points.push_back({seeds[i].x, seeds[i].y, true});

    std::vector<PyrLevel> pyr_a = build_pyramid(to_luma(frames[0]), params.pyramid_levels,
                                                params.window);
    for (std::size_t f = 1; f < frames.size(); ++f) {
        std::vector<PyrLevel> pyr_b = build_pyramid(to_luma(frames[f]), params.pyramid_levels,
                                                    params.window);
        for (std::size_t i = 0; i < seeds.size(); ++i) {
            if (!alive[i]) {  // divergence is terminal: carry the last position
                tracks[i].points.push_back({current[i].x, current[i].y, false});
                continue;
            }
            const StepResult step = lk_step(pyr_a, pyr_b, current[i], params);
            alive[i] = step.valid;
            current[i] = step.point;
            tracks[i].points.push_back({step.point.x, step.point.y, step.valid});
        }
        pyr_a = std::move(pyr_b);
    }
    return tracks;
}

}  // namespace seawake::flow
