#include <cmath>
#include <vector>

#include "doctest.h"
#include "fixtures.hpp"
#include "seawake/errors.hpp"
#include "seawake/flowlab.hpp"

using namespace seawake;
using namespace seawake::flow;

namespace {

// Scripted-motion oracle: a bright blob moves over a static noise
// background at a known per-frame displacement.
std::vector<Frame> blob_sequence(int n_frames, double start_x, double start_y, double step_x,
                                 double step_y, int w = 200, int h = 160,
                                 std::uint64_t seed = 500) {
    const Frame bg = testfix::smooth_noise(w, h, seed, 5.0, 0.25, 0.5);
    std::vector<Frame> frames;
    for (int i = 0; i < n_frames; ++i) {
        Frame f = bg;
        testfix::add_blob(f, start_x + step_x * i, start_y + step_y * i, 4.0);
        frames.push_back(std::move(f));
    }
    return frames;
}

}  // namespace

TEST_CASE("static video tracks to a constant sequence") {
    const Frame f = testfix::smooth_noise(120, 100, 42);
    const std::vector<Frame> frames(5, f);
    const PixelPoint seeds[] = {{60.0, 50.0}, {30.5, 70.25}};
    const auto tracks = lk_track(frames, seeds);
    REQUIRE(tracks.size() == 2);
    for (std::size_t s = 0; s < 2; ++s) {
        REQUIRE(tracks[s].points.size() == 5);
        for (const auto& p : tracks[s].points) {
            CHECK(p.valid);
            CHECK(p.x == doctest::Approx(seeds[s].x).epsilon(1e-9));
            CHECK(p.y == doctest::Approx(seeds[s].y).epsilon(1e-9));
        }
    }
}

TEST_CASE("a blob moving 2 px/frame stays within half a pixel") {
    const auto frames = blob_sequence(14, 60.0, 80.0, 2.0, 0.0);
    const PixelPoint seeds[] = {{60.0, 80.0}};
    const auto tracks = lk_track(frames, seeds);  // 21x21 window, 3 levels by default
    REQUIRE(tracks[0].points.size() == 14);
    for (int i = 0; i < 14; ++i) {
        const auto& p = tracks[0].points[static_cast<std::size_t>(i)];
        CHECK(p.valid);
        CHECK(std::abs(p.x - (60.0 + 2.0 * i)) < 0.5);
        CHECK(std::abs(p.y - 80.0) < 0.5);
    }
}

TEST_CASE("diagonal blob motion is tracked too") {
    const auto frames = blob_sequence(10, 50.0, 40.0, 1.5, 2.0);
    const PixelPoint seeds[] = {{50.0, 40.0}};
    const auto tracks = lk_track(frames, seeds);
    for (int i = 0; i < 10; ++i) {
        const auto& p = tracks[0].points[static_cast<std::size_t>(i)];
        CHECK(p.valid);
        CHECK(std::abs(p.x - (50.0 + 1.5 * i)) < 0.75);
        CHECK(std::abs(p.y - (40.0 + 2.0 * i)) < 0.75);
    }
}

TEST_CASE("a seed on a flat untextured region is flagged invalid") {
    const Frame flat = Frame::make(100, 100, 1, 0.5);
    const std::vector<Frame> frames(3, flat);
    const PixelPoint seeds[] = {{50.0, 50.0}};
    const auto tracks = lk_track(frames, seeds);
    CHECK(tracks[0].points[0].valid);  // the seed itself
    CHECK_FALSE(tracks[0].points[1].valid);
    CHECK_FALSE(tracks[0].points[2].valid);
}

TEST_CASE("tracking an affine sequence stays within one pixel of truth") {
    // texture undergoing rotation + translation, sampled from a larger canvas
    const Frame canvas = testfix::smooth_noise(320, 320, 606, 5.0);
    const int w = 200, h = 200;
    const double cx = 100.0, cy = 100.0;
    auto make_frame = [&](int i) {
        const double angle = 0.004 * i;  // radians
        const double tx = 1.2 * i, ty = 0.7 * i;
        Frame f = Frame::make(w, h, 1);
        const double ca = std::cos(angle), sa = std::sin(angle);
        for (int y = 0; y < h; ++y)
            for (int x = 0; x < w; ++x) {
                // inverse map of p -> R(p - c) + c + t
                const double rx = x - cx - tx, ry = y - cy - ty;
                const double sx = ca * rx + sa * ry + cx + 60.0;
                const double sy = -sa * rx + ca * ry + cy + 60.0;
                f.at(x, y) = sample_bilinear(canvas, sx, sy);
            }
        return f;
    };
    auto forward = [&](int i, const PixelPoint& p) {
        const double angle = 0.004 * i;
        const double ca = std::cos(angle), sa = std::sin(angle);
        const double rx = p.x - cx, ry = p.y - cy;
        return PixelPoint{ca * rx - sa * ry + cx + 1.2 * i, sa * rx + ca * ry + cy + 0.7 * i};
    };

    std::vector<Frame> frames;
    for (int i = 0; i < 14; ++i) frames.push_back(make_frame(i));
    const PixelPoint seeds[] = {{80.0, 90.0}, {120.0, 110.0}, {100.0, 70.0}};
    const auto tracks = lk_track(frames, seeds);
    for (std::size_t s = 0; s < 3; ++s) {
        for (int i = 0; i < 14; ++i) {
            const auto& p = tracks[s].points[static_cast<std::size_t>(i)];
            const PixelPoint gt = forward(i, seeds[s]);
            CHECK(p.valid);
            CHECK(std::hypot(p.x - gt.x, p.y - gt.y) < 1.0);
        }
    }
}

TEST_CASE("points leaving the frame lose validity and stop") {
    // whole scene slides 25 px/frame rightward; a seed near the right edge
    // must exit the frame within a few steps
    const Frame canvas = testfix::smooth_noise(520, 200, 55);
    std::vector<Frame> frames;
    for (int i = 0; i < 8; ++i) {
        const int x0 = std::max(0, 200 - 25 * i);  // content moves +25 px per frame
        frames.push_back(testfix::crop_view(canvas, x0, 20, 160, 120));
    }
    const PixelPoint seeds[] = {{140.0, 60.0}};
    const auto tracks = lk_track(frames, seeds);
    bool lost = false;
    for (const auto& p : tracks[0].points) lost = lost || !p.valid;
    CHECK(lost);
    // once invalid, the point stays put
    bool after_loss = false;
    PixelPoint frozen{0, 0};
    for (const auto& p : tracks[0].points) {
        if (after_loss) {
            CHECK(p.x == frozen.x);
            CHECK(p.y == frozen.y);
            CHECK_FALSE(p.valid);
        } else if (!p.valid) {
            after_loss = true;
            frozen = {p.x, p.y};
        }
    }
}

TEST_CASE("lk_track validates its inputs") {
    const Frame f = Frame::make(64, 64, 1, 0.5);
    const std::vector<Frame> frames(3, f);
    const PixelPoint inside[] = {{10.0, 10.0}};
    CHECK_THROWS_AS(lk_track(std::span<const Frame>(frames.data(), 1), inside, {}), Error);
    CHECK_THROWS_AS(lk_track(frames, std::span<const PixelPoint>{}, {}), Error);
    const PixelPoint outside[] = {{100.0, 10.0}};
    CHECK_THROWS_AS(lk_track(frames, outside, {}), Error);
}
