#include <cmath>
#include <functional>
#include <random>

#include "doctest.h"
#include "seawake/errors.hpp"
#include "seawake/geoproject.hpp"

using namespace seawake;
using namespace seawake::geo;

namespace {

constexpr double kPi = 3.14159265358979323846;

telemetry::GeoFix fix_at(double t, std::int64_t id, double lon, double lat) {
    telemetry::GeoFix fix;
    fix.timestamp = t;
    fix.vessel_id = id;
    fix.lon = lon;
    fix.lat = lat;
    return fix;
}

ErrorCode code_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const Error& err) {
        return err.code();
    }
    FAIL("expected a seawake::Error");
    return ErrorCode::io;
}

// Linear east-motion model used by several projection tests: theta 0,
// scale 10 px/m, vessel advancing 1 m east per frame at 1 fps.
struct EastScene {
    telemetry::TelemetryLog log;
    CameraFrameModel model;

    EastScene() {
        const LocalOrigin origin = LocalOrigin::at(25.0, 0.0);
        std::vector<telemetry::GeoFix> fixes;
        for (int i = 0; i <= 14; ++i)
            fixes.push_back(fix_at(i, 7, 25.0 + i * 1.0 / origin.m_lon, 0.0));
        log = telemetry::TelemetryLog::from_fixes(fixes);
        model.origin = origin;
        model.theta_deg = 0.0;
        model.scale_px_per_m = 10.0;
        model.timing = {0.0, 1.0, 14, 1024, 576};
        model.anchors[7] = {500.0, 300.0, std::nullopt};
    }
};

}  // namespace

TEST_CASE("make_origin averages the log and rescales longitude metres") {
    SUBCASE("single fix at (25, 37)") {
        const auto log = telemetry::TelemetryLog::from_fixes({fix_at(0, 7, 25.0, 37.0)});
        const LocalOrigin origin = make_origin(log);
        CHECK(origin.lon_bar == doctest::Approx(25.0));
        CHECK(origin.lat_bar == doctest::Approx(37.0));
        CHECK(origin.m_lat == 111320.0);
        // oracle: direct high-precision cosine evaluation
        CHECK(origin.m_lon == doctest::Approx(111320.0 * std::cos(37.0 * kPi / 180.0)).epsilon(1e-12));
        CHECK(origin.m_lon == doctest::Approx(88904.10497846463).epsilon(1e-9));
    }
    SUBCASE("two fixes average component-wise") {
        const auto log =
            telemetry::TelemetryLog::from_fixes({fix_at(0, 7, 0.0, 0.0), fix_at(1, 7, 2.0, 4.0)});
        const LocalOrigin origin = make_origin(log);
        CHECK(origin.lon_bar == doctest::Approx(1.0));
        CHECK(origin.lat_bar == doctest::Approx(2.0));
    }
    SUBCASE("equatorial origin keeps the meridian constant") {
        const auto log = telemetry::TelemetryLog::from_fixes({fix_at(0, 7, 10.0, 0.0)});
        CHECK(make_origin(log).m_lon == doctest::Approx(111320.0));
    }
    SUBCASE("empty log fails") {
        CHECK(code_of([] { make_origin(telemetry::TelemetryLog{}); }) == ErrorCode::empty_input);
    }
}

TEST_CASE("to_local_metric applies the equirectangular factors") {
    const LocalOrigin at0 = LocalOrigin::at(25.0, 0.0);
    CHECK(to_local_metric(fix_at(0, 7, 25.0, 0.0), at0).e == doctest::Approx(0.0));
    CHECK(to_local_metric(fix_at(0, 7, 25.0, 0.0), at0).n == doctest::Approx(0.0));
    CHECK(to_local_metric(fix_at(0, 7, 25.001, 0.0), at0).e == doctest::Approx(111.32));

    const LocalOrigin at60 = LocalOrigin::at(25.0, 60.0);
    CHECK(at60.m_lon == doctest::Approx(55660.0));
    CHECK(to_local_metric(fix_at(0, 7, 25.002, 60.0), at60).e == doctest::Approx(111.32));
}

TEST_CASE("rotate matches the yaw rotation formula") {
    SUBCASE("zero yaw is the identity") {
        const FrameVec v = rotate({3.5, -2.0}, 0.0);
        CHECK(v.f_x == doctest::Approx(3.5));
        CHECK(v.f_y == doctest::Approx(-2.0));
    }
    SUBCASE("quarter turn") {
        const FrameVec v = rotate({1.0, 0.0}, 90.0);
        CHECK(v.f_x == doctest::Approx(0.0));
        CHECK(v.f_y == doctest::Approx(1.0));
    }
    SUBCASE("theta 100 deg on (10, 5)") {
        const FrameVec v = rotate({10.0, 5.0}, 100.0);
        // direct high-precision evaluation of the rotation formula
        CHECK(v.f_x == doctest::Approx(-6.660520541730342).epsilon(1e-12));
        CHECK(v.f_y == doctest::Approx(8.979836641787427).epsilon(1e-12));
    }
}

TEST_CASE("rotation preserves norms and inverts exactly") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> coord(-1e4, 1e4);
    std::uniform_real_distribution<double> angle(-720.0, 720.0);
    for (int i = 0; i < 2000; ++i) {
        const EastNorth v{coord(rng), coord(rng)};
        const double theta = angle(rng);
        const FrameVec r = rotate(v, theta);
        const double norm_v = std::hypot(v.e, v.n);
        const double norm_r = std::hypot(r.f_x, r.f_y);
        CHECK(std::abs(norm_r - norm_v) <= 1e-9 * std::max(1.0, norm_v));
        const EastNorth back = unrotate(r, theta);
        CHECK(std::abs(back.e - v.e) <= 1e-9 * std::max(1.0, norm_v));
        CHECK(std::abs(back.n - v.n) <= 1e-9 * std::max(1.0, norm_v));
    }
}

TEST_CASE("estimate_scale reproduces the clip's 28.3 px/m form") {
    // anchored at lon 0 so the 10 m baseline is exact in floating point
    const LocalOrigin origin = LocalOrigin::at(0.0, 0.0);
    // two vessels 10 m apart in the metric frame, centres 283 px apart
    const auto a = fix_at(0, 1, 0.0, 0.0);
    const auto b = fix_at(0, 2, 10.0 / origin.m_lon, 0.0);
    SUBCASE("hand-computed ratio") {
        const ScaleEstimate s = estimate_scale(a, b, {100.0, 100.0}, {383.0, 100.0}, origin);
        CHECK(s.px_per_m == doctest::Approx(28.3).epsilon(1e-12));
        CHECK_FALSE(s.degenerate_annotation);
    }
    SUBCASE("unit ratio") {
        const ScaleEstimate s = estimate_scale(a, b, {0.0, 0.0}, {10.0, 0.0}, origin);
        CHECK(s.px_per_m == doctest::Approx(1.0));
    }
    SUBCASE("symmetry in the two vessels") {
        const ScaleEstimate s1 = estimate_scale(a, b, {100.0, 90.0}, {300.0, 140.0}, origin);
        const ScaleEstimate s2 = estimate_scale(b, a, {300.0, 140.0}, {100.0, 90.0}, origin);
        CHECK(s1.px_per_m == doctest::Approx(s2.px_per_m).epsilon(1e-15));
    }
    SUBCASE("coincident fixes are undefined") {
        CHECK(code_of([&] { estimate_scale(a, a, {0, 0}, {10, 0}, origin); }) ==
              ErrorCode::scale_undefined);
    }
    SUBCASE("zero pixel baseline flags a degenerate annotation") {
        const ScaleEstimate s = estimate_scale(a, b, {50.0, 60.0}, {50.0, 60.0}, origin);
        CHECK(s.px_per_m == 0.0);
        CHECK(s.degenerate_annotation);
    }
}

TEST_CASE("project_trajectory follows the interpolated log") {
    SUBCASE("stationary vessel pins all 14 points to the anchor") {
        EastScene scene;
        std::vector<telemetry::GeoFix> fixes;
        for (int i = 0; i <= 14; ++i) fixes.push_back(fix_at(i, 7, 25.0, 0.0));
        const auto still = telemetry::TelemetryLog::from_fixes(fixes);
        const PixelTrajectory t = project_trajectory(still, 7, scene.model);
        REQUIRE(t.points.size() == 14);
        for (const auto& p : t.points) {
            CHECK(p.x == doctest::Approx(500.0).epsilon(1e-12));
            CHECK(p.y == doctest::Approx(300.0).epsilon(1e-12));
        }
    }
    SUBCASE("eastward motion lands on the closed-form pixels") {
        EastScene scene;
        const PixelTrajectory t = project_trajectory(scene.log, 7, scene.model);
        REQUIRE(t.points.size() == 14);
        for (int i = 0; i < 14; ++i) {
            CHECK(t.points[i].x == doctest::Approx(500.0 + 10.0 * i).epsilon(1e-9));
            CHECK(t.points[i].y == doctest::Approx(300.0).epsilon(1e-9));
            CHECK(t.timestamps[i] == doctest::Approx(static_cast<double>(i)));
        }
        // p_0 lands exactly on the anchor centre
        CHECK(t.points[0].x == 500.0);
        CHECK(t.points[0].y == 300.0);
    }
    SUBCASE("paper clip timing yields N = 14 points") {
        EastScene scene;
        scene.model.timing.fps = 7.0;
        scene.model.timing.n_frames = 14;
        const PixelTrajectory t = project_trajectory(scene.log, 7, scene.model);
        CHECK(t.points.size() == 14);
        CHECK(t.timestamps.back() == doctest::Approx(13.0 / 7.0));
    }
    SUBCASE("unknown vessel") {
        EastScene scene;
        CHECK(code_of([&] { project_trajectory(scene.log, 8, scene.model); }) == ErrorCode::lookup);
    }
    SUBCASE("log not covering the clip propagates out_of_range") {
        EastScene scene;
        scene.model.timing.n_frames = 30;
        CHECK(code_of([&] { project_trajectory(scene.log, 7, scene.model); }) ==
              ErrorCode::out_of_range);
    }
}

TEST_CASE("projection is linear in the metric offset") {
    EastScene scene;
    CameraFrameModel model = resolve_anchors(scene.model, scene.log);
    const auto& anchor_fix = *model.anchors.at(7).fix;
    const PixelPoint base{model.anchors.at(7).cx, model.anchors.at(7).cy};

    auto offset_fix = [&](double de, double dn) {
        return fix_at(0, 7, anchor_fix.lon + de / model.origin.m_lon,
                      anchor_fix.lat + dn / model.origin.m_lat);
    };
    const PixelPoint p1 = project_point(offset_fix(3.0, -2.0), model, 7);
    const PixelPoint p2 = project_point(offset_fix(6.0, -4.0), model, 7);
    CHECK(p2.x - base.x == doctest::Approx(2.0 * (p1.x - base.x)).epsilon(1e-12));
    CHECK(p2.y - base.y == doctest::Approx(2.0 * (p1.y - base.y)).epsilon(1e-12));
}

TEST_CASE("inverse_project is the exact algebraic inverse") {
    EastScene scene;
    CameraFrameModel model = resolve_anchors(scene.model, scene.log);
    model.theta_deg = 100.0;  // non-trivial yaw for the round trips

    SUBCASE("anchor pixel returns the anchor fix") {
        const auto fix = inverse_project({500.0, 300.0}, 0.0, model, 7);
        CHECK(fix.lon == doctest::Approx(model.anchors.at(7).fix->lon).epsilon(1e-15));
        CHECK(fix.lat == doctest::Approx(model.anchors.at(7).fix->lat).epsilon(1e-15));
    }
    SUBCASE("one metre east at theta 0 and scale 10") {
        CameraFrameModel flat = model;
        flat.theta_deg = 0.0;
        const auto fix = inverse_project({510.0, 300.0}, 0.0, flat, 7);
        const auto anchor = *flat.anchors.at(7).fix;
        CHECK((fix.lon - anchor.lon) * flat.origin.m_lon == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(fix.lat == doctest::Approx(anchor.lat).epsilon(1e-12));
    }
    SUBCASE("pixel -> geo -> pixel round trip under 1e-6 px") {
        std::mt19937_64 rng(23);
        std::uniform_real_distribution<double> px(0.0, 1023.0), py(0.0, 575.0);
        for (int i = 0; i < 100; ++i) {
            const PixelPoint p{px(rng), py(rng)};
            const auto fix = inverse_project(p, 1.0, model, 7);
            const PixelPoint back = project_point(fix, model, 7);
            CHECK(std::abs(back.x - p.x) < 1e-6);
            CHECK(std::abs(back.y - p.y) < 1e-6);
        }
    }
    SUBCASE("geo -> pixel -> geo round trip under 1e-9 degrees") {
        std::mt19937_64 rng(29);
        std::uniform_real_distribution<double> d(-0.005, 0.005);
        const auto anchor = *model.anchors.at(7).fix;
        for (int i = 0; i < 100; ++i) {
            const auto fix = fix_at(0, 7, anchor.lon + d(rng), anchor.lat + d(rng));
            const PixelPoint p = project_point(fix, model, 7);
            const auto back = inverse_project(p, 0.0, model, 7);
            CHECK(std::abs(back.lon - fix.lon) < 1e-9);
            CHECK(std::abs(back.lat - fix.lat) < 1e-9);
        }
    }
    SUBCASE("unresolved anchor fix is a lookup error") {
        CameraFrameModel bare = scene.model;
        CHECK(code_of([&] { inverse_project({1.0, 2.0}, 0.0, bare, 7); }) == ErrorCode::lookup);
    }
}

TEST_CASE("model validation guards scale and anchor placement") {
    EastScene scene;
    SUBCASE("scale must be positive") {
        CameraFrameModel m = scene.model;
        m.scale_px_per_m = 0.0;
        CHECK(code_of([&] { m.validate(); }) == ErrorCode::validation);
    }
    SUBCASE("anchor must sit inside the frame") {
        CameraFrameModel m = scene.model;
        m.anchors[7].cx = 5000.0;
        CHECK(code_of([&] { m.validate(); }) == ErrorCode::validation);
    }
    SUBCASE("timing invariants") {
        ClipTiming t{0.0, 0.0, 14, 1024, 576};
        CHECK(code_of([&] { t.validate(); }) == ErrorCode::validation);
    }
}

TEST_CASE("camera model config document round-trips") {
    EastScene scene;
    CameraFrameModel m = scene.model;
    m.theta_deg = 100.0;
    const std::string text = model_to_json(m);
    const CameraFrameModel back = model_from_json(text);
    CHECK(back.theta_deg == m.theta_deg);
    CHECK(back.scale_px_per_m == m.scale_px_per_m);
    CHECK(back.timing.n_frames == m.timing.n_frames);
    CHECK(back.timing.fps == m.timing.fps);
    REQUIRE(back.anchors.count(7) == 1);
    CHECK(back.anchors.at(7).cx == m.anchors.at(7).cx);
    CHECK(model_to_json(back) == text);

    SUBCASE("missing keys name themselves") {
        try {
            model_from_json("{\"theta_deg\": 100.0}");
            FAIL("expected schema error");
        } catch (const Error& err) {
            CHECK(err.code() == ErrorCode::schema);
            CHECK(std::string(err.what()).find("scale_px_per_m") != std::string::npos);
        }
    }
}
