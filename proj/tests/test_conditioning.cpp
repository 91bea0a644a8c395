#include <cmath>
#include <functional>

#include "doctest.h"
#include "json.hpp"
#include "seawake/conditioning.hpp"
#include "seawake/errors.hpp"

using namespace seawake;
using namespace seawake::conditioning;

namespace {

const geo::ClipTiming kPaperTiming{0.0, 7.0, 14, 1024, 576};

ErrorCode code_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const Error& err) {
        return err.code();
    }
    FAIL("expected a seawake::Error");
    return ErrorCode::io;
}

geo::PixelTrajectory straight_trajectory(std::int64_t id, PixelPoint start, double step_x, int n,
                                         double fps) {
    geo::PixelTrajectory t;
    t.vessel_id = id;
    for (int i = 0; i < n; ++i) {
        t.points.push_back({start.x + step_x * i, start.y});
        t.timestamps.push_back(i / fps);
    }
    return t;
}

ConditioningPayload paper_payload(std::vector<std::string>* warnings = nullptr) {
    const BBox box_a = vessel_box({200.0, 200.0}, 40.0, kPaperTiming);
    const BBox box_b = vessel_box({500.0, 380.0}, 40.0, kPaperTiming);
    return build_payload(kPaperTiming,
                         {{{box_a, straight_trajectory(99999, {200.0, 200.0}, 4.0, 14, 7.0)},
                           {box_b, straight_trajectory(100000, {500.0, 380.0}, 3.0, 14, 7.0)}}},
                         35.0, 30.0, "frames/frame_0001.png", warnings);
}

}  // namespace

TEST_CASE("vessel_box centres a square on the click") {
    const BBox box = vessel_box({100.0, 100.0}, 40.0, kPaperTiming);
    CHECK(box.x == doctest::Approx(80.0));
    CHECK(box.y == doctest::Approx(80.0));
    CHECK(box.w == doctest::Approx(40.0));
    CHECK(box.h == doctest::Approx(40.0));
    // recomputing the centre returns the click
    CHECK(box.center().x == doctest::Approx(100.0));
    CHECK(box.center().y == doctest::Approx(100.0));

    CHECK(code_of([] { vessel_box({100.0, 100.0}, 0.0, kPaperTiming); }) == ErrorCode::annotation);
    CHECK(code_of([] { vessel_box({2000.0, 100.0}, 40.0, kPaperTiming); }) == ErrorCode::annotation);
}

TEST_CASE("corner_anchors place 35 px boxes 30 px inside each edge") {
    const auto corners = corner_anchors(kPaperTiming);
    REQUIRE(corners.size() == 4);

    CHECK(corners[0].role == Role::corner_tl);
    CHECK(corners[0].bbox.x == doctest::Approx(30.0));
    CHECK(corners[0].bbox.y == doctest::Approx(30.0));
    CHECK(corners[0].bbox.w == doctest::Approx(35.0));
    CHECK(corners[0].bbox.h == doctest::Approx(35.0));
    CHECK(corners[0].trajectory.front().x == doctest::Approx(47.5));
    CHECK(corners[0].trajectory.front().y == doctest::Approx(47.5));

    CHECK(corners[1].role == Role::corner_tr);
    CHECK(corners[1].bbox.x == doctest::Approx(1024.0 - 30.0 - 35.0));
    CHECK(corners[1].bbox.y == doctest::Approx(30.0));
    CHECK(corners[2].role == Role::corner_bl);
    CHECK(corners[2].bbox.y == doctest::Approx(576.0 - 30.0 - 35.0));
    CHECK(corners[3].role == Role::corner_br);
    CHECK(corners[3].bbox.x == doctest::Approx(959.0));
    CHECK(corners[3].bbox.y == doctest::Approx(511.0));

    for (const auto& corner : corners) {
        CHECK(corner.trajectory.size() == 14);
        CHECK_FALSE(corner.id.has_value());
        for (const auto& p : corner.trajectory) {
            CHECK(p.x == corner.trajectory.front().x);
            CHECK(p.y == corner.trajectory.front().y);
        }
    }

    geo::ClipTiming tiny{0.0, 7.0, 14, 50, 50};
    CHECK(code_of([&] { corner_anchors(tiny); }) == ErrorCode::geometry);
}

TEST_CASE("build_payload assembles six entries in fixed order") {
    const ConditioningPayload payload = paper_payload();
    REQUIRE(payload.entries.size() == 6);
    CHECK(payload.entries[0].role == Role::vessel);
    CHECK(payload.entries[0].id == 99999);
    CHECK(payload.entries[1].role == Role::vessel);
    CHECK(payload.entries[1].id == 100000);
    CHECK(payload.entries[2].role == Role::corner_tl);
    CHECK(payload.entries[3].role == Role::corner_tr);
    CHECK(payload.entries[4].role == Role::corner_bl);
    CHECK(payload.entries[5].role == Role::corner_br);
    for (std::size_t i = 2; i < 6; ++i)
        for (const auto& p : payload.entries[i].trajectory)
            CHECK(p.x == payload.entries[i].trajectory.front().x);
}

TEST_CASE("build_payload enforces its contracts") {
    SUBCASE("short trajectory") {
        const BBox box_a = vessel_box({200.0, 200.0}, 40.0, kPaperTiming);
        const BBox box_b = vessel_box({500.0, 380.0}, 40.0, kPaperTiming);
        CHECK(code_of([&] {
                  build_payload(kPaperTiming,
                                {{{box_a, straight_trajectory(1, {200.0, 200.0}, 4.0, 13, 7.0)},
                                  {box_b, straight_trajectory(2, {500.0, 380.0}, 3.0, 14, 7.0)}}},
                                35.0, 30.0, "ref");
              }) == ErrorCode::contract);
    }
    SUBCASE("trajectory start away from the box centre") {
        const BBox box_a = vessel_box({200.0, 200.0}, 40.0, kPaperTiming);
        const BBox box_b = vessel_box({500.0, 380.0}, 40.0, kPaperTiming);
        CHECK(code_of([&] {
                  build_payload(kPaperTiming,
                                {{{box_a, straight_trajectory(1, {201.0, 200.0}, 4.0, 14, 7.0)},
                                  {box_b, straight_trajectory(2, {500.0, 380.0}, 3.0, 14, 7.0)}}},
                                35.0, 30.0, "ref");
              }) == ErrorCode::annotation);
    }
    SUBCASE("out-of-frame trajectory warns instead of failing") {
        const BBox box_a = vessel_box({1000.0, 200.0}, 40.0, kPaperTiming);
        const BBox box_b = vessel_box({500.0, 380.0}, 40.0, kPaperTiming);
        std::vector<std::string> warnings;
        const auto payload =
            build_payload(kPaperTiming,
                          {{{box_a, straight_trajectory(1, {1000.0, 200.0}, 10.0, 14, 7.0)},
                            {box_b, straight_trajectory(2, {500.0, 380.0}, 3.0, 14, 7.0)}}},
                          35.0, 30.0, "ref", &warnings);
        CHECK(payload.entries.size() == 6);
        REQUIRE(warnings.size() == 1);
        CHECK(warnings[0].find("leaves the frame") != std::string::npos);
    }
}

TEST_CASE("payload serialization round-trips byte-exactly") {
    const ConditioningPayload payload = paper_payload();
    const std::string bytes = serialize_payload(payload);
    CHECK(bytes.back() == '\n');
    CHECK(bytes.find("\"version\": 1") != std::string::npos);

    const ConditioningPayload back = parse_payload(bytes);
    CHECK(serialize_payload(back) == bytes);
    CHECK(back.reference_frame == payload.reference_frame);
    CHECK(back.timing.n_frames == 14);
    REQUIRE(back.entries.size() == 6);
    for (std::size_t i = 0; i < 6; ++i) {
        CHECK(back.entries[i].role == payload.entries[i].role);
        CHECK(back.entries[i].bbox.x == payload.entries[i].bbox.x);
        for (std::size_t k = 0; k < back.entries[i].trajectory.size(); ++k) {
            CHECK(back.entries[i].trajectory[k].x == payload.entries[i].trajectory[k].x);
            CHECK(back.entries[i].trajectory[k].y == payload.entries[i].trajectory[k].y);
        }
    }
}

TEST_CASE("parse_payload reports schema and invariant violations") {
    SUBCASE("missing entries key names the path") {
        try {
            parse_payload(R"({"version":1,"reference_frame":"r","width":1024,"height":576,"fps":7.0,"n_frames":14})");
            FAIL("expected schema error");
        } catch (const Error& err) {
            CHECK(err.code() == ErrorCode::schema);
            CHECK(std::string(err.what()).find("entries") != std::string::npos);
        }
    }
    SUBCASE("five entries violate the six-entry rule") {
        ConditioningPayload payload = paper_payload();
        std::string bytes = serialize_payload(payload);
        payload.entries.pop_back();
        // serialize_payload validates, so splice the JSON instead
        using nlohmann::ordered_json;
        ordered_json doc = ordered_json::parse(bytes);
        doc["entries"].erase(5);
        CHECK(code_of([&] { parse_payload(doc.dump()); }) == ErrorCode::validation);
    }
    SUBCASE("unknown role") {
        using nlohmann::ordered_json;
        ordered_json doc = ordered_json::parse(serialize_payload(paper_payload()));
        doc["entries"][2]["role"] = "corner_mid";
        CHECK(code_of([&] { parse_payload(doc.dump()); }) == ErrorCode::schema);
    }
    SUBCASE("wandering corner trajectory") {
        using nlohmann::ordered_json;
        ordered_json doc = ordered_json::parse(serialize_payload(paper_payload()));
        doc["entries"][2]["trajectory"][3][0] = 99.0;
        CHECK(code_of([&] { parse_payload(doc.dump()); }) == ErrorCode::validation);
    }
}

TEST_CASE("render_overlay draws only annotation pixels") {
    geo::ClipTiming timing{0.0, 7.0, 14, 320, 200};
    const BBox box_a = vessel_box({80.0, 70.0}, 24.0, timing);
    const BBox box_b = vessel_box({200.0, 120.0}, 24.0, timing);
    const auto payload =
        build_payload(timing,
                      {{{box_a, straight_trajectory(1, {80.0, 70.0}, 5.0, 14, 7.0)},
                        {box_b, straight_trajectory(2, {200.0, 120.0}, 0.0, 14, 7.0)}}},
                      20.0, 10.0, "ref");

    flow::Frame base = flow::Frame::make(320, 200, 3, 0.5);
    for (int y = 0; y < 200; ++y)
        for (int x = 0; x < 320; ++x) base.at(x, y, 1) = (x * 7 + y * 3) % 97 / 97.0;
    const flow::Frame before = base;

    const flow::Frame out = render_overlay(base, payload);

    SUBCASE("input frame is untouched") {
        CHECK(base.samples == before.samples);
    }
    SUBCASE("diff mask matches a black-canvas render") {
        // oracle: pixels painted on a black canvas are exactly the pixels
        // that may differ, and carry the same colors
        const flow::Frame black = flow::Frame::make(320, 200, 3, 0.0);
        const flow::Frame mask_render = render_overlay(black, payload);
        int drawn = 0;
        for (int y = 0; y < 200; ++y)
            for (int x = 0; x < 320; ++x) {
                const bool painted = mask_render.at(x, y, 0) != 0.0 ||
                                     mask_render.at(x, y, 1) != 0.0 ||
                                     mask_render.at(x, y, 2) != 0.0;
                for (int c = 0; c < 3; ++c) {
                    if (painted) {
                        CHECK(out.at(x, y, c) == mask_render.at(x, y, c));
                        ++drawn;
                    } else {
                        CHECK(out.at(x, y, c) == base.at(x, y, c));
                    }
                }
            }
        CHECK(drawn > 0);
    }
    SUBCASE("constant trajectory draws no polyline") {
        // vessel 2 never moves: its drawn pixels must all lie on the box outline
        ConditioningPayload only_static = payload;
        only_static.entries[0].trajectory.assign(14, only_static.entries[0].bbox.center());
        const flow::Frame black = flow::Frame::make(320, 200, 3, 0.0);
        const flow::Frame render = render_overlay(black, only_static);
        for (int y = 0; y < 200; ++y)
            for (int x = 0; x < 320; ++x) {
                if (render.at(x, y, 0) == 0.0 && render.at(x, y, 1) == 0.0 &&
                    render.at(x, y, 2) == 0.0)
                    continue;
                // every painted pixel sits within a pixel of some box border
                bool near_box = false;
                for (const auto& entry : only_static.entries) {
                    const auto& b = entry.bbox;
                    const bool on_x = x >= b.x - 1.0 && x <= b.x + b.w + 1.0;
                    const bool on_y = y >= b.y - 1.0 && y <= b.y + b.h + 1.0;
                    const bool edge_x = std::abs(x - b.x) <= 1.0 || std::abs(x - (b.x + b.w)) <= 1.0;
                    const bool edge_y = std::abs(y - b.y) <= 1.0 || std::abs(y - (b.y + b.h)) <= 1.0;
                    if ((edge_x && on_y) || (edge_y && on_x)) {
                        near_box = true;
                        break;
                    }
                }
                CHECK(near_box);
            }
    }
    SUBCASE("dimension mismatch") {
        const flow::Frame small = flow::Frame::make(64, 64, 3);
        CHECK(code_of([&] { render_overlay(small, payload); }) == ErrorCode::contract);
    }
}
