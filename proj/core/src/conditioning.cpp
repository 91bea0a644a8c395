#include "seawake/conditioning.hpp"

#include <algorithm>
#include <cmath>

#include "json_util.hpp"
#include "seawake/errors.hpp"

namespace seawake::conditioning {

namespace {

constexpr double kAnchorTolerancePx = 1e-6;

[[noreturn]] void fail(ErrorCode code, const std::string& msg) {
    throw Error(code, "conditioning: " + msg);
}

bool intersects_frame(const BBox& box, const geo::ClipTiming& timing) {
    return box.x < timing.width && box.x + box.w > 0.0 && box.y < timing.height &&
           box.y + box.h > 0.0;
}

Role role_from_name(const std::string& name, const std::string& path) {
    if (name == "vessel") return Role::vessel;
    if (name == "corner_tl") return Role::corner_tl;
    if (name == "corner_tr") return Role::corner_tr;
    if (name == "corner_bl") return Role::corner_bl;
    if (name == "corner_br") return Role::corner_br;
    throw Error(ErrorCode::schema, "conditioning: " + path + ": unknown role '" + name + "'");
}

void validate_payload(const ConditioningPayload& payload) {
    payload.timing.validate();
    if (payload.entries.size() != 6)
        fail(ErrorCode::validation, "payload must contain exactly six entries, got " +
                                        std::to_string(payload.entries.size()));
    int vessels = 0;
    std::array<int, 4> corner_counts{0, 0, 0, 0};
    for (std::size_t i = 0; i < payload.entries.size(); ++i) {
        const PayloadEntry& entry = payload.entries[i];
        const std::string where = "entry " + std::to_string(i) + " (" + role_name(entry.role) + ")";
        if (entry.role == Role::vessel)
            ++vessels;
        else
            ++corner_counts[static_cast<std::size_t>(entry.role) - 1];
        if (!(entry.bbox.w > 0.0 && entry.bbox.h > 0.0))
            fail(ErrorCode::validation, where + ": box sides must be positive");
        if (!intersects_frame(entry.bbox, payload.timing))
            fail(ErrorCode::validation, where + ": box does not intersect the frame");
        if (entry.trajectory.size() != static_cast<std::size_t>(payload.timing.n_frames))
            fail(ErrorCode::validation,
                 where + ": trajectory length " + std::to_string(entry.trajectory.size()) +
                     " != n_frames " + std::to_string(payload.timing.n_frames));
        if (entry.role != Role::vessel) {
            for (const PixelPoint& p : entry.trajectory)
                if (p.x != entry.trajectory.front().x || p.y != entry.trajectory.front().y)
                    fail(ErrorCode::validation, where + ": corner trajectory must be constant");
        } else {
            const PixelPoint c = entry.bbox.center();
            if (pixel_distance(entry.trajectory.front(), c) > kAnchorTolerancePx)
                fail(ErrorCode::validation,
                     where + ": first trajectory point does not coincide with the box centre");
        }
    }
    if (vessels != 2) fail(ErrorCode::validation, "payload must contain exactly two vessel entries");
    for (int c : corner_counts)
        if (c != 1) fail(ErrorCode::validation, "payload must contain each corner role exactly once");
}

}  // namespace

const char* role_name(Role role) {
    switch (role) {
        case Role::vessel: return "vessel";
        case Role::corner_tl: return "corner_tl";
        case Role::corner_tr: return "corner_tr";
        case Role::corner_bl: return "corner_bl";
        case Role::corner_br: return "corner_br";
    }
    return "vessel";
}

BBox vessel_box(const PixelPoint& center, double size, const geo::ClipTiming& timing) {
    if (!(size > 0.0)) fail(ErrorCode::annotation, "vessel box size must be positive");
    if (!timing.contains(center))
        fail(ErrorCode::annotation, "vessel centre (" + std::to_string(center.x) + ", " +
                                        std::to_string(center.y) + ") lies outside the frame");
    return {center.x - size / 2.0, center.y - size / 2.0, size, size};
}

std::array<PayloadEntry, 4> corner_anchors(const geo::ClipTiming& timing, double box_size,
                                           double inset) {
    timing.validate();
    if (!(box_size > 0.0) || inset < 0.0)
        fail(ErrorCode::annotation, "corner box size must be positive and inset non-negative");
    if (timing.width <= 2.0 * inset + box_size || timing.height <= 2.0 * inset + box_size)
        fail(ErrorCode::geometry, "frame " + std::to_string(timing.width) + "x" +
                                      std::to_string(timing.height) +
                                      " too small for corner boxes (size " + std::to_string(box_size) +
                                      ", inset " + std::to_string(inset) + ")");

    const double far_x = timing.width - inset - box_size;
    const double far_y = timing.height - inset - box_size;
    const std::array<std::pair<Role, BBox>, 4> boxes{{
        {Role::corner_tl, {inset, inset, box_size, box_size}},
        {Role::corner_tr, {far_x, inset, box_size, box_size}},
        {Role::corner_bl, {inset, far_y, box_size, box_size}},
        {Role::corner_br, {far_x, far_y, box_size, box_size}},
    }};

    std::array<PayloadEntry, 4> out;
    for (std::size_t i = 0; i < 4; ++i) {
        out[i].role = boxes[i].first;
        out[i].id = std::nullopt;
        out[i].bbox = boxes[i].second;
        out[i].trajectory.assign(static_cast<std::size_t>(timing.n_frames),
                                 boxes[i].second.center());
    }
    return out;
}

ConditioningPayload build_payload(const geo::ClipTiming& timing,
                                  const std::array<std::pair<BBox, geo::PixelTrajectory>, 2>& vessels,
                                  double corner_size, double inset, std::string reference_frame,
                                  std::vector<std::string>* warnings) {
    timing.validate();
    ConditioningPayload payload;
    payload.timing = timing;
    payload.reference_frame = std::move(reference_frame);

    for (const auto& [box, trajectory] : vessels) {
        if (trajectory.points.size() != static_cast<std::size_t>(timing.n_frames))
            fail(ErrorCode::contract,
                 "vessel " + std::to_string(trajectory.vessel_id) + " trajectory has " +
                     std::to_string(trajectory.points.size()) + " points, expected " +
                     std::to_string(timing.n_frames));
        const PixelPoint c = box.center();
        if (pixel_distance(trajectory.points.front(), c) > kAnchorTolerancePx)
            fail(ErrorCode::annotation,
                 "vessel " + std::to_string(trajectory.vessel_id) +
                     " trajectory does not start at its box centre");
        PayloadEntry entry;
        entry.role = Role::vessel;
        entry.id = trajectory.vessel_id;
        entry.bbox = box;
        entry.trajectory = trajectory.points;
        if (warnings) {
            for (std::size_t i = 0; i < entry.trajectory.size(); ++i) {
                if (!timing.contains(entry.trajectory[i])) {
                    warnings->push_back("vessel " + std::to_string(trajectory.vessel_id) +
                                        " leaves the frame at point " + std::to_string(i));
                    break;
                }
            }
        }
        payload.entries.push_back(std::move(entry));
    }

    for (auto& corner : corner_anchors(timing, corner_size, inset))
        payload.entries.push_back(std::move(corner));

    validate_payload(payload);
    return payload;
}

std::string serialize_payload(const ConditioningPayload& payload) {
    validate_payload(payload);
    using jsonutil::ordered_json;
    ordered_json doc;
    doc["version"] = 1;
    doc["reference_frame"] = payload.reference_frame;
    doc["width"] = payload.timing.width;
    doc["height"] = payload.timing.height;
    doc["fps"] = payload.timing.fps;
    doc["n_frames"] = payload.timing.n_frames;
    ordered_json entries = ordered_json::array();
    for (const PayloadEntry& entry : payload.entries) {
        ordered_json e;
        e["role"] = role_name(entry.role);
        if (entry.id)
            e["id"] = *entry.id;
        else
            e["id"] = nullptr;
        e["bbox"] = {entry.bbox.x, entry.bbox.y, entry.bbox.w, entry.bbox.h};
        ordered_json traj = ordered_json::array();
        for (const PixelPoint& p : entry.trajectory) traj.push_back({p.x, p.y});
        e["trajectory"] = std::move(traj);
        entries.push_back(std::move(e));
    }
    doc["entries"] = std::move(entries);
    return doc.dump(2) + "\n";
}

ConditioningPayload parse_payload(std::string_view bytes) {
    namespace ju = jsonutil;
    const std::string module = "conditioning";
    const auto doc = ju::parse_document(module, bytes);

    const auto version = ju::require_integer(module, ju::require_key(module, doc, "", "version"),
                                             "version");
    if (version != 1)
        ju::schema_fail(module, "version", "unsupported version " + std::to_string(version));

    ConditioningPayload payload;
    payload.reference_frame =
        ju::require_string(module, ju::require_key(module, doc, "", "reference_frame"),
                           "reference_frame");
    payload.timing.width = static_cast<int>(
        ju::require_integer(module, ju::require_key(module, doc, "", "width"), "width"));
    payload.timing.height = static_cast<int>(
        ju::require_integer(module, ju::require_key(module, doc, "", "height"), "height"));
    payload.timing.fps = ju::require_number(module, ju::require_key(module, doc, "", "fps"), "fps");
    payload.timing.n_frames = static_cast<int>(
        ju::require_integer(module, ju::require_key(module, doc, "", "n_frames"), "n_frames"));

    const auto& entries = ju::require_array(module, ju::require_key(module, doc, "", "entries"),
                                            "entries");
    for (std::size_t i = 0; i < entries.size(); ++i) {
        const std::string path = "entries[" + std::to_string(i) + "]";
        const auto& e = entries[i];
        PayloadEntry entry;
        entry.role = role_from_name(
            ju::require_string(module, ju::require_key(module, e, path, "role"), path + ".role"),
            path + ".role");
        const auto& id = ju::require_key(module, e, path, "id");
        if (!id.is_null())
            entry.id = ju::require_integer(module, id, path + ".id");
        const auto& bbox = ju::require_array(module, ju::require_key(module, e, path, "bbox"),
                                             path + ".bbox");
        if (bbox.size() != 4) ju::schema_fail(module, path + ".bbox", "expected [x, y, w, h]");
        entry.bbox = {ju::require_number(module, bbox[0], path + ".bbox[0]"),
                      ju::require_number(module, bbox[1], path + ".bbox[1]"),
                      ju::require_number(module, bbox[2], path + ".bbox[2]"),
                      ju::require_number(module, bbox[3], path + ".bbox[3]")};
        const auto& traj = ju::require_array(module, ju::require_key(module, e, path, "trajectory"),
                                             path + ".trajectory");
        for (std::size_t j = 0; j < traj.size(); ++j) {
            const std::string ppath = path + ".trajectory[" + std::to_string(j) + "]";
            const auto& pt = ju::require_array(module, traj[j], ppath);
            if (pt.size() != 2) ju::schema_fail(module, ppath, "expected [x, y]");
            entry.trajectory.push_back({ju::require_number(module, pt[0], ppath + "[0]"),
                                        ju::require_number(module, pt[1], ppath + "[1]")});
        }
        payload.entries.push_back(std::move(entry));
    }

    validate_payload(payload);
    return payload;
}

// --- overlay rendering ---

namespace {

struct Rgb {
    double r, g, b;
};

void put_pixel(flow::Frame& frame, int x, int y, const Rgb& color) {
    if (x < 0 || y < 0 || x >= frame.width || y >= frame.height) return;
    frame.at(x, y, 0) = color.r;
    frame.at(x, y, 1) = color.g;
    frame.at(x, y, 2) = color.b;
}

void draw_line(flow::Frame& frame, double x0, double y0, double x1, double y1, const Rgb& color) {
    const double dx = x1 - x0;
    const double dy = y1 - y0;
    const int steps = std::max(1, static_cast<int>(std::ceil(std::max(std::abs(dx), std::abs(dy)))));
    for (int i = 0; i <= steps; ++i) {
        const double u = static_cast<double>(i) / steps;
        put_pixel(frame, static_cast<int>(std::lround(x0 + u * dx)),
                  static_cast<int>(std::lround(y0 + u * dy)), color);
    }
}

void draw_box(flow::Frame& frame, const BBox& box, const Rgb& color) {
    const double x0 = box.x, y0 = box.y, x1 = box.x + box.w, y1 = box.y + box.h;
    draw_line(frame, x0, y0, x1, y0, color);
    draw_line(frame, x1, y0, x1, y1, color);
    draw_line(frame, x1, y1, x0, y1, color);
    draw_line(frame, x0, y1, x0, y0, color);
}

Rgb entry_color(const PayloadEntry& entry, int vessel_index) {
    if (entry.role != Role::vessel) return {1.0, 0.2, 0.2};
    return vessel_index == 0 ? Rgb{0.0, 1.0, 0.0} : Rgb{1.0, 1.0, 0.0};
}

}  // namespace

flow::Frame render_overlay(const flow::Frame& frame, const ConditioningPayload& payload) {
    if (frame.width != payload.timing.width || frame.height != payload.timing.height)
        fail(ErrorCode::contract, "overlay frame dimensions do not match the payload timing");

    flow::Frame out = frame;
    if (out.channels == 1) {
        flow::Frame rgb = flow::Frame::make(frame.width, frame.height, 3);
        for (int y = 0; y < frame.height; ++y)
            for (int x = 0; x < frame.width; ++x)
                for (int c = 0; c < 3; ++c) rgb.at(x, y, c) = frame.at(x, y);
        out = std::move(rgb);
    }

    int vessel_index = 0;
    for (const PayloadEntry& entry : payload.entries) {
        const Rgb color = entry_color(entry, vessel_index);
        if (entry.role == Role::vessel) ++vessel_index;
        draw_box(out, entry.bbox, color);

        // Polyline only when the trajectory actually moves.
        bool moves = false;
        for (const PixelPoint& p : entry.trajectory)
            if (p.x != entry.trajectory.front().x || p.y != entry.trajectory.front().y) {
                moves = true;
                break;
            }
        if (!moves) continue;
        for (std::size_t i = 1; i < entry.trajectory.size(); ++i)
            draw_line(out, entry.trajectory[i - 1].x, entry.trajectory[i - 1].y,
                      entry.trajectory[i].x, entry.trajectory[i].y, color);

        // Arrowhead at the final point, oriented along the last moving segment.
        const PixelPoint tip = entry.trajectory.back();
        PixelPoint from = tip;
        for (std::size_t i = entry.trajectory.size(); i-- > 1;) {
            if (entry.trajectory[i - 1].x != tip.x || entry.trajectory[i - 1].y != tip.y) {
                from = entry.trajectory[i - 1];
                break;
            }
        }
        const double angle = std::atan2(tip.y - from.y, tip.x - from.x);
        const double wing = 6.0;
        for (const double spread : {2.6, -2.6}) {
            draw_line(out, tip.x, tip.y, tip.x + wing * std::cos(angle + spread),
                      tip.y + wing * std::sin(angle + spread), color);
        }
    }
    return out;
}

}  // namespace seawake::conditioning
