#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "seawake/frame.hpp"
#include "seawake/geoproject.hpp"
#include "seawake/types.hpp"

namespace seawake::conditioning {

// Axis-aligned box, top-left anchored, pixels.
struct BBox {
    double x = 0.0;
    double y = 0.0;
    double w = 0.0;
    double h = 0.0;

    PixelPoint center() const { return {x + w / 2.0, y + h / 2.0}; }
};

enum class Role { vessel, corner_tl, corner_tr, corner_bl, corner_br };

const char* role_name(Role role);

// One (bounding box, trajectory) pair of the conditioning payload.
struct PayloadEntry {
    Role role = Role::vessel;
    std::optional<std::int64_t> id;  // vessel id; corners carry none
    BBox bbox;
    std::vector<PixelPoint> trajectory;  // length N
};

// The full six-entry conditioning input: two vessels plus four constant
// corner anchors, ordered [vessel, vessel, TL, TR, BL, BR].
struct ConditioningPayload {
    geo::ClipTiming timing;
    std::string reference_frame;
    std::vector<PayloadEntry> entries;
};

// Square box of side `size` centred on `center`. Throws Error(annotation)
// when the centre lies outside the frame or size is not positive.
BBox vessel_box(const PixelPoint& center, double size, const geo::ClipTiming& timing);

// Four constant-trajectory corner entries; each box's outer corner sits
// `inset` px from the two nearest frame edges. Throws Error(geometry) when
// the frame cannot fit them.
std::array<PayloadEntry, 4> corner_anchors(const geo::ClipTiming& timing, double box_size = 35.0,
                                           double inset = 30.0);

// Assembles the six-entry payload. Vessel trajectories must have length
// timing.n_frames and start at their box centre (within 1e-6 px). Trajectory
// points outside the frame are permitted; a note is appended to *warnings
// when provided.
ConditioningPayload build_payload(const geo::ClipTiming& timing,
                                  const std::array<std::pair<BBox, geo::PixelTrajectory>, 2>& vessels,
                                  double corner_size, double inset, std::string reference_frame,
                                  std::vector<std::string>* warnings = nullptr);

// UTF-8 JSON with LF line endings and deterministic key order:
// {"version": 1, "reference_frame", "width", "height", "fps", "n_frames",
//  "entries": [{"role", "id", "bbox": [x,y,w,h], "trajectory": [[x,y],...]}]}
std::string serialize_payload(const ConditioningPayload& payload);

// Strict parse; schema violations name the offending path, invariant
// violations (entry count, roles, constant corners) throw Error(validation).
ConditioningPayload parse_payload(std::string_view bytes);

// Copy of `frame` with each box outlined and each trajectory drawn as a
// polyline ending in an arrowhead; constant trajectories draw no polyline.
// 1-channel input is promoted to RGB.
flow::Frame render_overlay(const flow::Frame& frame, const ConditioningPayload& payload);

}  // namespace seawake::conditioning
