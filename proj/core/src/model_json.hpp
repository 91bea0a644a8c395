#pragma once

// Internal bridge: CameraFrameModel <-> parsed JSON document, shared between
// the geoproject serializer and the pipeline config loader.

#include "json.hpp"
#include "seawake/geoproject.hpp"

namespace seawake::geo {

CameraFrameModel model_from_document(const nlohmann::ordered_json& doc);
nlohmann::ordered_json model_to_document(const CameraFrameModel& model);

}  // namespace seawake::geo
