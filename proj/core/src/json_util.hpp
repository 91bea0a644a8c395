#pragma once

// Shared helpers for schema-checked JSON document parsing. Errors name the
// offending path so CLI users can locate the problem in their file.

#include <cstdint>
#include <string>
#include <string_view>

#include "json.hpp"
#include "seawake/errors.hpp"

namespace seawake::jsonutil {

using ordered_json = nlohmann::ordered_json;

[[noreturn]] inline void schema_fail(const std::string& module, const std::string& path,
                                     const std::string& what) {
    throw Error(ErrorCode::schema, module + ": " + path + ": " + what);
}

inline ordered_json parse_document(const std::string& module, std::string_view text) {
    ordered_json doc = ordered_json::parse(text, nullptr, false);
    if (doc.is_discarded())
        throw Error(ErrorCode::schema, module + ": input is not valid JSON");
    return doc;
}

inline const ordered_json& require_key(const std::string& module, const ordered_json& obj,
                                       const std::string& path, const std::string& key) {
    if (!obj.is_object()) schema_fail(module, path, "expected an object");
    auto it = obj.find(key);
    if (it == obj.end())
        schema_fail(module, path.empty() ? key : path + "." + key, "missing key '" + key + "'");
    return *it;
}

inline double require_number(const std::string& module, const ordered_json& v,
                             const std::string& path) {
    if (!v.is_number()) schema_fail(module, path, "expected a number");
    return v.get<double>();
}

inline std::int64_t require_integer(const std::string& module, const ordered_json& v,
                                    const std::string& path) {
    if (!v.is_number_integer()) schema_fail(module, path, "expected an integer");
    return v.get<std::int64_t>();
}

inline std::string require_string(const std::string& module, const ordered_json& v,
                                  const std::string& path) {
    if (!v.is_string()) schema_fail(module, path, "expected a string");
    return v.get<std::string>();
}

inline const ordered_json& require_array(const std::string& module, const ordered_json& v,
                                         const std::string& path) {
    if (!v.is_array()) schema_fail(module, path, "expected an array");
    return v;
}

}  // namespace seawake::jsonutil
