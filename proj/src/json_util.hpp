// SPDX-License-Identifier: Apache-2.0
//
// nlohmann adapters shared by the serializers. Internal header.
//
#pragma once

#include <json.hpp>

#include "bacc/error.hpp"
#include "bacc/transform.hpp"

namespace bacc {

using Json = nlohmann::ordered_json;

void to_json(Json &j, const MatchingTransform &t);
void from_json(const Json &j, MatchingTransform &t);

/// Parses text, mapping nlohmann exceptions to ParseFailure.
Json parse_json(std::string_view text, const char *what);

/// Typed field access that reports SchemaMismatch instead of nlohmann errors.
template <typename T> T field(const Json &j, const char *key) {
  if (!j.is_object() || !j.contains(key))
    fail(ErrorCode::SchemaMismatch, std::string("missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception &e) {
    fail(ErrorCode::SchemaMismatch, std::string("field '") + key + "': " + e.what());
  }
}

} // namespace bacc
