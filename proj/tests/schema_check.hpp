#pragma once

// Minimal JSON-schema checker covering the subset used by schema/report.schema.json:
// type, enum, required, properties, additionalProperties (boolean), items.

#include <string>

#include <json.hpp>

namespace lassocert::testutil {

using nlohmann::json;

inline bool type_matches(const json& value, const std::string& type) {
  if (type == "object") return value.is_object();
  if (type == "array") return value.is_array();
  if (type == "string") return value.is_string();
  if (type == "boolean") return value.is_boolean();
  if (type == "number") return value.is_number();
  if (type == "integer") return value.is_number_integer() || value.is_number_unsigned();
  if (type == "null") return value.is_null();
  return false;
}

inline bool validate_schema(const json& value, const json& schema, std::string& error,
                            const std::string& path = "$") {
  if (schema.contains("enum")) {
    for (const json& candidate : schema["enum"])
      if (candidate == value) return true;
    error = path + ": value not in enum";
    return false;
  }
  if (schema.contains("type") && !type_matches(value, schema["type"].get<std::string>())) {
    error = path + ": expected type " + schema["type"].get<std::string>();
    return false;
  }
  if (value.is_object()) {
    if (schema.contains("required")) {
      for (const json& key : schema["required"]) {
        if (!value.contains(key.get<std::string>())) {
          error = path + ": missing required key " + key.get<std::string>();
          return false;
        }
      }
    }
    const json props = schema.value("properties", json::object());
    for (const auto& [key, sub] : value.items()) {
      if (props.contains(key)) {
        if (!validate_schema(sub, props[key], error, path + "." + key)) return false;
      } else if (schema.value("additionalProperties", json(true)) == json(false)) {
        error = path + ": unexpected key " + key;
        return false;
      }
    }
  }
  if (value.is_array() && schema.contains("items")) {
    for (std::size_t i = 0; i < value.size(); ++i)
      if (!validate_schema(value[i], schema["items"], error, path + "[" + std::to_string(i) + "]"))
        return false;
  }
  return true;
}

}  // namespace lassocert::testutil
