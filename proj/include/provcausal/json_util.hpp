#pragma once

#include <initializer_list>
#include <string>

#include <json.hpp>

#include "provcausal/domain.hpp"

// strict json access helpers: every reader in this project rejects
// unknown fields so schema drift is caught early
namespace provcausal::jutil {

inline void requireObject(const nlohmann::json& j, const std::string& where) {
  if (!j.is_object()) throw ParseError(where + ": expected an object");
}

inline const nlohmann::json& getField(const nlohmann::json& j, const char* key,
                                      const std::string& where) {
  requireObject(j, where);
  auto it = j.find(key);
  if (it == j.end()) throw ParseError(where + ": missing field '" + key + "'");
  return *it;
}

inline void checkKeys(const nlohmann::json& j,
                      std::initializer_list<const char*> allowed,
                      const std::string& where) {
  requireObject(j, where);
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const char* k : allowed)
      if (it.key() == k) { ok = true; break; }
    if (!ok) throw ParseError(where + ": unknown field '" + it.key() + "'");
  }
}

inline std::string getString(const nlohmann::json& j, const char* key,
                             const std::string& where) {
  const auto& f = getField(j, key, where);
  if (!f.is_string()) throw ParseError(where + ": field '" + key + "' must be a string");
  return f.get<std::string>();
}

inline int getInt(const nlohmann::json& j, const char* key, const std::string& where) {
  const auto& f = getField(j, key, where);
  if (!f.is_number_integer())
    throw ParseError(where + ": field '" + key + "' must be an integer");
  return f.get<int>();
}

inline bool getBool(const nlohmann::json& j, const char* key, const std::string& where) {
  const auto& f = getField(j, key, where);
  if (!f.is_boolean()) throw ParseError(where + ": field '" + key + "' must be a bool");
  return f.get<bool>();
}

inline const nlohmann::json& getArray(const nlohmann::json& j, const char* key,
                                      const std::string& where) {
  const auto& f = getField(j, key, where);
  if (!f.is_array()) throw ParseError(where + ": field '" + key + "' must be an array");
  return f;
}

inline nlohmann::json parse(const std::string& text, const std::string& where) {
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    // e.byte gives the offset; surface it so bad files are easy to fix
    throw ParseError(where + ": json parse error at byte " + std::to_string(e.byte) +
                     ": " + e.what());
  }
}

}  // namespace provcausal::jutil
