#include "bundle_lab_cli/schema.hpp"

#include <algorithm>
#include <map>

#include "schemas_embedded.hpp"

namespace bundle_lab::cli {

namespace {

bool has_type(const Json& v, const std::string& t) {
  if (t == "object") return v.is_object();
  if (t == "array") return v.is_array();
  if (t == "string") return v.is_string();
  if (t == "boolean") return v.is_boolean();
  if (t == "null") return v.is_null();
  if (t == "integer") return v.is_number_integer();
  if (t == "number") return v.is_number();
  return false;
}

void check(const Json& v, const Json& s, const Json& root, const std::string& path, std::vector<std::string>& errs) {
  if (s.contains("$ref")) {
    const std::string ref = s["$ref"].get<std::string>();
    const std::string prefix = "#/definitions/";
    if (ref.rfind(prefix, 0) != 0 || !root.contains("definitions") || !root["definitions"].contains(ref.substr(prefix.size()))) {
      errs.push_back(path + ": unresolvable $ref " + ref);
      return;
    }
    check(v, root["definitions"][ref.substr(prefix.size())], root, path, errs);
    return;
  }
  if (s.contains("type")) {
    const Json& t = s["type"];
    bool ok = false;
    if (t.is_string()) {
      ok = has_type(v, t.get<std::string>());
    } else {
      for (const auto& x : t) ok = ok || has_type(v, x.get<std::string>());
    }
    if (!ok) {
      errs.push_back(path + ": expected type " + t.dump() + ", got " + v.type_name());
      return;
    }
  }
  if (s.contains("enum")) {
    const Json& e = s["enum"];
    if (std::find(e.begin(), e.end(), v) == e.end()) errs.push_back(path + ": value " + v.dump() + " not in enum");
  }
  if (s.contains("minimum") && v.is_number() && v.get<double>() < s["minimum"].get<double>())
    errs.push_back(path + ": below minimum " + s["minimum"].dump());
  if (v.is_object()) {
    if (s.contains("required"))
      for (const auto& r : s["required"])
        if (!v.contains(r.get<std::string>())) errs.push_back(path + ": missing required key " + r.get<std::string>());
    const Json props = s.value("properties", Json::object());
    for (auto it = v.begin(); it != v.end(); ++it) {
      if (props.contains(it.key())) {
        check(it.value(), props[it.key()], root, path + "/" + it.key(), errs);
      } else if (s.contains("additionalProperties")) {
        const Json& ap = s["additionalProperties"];
        if (ap.is_boolean() && !ap.get<bool>()) {
          errs.push_back(path + ": unexpected key " + it.key());
        } else if (ap.is_object()) {
          check(it.value(), ap, root, path + "/" + it.key(), errs);
        }
      }
    }
  }
  if (v.is_array() && s.contains("items")) {
    for (std::size_t i = 0; i < v.size(); ++i) check(v[i], s["items"], root, path + "/" + std::to_string(i), errs);
  }
}

const std::map<std::string, Json>& parsed() {
  static const std::map<std::string, Json> m = [] {
    std::map<std::string, Json> out;
    for (const auto& [name, text] : embedded_schemas()) out.emplace(name, Json::parse(text));
    return out;
  }();
  return m;
}

}  // namespace

std::vector<std::string> validate(const Json& doc, const Json& schema) {
  std::vector<std::string> errs;
  check(doc, schema, schema, "", errs);
  return errs;
}

const Json& schema_for(const std::string& name) {
  const auto& m = parsed();
  auto it = m.find(name);
  if (it == m.end()) throw Error("no published schema named " + name);
  return it->second;
}

std::vector<std::string> schema_names() {
  std::vector<std::string> out;
  for (const auto& [k, v] : parsed()) out.push_back(k);
  return out;
}

}  // namespace bundle_lab::cli
