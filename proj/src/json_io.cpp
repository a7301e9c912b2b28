#include "morse_concordance/json_io.hpp"

#include <set>

#include "morse_concordance/error.hpp"

namespace morse_concordance::json_io {

namespace {

void only_keys(const json& j, std::initializer_list<const char*> allowed, const char* what) {
  if (!j.is_object()) throw Error("parse_error", std::string(what) + " must be a JSON object");
  const std::set<std::string> keys(allowed.begin(), allowed.end());
  for (const auto& [key, value] : j.items()) {
    if (!keys.count(key)) throw Error("parse_error", std::string(what) + ": unknown field \"" + key + "\"");
  }
}

template <class T>
T field(const json& j, const char* key, const char* what) {
  if (!j.contains(key)) throw Error("parse_error", std::string(what) + ": missing field \"" + key + "\"");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw Error("parse_error", std::string(what) + ": field \"" + key + "\" has the wrong type");
  }
}

int integer_field(const json& j, const char* key, const char* what) {
  const json& v = j.contains(key) ? j.at(key) : json();
  if (!v.is_number_integer())
    throw Error("parse_error", std::string(what) + ": field \"" + key + "\" must be an integer");
  return v.get<int>();
}

Side side_from(const std::string& s) {
  if (s == "bottom") return Side::bottom;
  if (s == "top") return Side::top;
  throw Error("parse_error", "side must be \"bottom\" or \"top\", got \"" + s + "\"");
}

}  // namespace

MorseFunctionRecord record_from_json(const json& j) {
  only_keys(j, {"dimension", "euler_characteristic", "orientable", "connected", "nu", "label"}, "record");
  MorseFunctionRecord r;
  r.manifold.dimension = integer_field(j, "dimension", "record");
  if (!j.contains("euler_characteristic") || !j.at("euler_characteristic").is_number_integer())
    throw Error("parse_error", "record: field \"euler_characteristic\" must be an integer");
  r.manifold.euler_characteristic = j.at("euler_characteristic").get<std::int64_t>();
  r.manifold.orientable = j.contains("orientable") ? field<bool>(j, "orientable", "record") : true;
  r.manifold.connected = j.contains("connected") ? field<bool>(j, "connected", "record") : true;
  if (!j.contains("nu") || !j.at("nu").is_array())
    throw Error("parse_error", "record: field \"nu\" must be an array of integers");
  std::vector<std::int64_t> nu;
  for (const auto& entry : j.at("nu")) {
    if (!entry.is_number_integer()) throw Error("parse_error", "record: \"nu\" entries must be integers");
    nu.push_back(entry.get<std::int64_t>());
  }
  r.critical_vector = CriticalVector(std::move(nu));
  r.label = j.contains("label") ? field<std::string>(j, "label", "record") : std::string();
  return r;
}

json to_json(const MorseFunctionRecord& r) {
  return {{"dimension", r.manifold.dimension},
          {"euler_characteristic", r.manifold.euler_characteristic},
          {"orientable", r.manifold.orientable},
          {"connected", r.manifold.connected},
          {"nu", to_json(r.critical_vector)},
          {"label", r.label}};
}

ConcordanceDiagram diagram_from_json(const json& j) {
  only_keys(j, {"n", "components"}, "diagram");
  ConcordanceDiagram d;
  d.n = integer_field(j, "n", "diagram");
  if (!j.contains("components") || !j.at("components").is_array())
    throw Error("parse_error", "diagram: field \"components\" must be an array");
  for (const auto& jc : j.at("components")) {
    only_keys(jc, {"shape", "endpoints", "segments", "cusps"}, "component");
    DiagramComponent c;
    const auto shape = field<std::string>(jc, "shape", "component");
    if (shape == "arc") {
      c.shape = Shape::arc;
    } else if (shape == "circle") {
      c.shape = Shape::circle;
    } else {
      throw Error("parse_error", "component: shape must be \"arc\" or \"circle\", got \"" + shape + "\"");
    }
    for (const char* key : {"endpoints", "segments", "cusps"}) {
      if (jc.contains(key) && !jc.at(key).is_array())
        throw Error("parse_error", std::string("component: field \"") + key + "\" must be an array");
    }
    if (jc.contains("endpoints")) {
      for (const auto& je : jc.at("endpoints")) {
        only_keys(je, {"side", "index"}, "endpoint");
        c.endpoints.push_back({side_from(field<std::string>(je, "side", "endpoint")),
                               integer_field(je, "index", "endpoint")});
      }
    }
    if (jc.contains("segments")) {
      for (const auto& js : jc.at("segments")) {
        only_keys(js, {"abs_index", "turnings"}, "segment");
        c.segments.push_back({integer_field(js, "abs_index", "segment"), integer_field(js, "turnings", "segment")});
      }
    }
    if (jc.contains("cusps")) {
      for (const auto& jk : jc.at("cusps")) {
        only_keys(jk, {"abs_index"}, "cusp");
        c.cusps.push_back({integer_field(jk, "abs_index", "cusp")});
      }
    }
    d.components.push_back(std::move(c));
  }
  return d;
}

json to_json(const ConcordanceDiagram& d) {
  json components = json::array();
  for (const auto& c : d.components) {
    json endpoints = json::array(), segments = json::array(), cusps = json::array();
    for (const auto& e : c.endpoints)
      endpoints.push_back({{"side", e.side == Side::bottom ? "bottom" : "top"}, {"index", e.morse_index}});
    for (const auto& s : c.segments) segments.push_back({{"abs_index", s.absolute_index}, {"turnings", s.turning_count}});
    for (const auto& k : c.cusps) cusps.push_back({{"abs_index", k.absolute_index}});
    components.push_back({{"shape", c.shape == Shape::arc ? "arc" : "circle"},
                          {"endpoints", endpoints},
                          {"segments", segments},
                          {"cusps", cusps}});
  }
  return {{"n", d.n}, {"components", components}};
}

json to_json(const CriticalVector& v) {
  json out = json::array();
  for (auto x : v.counts()) out.push_back(x);
  return out;
}

json to_json(const ConcordanceClass& c) {
  json out = {{"n", c.n}, {"phi", c.phi}, {"phi_first_index", phi_first_index(c.n)}};
  out["sigma"] = c.sigma ? json(c.sigma->value()) : json(nullptr);
  return out;
}

json to_json(const ValidationReport& r) {
  json violations = json::array(), warnings = json::array();
  for (const auto& v : r.violations) violations.push_back({{"code", v.code}, {"detail", v.detail}});
  for (const auto& v : r.warnings) warnings.push_back({{"code", v.code}, {"detail", v.detail}});
  return {{"valid", r.ok()}, {"violations", violations}, {"warnings", warnings}};
}

json to_json(const DiagramReport& r) {
  json violations = json::array();
  for (const auto& v : r.violations) {
    violations.push_back(
        {{"code", v.code}, {"component", v.component}, {"position", v.position}, {"detail", v.detail}});
  }
  return {{"valid", r.ok()}, {"violations", violations}};
}

json to_json(const CongruenceReport& r) {
  json congruences = json::array();
  for (const auto& c : r.congruences) {
    json entry = {{"name", c.name}, {"statement", c.statement}, {"lhs", c.lhs},
                  {"rhs", c.rhs},   {"applies", c.applies},     {"holds", c.holds}};
    if (c.component >= 0) entry["component"] = c.component;
    congruences.push_back(entry);
  }
  return {{"n", r.n},
          {"bottom", to_json(r.bottom)},
          {"top", to_json(r.top)},
          {"congruences", congruences},
          {"violations", r.violations()}};
}

}  // namespace morse_concordance::json_io
