#include "ct/io.hpp"

#include <fstream>
#include <sstream>

#include "ct/errors.hpp"

namespace ct {

namespace {

template <class T>
T field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key))
    throw ParseError(std::string("missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ParseError(std::string("field '") + key + "' has the wrong type");
  }
}

int parse_index(const std::string& s, const std::string& whole) {
  if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
    throw ParseError("bad curve index: " + whole);
  return std::stoi(s);
}

}  // namespace

json to_json(const AugMarking& m) {
  json out;
  out["glue"] = json::array();
  for (const auto& g : m.glue) out["glue"].push_back({{"tau", g.tau}, {"D", g.D}});
  out["slots"] = json::array();
  for (const auto& s : m.slots)
    out["slots"].push_back(
        {{"base", to_string(s.base)}, {"trans", to_string(s.trans)}, {"D", s.D}});
  return out;
}

AugMarking marking_from_json(const json& j) {
  if (!j.is_object()) throw ParseError("marking must be a JSON object");
  AugMarking m;
  for (const auto& g : field<json>(j, "glue"))
    m.glue.push_back(GlueData{field<std::int64_t>(g, "tau"), field<int>(g, "D")});
  for (const auto& s : field<json>(j, "slots"))
    m.slots.push_back(SlotData{parse_slope(field<std::string>(s, "base")),
                               parse_slope(field<std::string>(s, "trans")),
                               field<int>(s, "D")});
  validate(m);
  return m;
}

CurveRef parse_curve(const std::string& text) {
  if (text.rfind("glue", 0) == 0) return CurveRef::glue(parse_index(text.substr(4), text));
  if (text.rfind("slot", 0) == 0) {
    auto colon = text.find(':');
    if (colon == std::string::npos) throw ParseError("slot curve needs ':': " + text);
    return CurveRef::in_slot(parse_index(text.substr(4, colon - 4), text),
                             parse_slope(text.substr(colon + 1)));
  }
  throw ParseError("unknown curve: " + text);
}

json to_json(const Simplex& s) {
  json out = json::array();
  for (const auto& c : s.curves) out.push_back(to_string(c));
  return out;
}

Simplex simplex_from_json(const json& j) {
  if (!j.is_array()) throw ParseError("simplex must be an array of curves");
  Simplex s;
  for (const auto& c : j) {
    if (!c.is_string()) throw ParseError("curve entries must be strings");
    s.curves.push_back(parse_curve(c.get<std::string>()));
  }
  return s;
}

json to_json(const std::vector<FormulaTerm>& terms) {
  json out = json::array();
  for (const auto& t : terms)
    out.push_back({{"subsurface", to_string(t.y)}, {"raw", t.raw}, {"kept", t.kept}});
  return out;
}

json to_json(const ReductionTrace& t) {
  json out;
  out["version"] = t.version;
  out["initial"] = to_json(t.initial);
  out["initial_distance"] = t.initial_distance;
  out["links"] = t.links;
  out["stages"] = json::array();
  for (const auto& s : t.stages)
    out["stages"].push_back({{"family", s.family},
                             {"representative", to_string(s.representative)},
                             {"exponent", s.exponent},
                             {"sign", s.sign},
                             {"marking", to_json(s.marking)},
                             {"distance", s.distance},
                             {"residual", s.residual}});
  out["polish_twists"] = t.polish_twists;
  out["final_distance"] = t.final_distance;
  return out;
}

json to_json(const AlmostFixedCertificate& c) {
  return {{"marking", to_json(c.marking)},
          {"diameter", c.diameter},
          {"per_element", c.per_element}};
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(path + ": " + e.what());
  }
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write " + path);
  out << text;
}

AugMarking load_marking(const std::string& path) {
  return marking_from_json(read_json_file(path));
}

}  // namespace ct
