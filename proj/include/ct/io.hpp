#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "ct/marking.hpp"
#include "ct/metrics.hpp"
#include "ct/nielsen.hpp"
#include "ct/projection.hpp"

namespace ct {

using json = nlohmann::ordered_json;

// {"glue":[{"tau":0,"D":0},...],"slots":[{"base":"1/0","trans":"0/1","D":0},...]}
json to_json(const AugMarking& m);
AugMarking marking_from_json(const json& j);

// "glue<j>" or "slot<i>:<p>/<q>", as printed by to_string.
CurveRef parse_curve(const std::string& text);
json to_json(const Simplex& s);
Simplex simplex_from_json(const json& j);

json to_json(const std::vector<FormulaTerm>& terms);
json to_json(const ReductionTrace& t);
json to_json(const AlmostFixedCertificate& c);

json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

AugMarking load_marking(const std::string& path);

}  // namespace ct
