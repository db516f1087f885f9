#pragma once

#include <string>
#include <variant>

#include "json.hpp"

#include "contlim/structured.hpp"
#include "contlim/gcmps.hpp"

namespace contlim {

using Json = nlohmann::json;

// Matrices are row-major lists of rows, each entry a [re, im] pair.
Json to_json(const CMatrix& m);
CMatrix matrix_from_json(const Json& j, Index rows = -1, Index cols = -1);

Json to_json(const KrausChannel& ch);
KrausChannel channel_from_json(const Json& j);
Json to_json(const Lindblad& l);
Lindblad lindblad_from_json(const Json& j);
Json to_json(const ProjectorCanonicalForm& cf);
ProjectorCanonicalForm canonical_form_from_json(const Json& j);
Json to_json(const MpsTensor& t);
MpsTensor mps_from_json(const Json& j);
Json to_json(const GeneralizedCmps& g);
GeneralizedCmps gcmps_from_json(const Json& j);
Json to_json(const DivisibilityVerdict& v);
Json to_json(const ClassificationReport& r);

// Either a channel ({"dim","kraus"}) or an MPS tensor ({"d","D","a","matrices"}).
using AnalyzeInput = std::variant<KrausChannel, MpsTensor>;
AnalyzeInput analyze_input_from_json(const Json& j);

// Parse errors are rethrown as Error with a line and column.
Json read_json_file(const std::string& path);
Json parse_json(const std::string& text);
void write_text_file(const std::string& path, const std::string& text);

std::string format_double(double x);

}  // namespace contlim
