#include "contlim/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace contlim {

namespace {

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw ShapeError(std::string("json: missing field '") + key + "'");
  return j.at(key);
}

Index index_field(const Json& j, const char* key) {
  const Json& v = field(j, key);
  if (!v.is_number_integer()) throw ShapeError(std::string("json: field '") + key + "' must be an integer");
  return v.get<Index>();
}

Complex scalar_from_json(const Json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) return {j[0].get<double>(), j[1].get<double>()};
  throw ShapeError("json: complex scalar must be a number or an [re, im] pair");
}

std::vector<CMatrix> matrices_from_json(const Json& j, Index rows, Index cols) {
  if (!j.is_array()) throw ShapeError("json: expected a list of matrices");
  std::vector<CMatrix> out;
  for (const auto& m : j) out.push_back(matrix_from_json(m, rows, cols));
  return out;
}

Json matrices_to_json(const std::vector<CMatrix>& ms) {
  Json out = Json::array();
  for (const auto& m : ms) out.push_back(to_json(m));
  return out;
}

}  // namespace

Json to_json(const CMatrix& m) {
  Json rows = Json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Index k = 0; k < m.cols(); ++k) row.push_back({m(i, k).real(), m(i, k).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

CMatrix matrix_from_json(const Json& j, Index rows, Index cols) {
  if (!j.is_array() || j.empty()) throw ShapeError("json: matrix must be a non-empty list of rows");
  const Index r = static_cast<Index>(j.size());
  if (!j[0].is_array()) throw ShapeError("json: matrix rows must be lists");
  const Index c = static_cast<Index>(j[0].size());
  if ((rows >= 0 && r != rows) || (cols >= 0 && c != cols)) {
    std::ostringstream os;
    os << "json: matrix is " << r << "x" << c << ", expected " << rows << "x" << cols;
    throw ShapeError(os.str());
  }
  CMatrix m(r, c);
  for (Index i = 0; i < r; ++i) {
    const Json& row = j[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Index>(row.size()) != c) throw ShapeError("json: ragged matrix");
    for (Index k = 0; k < c; ++k) m(i, k) = scalar_from_json(row[static_cast<std::size_t>(k)]);
  }
  if (!all_finite(m)) throw NumericalError("json: non-finite matrix entry");
  return m;
}

Json to_json(const KrausChannel& ch) { return {{"dim", ch.dim}, {"kraus", matrices_to_json(ch.kraus)}}; }

KrausChannel channel_from_json(const Json& j) {
  const Index dim = index_field(j, "dim");
  if (dim < 1) throw ShapeError("json: channel dim must be positive");
  KrausChannel ch{dim, matrices_from_json(field(j, "kraus"), dim, dim)};
  ch.validate();
  return ch;
}

Json to_json(const Lindblad& l) {
  return {{"dim", l.dim}, {"H", to_json(l.hamiltonian)}, {"jumps", matrices_to_json(l.jumps)}};
}

Lindblad lindblad_from_json(const Json& j) {
  const Index dim = index_field(j, "dim");
  if (dim < 1) throw ShapeError("json: Lindblad dim must be positive");
  Lindblad l{dim, matrix_from_json(field(j, "H"), dim, dim), matrices_from_json(field(j, "jumps"), dim, dim)};
  l.validate();
  return l;
}

Json to_json(const ProjectorCanonicalForm& cf) {
  Json blocks = Json::array();
  for (const auto& b : cf.blocks) blocks.push_back({{"Dk", b.dk}, {"mk", b.mk}, {"sigma", to_json(b.sigma)}});
  return {{"dim", cf.dim}, {"U", to_json(cf.basis_change)}, {"d0", cf.d0}, {"blocks", blocks}};
}

ProjectorCanonicalForm canonical_form_from_json(const Json& j) {
  ProjectorCanonicalForm cf;
  cf.dim = index_field(j, "dim");
  if (cf.dim < 1) throw ShapeError("json: canonical form dim must be positive");
  cf.basis_change = matrix_from_json(field(j, "U"), cf.dim, cf.dim);
  cf.d0 = index_field(j, "d0");
  const Json& blocks = field(j, "blocks");
  if (!blocks.is_array()) throw ShapeError("json: blocks must be a list");
  for (const auto& b : blocks) {
    ProjectorBlock blk;
    blk.dk = index_field(b, "Dk");
    blk.mk = index_field(b, "mk");
    blk.sigma = matrix_from_json(field(b, "sigma"), blk.mk, blk.mk);
    cf.blocks.push_back(std::move(blk));
  }
  cf.validate();
  return cf;
}

Json to_json(const MpsTensor& t) {
  return {{"d", t.d}, {"D", t.D}, {"a", t.spacing}, {"matrices", matrices_to_json(t.matrices)}};
}

MpsTensor mps_from_json(const Json& j) {
  MpsTensor t;
  t.d = index_field(j, "d");
  t.D = index_field(j, "D");
  if (t.d < 1 || t.D < 1) throw ShapeError("json: d and D must be positive");
  t.spacing = j.contains("a") ? field(j, "a").get<double>() : 1.0;
  t.matrices = matrices_from_json(field(j, "matrices"), t.D, t.D);
  t.validate();
  return t;
}

Json to_json(const GeneralizedCmps& g) {
  return {{"K", g.ancilla_dim},
          {"D", g.dim},
          {"boundary", matrices_to_json(g.boundary)},
          {"H", to_json(g.hamiltonian)},
          {"jumps", matrices_to_json(g.jumps)},
          {"eta", g.statistics}};
}

GeneralizedCmps gcmps_from_json(const Json& j) {
  GeneralizedCmps g;
  g.ancilla_dim = index_field(j, "K");
  const Json& boundary = field(j, "boundary");
  if (!boundary.is_array() || boundary.empty()) throw ShapeError("json: boundary must be a non-empty list");
  g.boundary = matrices_from_json(boundary, -1, -1);
  g.dim = g.boundary.front().rows();
  if (j.contains("D") && j.at("D").get<Index>() != g.dim) throw ShapeError("json: D disagrees with the boundary operators");
  g.hamiltonian = matrix_from_json(field(j, "H"), g.dim, g.dim);
  g.jumps = matrices_from_json(field(j, "jumps"), g.dim, g.dim);
  if (j.contains("eta")) {
    g.statistics = j.at("eta").get<std::vector<int>>();
  } else {
    g.statistics.assign(g.jumps.size(), 1);
  }
  g.validate();
  return g;
}

Json to_json(const DivisibilityVerdict& v) {
  Json out = {{"status", to_string(v.status)}, {"spacing", v.spacing}, {"diagnostics", v.diagnostics}};
  out["projector"] = v.projector ? to_json(v.projector->matrix) : Json();
  out["generator"] = v.generator ? to_json(v.generator->matrix) : Json();
  out["completed_by_search"] = v.completed_by_search;
  if (v.coarse) {
    out["coarse"] = {{"p", v.coarse->power}, {"generator", to_json(v.coarse->generator.matrix)}};
  } else {
    out["coarse"] = Json();
  }
  return out;
}

Json to_json(const ClassificationReport& r) {
  Json details = Json::array();
  for (const auto& c : r.details) details.push_back({{"condition", c.name}, {"passed", c.passed}, {"violation", c.violation}});
  Json admissible = Json::array();
  for (auto c : r.admissible) admissible.push_back(to_string(c));
  return {{"hamiltonian_ok", r.hamiltonian_ok}, {"case", to_string(r.matched)}, {"admissible", admissible}, {"conditions", details}};
}

AnalyzeInput analyze_input_from_json(const Json& j) {
  if (j.is_object() && j.contains("kraus")) return channel_from_json(j);
  if (j.is_object() && j.contains("matrices")) return mps_from_json(j);
  throw ShapeError("json: input is neither a channel ({\"dim\",\"kraus\"}) nor an MPS tensor ({\"d\",\"D\",\"matrices\"})");
}

Json parse_json(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    std::size_t line = 1, column = 1;
    const std::size_t end = std::min(e.byte == 0 ? 0 : e.byte - 1, text.size());
    for (std::size_t i = 0; i < end; ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    std::ostringstream os;
    os << "malformed JSON at line " << line << ", column " << column << ": " << e.what();
    throw Error(os.str());
  }
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return parse_json(buf.str());
  } catch (const Error& e) {
    throw Error(path + ": " + e.what());
  }
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path + "'");
  out << text;
  if (!out) throw Error("write to '" + path + "' failed");
}

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace contlim
