#pragma once

// JSON schemas for every artifact the library exchanges with the outside.
//
//   CircleFunction  {"bandlimit": N, "real": bool, "coeffs": [{"n", "re", "im"}, ...]}
//   MapDescriptor   {"type": "identity"|"rotation"|"moebius"|"power"|"flow"|
//                    "rauch_flow"|"compose"|"inverse"|"sampled", ...params}
//   BlockOperator   {"cutoff": N, "A": [[{"re", "im"}, ...], ...], "B": ...}
//   PeriodMatrix    {"cutoff": N, "Z": [[...]], "source": MapDescriptor?, "condition_of_A": x?}
//   SiegelReport    {"symmetry_defect", "sigma_max", "min_eig_I_minus_ZZbar", "condition_of_A", "member"}
//   QuantumOperator {"cutoff": N, "index_min": -N, "index_max": N, "source_bandlimit", "entries": [[...]]}
//   RunConfig       {"cutoff": 32, "grid": 4096, "spectral_tol": 1e-8, "matrix_tol": 1e-6, "seed": s, "out": path}

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "hhp/circle_map.hpp"
#include "hhp/error.hpp"
#include "hhp/fourier.hpp"
#include "hhp/period.hpp"
#include "hhp/pullback.hpp"
#include "hhp/quantum.hpp"

namespace hhp::io {

using json = nlohmann::json;

namespace detail {

inline const json& require(const json& j, const char* key, const char* what) {
  if (!j.is_object() || !j.contains(key))
    throw ValidationError(std::string(what) + ": missing field \"" + key + "\"");
  return j.at(key);
}

inline double number(const json& j, const char* what) {
  if (!j.is_number()) throw ValidationError(std::string(what) + " must be a number");
  return j.get<double>();
}

inline int integer(const json& j, const char* what) {
  if (!j.is_number_integer()) throw ValidationError(std::string(what) + " must be an integer");
  return j.get<int>();
}

}  // namespace detail

inline json complex_to_json(cplx z) { return {{"re", z.real()}, {"im", z.imag()}}; }

/// Accepts {"re", "im"}, [re, im] or a bare real number.
inline cplx complex_from_json(const json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2) return {detail::number(j[0], "re"), detail::number(j[1], "im")};
  if (j.is_object()) {
    const double re = j.contains("re") ? detail::number(j.at("re"), "re") : 0.0;
    const double im = j.contains("im") ? detail::number(j.at("im"), "im") : 0.0;
    return {re, im};
  }
  throw ValidationError("complex number must be {re, im}, [re, im] or a number");
}

inline json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(complex_to_json(m(i, k)));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline Matrix matrix_from_json(const json& j, const char* what) {
  if (!j.is_array()) throw ValidationError(std::string(what) + " must be an array of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = rows == 0 ? Eigen::Index{0} : static_cast<Eigen::Index>(j[0].size());
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const json& row = j[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols)
      throw ValidationError(std::string(what) + " rows must have equal length");
    for (Eigen::Index k = 0; k < cols; ++k) m(i, k) = complex_from_json(row[static_cast<std::size_t>(k)]);
  }
  return m;
}

// --- CircleFunction --------------------------------------------------------

inline json to_json(const CircleFunction& f) {
  json coeffs = json::array();
  for (int n = -f.bandlimit(); n <= f.bandlimit(); ++n) {
    if (n == 0) continue;
    const cplx c = f.coeff(n);
    if (c == cplx{}) continue;
    coeffs.push_back({{"n", n}, {"re", c.real()}, {"im", c.imag()}});
  }
  return {{"bandlimit", f.bandlimit()}, {"real", f.is_real()}, {"coeffs", coeffs}};
}

/// For real functions a missing c_{-n} is filled in as conj(c_n).
inline CircleFunction circle_function_from_json(const json& j) {
  const int bandlimit = detail::integer(detail::require(j, "bandlimit", "CircleFunction"), "bandlimit");
  if (bandlimit < 1) throw ValidationError("CircleFunction bandlimit must be positive");
  const bool real = j.contains("real") ? j.at("real").get<bool>() : true;
  std::map<int, cplx> given;
  if (j.contains("coeffs")) {
    const json& list = j.at("coeffs");
    if (!list.is_array()) throw ValidationError("CircleFunction coeffs must be an array");
    for (const auto& entry : list) {
      const int n = detail::integer(detail::require(entry, "n", "coefficient"), "n");
      if (n == 0) throw ValidationError("coefficient index 0 is not allowed (functions are mean-zero)");
      if (n > bandlimit || n < -bandlimit)
        throw ValidationError("coefficient index " + std::to_string(n) + " exceeds the bandlimit");
      if (given.count(n)) throw ValidationError("duplicate coefficient index " + std::to_string(n));
      given[n] = complex_from_json(entry);
    }
  }
  std::vector<cplx> storage(2 * static_cast<std::size_t>(bandlimit));
  auto slot = [&](int n) -> cplx& {
    return storage[static_cast<std::size_t>(n < 0 ? bandlimit + n : bandlimit + n - 1)];
  };
  for (const auto& [n, c] : given) slot(n) = c;
  if (real) {
    for (const auto& [n, c] : given)
      if (!given.count(-n)) slot(-n) = std::conj(c);
  }
  return {bandlimit, std::move(storage), real};
}

// --- MapDescriptor -----------------------------------------------------------

inline json to_json(const MapDescriptor& d) {
  return std::visit(
      hhp::detail::overloaded{
          [](const desc::Identity&) -> json { return {{"type", "identity"}}; },
          [](const desc::Rotation& r) -> json { return {{"type", "rotation"}, {"angle", r.angle}}; },
          [](const desc::Moebius& m) -> json {
            return {{"type", "moebius"}, {"a", complex_to_json(m.a)}, {"beta", m.beta}};
          },
          [](const desc::Power& p) -> json { return {{"type", "power"}, {"k", p.k}}; },
          [](const desc::Flow& f) -> json {
            return {{"type", "flow"}, {"field", to_json(f.field)}, {"eps", f.eps}};
          },
          [](const desc::RauchFlow& r) -> json {
            return {{"type", "rauch_flow"}, {"m", r.m}, {"eps", r.eps}};
          },
          [](const desc::Compose& c) -> json {
            json maps = json::array();
            for (const auto& m : c.maps) maps.push_back(to_json(m));
            return {{"type", "compose"}, {"maps", maps}};
          },
          [](const desc::Inverse& inv) -> json { return {{"type", "inverse"}, {"map", to_json(*inv.map)}}; },
          [](const desc::Sampled& s) -> json {
            return {{"type", "sampled"}, {"degree", s.degree}, {"offset", s.grid.offset()}, {"lift", s.lift}};
          },
      },
      d.node);
}

inline MapDescriptor map_descriptor_from_json(const json& j) {
  const json& type_field = detail::require(j, "type", "MapDescriptor");
  if (!type_field.is_string()) throw ValidationError("MapDescriptor type must be a string");
  const std::string type = type_field.get<std::string>();
  MapDescriptor d;
  if (type == "identity") {
    d = MapDescriptor::identity();
  } else if (type == "rotation") {
    d = MapDescriptor::rotation(detail::number(detail::require(j, "angle", "rotation"), "angle"));
  } else if (type == "moebius") {
    const cplx a = complex_from_json(detail::require(j, "a", "moebius"));
    const double beta = j.contains("beta") ? detail::number(j.at("beta"), "beta") : 0.0;
    d = MapDescriptor::moebius(a, beta);
  } else if (type == "power") {
    d = MapDescriptor::power(detail::integer(detail::require(j, "k", "power"), "k"));
  } else if (type == "flow") {
    const json& field = j.contains("field") ? j.at("field") : detail::require(j, "v", "flow");
    d = MapDescriptor::flow(circle_function_from_json(field),
                            detail::number(detail::require(j, "eps", "flow"), "eps"));
  } else if (type == "rauch_flow") {
    d = MapDescriptor::rauch_flow(detail::integer(detail::require(j, "m", "rauch_flow"), "m"),
                                  detail::number(detail::require(j, "eps", "rauch_flow"), "eps"));
  } else if (type == "compose") {
    const json& maps = detail::require(j, "maps", "compose");
    if (!maps.is_array()) throw ValidationError("compose maps must be an array");
    std::vector<MapDescriptor> chain;
    for (const auto& m : maps) chain.push_back(map_descriptor_from_json(m));
    d = MapDescriptor::compose(std::move(chain));
  } else if (type == "inverse") {
    d = MapDescriptor::inverse(map_descriptor_from_json(detail::require(j, "map", "inverse")));
  } else if (type == "sampled") {
    const json& lift = detail::require(j, "lift", "sampled");
    if (!lift.is_array()) throw ValidationError("sampled lift must be an array");
    std::vector<double> values;
    for (const auto& v : lift) values.push_back(detail::number(v, "lift sample"));
    const int degree = j.contains("degree") ? detail::integer(j.at("degree"), "degree") : 1;
    const double offset = j.contains("offset") ? detail::number(j.at("offset"), "offset") : 0.0;
    if (values.empty()) throw ValidationError("sampled lift is empty");
    d = desc::Sampled::from_lift(std::move(values), SampleGrid(lift.size(), offset), degree);
  } else {
    throw ValidationError("unknown map type \"" + type + "\"");
  }
  validate(d);
  return d;
}

// --- Operators and reports ---------------------------------------------------

inline json to_json(const BlockOperator& t) {
  json j = {{"rows", t.rows()}, {"cols", t.cols()}, {"A", matrix_to_json(t.A)}, {"B", matrix_to_json(t.B)}};
  if (t.square()) j["cutoff"] = t.rows();
  return j;
}

inline BlockOperator block_operator_from_json(const json& j) {
  BlockOperator t{matrix_from_json(detail::require(j, "A", "BlockOperator"), "A"),
                  matrix_from_json(detail::require(j, "B", "BlockOperator"), "B")};
  if (t.A.rows() != t.B.rows() || t.A.cols() != t.B.cols())
    throw ValidationError("BlockOperator blocks A and B must have the same shape");
  if (j.contains("cutoff") && (!t.square() || detail::integer(j.at("cutoff"), "cutoff") != t.rows()))
    throw ValidationError("BlockOperator cutoff does not match its blocks");
  return t;
}

inline json to_json(const PeriodMatrix& pm) {
  json j = {{"cutoff", pm.cutoff()}, {"Z", matrix_to_json(pm.Z)}};
  if (pm.source) j["source"] = to_json(*pm.source);
  if (pm.condition_of_A) j["condition_of_A"] = *pm.condition_of_A;
  return j;
}

inline PeriodMatrix period_matrix_from_json(const json& j) {
  PeriodMatrix pm;
  pm.Z = matrix_from_json(detail::require(j, "Z", "PeriodMatrix"), "Z");
  if (pm.Z.rows() != pm.Z.cols()) throw ValidationError("period matrix must be square");
  if (j.contains("cutoff") && detail::integer(j.at("cutoff"), "cutoff") != pm.Z.rows())
    throw ValidationError("PeriodMatrix cutoff does not match Z");
  if (j.contains("source") && !j.at("source").is_null()) pm.source = map_descriptor_from_json(j.at("source"));
  if (j.contains("condition_of_A") && !j.at("condition_of_A").is_null())
    pm.condition_of_A = detail::number(j.at("condition_of_A"), "condition_of_A");
  return pm;
}

inline json to_json(const SiegelReport& r) {
  json j = {{"symmetry_defect", r.symmetry_defect},
            {"sigma_max", r.sigma_max},
            {"min_eig_I_minus_ZZbar", r.min_eig_I_minus_ZZbar},
            {"member", r.member}};
  j["condition_of_A"] = r.condition_of_A ? json(*r.condition_of_A) : json(nullptr);
  return j;
}

inline json to_json(const QuantumOperator& op) {
  return {{"cutoff", op.cutoff},
          {"index_min", -op.cutoff},
          {"index_max", op.cutoff},
          {"source_bandlimit", op.source_bandlimit},
          {"entries", matrix_to_json(op.entries)}};
}

inline json to_json(const DiagonalLimit& d) {
  return {{"order", d.order}, {"x", d.x},         {"deltas", d.deltas},   {"values", d.values},
          {"limit", d.limit}, {"classical", d.classical}, {"defect", d.defect}};
}

// --- Run configuration ---------------------------------------------------------

struct RunConfig {
  int cutoff = 32;
  std::size_t grid = 4096;
  double spectral_tol = 1e-8;
  double matrix_tol = 1e-6;
  std::uint64_t seed = 20240917;
  std::string out;

  /// M >= 4N, tolerances positive.
  void validate() const {
    if (cutoff < 1) throw ValidationError("cutoff must be positive");
    if (grid < 4 * static_cast<std::size_t>(cutoff))
      throw ValidationError("grid size " + std::to_string(grid) + " is below 4 * cutoff = " +
                            std::to_string(4 * cutoff));
    if (!(spectral_tol > 0.0) || !(matrix_tol > 0.0)) throw ValidationError("tolerances must be positive");
  }
};

inline json to_json(const RunConfig& c) {
  return {{"cutoff", c.cutoff},         {"grid", c.grid}, {"spectral_tol", c.spectral_tol},
          {"matrix_tol", c.matrix_tol}, {"seed", c.seed}, {"out", c.out}};
}

inline RunConfig run_config_from_json(const json& j) {
  if (!j.is_object()) throw ValidationError("RunConfig must be a JSON object");
  RunConfig c;
  if (j.contains("cutoff")) c.cutoff = detail::integer(j.at("cutoff"), "cutoff");
  if (j.contains("grid")) {
    const int m = detail::integer(j.at("grid"), "grid");
    if (m < 1) throw ValidationError("grid must be positive");
    c.grid = static_cast<std::size_t>(m);
  }
  if (j.contains("spectral_tol")) c.spectral_tol = detail::number(j.at("spectral_tol"), "spectral_tol");
  if (j.contains("matrix_tol")) c.matrix_tol = detail::number(j.at("matrix_tol"), "matrix_tol");
  if (j.contains("seed")) {
    if (!j.at("seed").is_number_unsigned()) throw ValidationError("seed must be a nonnegative integer");
    c.seed = j.at("seed").get<std::uint64_t>();
  }
  if (j.contains("out")) c.out = j.at("out").get<std::string>();
  c.validate();
  return c;
}

/// Reads a whole file; ValidationError when it cannot be opened.
inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

/// Parses `text` as JSON, or, failing that, the file it names.
inline json parse_inline_or_file(const std::string& text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  const bool looks_inline = first != std::string::npos && (text[first] == '{' || text[first] == '[');
  const std::string body = looks_inline ? text : read_file(text);
  try {
    return json::parse(body);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("malformed JSON: ") + e.what());
  }
}

/// Defaults, overridden by the file named in HHP_CONFIG when set.
inline RunConfig load_run_config() {
  const char* path = std::getenv("HHP_CONFIG");
  if (path == nullptr || *path == '\0') return {};
  return run_config_from_json(parse_inline_or_file(path));
}

}  // namespace hhp::io
