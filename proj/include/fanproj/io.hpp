#pragma once

#include <limits>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

#include "fanproj/certificates.hpp"
#include "fanproj/fan.hpp"
#include "fanproj/numeric.hpp"
#include "fanproj/sign_adapt.hpp"

namespace fanproj {

class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

class UnknownBuiltinError : public std::runtime_error {
 public:
  explicit UnknownBuiltinError(const std::string& what) : std::runtime_error(what) {}
};

using Certificate = std::variant<SupportFunction, FarkasCertificate>;

namespace io_detail {

using json = nlohmann::ordered_json;

inline json parse_document(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
}

inline const json& field(const json& j, const char* name) {
  if (!j.is_object()) throw ParseError("expected a JSON object");
  const auto it = j.find(name);
  if (it == j.end()) throw ParseError(std::string("missing field \"") + name + "\"");
  return *it;
}

inline void check_schema(const json& j, const char* expected) {
  const json& s = field(j, "schema");
  if (!s.is_string() || s.get<std::string>() != expected)
    throw ParseError(std::string("expected schema \"") + expected + "\"");
}

// File coordinates are confined to 64 bits; values produced by the
// pipeline stay far below that.
inline Int parse_integer(const json& j, const std::string& where) {
  if (j.is_number_unsigned()) return Int(j.get<unsigned long long>());
  if (j.is_number_integer()) return Int(j.get<long long>());
  throw ParseError(where + ": expected an integer within 64 bits");
}

inline long long to_int64(const Int& v, const std::string& where) {
  if (v < std::numeric_limits<long long>::min() || v > std::numeric_limits<long long>::max())
    throw ParseError(where + ": integer exceeds the 64-bit serialization range");
  return v.convert_to<long long>();
}

inline int to_index(const Int& v, const std::string& where) {
  if (v < 0 || v > std::numeric_limits<int>::max())
    throw ParseError(where + ": expected a nonnegative index");
  return v.convert_to<int>();
}

inline IntVec parse_vector(const json& j, const std::string& where) {
  if (!j.is_array()) throw ParseError(where + ": expected an array of integers");
  IntVec out;
  out.reserve(j.size());
  for (std::size_t k = 0; k < j.size(); ++k)
    out.push_back(parse_integer(j[k], where + "[" + std::to_string(k) + "]"));
  return out;
}

inline std::vector<int> parse_indices(const json& j, const std::string& where) {
  const IntVec raw = parse_vector(j, where);
  std::vector<int> out;
  out.reserve(raw.size());
  for (std::size_t k = 0; k < raw.size(); ++k)
    out.push_back(to_index(raw[k], where + "[" + std::to_string(k) + "]"));
  return out;
}

inline json vector_json(const IntVec& v, const std::string& where) {
  json arr = json::array();
  for (const Int& x : v) arr.push_back(to_int64(x, where));
  return arr;
}

inline json indices_json(const std::vector<int>& v) {
  json arr = json::array();
  for (int x : v) arr.push_back(x);
  return arr;
}

inline std::string emit(const json& j) { return j.dump(2) + "\n"; }

}  // namespace io_detail

inline Rat rat_from_string(const std::string& text) {
  const auto parse_part = [&text](const std::string& part, const char* role) -> Int {
    std::size_t k = part.size() > 0 && part[0] == '-' ? 1 : 0;
    if (k == part.size())
      throw ParseError(std::string("empty ") + role + " in rational \"" + text + "\"");
    for (std::size_t i = k; i < part.size(); ++i)
      if (part[i] < '0' || part[i] > '9')
        throw ParseError("invalid character in rational \"" + text + "\"");
    return Int(part);
  };
  const std::size_t slash = text.find('/');
  if (slash == std::string::npos) return Rat(parse_part(text, "numerator"));
  Int num = parse_part(text.substr(0, slash), "numerator");
  Int den = parse_part(text.substr(slash + 1), "denominator");
  if (den == 0) throw ParseError("zero denominator in rational \"" + text + "\"");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  return Rat(num, den);
}

inline std::string rat_to_string(const Rat& r) {
  const Int num(boost::multiprecision::numerator(r));
  const Int den(boost::multiprecision::denominator(r));
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

inline Fan parse_fan(const std::string& text) {
  using io_detail::field;
  const auto j = io_detail::parse_document(text);
  io_detail::check_schema(j, "fan/1");
  const int dim = io_detail::to_index(io_detail::parse_integer(field(j, "dim"), "dim"), "dim");

  const auto& jrays = field(j, "rays");
  if (!jrays.is_array()) throw ParseError("\"rays\" must be an array");
  std::vector<LatticeVector> rays;
  rays.reserve(jrays.size());
  for (std::size_t k = 0; k < jrays.size(); ++k)
    rays.push_back(io_detail::parse_vector(jrays[k], "rays[" + std::to_string(k) + "]"));

  const auto& jcones = field(j, "cones");
  if (!jcones.is_array()) throw ParseError("\"cones\" must be an array");
  std::vector<std::vector<int>> cones;
  cones.reserve(jcones.size());
  for (std::size_t k = 0; k < jcones.size(); ++k)
    cones.push_back(io_detail::parse_indices(jcones[k], "cones[" + std::to_string(k) + "]"));

  return make_fan(dim, std::move(rays), std::move(cones));
}

inline std::string serialize_fan(const Fan& fan) {
  using io_detail::json;
  json j;
  j["schema"] = "fan/1";
  j["dim"] = fan.dim;
  json rays = json::array();
  for (std::size_t i = 0; i < fan.rays.size(); ++i)
    rays.push_back(io_detail::vector_json(fan.rays[i], "rays[" + std::to_string(i) + "]"));
  j["rays"] = std::move(rays);
  json cones = json::array();
  for (const std::vector<int>& c : fan.maxcones) cones.push_back(io_detail::indices_json(c));
  j["cones"] = std::move(cones);
  return io_detail::emit(j);
}

inline SupportFunction parse_support(const std::string& text) {
  using io_detail::field;
  const auto j = io_detail::parse_document(text);
  io_detail::check_schema(j, "support/1");
  const Int declared = io_detail::parse_integer(field(j, "fan_rays"), "fan_rays");
  const auto& jvalues = field(j, "values");
  if (!jvalues.is_array()) throw ParseError("\"values\" must be an array of rational strings");
  SupportFunction h;
  h.values.reserve(jvalues.size());
  for (std::size_t k = 0; k < jvalues.size(); ++k) {
    if (!jvalues[k].is_string())
      throw ParseError("values[" + std::to_string(k) + "]: expected a rational string");
    h.values.push_back(rat_from_string(jvalues[k].get<std::string>()));
  }
  if (declared != Int(static_cast<long long>(h.values.size())))
    throw ParseError("fan_rays does not match the number of values");
  return h;
}

inline std::string serialize_support(const SupportFunction& h) {
  using io_detail::json;
  json j;
  j["schema"] = "support/1";
  j["fan_rays"] = h.values.size();
  json values = json::array();
  for (const Rat& v : h.values) values.push_back(rat_to_string(v));
  j["values"] = std::move(values);
  return io_detail::emit(j);
}

inline BlowupLog parse_log(const std::string& text) {
  using io_detail::field;
  const auto j = io_detail::parse_document(text);
  io_detail::check_schema(j, "blowuplog/1");
  BlowupLog log;
  const auto& jsteps = field(j, "steps");
  if (!jsteps.is_array()) throw ParseError("\"steps\" must be an array");
  for (std::size_t k = 0; k < jsteps.size(); ++k) {
    const auto& js = jsteps[k];
    const std::string where = "steps[" + std::to_string(k) + "]";
    BlowupStep st;
    st.step = io_detail::to_index(io_detail::parse_integer(field(js, "step"), where + ".step"),
                                  where + ".step");
    st.normal = io_detail::parse_vector(field(js, "normal"), where + ".normal");
    st.u = io_detail::parse_vector(field(js, "u"), where + ".u");
    st.v = io_detail::parse_vector(field(js, "v"), where + ".v");
    st.s = io_detail::parse_vector(field(js, "s"), where + ".s");
    st.u_idx = io_detail::to_index(io_detail::parse_integer(field(js, "u_idx"), where + ".u_idx"),
                                   where + ".u_idx");
    st.v_idx = io_detail::to_index(io_detail::parse_integer(field(js, "v_idx"), where + ".v_idx"),
                                   where + ".v_idx");
    st.s_idx = io_detail::to_index(io_detail::parse_integer(field(js, "s_idx"), where + ".s_idx"),
                                   where + ".s_idx");
    log.steps.push_back(std::move(st));
  }
  const auto& jcounts = field(j, "per_normal");
  if (!jcounts.is_array()) throw ParseError("\"per_normal\" must be an array");
  for (std::size_t k = 0; k < jcounts.size(); ++k) {
    const auto& jc = jcounts[k];
    const std::string where = "per_normal[" + std::to_string(k) + "]";
    PerNormalCount pc;
    pc.normal = io_detail::parse_vector(field(jc, "normal"), where + ".normal");
    pc.count = io_detail::to_index(io_detail::parse_integer(field(jc, "count"), where + ".count"),
                                   where + ".count");
    log.per_normal.push_back(std::move(pc));
  }
  return log;
}

inline std::string serialize_log(const BlowupLog& log) {
  using io_detail::json;
  json j;
  j["schema"] = "blowuplog/1";
  json steps = json::array();
  for (const BlowupStep& st : log.steps) {
    const std::string where = "step " + std::to_string(st.step);
    json js;
    js["step"] = st.step;
    js["normal"] = io_detail::vector_json(st.normal, where);
    js["u"] = io_detail::vector_json(st.u, where);
    js["v"] = io_detail::vector_json(st.v, where);
    js["s"] = io_detail::vector_json(st.s, where);
    js["u_idx"] = st.u_idx;
    js["v_idx"] = st.v_idx;
    js["s_idx"] = st.s_idx;
    steps.push_back(std::move(js));
  }
  j["steps"] = std::move(steps);
  json counts = json::array();
  for (const PerNormalCount& pc : log.per_normal) {
    json jc;
    jc["normal"] = io_detail::vector_json(pc.normal, "per_normal");
    jc["count"] = pc.count;
    counts.push_back(std::move(jc));
  }
  j["per_normal"] = std::move(counts);
  return io_detail::emit(j);
}

inline Certificate parse_certificate(const std::string& text) {
  using io_detail::field;
  const auto j = io_detail::parse_document(text);
  io_detail::check_schema(j, "cert/1");
  const io_detail::json& kind = field(j, "kind");
  if (kind == "ample") {
    SupportFunction h;
    const Int declared = io_detail::parse_integer(field(j, "fan_rays"), "fan_rays");
    const auto& jvalues = field(j, "values");
    if (!jvalues.is_array()) throw ParseError("\"values\" must be an array of rational strings");
    for (std::size_t k = 0; k < jvalues.size(); ++k) {
      if (!jvalues[k].is_string())
        throw ParseError("values[" + std::to_string(k) + "]: expected a rational string");
      h.values.push_back(rat_from_string(jvalues[k].get<std::string>()));
    }
    if (declared != Int(static_cast<long long>(h.values.size())))
      throw ParseError("fan_rays does not match the number of values");
    return h;
  }
  if (kind == "farkas") {
    FarkasCertificate cert;
    const auto& jmult = field(j, "multipliers");
    if (!jmult.is_array()) throw ParseError("\"multipliers\" must be an array");
    for (std::size_t k = 0; k < jmult.size(); ++k) {
      const auto& jm = jmult[k];
      const std::string where = "multipliers[" + std::to_string(k) + "]";
      std::vector<int> wall = io_detail::parse_indices(field(jm, "wall"), where + ".wall");
      const io_detail::json& jl = field(jm, "lambda");
      if (!jl.is_string()) throw ParseError(where + ".lambda: expected a rational string");
      cert.multipliers.emplace_back(std::move(wall), rat_from_string(jl.get<std::string>()));
    }
    return cert;
  }
  throw ParseError("certificate kind must be \"ample\" or \"farkas\"");
}

inline std::string serialize_certificate(const Certificate& cert) {
  using io_detail::json;
  json j;
  j["schema"] = "cert/1";
  if (const auto* h = std::get_if<SupportFunction>(&cert)) {
    j["kind"] = "ample";
    j["fan_rays"] = h->values.size();
    json values = json::array();
    for (const Rat& v : h->values) values.push_back(rat_to_string(v));
    j["values"] = std::move(values);
  } else {
    j["kind"] = "farkas";
    json mult = json::array();
    for (const auto& [wall, lambda] : std::get<FarkasCertificate>(cert).multipliers) {
      json jm;
      jm["wall"] = io_detail::indices_json(wall);
      jm["lambda"] = rat_to_string(lambda);
      mult.push_back(std::move(jm));
    }
    j["multipliers"] = std::move(mult);
  }
  return io_detail::emit(j);
}

/// Square integer matrix given as a JSON array of rows.
inline std::vector<IntVec> parse_matrix(const std::string& text) {
  const auto j = io_detail::parse_document(text);
  if (!j.is_array() || j.empty())
    throw ParseError("basis matrix must be a non-empty JSON array of rows");
  std::vector<IntVec> rows;
  rows.reserve(j.size());
  for (std::size_t k = 0; k < j.size(); ++k)
    rows.push_back(io_detail::parse_vector(j[k], "row " + std::to_string(k)));
  for (const IntVec& row : rows)
    if (row.size() != rows.size()) throw ParseError("basis matrix must be square");
  return rows;
}

namespace io_detail {

inline std::vector<LatticeVector> literal_rays(
    std::initializer_list<std::initializer_list<long long>> rows) {
  std::vector<LatticeVector> out;
  out.reserve(rows.size());
  for (const auto& row : rows) {
    LatticeVector v;
    v.reserve(row.size());
    for (long long x : row) v.push_back(Int(x));
    out.push_back(std::move(v));
  }
  return out;
}

}  // namespace io_detail

inline const std::vector<std::string>& builtin_names() {
  static const std::vector<std::string> names = {"hexagon", "oda75", "p1p1",
                                                 "p1p1p1",  "p2",    "p3"};
  return names;
}

/// The builtin corpus. oda75 is the smooth complete non-projective
/// threefold fan labeled [7-5] in Fujino and Sato's classification.
inline Fan builtin(const std::string& name) {
  using io_detail::literal_rays;
  if (name == "oda75")
    return make_fan(3,
                    literal_rays({{1, 0, 0},
                                  {0, 1, 0},
                                  {0, 0, 1},
                                  {-1, -1, -1},
                                  {-1, -1, 0},
                                  {0, -1, -1},
                                  {-1, 0, -1}}),
                    {{0, 1, 2},
                     {0, 1, 6},
                     {0, 2, 5},
                     {0, 5, 6},
                     {1, 2, 4},
                     {1, 4, 6},
                     {2, 4, 5},
                     {3, 4, 5},
                     {3, 4, 6},
                     {3, 5, 6}});
  if (name == "p2")
    return make_fan(2, literal_rays({{1, 0}, {0, 1}, {-1, -1}}), {{0, 1}, {0, 2}, {1, 2}});
  if (name == "p1p1")
    return make_fan(2, literal_rays({{1, 0}, {0, 1}, {-1, 0}, {0, -1}}),
                    {{0, 1}, {0, 3}, {1, 2}, {2, 3}});
  if (name == "p1p1p1")
    return make_fan(
        3,
        literal_rays({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {-1, 0, 0}, {0, -1, 0}, {0, 0, -1}}),
        {{0, 1, 2}, {0, 1, 5}, {0, 2, 4}, {0, 4, 5}, {1, 2, 3}, {1, 3, 5}, {2, 3, 4}, {3, 4, 5}});
  if (name == "p3")
    return make_fan(3, literal_rays({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {-1, -1, -1}}),
                    {{0, 1, 2}, {0, 1, 3}, {0, 2, 3}, {1, 2, 3}});
  if (name == "hexagon")
    return make_fan(2, literal_rays({{1, 0}, {1, 1}, {0, 1}, {-1, 0}, {-1, -1}, {0, -1}}),
                    {{0, 1}, {0, 5}, {1, 2}, {2, 3}, {3, 4}, {4, 5}});
  throw UnknownBuiltinError("unknown builtin fan \"" + name + "\"");
}

}  // namespace fanproj
