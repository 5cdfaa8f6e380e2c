#pragma once

// JSON interchange. A matrix is {"rows": r, "cols": c, "data": [[[re, im], ...], ...]}
// (row-major); a map bundle holds dims, a 1-based partition, M, N and phi.
// The canonical writer sorts keys, prints reals with 17 significant digits
// and folds -0 into 0, so write -> read -> write is byte-stable.

#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "rop/core.hpp"
#include "rop/partition.hpp"
#include "rop/preserver_forms.hpp"

namespace rop::io {

using Json = nlohmann::json;

inline Json matrix_to_json(const ComplexMatrix& a) {
  Json data = Json::array();
  for (Index i = 0; i < a.rows(); ++i) {
    Json row = Json::array();
    for (Index j = 0; j < a.cols(); ++j) row.push_back(Json::array({a(i, j).real(), a(i, j).imag()}));
    data.push_back(std::move(row));
  }
  return Json{{"rows", a.rows()}, {"cols", a.cols()}, {"data", std::move(data)}};
}

namespace detail {

[[noreturn]] inline void parse_error(const std::string& what) { throw Error(ErrorKind::parse, what); }

inline Index get_index(const Json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_number_integer()) parse_error(std::string("missing integer field '") + key + "'");
  const auto v = j.at(key).get<long long>();
  if (v < 0) parse_error(std::string("negative '") + key + "'");
  return static_cast<Index>(v);
}

inline double get_real(const Json& j) {
  if (!j.is_number()) parse_error("matrix entry is not a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) parse_error("matrix entry is not finite");
  return v;
}

}  // namespace detail

inline ComplexMatrix matrix_from_json(const Json& j) {
  if (!j.is_object()) detail::parse_error("matrix must be an object");
  const Index rows = detail::get_index(j, "rows");
  const Index cols = detail::get_index(j, "cols");
  if (!j.contains("data") || !j.at("data").is_array()) detail::parse_error("missing array field 'data'");
  const Json& data = j.at("data");
  if (static_cast<Index>(data.size()) != rows) detail::parse_error("data has the wrong number of rows");
  ComplexMatrix a(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    const Json& row = data.at(static_cast<std::size_t>(i));
    if (!row.is_array() || static_cast<Index>(row.size()) != cols) detail::parse_error("data row has the wrong length");
    for (Index jj = 0; jj < cols; ++jj) {
      const Json& z = row.at(static_cast<std::size_t>(jj));
      if (!z.is_array() || z.size() != 2) detail::parse_error("entries must be [re, im] pairs");
      a(i, jj) = {detail::get_real(z.at(0)), detail::get_real(z.at(1))};
    }
  }
  return a;
}

/// "1,2|3||" -> P1 = {1,2}, P2 = {3}, P3 = P4 = {} (1-based).
inline Partition parse_partition(const std::string& text, Index k) {
  std::array<IndexSet, 4> blocks;
  std::size_t block = 0;
  std::string token;
  auto flush = [&] {
    if (token.empty()) return;
    std::size_t used = 0;
    long long v = 0;
    try {
      v = std::stoll(token, &used);
    } catch (const std::exception&) {
      detail::parse_error("bad partition index '" + token + "'");
    }
    if (used != token.size() || v < 1) detail::parse_error("bad partition index '" + token + "'");
    blocks[block].push_back(static_cast<Index>(v - 1));
    token.clear();
  };
  for (char c : text) {
    if (c == '|') {
      flush();
      if (++block > 3) detail::parse_error("partition needs exactly four '|'-separated blocks");
    } else if (c == ',') {
      if (token.empty()) detail::parse_error("empty index in partition");
      flush();
    } else if (c != ' ') {
      token.push_back(c);
    }
  }
  flush();
  if (block != 3) detail::parse_error("partition needs exactly four '|'-separated blocks");
  try {
    return Partition(k, std::move(blocks));
  } catch (const Error& e) {
    detail::parse_error(e.what());
  }
}

inline Json partition_to_json(const Partition& p) {
  Json out = Json::array();
  for (int b = 0; b < 4; ++b) {
    Json block = Json::array();
    for (Index i : p.block(static_cast<Partition::Block>(b))) block.push_back(i + 1);
    out.push_back(std::move(block));
  }
  return out;
}

inline Partition partition_from_json(const Json& j, Index k) {
  if (!j.is_array() || j.size() != 4) detail::parse_error("partition must be four arrays");
  std::array<IndexSet, 4> blocks;
  for (std::size_t b = 0; b < 4; ++b) {
    if (!j.at(b).is_array()) detail::parse_error("partition block must be an array");
    for (const Json& v : j.at(b)) {
      if (!v.is_number_integer() || v.get<long long>() < 1) detail::parse_error("partition indices are 1-based integers");
      blocks[b].push_back(static_cast<Index>(v.get<long long>() - 1));
    }
  }
  try {
    return Partition(k, std::move(blocks));
  } catch (const Error& e) {
    detail::parse_error(e.what());
  }
}

/// On-disk map description; every field but dims is optional so that a
/// phi-only bundle can be fed to recovery.
struct MapBundle {
  DimsProfile dims;
  std::optional<Partition> partition;
  std::optional<ComplexMatrix> m;
  std::optional<ComplexMatrix> n;
  std::optional<ComplexMatrix> phi;

  /// The PreserverMap, materializing phi from (partition, M, N) when absent.
  PreserverMap to_map() const {
    if (phi) {
      PreserverMap out = make_map(dims, *phi);
      if (partition && m && n) out.origin = MapOrigin{*partition, *m, *n};
      return out;
    }
    if (!(partition && m && n)) throw Error(ErrorKind::parse, "bundle needs phi or (partition, M, N)");
    return assemble_phi(dims, *partition, *m, *n, AssembleOptions{.strict = false, .search = {}});
  }
};

inline Json bundle_to_json(const MapBundle& b) {
  Json out{{"dims", b.dims.factors()}};
  if (b.partition) out["partition"] = partition_to_json(*b.partition);
  if (b.m) out["M"] = matrix_to_json(*b.m);
  if (b.n) out["N"] = matrix_to_json(*b.n);
  if (b.phi) out["phi"] = matrix_to_json(*b.phi);
  return out;
}

inline MapBundle bundle_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("dims") || !j.at("dims").is_array()) detail::parse_error("bundle needs 'dims'");
  std::vector<Index> dims;
  for (const Json& v : j.at("dims")) {
    if (!v.is_number_integer()) detail::parse_error("dims must be integers");
    dims.push_back(static_cast<Index>(v.get<long long>()));
  }
  MapBundle b;
  try {
    b.dims = DimsProfile(dims);
  } catch (const Error& e) {
    detail::parse_error(e.what());
  }
  if (j.contains("partition")) b.partition = partition_from_json(j.at("partition"), b.dims.k());
  if (j.contains("M")) b.m = matrix_from_json(j.at("M"));
  if (j.contains("N")) b.n = matrix_from_json(j.at("N"));
  if (j.contains("phi")) b.phi = matrix_from_json(j.at("phi"));
  return b;
}

// ---------------------------------------------------------------------------
// Canonical text form
// ---------------------------------------------------------------------------

inline std::string format_real(double v) {
  if (v == 0.0) v = 0.0;  // folds -0
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace detail {

inline bool is_flat(const Json& j) {
  if (!j.is_array()) return !j.is_object();
  for (const Json& e : j)
    if (e.is_object() || (e.is_array() && !is_flat(e))) return false;
  return true;
}

inline bool is_scalar_list(const Json& j) {
  if (!j.is_array()) return false;
  for (const Json& e : j)
    if (e.is_array() || e.is_object()) return false;
  return true;
}

inline void write_value(std::ostream& os, const Json& j, int indent) {
  const std::string pad(static_cast<std::size_t>(indent), ' ');
  if (j.is_object()) {
    os << "{\n";
    std::size_t i = 0;
    for (auto it = j.begin(); it != j.end(); ++it, ++i) {  // nlohmann::json keeps keys sorted
      os << pad << "  " << Json(it.key()).dump() << ": ";
      write_value(os, it.value(), indent + 2);
      if (i + 1 < j.size()) os << ',';
      os << '\n';
    }
    os << pad << '}';
  } else if (j.is_array()) {
    // Arrays of scalars and arrays of [re, im] pairs stay on one line.
    const bool inline_all = is_scalar_list(j) || (is_flat(j) && [&] {
                              for (const Json& e : j)
                                if (!is_scalar_list(e)) return false;
                              return true;
                            }());
    if (inline_all) {
      os << '[';
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i > 0) os << ", ";
        write_value(os, j.at(i), indent);
      }
      os << ']';
    } else {
      os << "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        os << pad << "  ";
        write_value(os, j.at(i), indent + 2);
        if (i + 1 < j.size()) os << ',';
        os << '\n';
      }
      os << pad << ']';
    }
  } else if (j.is_number_float()) {
    os << format_real(j.get<double>());
  } else {
    os << j.dump();
  }
}

}  // namespace detail

inline std::string to_canonical(const Json& j) {
  std::ostringstream os;
  detail::write_value(os, j, 0);
  os << '\n';
  return os.str();
}

inline Json parse_text(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    detail::parse_error(e.what());
  }
}

inline Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) detail::parse_error("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_text(ss.str());
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::invalid_argument, "cannot write '" + path + "'");
  out << text;
}

}  // namespace rop::io
