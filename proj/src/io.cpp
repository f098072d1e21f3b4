#include "rkhm/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace rkhm::io {

namespace {

[[noreturn]] void config_error(const std::string& what) { throw Error(ErrorCode::ConfigError, what); }
[[noreturn]] void data_error(const std::string& what) { throw Error(ErrorCode::DataError, what); }

template <typename T>
T get_or(const json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    config_error(std::string("field '") + key + "' has the wrong type");
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) data_error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

ScalarKernel scalar_kernel_from_json(const json& j) {
  if (!j.is_object()) config_error("scalar kernel must be a JSON object");
  const auto family = get_or<std::string>(j, "family", "gaussian");
  try {
    if (family == "gaussian") return ScalarKernel::gaussian(get_or<double>(j, "gamma", 1.0));
    if (family == "laplacian") return ScalarKernel::laplacian(get_or<double>(j, "gamma", 1.0));
    if (family == "inverse_multiquadric")
      return ScalarKernel::inverse_multiquadric(get_or<double>(j, "c", 1.0), get_or<double>(j, "beta", 0.5));
  } catch (const Error& e) {
    config_error(e.what());
  }
  config_error("unknown kernel family '" + family + "'");
}

json to_json(const ScalarKernel& k) {
  json j{{"family", family_name(k.family)}};
  if (k.family == ScalarFamily::InverseMultiquadric) {
    j["c"] = k.c;
    j["beta"] = k.beta;
  } else {
    j["gamma"] = k.gamma;
  }
  return j;
}

KernelSpec kernel_from_json(const json& j, Index default_m) {
  if (!j.is_object()) config_error("kernel must be a JSON object");
  const auto variant = get_or<std::string>(j, "variant", "diagonal_scalar");
  const auto m = static_cast<Index>(get_or<long long>(j, "m", default_m));
  if (m < 1) config_error("kernel m must be >= 1");
  try {
    if (variant == "diagonal_scalar") {
      if (j.contains("kernels")) {
        std::vector<ScalarKernel> diag;
        for (const auto& k : j.at("kernels")) diag.push_back(scalar_kernel_from_json(k));
        if (j.contains("m") && static_cast<Index>(diag.size()) != m)
          config_error("diagonal kernel list length differs from m");
        return KernelSpec::diagonal(std::move(diag));
      }
      return KernelSpec::diagonal(scalar_kernel_from_json(j), m);
    }
    if (variant == "elementwise") return KernelSpec::elementwise(scalar_kernel_from_json(j), m);
    if (variant == "quantum_projective") return KernelSpec::quantum_projective(m);
    if (variant == "product_scalar_identity") {
      const ScalarKernel base = scalar_kernel_from_json(j);
      const ScalarKernel first = j.contains("first") ? scalar_kernel_from_json(j.at("first")) : base;
      const ScalarKernel second = j.contains("second") ? scalar_kernel_from_json(j.at("second")) : base;
      return KernelSpec::product_identity(first, second, m);
    }
  } catch (const Error& e) {
    if (e.code() == ErrorCode::ConfigError) throw;
    config_error(e.what());
  }
  config_error("unknown kernel variant '" + variant + "'");
}

json to_json(const KernelSpec& k) {
  json j{{"variant", k.name()}, {"m", k.dim()}};
  std::visit(
      [&](const auto& v) {
        using V = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<V, DiagonalScalar>) {
          json list = json::array();
          for (const auto& s : v.diagonal) list.push_back(to_json(s));
          j["kernels"] = list;
        } else if constexpr (std::is_same_v<V, Elementwise>) {
          j.update(to_json(v.base));
        } else if constexpr (std::is_same_v<V, ProductScalarTimesIdentity>) {
          j["first"] = to_json(v.first);
          j["second"] = to_json(v.second);
        }
      },
      k.variant());
  return j;
}

// ---------------------------------------------------------------------------

RealMatrix parse_samples(const std::string& text, const std::string& source) {
  std::vector<std::vector<double>> rows;
  std::size_t columns = 0;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  bool header_seen = false;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string::npos) end = text.size();
    std::string line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;

    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = line.find(',', start);
      fields.push_back(line.substr(start, comma == std::string::npos ? std::string::npos : comma - start));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    const std::string where = source + ":" + std::to_string(line_no);
    if (!header_seen) {
      for (const auto& f : fields)
        if (f.empty()) data_error(where + ": empty variable name in header");
      columns = fields.size();
      header_seen = true;
      continue;
    }
    if (fields.size() != columns)
      data_error(where + ": expected " + std::to_string(columns) + " fields, found " +
                 std::to_string(fields.size()));
    std::vector<double> row;
    row.reserve(columns);
    for (std::size_t c = 0; c < fields.size(); ++c) {
      std::string f = fields[c];
      const auto first = f.find_first_not_of(" \t");
      const auto last = f.find_last_not_of(" \t");
      f = first == std::string::npos ? std::string() : f.substr(first, last - first + 1);
      double v = 0.0;
      const char* b = f.data();
      const char* e = f.data() + f.size();
      if (!f.empty() && *b == '+') ++b;
      const auto [ptr, ec] = std::from_chars(b, e, v);
      if (f.empty() || ec != std::errc() || ptr != e || !std::isfinite(v))
        data_error(where + ": column " + std::to_string(c + 1) + ": '" + f + "' is not a finite decimal number");
      row.push_back(v);
    }
    rows.push_back(std::move(row));
  }
  if (!header_seen) data_error(source + ": missing header row");
  if (rows.empty()) data_error(source + ": no data rows");
  RealMatrix out(static_cast<Index>(rows.size()), static_cast<Index>(columns));
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < columns; ++c) out(static_cast<Index>(r), static_cast<Index>(c)) = rows[r][c];
  return out;
}

RealMatrix load_samples(const std::filesystem::path& path) { return parse_samples(read_file(path), path.string()); }

std::string format_samples(const RealMatrix& samples, const std::vector<std::string>& names) {
  std::ostringstream os;
  for (Index c = 0; c < samples.cols(); ++c) {
    if (c) os << ',';
    os << (static_cast<std::size_t>(c) < names.size() ? names[c] : "x" + std::to_string(c + 1));
  }
  os << '\n';
  char buf[64];
  for (Index r = 0; r < samples.rows(); ++r) {
    for (Index c = 0; c < samples.cols(); ++c) {
      if (c) os << ',';
      const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, samples(r, c));
      os.write(buf, ptr - buf);
    }
    os << '\n';
  }
  return os.str();
}

// ---------------------------------------------------------------------------

json to_json(const ComplexMatrix& m) {
  json rows = json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Index k = 0; k < m.cols(); ++k) row.push_back({m(i, k).real(), m(i, k).imag()});
    rows.push_back(row);
  }
  return rows;
}

namespace {

Complex entry_from_json(const json& e) {
  if (e.is_number()) return {e.get<double>(), 0.0};
  if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
    data_error("matrix entries must be [re, im] pairs");
  return {e[0].get<double>(), e[1].get<double>()};
}

}  // namespace

ComplexMatrix complex_matrix_from_json(const json& j) {
  if (!j.is_array() || j.empty()) data_error("matrix must be a nonempty JSON array");
  const bool nested = j[0].is_array() && !j[0].empty() && j[0][0].is_array();
  ComplexMatrix out;
  if (nested) {
    const auto n = static_cast<Index>(j.size());
    out.resize(n, n);
    for (Index i = 0; i < n; ++i) {
      if (!j[i].is_array() || static_cast<Index>(j[i].size()) != n) data_error("matrix rows must have length m");
      for (Index k = 0; k < n; ++k) out(i, k) = entry_from_json(j[i][k]);
    }
  } else {
    const auto total = static_cast<Index>(j.size());
    const auto n = static_cast<Index>(std::llround(std::sqrt(static_cast<double>(total))));
    if (n * n != total) data_error("flat matrix must hold m^2 entries");
    out.resize(n, n);
    for (Index i = 0; i < n; ++i)
      for (Index k = 0; k < n; ++k) out(i, k) = entry_from_json(j[i * n + k]);
  }
  if (!all_finite(out)) data_error("matrix has non-finite entries");
  return out;
}

StateSet parse_states(const json& j, const std::string& source) {
  const json* list = &j;
  StateSet set;
  if (j.is_object()) {
    if (!j.contains("states")) data_error(source + ": object form needs a 'states' list");
    list = &j.at("states");
    if (j.contains("labels")) {
      const auto& labels = j.at("labels");
      if (!labels.is_array()) data_error(source + ": 'labels' must be a list");
      for (const auto& l : labels) {
        if (!l.is_string()) data_error(source + ": labels must be strings");
        set.labels.push_back(l.get<std::string>());
      }
    }
  }
  if (!list->is_array() || list->empty()) data_error(source + ": expected a nonempty list of matrices");
  if (!set.labels.empty() && set.labels.size() != list->size())
    data_error(source + ": " + std::to_string(set.labels.size()) + " labels for " +
               std::to_string(list->size()) + " states");
  Index dim = -1;
  for (std::size_t i = 0; i < list->size(); ++i) {
    const std::string where = source + ": state " + std::to_string(i);
    try {
      const ComplexMatrix m = complex_matrix_from_json((*list)[i]);
      if (dim >= 0 && m.rows() != dim) data_error("dimension differs from earlier states");
      dim = m.rows();
      set.states.emplace_back(HermitianMatrix(m));
    } catch (const Error& e) {
      data_error(where + ": " + e.what());
    }
  }
  return set;
}

StateSet load_states(const std::filesystem::path& path) { return parse_states(read_json(path), path.string()); }

json to_json(const StateSet& set) {
  json states = json::array();
  for (const auto& rho : set.states) states.push_back(to_json(rho.matrix()));
  if (set.labels.empty()) return states;
  return json{{"states", states}, {"labels", set.labels}};
}

json read_json(const std::filesystem::path& path) {
  const std::string text = read_file(path);
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    data_error(path.string() + ": " + e.what());
  }
}

void write_text_atomic(const std::filesystem::path& path, const std::string& text) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::DataError, "cannot write " + tmp.string());
    out << text;
    out.flush();
    if (!out) throw Error(ErrorCode::DataError, "write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw Error(ErrorCode::DataError, "cannot move report into place: " + ec.message());
}

void write_json_atomic(const std::filesystem::path& path, const json& j) {
  write_text_atomic(path, j.dump(2) + "\n");
}

}  // namespace rkhm::io
