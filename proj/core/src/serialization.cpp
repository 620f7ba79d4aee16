#include "odeco/serialization.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "json_detail.hpp"

namespace odeco {

namespace {

nlohmann::json parse(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text, nullptr, false);
  if (j.is_discarded()) throw std::invalid_argument("malformed JSON");
  return j;
}

TensorShape shape_from_json(const nlohmann::json& j) {
  if (!j.contains("shape") || !j["shape"].is_array()) {
    throw std::invalid_argument("missing \"shape\" array");
  }
  return TensorShape(j["shape"].get<std::vector<int>>());
}

void require_shape(const TensorShape& found, const TensorShape& expected, const char* what) {
  if (!(found == expected)) {
    throw std::invalid_argument(std::string(what) + ": shape " + found.to_string() +
                                " does not match " + expected.to_string());
  }
}

}  // namespace

std::string write_json(const DenseTensor& tensor) {
  nlohmann::json j;
  j["shape"] = tensor.shape().dims();
  j["entries"] = std::vector<double>(tensor.entries().begin(), tensor.entries().end());
  return j.dump(2);
}

std::string write_json(const OdecoTensor& odeco) {
  nlohmann::json j;
  j["shape"] = odeco.shape.dims();
  std::vector<double> sigmas(odeco.sigmas.data(), odeco.sigmas.data() + odeco.sigmas.size());
  j["sigmas"] = std::move(sigmas);
  nlohmann::json factors = nlohmann::json::array();
  for (const auto& V : odeco.factors) {
    nlohmann::json rows = nlohmann::json::array();
    for (Eigen::Index r = 0; r < V.rows(); ++r) {
      nlohmann::json row = nlohmann::json::array();
      for (Eigen::Index c = 0; c < V.cols(); ++c) row.push_back(V(r, c));
      rows.push_back(std::move(row));
    }
    factors.push_back(std::move(rows));
  }
  j["factors"] = std::move(factors);
  return j.dump(2);
}

std::string write_json(const TypeISpec& spec) {
  nlohmann::json j;
  nlohmann::json support = nlohmann::json::array();
  for (int i : spec.support) support.push_back(i + 1);
  j["support"] = std::move(support);
  j["eta"] = spec.eta;
  j["signs"] = spec.signs;
  return j.dump(2);
}

std::string write_json(const ZeroPattern& pattern) {
  nlohmann::json j;
  j["rows"] = detail::pattern_to_json(pattern);
  return j.dump(2);
}

std::string write_json(const SingularTuple& tuple) { return detail::tuple_to_json(tuple).dump(2); }

std::string write_tuples_json(const TensorShape& shape, std::span<const SingularTuple> tuples) {
  nlohmann::json j;
  j["shape"] = shape.dims();
  nlohmann::json list = nlohmann::json::array();
  for (const auto& tuple : tuples) list.push_back(detail::tuple_to_json(tuple));
  j["tuples"] = std::move(list);
  return j.dump(2);
}

DenseTensor read_dense_json(const std::string& text) {
  nlohmann::json j = parse(text);
  TensorShape shape = shape_from_json(j);
  if (!j.contains("entries") || !j["entries"].is_array()) {
    throw std::invalid_argument("dense tensor: missing \"entries\" array");
  }
  auto entries = j["entries"].get<std::vector<double>>();
  return DenseTensor(shape, std::move(entries));
}

OdecoTensor read_odeco_json(const std::string& text, bool canonical) {
  nlohmann::json j = parse(text);
  TensorShape shape = shape_from_json(j);
  if (!j.contains("sigmas") || !j["sigmas"].is_array()) {
    throw std::invalid_argument("odeco tensor: missing \"sigmas\" array");
  }
  if (!j.contains("factors") || !j["factors"].is_array()) {
    throw std::invalid_argument("odeco tensor: missing \"factors\" array");
  }
  auto sigma_list = j["sigmas"].get<std::vector<double>>();
  Eigen::VectorXd sigmas(static_cast<Eigen::Index>(sigma_list.size()));
  for (std::size_t i = 0; i < sigma_list.size(); ++i) {
    sigmas[static_cast<Eigen::Index>(i)] = sigma_list[i];
  }
  std::vector<Eigen::MatrixXd> factors;
  for (const auto& block : j["factors"]) {
    auto rows = block.get<std::vector<std::vector<double>>>();
    if (rows.empty()) throw std::invalid_argument("odeco tensor: empty factor");
    Eigen::MatrixXd V(static_cast<Eigen::Index>(rows.size()),
                      static_cast<Eigen::Index>(rows[0].size()));
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (rows[r].size() != rows[0].size()) {
        throw std::invalid_argument("odeco tensor: ragged factor rows");
      }
      for (std::size_t c = 0; c < rows[r].size(); ++c) {
        V(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
      }
    }
    factors.push_back(std::move(V));
  }
  OdecoTensor odeco{shape, std::move(sigmas), std::move(factors)};
  odeco.validate(1e-10);
  return canonical ? canonicalize_odeco(odeco) : odeco;
}

TypeISpec read_spec_json(const std::string& text, const TensorShape& shape) {
  nlohmann::json j = parse(text);
  TypeISpec spec;
  if (!j.contains("support") || !j["support"].is_array()) {
    throw std::invalid_argument("spec: missing \"support\" array");
  }
  for (int i : j["support"].get<std::vector<int>>()) spec.support.push_back(i - 1);
  if (j.contains("eta")) spec.eta = j["eta"].get<std::vector<int>>();
  if (j.contains("signs")) spec.signs = j["signs"].get<std::vector<std::vector<int>>>();
  spec.validate(shape.order(), shape.min_dim());
  return spec;
}

ZeroPattern read_pattern_json(const std::string& text, const TensorShape& shape) {
  nlohmann::json j = parse(text);
  if (!j.contains("rows") || !j["rows"].is_array()) {
    throw std::invalid_argument("pattern: missing \"rows\" array");
  }
  ZeroPattern pattern;
  for (const auto& row : j["rows"]) {
    std::vector<int> modes;
    for (int m : row.get<std::vector<int>>()) modes.push_back(m - 1);
    pattern.rows.push_back(std::move(modes));
  }
  if (!pattern_valid(pattern, shape)) throw std::invalid_argument("pattern: not realizable");
  return pattern;
}

std::vector<SingularTuple> read_tuples_json(const std::string& text, const TensorShape& shape) {
  nlohmann::json j = parse(text);
  if (j.contains("shape")) require_shape(shape_from_json(j), shape, "tuples");
  if (!j.contains("tuples") || !j["tuples"].is_array()) {
    throw std::invalid_argument("tuples: missing \"tuples\" array");
  }
  std::vector<SingularTuple> out;
  for (const auto& entry : j["tuples"]) {
    if (!entry.contains("points") || !entry["points"].is_array() ||
        static_cast<int>(entry["points"].size()) != shape.order()) {
      throw std::invalid_argument("tuples: each entry needs one point per mode");
    }
    SingularTuple tuple;
    for (int mode = 0; mode < shape.order(); ++mode) {
      const auto& coords = entry["points"][static_cast<std::size_t>(mode)];
      if (!coords.is_array() || static_cast<int>(coords.size()) != shape.dim(mode)) {
        throw std::invalid_argument("tuples: point " + std::to_string(mode + 1) + " needs " +
                                    std::to_string(shape.dim(mode)) + " coordinates");
      }
      Eigen::VectorXcd x(shape.dim(mode));
      for (int i = 0; i < shape.dim(mode); ++i) {
        x[i] = detail::complex_from_json(coords[static_cast<std::size_t>(i)]);
      }
      tuple.points.emplace_back(std::move(x));
    }
    if (entry.contains("kind")) {
      const std::string kind = entry["kind"].get<std::string>();
      if (kind == "fixed") {
        tuple.kind = TupleKind::fixed;
      } else if (kind == "base") {
        tuple.kind = TupleKind::base;
      } else if (kind == "unclassified") {
        tuple.kind = TupleKind::unclassified;
      } else {
        throw std::invalid_argument("tuples: unknown kind \"" + kind + "\"");
      }
    }
    out.push_back(std::move(tuple));
  }
  return out;
}

TensorFileKind classify_tensor_json(const std::string& text) {
  nlohmann::json j = parse(text);
  return j.contains("sigmas") ? TensorFileKind::odeco : TensorFileKind::dense;
}

std::string load_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void save_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << content;
  if (!out) throw std::runtime_error("write to " + path.string() + " failed");
}

DenseTensor load_dense(const std::filesystem::path& path) {
  const std::string text = load_file(path);
  if (classify_tensor_json(text) == TensorFileKind::odeco) {
    return materialize(read_odeco_json(text));
  }
  return read_dense_json(text);
}

OdecoTensor load_odeco(const std::filesystem::path& path, bool canonical) {
  const std::string text = load_file(path);
  if (classify_tensor_json(text) != TensorFileKind::odeco) {
    throw std::invalid_argument(path.string() + " holds a dense tensor, not a decomposition");
  }
  return read_odeco_json(text, canonical);
}

}  // namespace odeco
