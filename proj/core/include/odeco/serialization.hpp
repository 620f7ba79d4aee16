#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "odeco/enumeration.hpp"
#include "odeco/projective.hpp"
#include "odeco/tensor.hpp"

namespace odeco {

// JSON schemas. Complex numbers are [re, im]; a bare number reads as real.
//
//   dense  {"shape": [2,3,3], "entries": [...]}            row-major
//   odeco  {"shape": [...], "sigmas": [...], "factors": [[[row], ...], ...]}
//   spec   {"support": [...], "eta": [...], "signs": [[...], ...]}  1-based support
//   pattern {"rows": [[j,k], ...]}                          1-based modes
//   tuples {"shape": [...], "tuples": [{"points": [[[re,im], ...], ...], "kind": "..."}]}

std::string write_json(const DenseTensor& tensor);
std::string write_json(const OdecoTensor& odeco);
std::string write_json(const TypeISpec& spec);
std::string write_json(const ZeroPattern& pattern);
std::string write_json(const SingularTuple& tuple);
std::string write_tuples_json(const TensorShape& shape, std::span<const SingularTuple> tuples);

DenseTensor read_dense_json(const std::string& text);
// loaded decompositions are validated and put in canonical form unless asked not to
OdecoTensor read_odeco_json(const std::string& text, bool canonical = true);
TypeISpec read_spec_json(const std::string& text, const TensorShape& shape);
ZeroPattern read_pattern_json(const std::string& text, const TensorShape& shape);
std::vector<SingularTuple> read_tuples_json(const std::string& text, const TensorShape& shape);

enum class TensorFileKind { dense, odeco };

// a tensor file is an odeco decomposition iff it carries "sigmas"
TensorFileKind classify_tensor_json(const std::string& text);

std::string load_file(const std::filesystem::path& path);
void save_file(const std::filesystem::path& path, const std::string& content);

// dispatch on the file kind; decompositions are materialized
DenseTensor load_dense(const std::filesystem::path& path);
OdecoTensor load_odeco(const std::filesystem::path& path, bool canonical = true);

}  // namespace odeco
