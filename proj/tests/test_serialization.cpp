#include <doctest.h>

#include <filesystem>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "odeco/enumeration.hpp"
#include "odeco/fixtures.hpp"
#include "odeco/serialization.hpp"
#include "odeco/tensor.hpp"

using namespace odeco;

namespace {

std::filesystem::path data_dir() { return std::filesystem::path(ODECO_TEST_DATA_DIR); }

struct TempFile {
  std::filesystem::path path;
  explicit TempFile(const char* name) : path(std::filesystem::temp_directory_path() / name) {}
  ~TempFile() { std::filesystem::remove(path); }
};

// substring assertion with the message in the failure output
void check_throws_with(const std::function<void()>& fn, const std::string& needle) {
  try {
    fn();
    FAIL_CHECK("no exception, expected one mentioning \"" << needle << "\"");
  } catch (const std::exception& e) {
    CHECK_MESSAGE(std::string(e.what()).find(needle) != std::string::npos,
                  "\"" << e.what() << "\" does not mention \"" << needle << "\"");
  }
}

}  // namespace

TEST_CASE("dense tensors round trip through json") {
  const DenseTensor tensor = materialize(random_odeco(TensorShape({2, 3, 4}), 11));
  const DenseTensor back = read_dense_json(write_json(tensor));
  CHECK(back.shape() == tensor.shape());
  REQUIRE(back.entries().size() == tensor.entries().size());
  for (std::size_t i = 0; i < back.entries().size(); ++i) CHECK(back.entries()[i] == tensor.entries()[i]);
}

TEST_CASE("decompositions round trip through json") {
  const OdecoTensor odeco = canonicalize_odeco(random_odeco(TensorShape({3, 3, 4}), 23));
  const OdecoTensor back = read_odeco_json(write_json(odeco));
  CHECK(back.shape == odeco.shape);
  for (int i = 0; i < odeco.sigmas.size(); ++i) CHECK(back.sigmas(i) == doctest::Approx(odeco.sigmas(i)).epsilon(1e-15));
  for (std::size_t j = 0; j < odeco.factors.size(); ++j)
    CHECK((back.factors[j] - odeco.factors[j]).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("loading puts decompositions in canonical form unless told otherwise") {
  OdecoTensor odeco = random_odeco(TensorShape({2, 3, 3}), 31);
  odeco.sigmas(0) = -odeco.sigmas(0);
  odeco.factors.back().col(0) *= -1.0;
  const std::string text = write_json(odeco);

  const OdecoTensor canonical = read_odeco_json(text);
  for (int i = 0; i < canonical.sigmas.size(); ++i) CHECK(canonical.sigmas(i) > 0.0);

  const OdecoTensor raw = read_odeco_json(text, false);
  CHECK(raw.sigmas(0) < 0.0);
}

TEST_CASE("discrete spec data round trips with one-based support") {
  const TensorShape shape({2, 2, 2, 2});
  for (const auto& spec : enumerate_type1(shape)) {
    const std::string text = write_json(spec);
    const TypeISpec back = read_spec_json(text, shape);
    CHECK(back.support == spec.support);
    CHECK(back.eta == spec.eta);
    CHECK(back.signs == spec.signs);
  }

  // the serialized support counts from one
  const TypeISpec first{{0, 1}, {0}, {{1, 1, 1}}};
  const auto j = nlohmann::json::parse(write_json(first));
  CHECK(j["support"] == std::vector<int>{1, 2});
}

TEST_CASE("zero patterns round trip with one-based modes") {
  const TensorShape shape({2, 3, 3});
  for (const auto& comp : enumerate_type2(shape)) {
    const ZeroPattern back = read_pattern_json(write_json(comp.pattern), shape);
    CHECK(back == comp.pattern);
  }
}

TEST_CASE("tuple lists round trip exactly enough") {
  const OdecoTensor odeco = demo233_odeco();
  std::vector<SingularTuple> tuples;
  for (const auto& spec : enumerate_type1(odeco.shape)) tuples.push_back(realize_type1(spec, odeco));
  const std::string text = write_tuples_json(odeco.shape, tuples);
  const auto back = read_tuples_json(text, odeco.shape);
  REQUIRE(back.size() == tuples.size());
  for (std::size_t i = 0; i < back.size(); ++i) {
    CHECK(tuple_distance(back[i], tuples[i]) < 1e-7);  // chordal floor
    CHECK(back[i].kind == tuples[i].kind);
  }
}

TEST_CASE("bare numbers read as real coordinates") {
  const std::string text = R"({
    "shape": [2, 3, 3],
    "tuples": [{"points": [[1, 0], [0.5, [0, 1], 0], [1, 0, 0]], "kind": "base"}]
  })";
  const auto tuples = read_tuples_json(text, TensorShape({2, 3, 3}));
  REQUIRE(tuples.size() == 1);
  CHECK(tuples[0].kind == TupleKind::base);
  CHECK(tuples[0].points[1].coords()(1) == Complex(0.0, 1.0));
  CHECK(tuples[0].points[1].coords()(0) == Complex(0.5, 0.0));
}

TEST_CASE("tensor files are told apart by their keys") {
  CHECK(classify_tensor_json(write_json(demo233_perturbation())) == TensorFileKind::dense);
  CHECK(classify_tensor_json(write_json(demo233_odeco())) == TensorFileKind::odeco);
}

TEST_CASE("malformed input fails with a pointed message") {
  check_throws_with([] { read_dense_json("{"); }, "malformed JSON");
  check_throws_with([] { read_dense_json(R"({"entries": [1]})"); }, "shape");

  // 17 entries for a 2x3x3 tensor
  std::string seventeen = R"({"shape": [2, 3, 3], "entries": [)";
  for (int i = 0; i < 17; ++i) seventeen += (i ? ",1" : "1");
  seventeen += "]}";
  check_throws_with([&] { read_dense_json(seventeen); }, "expected 18 entries");

  OdecoTensor skewed = demo233_odeco();
  skewed.factors[1](0, 0) += 1e-3;
  const std::string text = write_json(skewed);
  check_throws_with([&] { read_odeco_json(text); }, "orthogonality defect");

  check_throws_with([] { read_tuples_json(R"({"tuples": [{"points": [[1, 0]]}]})", TensorShape({2, 3, 3})); },
                    "one point per mode");
  check_throws_with(
      [] {
        read_tuples_json(R"({"tuples": [{"points": [[1, 0], [1, 0, 0], [1, 0]], "kind": "fixed"}]})",
                         TensorShape({2, 3, 3}));
      },
      "coordinates");
  check_throws_with(
      [] {
        read_tuples_json(R"({"tuples": [{"points": [[1, 0], [1, 0, 0], [1, 0, 0]], "kind": "weird"}]})",
                         TensorShape({2, 3, 3}));
      },
      "kind");
}

TEST_CASE("files round trip and dispatch on kind") {
  TempFile dense_file("odeco_test_dense.json");
  TempFile odeco_file("odeco_test_odeco.json");

  const OdecoTensor odeco = random_odeco(TensorShape({2, 3, 3}), 47);
  save_file(odeco_file.path, write_json(odeco));
  save_file(dense_file.path, write_json(materialize(odeco)));

  const OdecoTensor loaded = load_odeco(odeco_file.path);
  loaded.validate();

  // a decomposition file loads as a dense tensor by materializing
  const DenseTensor direct = load_dense(dense_file.path);
  const DenseTensor via_odeco = load_dense(odeco_file.path);
  for (std::size_t i = 0; i < direct.entries().size(); ++i)
    CHECK(direct.entries()[i] == doctest::Approx(via_odeco.entries()[i]).epsilon(1e-12));

  CHECK_THROWS_AS(load_odeco(dense_file.path), std::invalid_argument);
  CHECK_THROWS_AS(load_file("/nonexistent/odeco/file.json"), std::runtime_error);
}

TEST_CASE("bundled data files match the built-in fixtures") {
  const OdecoTensor s = load_odeco(data_dir() / "demo233_odeco.json");
  const OdecoTensor fixture = demo233_odeco();
  CHECK(s.shape == fixture.shape);
  for (int i = 0; i < s.sigmas.size(); ++i) CHECK(s.sigmas(i) == fixture.sigmas(i));
  for (std::size_t j = 0; j < s.factors.size(); ++j)
    CHECK((s.factors[j] - fixture.factors[j]).cwiseAbs().maxCoeff() == 0.0);

  const DenseTensor t = load_dense(data_dir() / "demo233_direction.json");
  const DenseTensor direction = demo233_perturbation();
  REQUIRE(t.shape() == direction.shape());
  for (std::size_t i = 0; i < t.entries().size(); ++i) CHECK(t.entries()[i] == direction.entries()[i]);
}
