#include <doctest.h>

#include <atomic>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "odeco/parallel.hpp"
#include "odeco/polynomial.hpp"
#include "odeco/projective.hpp"
#include "odeco/random.hpp"
#include "odeco/shape.hpp"
#include "odeco/tensor.hpp"

using namespace odeco;

namespace {

// reference materialization: plain odometer over all entries
DenseTensor materialize_loops(const OdecoTensor& odeco) {
  DenseTensor out(odeco.shape);
  const int d = odeco.shape.order();
  const int n = odeco.shape.min_dim();
  std::vector<int> idx(static_cast<std::size_t>(d), 0);
  while (true) {
    double value = 0.0;
    for (int i = 0; i < n; ++i) {
      double prod = odeco.sigmas(i);
      for (int j = 0; j < d; ++j) prod *= odeco.factors[static_cast<std::size_t>(j)](idx[static_cast<std::size_t>(j)], i);
      value += prod;
    }
    out.at(idx) = value;
    int j = d - 1;
    while (j >= 0 && ++idx[static_cast<std::size_t>(j)] == odeco.shape.dim(j)) idx[static_cast<std::size_t>(j--)] = 0;
    if (j < 0) break;
  }
  return out;
}

Complex contract_loops(const DenseTensor& tensor, const std::vector<Eigen::VectorXcd>& vectors) {
  const int d = tensor.shape().order();
  std::vector<int> idx(static_cast<std::size_t>(d), 0);
  Complex total = 0.0;
  while (true) {
    Complex prod = tensor(idx);
    for (int j = 0; j < d; ++j) prod *= vectors[static_cast<std::size_t>(j)](idx[static_cast<std::size_t>(j)]);
    total += prod;
    int j = d - 1;
    while (j >= 0 && ++idx[static_cast<std::size_t>(j)] == tensor.shape().dim(j)) idx[static_cast<std::size_t>(j--)] = 0;
    if (j < 0) break;
  }
  return total;
}

std::vector<Eigen::VectorXcd> random_vectors(const TensorShape& shape, Rng& rng) {
  std::vector<Eigen::VectorXcd> vectors;
  for (int j = 0; j < shape.order(); ++j) {
    Eigen::VectorXcd v(shape.dim(j));
    for (int i = 0; i < shape.dim(j); ++i) v(i) = rng.complex_gaussian();
    vectors.push_back(v);
  }
  return vectors;
}

}  // namespace

TEST_CASE("shape accepts tensors and rejects matrices") {
  const TensorShape s({2, 3, 3});
  CHECK(s.order() == 3);
  CHECK(s.dim(0) == 2);
  CHECK(s.min_dim() == 2);
  CHECK(s.min_dim_multiplicity() == 1);
  CHECK(s.entry_count() == 18);

  CHECK_THROWS_AS(TensorShape({2, 2}), std::invalid_argument);
  CHECK_THROWS_AS(TensorShape({2, 1, 3}), std::invalid_argument);
  CHECK_THROWS_AS(TensorShape({}), std::invalid_argument);
}

TEST_CASE("shape parse and to_string round trip") {
  CHECK(TensorShape::parse("2,3,3") == TensorShape({2, 3, 3}));
  CHECK(TensorShape::parse("2x3x3") == TensorShape({2, 3, 3}));
  CHECK(TensorShape({2, 3, 4}).to_string() == "2x3x4");
  CHECK(TensorShape::parse(TensorShape({3, 3, 3, 3}).to_string()) == TensorShape({3, 3, 3, 3}));
  CHECK_THROWS_AS(TensorShape::parse("2,,3"), std::invalid_argument);
  CHECK_THROWS_AS(TensorShape::parse("banana"), std::invalid_argument);
}

TEST_CASE("base locus dimension formula") {
  CHECK(TensorShape({2, 2, 2}).base_locus_dimension() == -1);
  CHECK(TensorShape({3, 3, 3}).base_locus_dimension() == 0);
  CHECK(TensorShape({2, 3, 3}).base_locus_dimension() == 1);
  CHECK(TensorShape({2, 2, 4}).base_locus_dimension() == 1);
  CHECK(TensorShape({4, 4, 4}).base_locus_dimension() == 1);
  CHECK(TensorShape({2, 2, 2, 3}).base_locus_dimension() == 1);
  CHECK(TensorShape({5, 5, 5}).base_locus_dimension() == 2);
}

TEST_CASE("dense tensor layout is row major") {
  DenseTensor t(TensorShape({2, 3, 4}));
  std::vector<int> idx = {1, 2, 3};
  CHECK(t.flat_index(idx) == 23);
  idx = {0, 0, 1};
  CHECK(t.flat_index(idx) == 1);
  idx = {0, 1, 0};
  CHECK(t.flat_index(idx) == 4);
  idx = {1, 0, 0};
  CHECK(t.flat_index(idx) == 12);

  t.at(idx) = 7.5;
  CHECK(t(idx) == 7.5);
  CHECK(t.max_abs() == 7.5);
  CHECK(t.frobenius_norm() == doctest::Approx(7.5));
}

TEST_CASE("dense tensor arithmetic") {
  const TensorShape shape({2, 2, 2});
  DenseTensor a(shape, std::vector<double>(8, 1.0));
  DenseTensor b(shape, std::vector<double>(8, 2.0));
  a.add_scaled(b, 0.25);
  for (double v : a.entries()) CHECK(v == doctest::Approx(1.5));
  a.scale(-2.0);
  CHECK(a.max_abs() == doctest::Approx(3.0));
  CHECK(a.frobenius_norm() == doctest::Approx(3.0 * std::sqrt(8.0)));
}

TEST_CASE("materialize agrees with the direct sum of outer products") {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    for (const auto& dims : {std::vector<int>{2, 3, 3}, {3, 3, 3}, {2, 2, 2, 2}, {2, 3, 4}}) {
      const OdecoTensor odeco = random_odeco(TensorShape(dims), seed);
      const DenseTensor fast = materialize(odeco);
      const DenseTensor slow = materialize_loops(odeco);
      double diff = 0.0;
      for (std::int64_t i = 0; i < fast.shape().entry_count(); ++i)
        diff = std::max(diff, std::abs(fast.entries()[static_cast<std::size_t>(i)] - slow.entries()[static_cast<std::size_t>(i)]));
      CHECK(diff < 1e-12);
    }
  }
}

TEST_CASE("odeco validation rejects bad decompositions") {
  OdecoTensor odeco = random_odeco(TensorShape({2, 3, 3}), 5);
  CHECK_NOTHROW(odeco.validate());
  CHECK(odeco.orthogonality_defect() < 1e-12);

  OdecoTensor zero_weight = odeco;
  zero_weight.sigmas(0) = 0.0;
  CHECK_THROWS_AS(zero_weight.validate(), std::invalid_argument);

  OdecoTensor skewed = odeco;
  skewed.factors[0](0, 0) += 0.01;
  CHECK_THROWS_AS(skewed.validate(), std::invalid_argument);

  OdecoTensor mismatched = odeco;
  mismatched.sigmas.resize(3);
  CHECK_THROWS_AS(mismatched.validate(), std::invalid_argument);
}

TEST_CASE("full contraction matches the entrywise sum") {
  Rng rng(11);
  for (const auto& dims : {std::vector<int>{2, 3, 3}, {2, 2, 2, 2}}) {
    const TensorShape shape(dims);
    const DenseTensor tensor = materialize(random_odeco(shape, 77));
    const auto vectors = random_vectors(shape, rng);
    const Complex fast = contract_full(tensor, vectors);
    const Complex slow = contract_loops(tensor, vectors);
    CHECK(std::abs(fast - slow) < 1e-10 * (1.0 + std::abs(slow)));
  }
}

TEST_CASE("partial contraction recovers the full one mode by mode") {
  Rng rng(13);
  const TensorShape shape({2, 3, 4});
  const DenseTensor tensor = materialize(random_odeco(shape, 99));
  const auto vectors = random_vectors(shape, rng);
  const Complex full = contract_full(tensor, vectors);
  for (int j = 0; j < shape.order(); ++j) {
    const Eigen::VectorXcd partial = contract_missing(tensor, vectors, j);
    REQUIRE(partial.size() == shape.dim(j));
    const Complex recovered = vectors[static_cast<std::size_t>(j)].transpose() * partial;
    CHECK(std::abs(recovered - full) < 1e-10 * (1.0 + std::abs(full)));
  }
}

TEST_CASE("pair contraction is the bilinear form behind both partials") {
  Rng rng(17);
  const TensorShape shape({2, 3, 3});
  const DenseTensor tensor = materialize(random_odeco(shape, 42));
  const auto vectors = random_vectors(shape, rng);
  for (int a = 0; a < shape.order(); ++a) {
    for (int b = a + 1; b < shape.order(); ++b) {
      const Eigen::MatrixXcd m = contract_missing_pair(tensor, vectors, a, b);
      REQUIRE(m.rows() == shape.dim(a));
      REQUIRE(m.cols() == shape.dim(b));
      const Eigen::VectorXcd via_b = m * vectors[static_cast<std::size_t>(b)];
      const Eigen::VectorXcd direct_a = contract_missing(tensor, vectors, a);
      CHECK((via_b - direct_a).cwiseAbs().maxCoeff() < 1e-10);
      const Eigen::VectorXcd via_a = m.transpose() * vectors[static_cast<std::size_t>(a)];
      const Eigen::VectorXcd direct_b = contract_missing(tensor, vectors, b);
      CHECK((via_a - direct_b).cwiseAbs().maxCoeff() < 1e-10);
    }
  }
}

TEST_CASE("contract dispatches on the empty slot") {
  Rng rng(19);
  const TensorShape shape({2, 3, 3});
  const DenseTensor tensor = materialize(random_odeco(shape, 3));
  const auto vectors = random_vectors(shape, rng);

  std::vector<std::optional<Eigen::VectorXcd>> slots;
  for (const auto& v : vectors) slots.emplace_back(v);
  const auto full = contract(tensor, slots);
  REQUIRE(std::holds_alternative<Complex>(full));
  CHECK(std::abs(std::get<Complex>(full) - contract_full(tensor, vectors)) < 1e-12);

  slots[1].reset();
  const auto partial = contract(tensor, slots);
  REQUIRE(std::holds_alternative<Eigen::VectorXcd>(partial));
  CHECK((std::get<Eigen::VectorXcd>(partial) - contract_missing(tensor, vectors, 1)).norm() < 1e-12);
}

TEST_CASE("complete_orthogonal extends and rejects") {
  Rng rng(23);
  Eigen::MatrixXd g(4, 2);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 2; ++j) g(i, j) = rng.gaussian();
  const Eigen::MatrixXd q = Eigen::HouseholderQR<Eigen::MatrixXd>(g).householderQ() * Eigen::MatrixXd::Identity(4, 2);

  const Eigen::MatrixXd full = complete_orthogonal(q);
  REQUIRE(full.rows() == 4);
  REQUIRE(full.cols() == 4);
  CHECK((full.transpose() * full - Eigen::MatrixXd::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((full.leftCols(2) - q).cwiseAbs().maxCoeff() < 1e-12);

  CHECK_THROWS_AS(complete_orthogonal(g), std::invalid_argument);
}

TEST_CASE("canonical decomposition has positive sorted weights and the same tensor") {
  OdecoTensor odeco = random_odeco(TensorShape({3, 3, 4}), 31);
  odeco.sigmas(0) = -odeco.sigmas(0);
  odeco.factors.back().col(0) *= -1.0;  // keep the tensor fixed while breaking the sign convention
  std::swap(odeco.sigmas(1), odeco.sigmas(2));
  odeco.validate();

  const OdecoTensor canon = canonicalize_odeco(odeco);
  canon.validate();
  for (int i = 0; i < canon.sigmas.size(); ++i) CHECK(canon.sigmas(i) > 0.0);
  for (int i = 0; i + 1 < canon.sigmas.size(); ++i) CHECK(canon.sigmas(i) >= canon.sigmas(i + 1));

  const DenseTensor before = materialize(odeco);
  const DenseTensor after = materialize(canon);
  double diff = 0.0;
  for (std::size_t i = 0; i < before.entries().size(); ++i)
    diff = std::max(diff, std::abs(before.entries()[i] - after.entries()[i]));
  CHECK(diff < 1e-12);
}

TEST_CASE("projective points normalize by pivot") {
  Eigen::VectorXcd v(3);
  v << Complex(0.0, 0.0), Complex(0.0, 2.0), Complex(1.0, 0.0);
  const ProjectivePoint p(v);
  CHECK(p.pivot_index() == 1);
  const ProjectivePoint c = p.canonical();
  CHECK(std::abs(c.coords()(1) - Complex(1.0, 0.0)) < 1e-15);
  CHECK(std::abs(c.coords()(2) - Complex(0.0, -0.5)) < 1e-15);
  const ProjectivePoint cc = c.canonical();
  CHECK((cc.coords() - c.coords()).norm() < 1e-15);

  CHECK_THROWS_AS(ProjectivePoint(Eigen::VectorXcd::Zero(3)), std::invalid_argument);
}

TEST_CASE("chordal distance is scale invariant and separates points") {
  Rng rng(41);
  Eigen::VectorXcd v(4);
  for (int i = 0; i < 4; ++i) v(i) = rng.complex_gaussian();
  const ProjectivePoint p(v);
  const ProjectivePoint q(Eigen::VectorXcd(Complex(-3.0, 0.7) * v));
  CHECK(chordal_distance(p, q) < 1e-12);

  Eigen::VectorXcd w(4);
  w << 1.0, 0.0, 0.0, 0.0;
  Eigen::VectorXcd u(4);
  u << 0.0, 1.0, 0.0, 0.0;
  CHECK(chordal_distance(ProjectivePoint(w), ProjectivePoint(u)) == doctest::Approx(1.0));
}

TEST_CASE("point and tuple reality detection") {
  Eigen::VectorXcd real_up_to_phase(2);
  real_up_to_phase << Complex(0.0, 2.0), Complex(0.0, -1.0);
  CHECK(ProjectivePoint(real_up_to_phase).is_real());

  Eigen::VectorXcd genuinely_complex(2);
  genuinely_complex << Complex(1.0, 0.0), Complex(0.0, 1.0);
  CHECK_FALSE(ProjectivePoint(genuinely_complex).is_real());

  SingularTuple tuple{{ProjectivePoint(real_up_to_phase), ProjectivePoint(genuinely_complex)},
                      TupleKind::unclassified};
  CHECK_FALSE(tuple.is_real());
}

TEST_CASE("tuple distance takes the worst mode") {
  Eigen::VectorXcd a(2), b(2);
  a << 1.0, 0.0;
  b << 0.0, 1.0;
  const SingularTuple s{{ProjectivePoint(a), ProjectivePoint(a)}, TupleKind::unclassified};
  const SingularTuple t{{ProjectivePoint(a), ProjectivePoint(b)}, TupleKind::unclassified};
  CHECK(tuple_distance(s, s) < 1e-15);
  CHECK(tuple_distance(s, t) == doctest::Approx(1.0));
}

TEST_CASE("classification on a diagonal example") {
  OdecoTensor odeco{TensorShape({2, 3, 3}), Eigen::VectorXd::Ones(2),
                    {Eigen::MatrixXd::Identity(2, 2), Eigen::MatrixXd::Identity(3, 3),
                     Eigen::MatrixXd::Identity(3, 3)}};
  const DenseTensor tensor = materialize(odeco);

  auto basis_tuple = [](int i0, int i1, int i2) {
    Eigen::VectorXcd a = Eigen::VectorXcd::Zero(2);
    Eigen::VectorXcd b = Eigen::VectorXcd::Zero(3);
    Eigen::VectorXcd c = Eigen::VectorXcd::Zero(3);
    a(i0) = 1.0;
    b(i1) = 1.0;
    c(i2) = 1.0;
    return SingularTuple{{ProjectivePoint(a), ProjectivePoint(b), ProjectivePoint(c)},
                         TupleKind::unclassified};
  };

  const auto fixed = singular_classify(tensor, basis_tuple(0, 0, 0));
  CHECK(fixed.verdict == ClassifyVerdict::fixed);
  CHECK(fixed.max_residual < 1e-12);
  CHECK(fixed.contraction_magnitude == doctest::Approx(1.0));

  // zero contraction in every mode: (e1, e3, e3) hits no diagonal term
  const auto base = singular_classify(tensor, basis_tuple(0, 2, 2));
  CHECK(base.verdict == ClassifyVerdict::base);
  CHECK(base.max_residual < 1e-12);
  CHECK(base.contraction_magnitude < 1e-12);

  const auto off = singular_classify(tensor, basis_tuple(0, 0, 1));
  CHECK(off.verdict == ClassifyVerdict::not_singular);
}

TEST_CASE("truncated polynomial arithmetic") {
  const std::vector<int> caps = {2, 2};
  const auto x = TruncatedPolynomial::variable(0, caps);
  const auto y = TruncatedPolynomial::variable(1, caps);
  const auto p = (x + y) * (x + y);

  const std::vector<int> xx = {2, 0}, xy = {1, 1}, yy = {0, 2};
  CHECK(p.coefficient(xx) == 1);
  CHECK(p.coefficient(xy) == 2);
  CHECK(p.coefficient(yy) == 1);
  CHECK(p.coefficient_sum() == 4);

  // cap at degree 2 per variable: x^3 and x^2 y^2 must vanish
  const auto cube = p * (x + y);
  const std::vector<int> x2y = {2, 1};
  CHECK(cube.coefficient(x2y) == 3);
  CHECK(cube.term_count() == 2);

  const auto fourth = p.pow(2);
  const std::vector<int> x2y2 = {2, 2};
  CHECK(fourth.coefficient(x2y2) == 6);
  CHECK(fourth.term_count() == 1);
}

TEST_CASE("truncated polynomial guards its limits") {
  CHECK_THROWS_AS(TruncatedPolynomial::one({}), std::invalid_argument);
  CHECK_THROWS_AS(TruncatedPolynomial::one(std::vector<int>(9, 1)), std::invalid_argument);
  CHECK_THROWS_AS(TruncatedPolynomial::one({300}), std::invalid_argument);
  CHECK_THROWS_AS(TruncatedPolynomial::variable(2, {1, 1}), std::invalid_argument);
}

TEST_CASE("parallel_for fills every slot at any worker count") {
  const std::size_t count = 1000;
  for (int threads : {1, 2, 4}) {
    std::vector<int> slots(count, 0);
    std::atomic<int> calls{0};
    parallel_for(count, threads, [&](std::size_t i) {
      slots[i] = static_cast<int>(i) + 1;
      calls.fetch_add(1);
    });
    CHECK(calls.load() == static_cast<int>(count));
    for (std::size_t i = 0; i < count; ++i) CHECK(slots[i] == static_cast<int>(i) + 1);
  }
}

TEST_CASE("thread count resolution order") {
  CHECK(resolve_thread_count(3) == 3);
  setenv("ODECO_SPECTRA_THREADS", "2", 1);
  CHECK(resolve_thread_count(0) == 2);
  unsetenv("ODECO_SPECTRA_THREADS");
  CHECK(resolve_thread_count(0) >= 1);
}

TEST_CASE("random stream is deterministic and well scaled") {
  Rng a(123), b(123);
  for (int i = 0; i < 100; ++i) {
    CHECK(a.uniform01() == b.uniform01());
    CHECK(a.gaussian() == b.gaussian());
  }

  Rng c(7);
  double sum = 0.0, sumsq = 0.0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    const double u = c.uniform01();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    const double g = c.gaussian();
    sum += g;
    sumsq += g * g;
  }
  CHECK(std::abs(sum / n) < 0.05);
  CHECK(std::abs(sumsq / n - 1.0) < 0.05);

  double mod2 = 0.0;
  for (int i = 0; i < n; ++i) mod2 += std::norm(c.complex_gaussian());
  CHECK(std::abs(mod2 / n - 1.0) < 0.05);
}
