#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "odeco/shape.hpp"

namespace odeco {

using Complex = std::complex<double>;

// Dense real tensor in row-major layout (last index fastest).
class DenseTensor {
 public:
  explicit DenseTensor(TensorShape shape);
  DenseTensor(TensorShape shape, std::vector<double> entries);

  const TensorShape& shape() const { return shape_; }
  std::span<const double> entries() const { return entries_; }

  std::int64_t flat_index(std::span<const int> index) const;
  double operator()(std::span<const int> index) const { return entries_[static_cast<std::size_t>(flat_index(index))]; }
  double& at(std::span<const int> index) { return entries_[static_cast<std::size_t>(flat_index(index))]; }

  double max_abs() const;
  double frobenius_norm() const;

  DenseTensor& add_scaled(const DenseTensor& other, double factor);
  DenseTensor& scale(double factor);

 private:
  TensorShape shape_;
  std::vector<double> entries_;
};

// Weighted sum of rank-one products of orthonormal columns: n = min_j n_j
// terms with nonzero weights sigma_i, the i-th term being the outer product
// of column i of each factor. Factors are full square orthogonal matrices;
// columns beyond n complete the basis and carry no weight.
struct OdecoTensor {
  TensorShape shape;
  Eigen::VectorXd sigmas;
  std::vector<Eigen::MatrixXd> factors;

  // max over modes of the largest entry of |V^T V - I|
  double orthogonality_defect() const;

  // throws std::invalid_argument on size mismatch, zero weight, or
  // orthogonality defect above tol
  void validate(double tol = 1e-12) const;
};

DenseTensor materialize(const OdecoTensor& odeco);

// Multilinear contraction of every mode except at most one. Exactly one
// empty slot returns the partial contraction (a vector in that mode's
// space); no empty slot returns the full scalar contraction.
std::variant<Complex, Eigen::VectorXcd> contract(
    const DenseTensor& tensor, std::span<const std::optional<Eigen::VectorXcd>> slots);

Complex contract_full(const DenseTensor& tensor, std::span<const Eigen::VectorXcd> vectors);

// vectors[missing_mode] is ignored
Eigen::VectorXcd contract_missing(const DenseTensor& tensor,
                                  std::span<const Eigen::VectorXcd> vectors, int missing_mode);

// contracts every mode except mode_a and mode_b (vectors at those two slots
// are ignored); result is n_a x n_b
Eigen::MatrixXcd contract_missing_pair(const DenseTensor& tensor,
                                       std::span<const Eigen::VectorXcd> vectors, int mode_a,
                                       int mode_b);

// Extends k orthonormal columns of an m x k matrix (k <= m) to a full
// orthogonal m x m matrix. Throws if the given columns are not orthonormal
// to 1e-10.
Eigen::MatrixXd complete_orthogonal(const Eigen::MatrixXd& columns);

// Seeded random model: factors are Householder-QR orthogonalizations of
// Gaussian matrices, weights are uniform in [sigma_lo, sigma_hi].
OdecoTensor random_odeco(const TensorShape& shape, std::uint64_t seed, double sigma_lo = 1.0,
                         double sigma_hi = 2.0);

// Canonical form: weights positive and sorted descending (stable under
// ties), sign flips absorbed into the last factor, completion columns
// untouched.
OdecoTensor canonicalize_odeco(const OdecoTensor& odeco);

}  // namespace odeco
