#pragma once

#include <vector>

#include <Eigen/Dense>

#include "odeco/projective.hpp"
#include "odeco/tensor.hpp"

namespace odeco {

// Square polynomial system for singular vector tuples in affine charts:
// per mode one coordinate is pinned to 1 (the seed's pivot) and the
// parallelism scale enters as an explicit multiplier, giving equations
//   F_j = T(x_1, ..., empty_j, ..., x_d) - lambda_j x_j          (n_j rows)
// in sum_j (n_j - 1) free coordinates plus d multipliers. The state vector
// lists the free coordinates mode by mode (ascending, pin skipped), then
// the multipliers.
class NewtonSystem {
 public:
  NewtonSystem(const DenseTensor& tensor, const SingularTuple& seed);

  int equation_count() const { return total_dims_; }
  int unknown_count() const { return total_dims_; }
  const std::vector<int>& pins() const { return pins_; }

  // state built from the seed: pivot-normalized coordinates, multipliers by
  // least squares
  Eigen::VectorXcd initial_state() const { return initial_; }

  Eigen::VectorXcd residual(const Eigen::VectorXcd& state) const;
  Eigen::MatrixXcd jacobian(const Eigen::VectorXcd& state) const;

  SingularTuple tuple(const Eigen::VectorXcd& state) const;
  std::vector<Complex> multipliers(const Eigen::VectorXcd& state) const;

  // When some pinned coordinate drops below 0.1 times the largest modulus
  // of its vector, moves the pin to the pivot and rescales that mode (the
  // multipliers are refit); returns whether anything changed.
  bool repin(Eigen::VectorXcd& state);

 private:
  std::vector<Eigen::VectorXcd> unpack(const Eigen::VectorXcd& state) const;
  Eigen::VectorXcd pack(const std::vector<Eigen::VectorXcd>& vectors,
                        const std::vector<Complex>& lambdas) const;
  std::vector<Complex> fit_multipliers(const std::vector<Eigen::VectorXcd>& vectors) const;

  const DenseTensor* tensor_;
  std::vector<int> pins_;
  int total_dims_ = 0;
  Eigen::VectorXcd initial_;
};

struct NewtonOptions {
  double tol = 1e-12;
  int max_iters = 50;
};

enum class NewtonStatus { converged, diverged, singular_jacobian };

struct NewtonResult {
  NewtonStatus status = NewtonStatus::diverged;
  SingularTuple tuple;
  double residual = 0.0;
  double condition = 0.0;  // SVD condition of the final Jacobian
  int iterations = 0;
};

// Plain Newton iteration with re-pinning; divergence is declared after five
// consecutive steps without residual decrease or on non-finite values.
NewtonResult newton_refine(const DenseTensor& tensor, const SingularTuple& seed,
                           const NewtonOptions& options = {});

}  // namespace odeco
