#include "odeco/newton.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace odeco {

NewtonSystem::NewtonSystem(const DenseTensor& tensor, const SingularTuple& seed)
    : tensor_(&tensor) {
  const int d = tensor.shape().order();
  if (static_cast<int>(seed.points.size()) != d) {
    throw std::invalid_argument("NewtonSystem: seed has wrong number of modes");
  }
  std::vector<Eigen::VectorXcd> vectors;
  vectors.reserve(static_cast<std::size_t>(d));
  for (int j = 0; j < d; ++j) {
    if (seed.points[static_cast<std::size_t>(j)].dim() != tensor.shape().dim(j)) {
      throw std::invalid_argument("NewtonSystem: seed mode " + std::to_string(j) + " dimension mismatch");
    }
    ProjectivePoint canon = seed.points[static_cast<std::size_t>(j)].canonical();
    pins_.push_back(canon.pivot_index());
    vectors.push_back(canon.coords());
    total_dims_ += tensor.shape().dim(j);
  }
  initial_ = pack(vectors, fit_multipliers(vectors));
}

std::vector<Eigen::VectorXcd> NewtonSystem::unpack(const Eigen::VectorXcd& state) const {
  const int d = tensor_->shape().order();
  std::vector<Eigen::VectorXcd> vectors(static_cast<std::size_t>(d));
  int pos = 0;
  for (int j = 0; j < d; ++j) {
    const int nj = tensor_->shape().dim(j);
    Eigen::VectorXcd x(nj);
    for (int i = 0; i < nj; ++i) {
      x[i] = (i == pins_[static_cast<std::size_t>(j)]) ? Complex(1.0, 0.0) : state[pos++];
    }
    vectors[static_cast<std::size_t>(j)] = std::move(x);
  }
  return vectors;
}

Eigen::VectorXcd NewtonSystem::pack(const std::vector<Eigen::VectorXcd>& vectors,
                                    const std::vector<Complex>& lambdas) const {
  const int d = tensor_->shape().order();
  Eigen::VectorXcd state(total_dims_);
  int pos = 0;
  for (int j = 0; j < d; ++j) {
    const int nj = tensor_->shape().dim(j);
    for (int i = 0; i < nj; ++i) {
      if (i != pins_[static_cast<std::size_t>(j)]) state[pos++] = vectors[static_cast<std::size_t>(j)][i];
    }
  }
  for (int j = 0; j < d; ++j) state[pos++] = lambdas[static_cast<std::size_t>(j)];
  return state;
}

std::vector<Complex> NewtonSystem::fit_multipliers(const std::vector<Eigen::VectorXcd>& vectors) const {
  const int d = tensor_->shape().order();
  std::vector<Complex> lambdas(static_cast<std::size_t>(d));
  for (int j = 0; j < d; ++j) {
    const Eigen::VectorXcd u = contract_missing(*tensor_, vectors, j);
    const auto& x = vectors[static_cast<std::size_t>(j)];
    lambdas[static_cast<std::size_t>(j)] = x.dot(u) / x.squaredNorm();
  }
  return lambdas;
}

Eigen::VectorXcd NewtonSystem::residual(const Eigen::VectorXcd& state) const {
  const int d = tensor_->shape().order();
  std::vector<Eigen::VectorXcd> vectors = unpack(state);
  Eigen::VectorXcd F(total_dims_);
  int row = 0;
  const int lambda_base = total_dims_ - d;
  for (int j = 0; j < d; ++j) {
    const Complex lambda = state[lambda_base + j];
    Eigen::VectorXcd u = contract_missing(*tensor_, vectors, j);
    u -= lambda * vectors[static_cast<std::size_t>(j)];
    F.segment(row, tensor_->shape().dim(j)) = u;
    row += tensor_->shape().dim(j);
  }
  return F;
}

Eigen::MatrixXcd NewtonSystem::jacobian(const Eigen::VectorXcd& state) const {
  const int d = tensor_->shape().order();
  std::vector<Eigen::VectorXcd> vectors = unpack(state);
  const int lambda_base = total_dims_ - d;
  Eigen::MatrixXcd J = Eigen::MatrixXcd::Zero(total_dims_, total_dims_);
  std::vector<int> row_base(static_cast<std::size_t>(d), 0);
  std::vector<int> col_base(static_cast<std::size_t>(d), 0);
  {
    int row = 0, col = 0;
    for (int j = 0; j < d; ++j) {
      row_base[static_cast<std::size_t>(j)] = row;
      col_base[static_cast<std::size_t>(j)] = col;
      row += tensor_->shape().dim(j);
      col += tensor_->shape().dim(j) - 1;
    }
  }
  for (int j = 0; j < d; ++j) {
    const int nj = tensor_->shape().dim(j);
    const Complex lambda = state[lambda_base + j];
    for (int k = 0; k < d; ++k) {
      if (k == j) {
        // -lambda on the free coordinates of mode j
        int col = col_base[static_cast<std::size_t>(j)];
        for (int i = 0; i < nj; ++i) {
          if (i == pins_[static_cast<std::size_t>(j)]) continue;
          J(row_base[static_cast<std::size_t>(j)] + i, col++) -= lambda;
        }
      } else {
        const Eigen::MatrixXcd M = contract_missing_pair(*tensor_, vectors, j, k);
        int col = col_base[static_cast<std::size_t>(k)];
        for (int b = 0; b < tensor_->shape().dim(k); ++b) {
          if (b == pins_[static_cast<std::size_t>(k)]) continue;
          J.block(row_base[static_cast<std::size_t>(j)], col, nj, 1) += M.col(b);
          ++col;
        }
      }
    }
    J.block(row_base[static_cast<std::size_t>(j)], lambda_base + j, nj, 1) =
        -vectors[static_cast<std::size_t>(j)];
  }
  return J;
}

SingularTuple NewtonSystem::tuple(const Eigen::VectorXcd& state) const {
  std::vector<Eigen::VectorXcd> vectors = unpack(state);
  SingularTuple out;
  for (auto& x : vectors) out.points.emplace_back(std::move(x));
  return out;
}

std::vector<Complex> NewtonSystem::multipliers(const Eigen::VectorXcd& state) const {
  const int d = tensor_->shape().order();
  std::vector<Complex> lambdas(static_cast<std::size_t>(d));
  for (int j = 0; j < d; ++j) lambdas[static_cast<std::size_t>(j)] = state[total_dims_ - d + j];
  return lambdas;
}

bool NewtonSystem::repin(Eigen::VectorXcd& state) {
  std::vector<Eigen::VectorXcd> vectors = unpack(state);
  const int d = tensor_->shape().order();
  bool changed = false;
  for (int j = 0; j < d; ++j) {
    auto& x = vectors[static_cast<std::size_t>(j)];
    int pivot = 0;
    double best = std::abs(x[0]);
    for (int i = 1; i < x.size(); ++i) {
      if (std::abs(x[i]) > best) {
        best = std::abs(x[i]);
        pivot = i;
      }
    }
    if (std::abs(x[pins_[static_cast<std::size_t>(j)]]) < 0.1 * best) {
      pins_[static_cast<std::size_t>(j)] = pivot;
      x /= x[pivot];
      x[pivot] = 1.0;
      changed = true;
    }
  }
  if (changed) state = pack(vectors, fit_multipliers(vectors));
  return changed;
}

NewtonResult newton_refine(const DenseTensor& tensor, const SingularTuple& seed,
                           const NewtonOptions& options) {
  NewtonSystem system(tensor, seed);
  Eigen::VectorXcd state = system.initial_state();
  NewtonResult result;
  result.tuple = seed;
  double best = std::numeric_limits<double>::infinity();
  int stall = 0;
  for (int iter = 0; iter <= options.max_iters; ++iter) {
    const Eigen::VectorXcd F = system.residual(state);
    const double r = F.norm();
    result.iterations = iter;
    result.residual = r;
    if (!std::isfinite(r)) {
      result.status = NewtonStatus::diverged;
      result.tuple = seed;
      return result;
    }
    if (r < options.tol) {
      const Eigen::MatrixXcd J = system.jacobian(state);
      Eigen::JacobiSVD<Eigen::MatrixXcd> svd(J);
      const auto& sv = svd.singularValues();
      const double smin = sv[sv.size() - 1];
      result.condition = smin > 0.0 ? sv[0] / smin : std::numeric_limits<double>::infinity();
      result.status = NewtonStatus::converged;
      result.tuple = system.tuple(state);
      result.tuple.kind = TupleKind::unclassified;
      return result;
    }
    if (iter == options.max_iters) break;
    if (r >= best * (1.0 - 1e-12)) {
      if (++stall >= 5) {
        result.status = NewtonStatus::diverged;
        return result;
      }
    } else {
      stall = 0;
      best = r;
    }
    const Eigen::MatrixXcd J = system.jacobian(state);
    Eigen::FullPivLU<Eigen::MatrixXcd> lu(J);
    if (!lu.isInvertible()) {
      result.status = NewtonStatus::singular_jacobian;
      result.tuple = system.tuple(state);
      return result;
    }
    state += lu.solve(-F);
    system.repin(state);
  }
  result.status = NewtonStatus::diverged;
  return result;
}

}  // namespace odeco
