#include "odeco/power_method.hpp"

#include <cmath>
#include <sstream>
#include <vector>

#include <Eigen/Dense>

#include "odeco/random.hpp"

namespace odeco {

namespace {

void deflate(DenseTensor& tensor, double weight, const std::vector<Eigen::VectorXd>& vectors) {
  const TensorShape& shape = tensor.shape();
  const int d = shape.order();
  std::vector<int> index(static_cast<std::size_t>(d), 0);
  for (std::int64_t flat = 0; flat < shape.entry_count(); ++flat) {
    double product = weight;
    for (int j = 0; j < d; ++j) {
      product *= vectors[static_cast<std::size_t>(j)][index[static_cast<std::size_t>(j)]];
    }
    tensor.at(index) -= product;
    for (int j = d - 1; j >= 0; --j) {
      if (++index[static_cast<std::size_t>(j)] < shape.dim(j)) break;
      index[static_cast<std::size_t>(j)] = 0;
    }
  }
}

struct Extraction {
  bool converged = false;
  double weight = 0.0;
  std::vector<Eigen::VectorXd> vectors;
};

Extraction extract_term(const DenseTensor& tensor, const PowerMethodOptions& options, Rng& rng) {
  const TensorShape& shape = tensor.shape();
  const int d = shape.order();
  Extraction best;
  for (int restart = 0; restart < options.restarts; ++restart) {
    std::vector<Eigen::VectorXcd> x(static_cast<std::size_t>(d));
    for (int j = 0; j < d; ++j) {
      Eigen::VectorXd v(shape.dim(j));
      for (int i = 0; i < shape.dim(j); ++i) v[i] = rng.gaussian();
      x[static_cast<std::size_t>(j)] = (v / v.norm()).cast<Complex>();
    }
    bool converged = false;
    bool dead = false;
    for (int iter = 0; iter < options.max_iters && !dead; ++iter) {
      double delta = 0.0;
      for (int j = 0; j < d; ++j) {
        Eigen::VectorXcd u = contract_missing(tensor, x, j);
        const double norm = u.norm();
        if (!(norm > 1e-14)) {
          dead = true;
          break;
        }
        u /= norm;
        delta = std::max(delta, (u - x[static_cast<std::size_t>(j)]).norm());
        x[static_cast<std::size_t>(j)] = std::move(u);
      }
      if (!dead && delta < options.tol) {
        converged = true;
        break;
      }
    }
    if (!converged) continue;
    const double weight = std::real(contract_full(tensor, x));
    if (std::abs(weight) > std::abs(best.weight)) {
      best.converged = true;
      best.weight = weight;
      best.vectors.clear();
      for (int j = 0; j < d; ++j) {
        best.vectors.push_back(x[static_cast<std::size_t>(j)].real());
      }
    }
  }
  if (best.converged && best.weight < 0.0) {
    // the iteration settles with the sign in one mode; fold it out
    best.vectors.back() = -best.vectors.back();
    best.weight = -best.weight;
  }
  return best;
}

}  // namespace

DecomposeResult power_method_decompose(const DenseTensor& tensor,
                                       const PowerMethodOptions& options) {
  const TensorShape& shape = tensor.shape();
  const int d = shape.order();
  const int n = shape.min_dim();
  const double input_norm = tensor.frobenius_norm();
  DecomposeResult result;
  if (input_norm == 0.0) {
    result.status = DecomposeStatus::residual_floor;
    result.message = "input tensor is zero";
    return result;
  }

  Rng rng(options.seed);
  DenseTensor remainder = tensor;
  std::vector<double> weights;
  std::vector<std::vector<Eigen::VectorXd>> terms;
  for (int i = 0; i < n; ++i) {
    Extraction term = extract_term(remainder, options, rng);
    if (!term.converged) {
      result.status = DecomposeStatus::nonconvergence;
      std::ostringstream os;
      os << "no restart converged while extracting term " << (i + 1) << " of " << n;
      result.message = os.str();
      result.relative_residual = remainder.frobenius_norm() / input_norm;
      return result;
    }
    deflate(remainder, term.weight, term.vectors);
    weights.push_back(term.weight);
    terms.push_back(std::move(term.vectors));
  }

  // per mode, polish the recovered columns to an exactly orthonormal set and
  // extend to a full basis
  Eigen::VectorXd sigmas(n);
  std::vector<Eigen::MatrixXd> factors;
  for (int j = 0; j < d; ++j) {
    const int nj = shape.dim(j);
    Eigen::MatrixXd columns(nj, n);
    for (int i = 0; i < n; ++i) {
      columns.col(i) = terms[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    }
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(columns);
    Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(nj, n);
    const Eigen::MatrixXd r = qr.matrixQR().topRows(n).triangularView<Eigen::Upper>();
    for (int i = 0; i < n; ++i) {
      if (r(i, i) < 0.0) q.col(i) = -q.col(i);
    }
    factors.push_back(complete_orthogonal(q));
  }

  // refit the weights against the original tensor on the polished vectors
  for (int i = 0; i < n; ++i) {
    std::vector<Eigen::VectorXcd> x(static_cast<std::size_t>(d));
    for (int j = 0; j < d; ++j) {
      x[static_cast<std::size_t>(j)] = factors[static_cast<std::size_t>(j)].col(i).cast<Complex>();
    }
    sigmas[i] = std::real(contract_full(tensor, x));
  }

  OdecoTensor odeco{shape, std::move(sigmas), std::move(factors)};
  DenseTensor reconstruction = materialize(odeco);
  reconstruction.add_scaled(tensor, -1.0);
  result.relative_residual = reconstruction.frobenius_norm() / input_norm;
  result.decomposition = canonicalize_odeco(odeco);
  if (result.relative_residual > options.residual_tol) {
    result.status = DecomposeStatus::residual_floor;
    std::ostringstream os;
    os << "relative residual " << result.relative_residual << " exceeds " << options.residual_tol
       << "; input is not orthogonally decomposable to that accuracy";
    result.message = os.str();
  } else {
    result.status = DecomposeStatus::ok;
  }
  return result;
}

}  // namespace odeco
