#include "odeco/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "odeco/random.hpp"

namespace odeco {

DenseTensor::DenseTensor(TensorShape shape)
    : shape_(std::move(shape)), entries_(static_cast<std::size_t>(shape_.entry_count()), 0.0) {}

DenseTensor::DenseTensor(TensorShape shape, std::vector<double> entries)
    : shape_(std::move(shape)), entries_(std::move(entries)) {
  if (static_cast<std::int64_t>(entries_.size()) != shape_.entry_count()) {
    throw std::invalid_argument("DenseTensor: expected " + std::to_string(shape_.entry_count()) +
                                " entries for shape " + shape_.to_string() + ", got " +
                                std::to_string(entries_.size()));
  }
}

std::int64_t DenseTensor::flat_index(std::span<const int> index) const {
  const auto& dims = shape_.dims();
  if (index.size() != dims.size()) throw std::invalid_argument("DenseTensor: index order mismatch");
  std::int64_t flat = 0;
  for (std::size_t j = 0; j < dims.size(); ++j) {
    if (index[j] < 0 || index[j] >= dims[j]) throw std::out_of_range("DenseTensor: index out of range");
    flat = flat * dims[j] + index[j];
  }
  return flat;
}

double DenseTensor::max_abs() const {
  double m = 0.0;
  for (double e : entries_) m = std::max(m, std::abs(e));
  return m;
}

double DenseTensor::frobenius_norm() const {
  double s = 0.0;
  for (double e : entries_) s += e * e;
  return std::sqrt(s);
}

DenseTensor& DenseTensor::add_scaled(const DenseTensor& other, double factor) {
  if (!(other.shape_ == shape_)) throw std::invalid_argument("DenseTensor::add_scaled: shape mismatch");
  for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] += factor * other.entries_[i];
  return *this;
}

DenseTensor& DenseTensor::scale(double factor) {
  for (double& e : entries_) e *= factor;
  return *this;
}

double OdecoTensor::orthogonality_defect() const {
  double worst = 0.0;
  for (const auto& V : factors) {
    Eigen::MatrixXd G = V.transpose() * V;
    G.diagonal().array() -= 1.0;
    worst = std::max(worst, G.cwiseAbs().maxCoeff());
  }
  return worst;
}

void OdecoTensor::validate(double tol) const {
  const int d = shape.order();
  const int n = shape.min_dim();
  if (static_cast<int>(factors.size()) != d) {
    throw std::invalid_argument("OdecoTensor: expected " + std::to_string(d) + " factors, got " +
                                std::to_string(factors.size()));
  }
  if (sigmas.size() != n) {
    throw std::invalid_argument("OdecoTensor: expected " + std::to_string(n) + " weights, got " +
                                std::to_string(sigmas.size()));
  }
  for (int i = 0; i < n; ++i) {
    if (sigmas[i] == 0.0) throw std::invalid_argument("OdecoTensor: weight " + std::to_string(i) + " is zero");
  }
  for (int j = 0; j < d; ++j) {
    const auto& V = factors[static_cast<std::size_t>(j)];
    if (V.rows() != shape.dim(j) || V.cols() != shape.dim(j)) {
      throw std::invalid_argument("OdecoTensor: factor " + std::to_string(j) + " is " +
                                  std::to_string(V.rows()) + "x" + std::to_string(V.cols()) +
                                  ", expected square of size " + std::to_string(shape.dim(j)));
    }
  }
  double defect = orthogonality_defect();
  if (defect > tol) {
    throw std::invalid_argument("OdecoTensor: orthogonality defect " + std::to_string(defect) +
                                " exceeds tolerance");
  }
}

namespace {

// advances a row-major multi-index; returns false after the last one
inline bool advance(std::vector<int>& idx, const std::vector<int>& dims) {
  for (int j = static_cast<int>(dims.size()) - 1; j >= 0; --j) {
    if (++idx[static_cast<std::size_t>(j)] < dims[static_cast<std::size_t>(j)]) return true;
    idx[static_cast<std::size_t>(j)] = 0;
  }
  return false;
}

}  // namespace

DenseTensor materialize(const OdecoTensor& odeco) {
  odeco.validate(1e-10);
  DenseTensor out(odeco.shape);
  const auto& dims = odeco.shape.dims();
  const int d = odeco.shape.order();
  const int n = odeco.shape.min_dim();
  std::vector<double> buffer(static_cast<std::size_t>(odeco.shape.entry_count()));
  for (int i = 0; i < n; ++i) {
    // accumulate sigma_i * (column i of each factor) as a rank-one update
    std::size_t pos = 0;
    std::vector<int> idx(static_cast<std::size_t>(d), 0);
    do {
      double p = odeco.sigmas[i];
      for (int j = 0; j < d; ++j) p *= odeco.factors[static_cast<std::size_t>(j)](idx[static_cast<std::size_t>(j)], i);
      buffer[pos++] = p;
    } while (advance(idx, dims));
    DenseTensor term(odeco.shape, buffer);
    out.add_scaled(term, 1.0);
  }
  return out;
}

std::variant<Complex, Eigen::VectorXcd> contract(
    const DenseTensor& tensor, std::span<const std::optional<Eigen::VectorXcd>> slots) {
  const int d = tensor.shape().order();
  if (static_cast<int>(slots.size()) != d) throw std::invalid_argument("contract: slot count mismatch");
  int missing = -1;
  for (int j = 0; j < d; ++j) {
    if (!slots[static_cast<std::size_t>(j)].has_value()) {
      if (missing >= 0) throw std::invalid_argument("contract: more than one empty slot");
      missing = j;
    } else if (slots[static_cast<std::size_t>(j)]->size() != tensor.shape().dim(j)) {
      throw std::invalid_argument("contract: vector length mismatch in mode " + std::to_string(j));
    }
  }
  std::vector<Eigen::VectorXcd> vectors;
  vectors.reserve(static_cast<std::size_t>(d));
  for (int j = 0; j < d; ++j) {
    if (slots[static_cast<std::size_t>(j)].has_value()) {
      vectors.push_back(*slots[static_cast<std::size_t>(j)]);
    } else {
      vectors.push_back(Eigen::VectorXcd::Zero(tensor.shape().dim(j)));
    }
  }
  if (missing < 0) return contract_full(tensor, vectors);
  return contract_missing(tensor, vectors, missing);
}

Complex contract_full(const DenseTensor& tensor, std::span<const Eigen::VectorXcd> vectors) {
  const auto& dims = tensor.shape().dims();
  const int d = tensor.shape().order();
  if (static_cast<int>(vectors.size()) != d) throw std::invalid_argument("contract_full: vector count mismatch");
  for (int j = 0; j < d; ++j) {
    if (vectors[static_cast<std::size_t>(j)].size() != dims[static_cast<std::size_t>(j)]) {
      throw std::invalid_argument("contract_full: vector length mismatch in mode " + std::to_string(j));
    }
  }
  Complex acc = 0.0;
  std::vector<int> idx(static_cast<std::size_t>(d), 0);
  std::size_t pos = 0;
  auto entries = tensor.entries();
  do {
    double e = entries[pos++];
    if (e != 0.0) {
      Complex p = e;
      for (int j = 0; j < d; ++j) p *= vectors[static_cast<std::size_t>(j)][idx[static_cast<std::size_t>(j)]];
      acc += p;
    }
  } while (advance(idx, dims));
  return acc;
}

Eigen::VectorXcd contract_missing(const DenseTensor& tensor,
                                  std::span<const Eigen::VectorXcd> vectors, int missing_mode) {
  const auto& dims = tensor.shape().dims();
  const int d = tensor.shape().order();
  if (missing_mode < 0 || missing_mode >= d) throw std::invalid_argument("contract_missing: bad mode");
  for (int j = 0; j < d; ++j) {
    if (j != missing_mode && vectors[static_cast<std::size_t>(j)].size() != dims[static_cast<std::size_t>(j)]) {
      throw std::invalid_argument("contract_missing: vector length mismatch in mode " + std::to_string(j));
    }
  }
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(dims[static_cast<std::size_t>(missing_mode)]);
  std::vector<int> idx(static_cast<std::size_t>(d), 0);
  std::size_t pos = 0;
  auto entries = tensor.entries();
  do {
    double e = entries[pos++];
    if (e != 0.0) {
      Complex p = e;
      for (int j = 0; j < d; ++j) {
        if (j != missing_mode) p *= vectors[static_cast<std::size_t>(j)][idx[static_cast<std::size_t>(j)]];
      }
      out[idx[static_cast<std::size_t>(missing_mode)]] += p;
    }
  } while (advance(idx, dims));
  return out;
}

Eigen::MatrixXcd contract_missing_pair(const DenseTensor& tensor,
                                       std::span<const Eigen::VectorXcd> vectors, int mode_a,
                                       int mode_b) {
  const auto& dims = tensor.shape().dims();
  const int d = tensor.shape().order();
  if (mode_a == mode_b || mode_a < 0 || mode_b < 0 || mode_a >= d || mode_b >= d) {
    throw std::invalid_argument("contract_missing_pair: bad mode pair");
  }
  Eigen::MatrixXcd out =
      Eigen::MatrixXcd::Zero(dims[static_cast<std::size_t>(mode_a)], dims[static_cast<std::size_t>(mode_b)]);
  std::vector<int> idx(static_cast<std::size_t>(d), 0);
  std::size_t pos = 0;
  auto entries = tensor.entries();
  do {
    double e = entries[pos++];
    if (e != 0.0) {
      Complex p = e;
      for (int j = 0; j < d; ++j) {
        if (j != mode_a && j != mode_b) p *= vectors[static_cast<std::size_t>(j)][idx[static_cast<std::size_t>(j)]];
      }
      out(idx[static_cast<std::size_t>(mode_a)], idx[static_cast<std::size_t>(mode_b)]) += p;
    }
  } while (advance(idx, dims));
  return out;
}

Eigen::MatrixXd complete_orthogonal(const Eigen::MatrixXd& columns) {
  const Eigen::Index m = columns.rows();
  const Eigen::Index k = columns.cols();
  if (k > m) throw std::invalid_argument("complete_orthogonal: more columns than rows");
  Eigen::MatrixXd G = columns.transpose() * columns;
  G.diagonal().array() -= 1.0;
  if (k > 0 && G.cwiseAbs().maxCoeff() > 1e-10) {
    throw std::invalid_argument("complete_orthogonal: given columns are not orthonormal");
  }
  Eigen::MatrixXd full(m, m);
  if (k > 0) full.leftCols(k) = columns;
  // Gram-Schmidt against the accepted columns, seeded by standard basis
  // vectors; a fixed deterministic sweep over candidates.
  Eigen::Index have = k;
  for (Eigen::Index cand = 0; cand < m && have < m; ++cand) {
    Eigen::VectorXd v = Eigen::VectorXd::Unit(m, cand);
    for (int pass = 0; pass < 2; ++pass) {
      for (Eigen::Index i = 0; i < have; ++i) v -= full.col(i).dot(v) * full.col(i);
    }
    double norm = v.norm();
    if (norm > 1e-8) {
      full.col(have++) = v / norm;
    }
  }
  if (have < m) throw std::runtime_error("complete_orthogonal: failed to complete the basis");
  return full;
}

OdecoTensor random_odeco(const TensorShape& shape, std::uint64_t seed, double sigma_lo,
                         double sigma_hi) {
  if (!(sigma_lo > 0.0) || !(sigma_hi >= sigma_lo)) {
    throw std::invalid_argument("random_odeco: weight range must satisfy 0 < lo <= hi");
  }
  Rng rng(seed);
  OdecoTensor out{shape, Eigen::VectorXd(shape.min_dim()), {}};
  const int d = shape.order();
  out.factors.reserve(static_cast<std::size_t>(d));
  for (int j = 0; j < d; ++j) {
    const int m = shape.dim(j);
    Eigen::MatrixXd A(m, m);
    for (int r = 0; r < m; ++r) {
      for (int c = 0; c < m; ++c) A(r, c) = rng.gaussian();
    }
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(A);
    Eigen::MatrixXd Q = qr.householderQ();
    Eigen::MatrixXd R = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int c = 0; c < m; ++c) {
      if (R(c, c) < 0) Q.col(c) = -Q.col(c);
    }
    out.factors.push_back(std::move(Q));
  }
  for (int i = 0; i < shape.min_dim(); ++i) out.sigmas[i] = rng.uniform(sigma_lo, sigma_hi);
  return out;
}

OdecoTensor canonicalize_odeco(const OdecoTensor& odeco) {
  odeco.validate(1e-10);
  OdecoTensor out = odeco;
  const int n = out.shape.min_dim();
  const std::size_t last = out.factors.size() - 1;
  for (int i = 0; i < n; ++i) {
    if (out.sigmas[i] < 0) {
      out.sigmas[i] = -out.sigmas[i];
      out.factors[last].col(i) = -out.factors[last].col(i);
    }
  }
  std::vector<int> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  std::stable_sort(perm.begin(), perm.end(),
                   [&](int a, int b) { return out.sigmas[a] > out.sigmas[b]; });
  Eigen::VectorXd sorted(n);
  for (int i = 0; i < n; ++i) sorted[i] = out.sigmas[perm[static_cast<std::size_t>(i)]];
  for (auto& V : out.factors) {
    Eigen::MatrixXd cols = V.leftCols(n);
    for (int i = 0; i < n; ++i) V.col(i) = cols.col(perm[static_cast<std::size_t>(i)]);
  }
  out.sigmas = sorted;
  return out;
}

}  // namespace odeco
