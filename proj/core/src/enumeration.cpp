#include "odeco/enumeration.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "odeco/polynomial.hpp"
#include "odeco/random.hpp"

namespace odeco {

namespace {

// eta = exp(2 pi i k / q), exact on quarter turns
Complex root_of_unity(int k, int q) {
  k = ((k % q) + q) % q;
  if (k == 0) return {1.0, 0.0};
  if (2 * k == q) return {-1.0, 0.0};
  if (4 * k == q) return {0.0, 1.0};
  if (4 * k == 3 * q) return {0.0, -1.0};
  const double angle = 2.0 * M_PI * static_cast<double>(k) / static_cast<double>(q);
  return {std::cos(angle), std::sin(angle)};
}

int sign_product(const std::vector<int>& signs) {
  int p = 1;
  for (int s : signs) p *= s;
  return p;
}

}  // namespace

bool TypeISpec::is_real(int order) const {
  const int half = order - 2;
  return std::all_of(eta.begin(), eta.end(), [&](int k) { return k % half == 0; });
}

void TypeISpec::validate(int order, int min_dim) const {
  const int d = order;
  const int q = 2 * d - 4;
  if (support.empty()) throw std::invalid_argument("TypeISpec: empty support");
  if (!std::is_sorted(support.begin(), support.end()) ||
      std::adjacent_find(support.begin(), support.end()) != support.end()) {
    throw std::invalid_argument("TypeISpec: support must be strictly ascending");
  }
  if (support.front() < 0 || support.back() >= min_dim) {
    throw std::invalid_argument("TypeISpec: support index out of range");
  }
  const std::size_t nonleads = support.size() - 1;
  if (eta.size() != nonleads || signs.size() != nonleads) {
    throw std::invalid_argument("TypeISpec: need one eta exponent and one sign vector per non-lead index");
  }
  for (std::size_t i = 0; i < nonleads; ++i) {
    if (eta[i] < 0 || eta[i] >= q) throw std::invalid_argument("TypeISpec: eta exponent out of range");
    if (static_cast<int>(signs[i].size()) != d - 1) {
      throw std::invalid_argument("TypeISpec: sign vectors must have d-1 entries");
    }
    for (int s : signs[i]) {
      if (s != 1 && s != -1) throw std::invalid_argument("TypeISpec: signs must be +1 or -1");
    }
    const int parity = (eta[i] % 2 == 0) ? 1 : -1;
    if (sign_product(signs[i]) != parity) {
      throw std::invalid_argument("TypeISpec: sign product must equal (-1)^k for eta exponent k");
    }
  }
}

Type1Counts type1_counts(int n, int d) {
  if (n < 1 || d < 3) throw std::invalid_argument("type1_counts: need n >= 1, d >= 3");
  const BigInt q = ipow(2, d - 1) * (d - 2);
  const BigInt qr = ipow(2, d - 1);
  Type1Counts out;
  out.total = (ipow(q + 1, n) - 1) / q;
  out.real_total = (ipow(qr + 1, n) - 1) / qr;
  return out;
}

bool pattern_valid(const ZeroPattern& pattern, const TensorShape& shape) {
  const int d = shape.order();
  const int n = shape.min_dim();
  if (static_cast<int>(pattern.rows.size()) != n) return false;
  std::vector<int> zero_count(static_cast<std::size_t>(d), 0);
  for (const auto& row : pattern.rows) {
    if (row.size() < 2) return false;
    if (!std::is_sorted(row.begin(), row.end()) ||
        std::adjacent_find(row.begin(), row.end()) != row.end()) {
      return false;
    }
    if (row.front() < 0 || row.back() >= d) return false;
    for (int j : row) ++zero_count[static_cast<std::size_t>(j)];
  }
  for (int j = 0; j < d; ++j) {
    if (zero_count[static_cast<std::size_t>(j)] >= shape.dim(j)) return false;
  }
  return true;
}

int pattern_dimension(const ZeroPattern& pattern, const TensorShape& shape) {
  int dim = 0;
  for (int nj : shape.dims()) dim += nj - 1;
  for (const auto& row : pattern.rows) dim -= static_cast<int>(row.size());
  return dim;
}

std::vector<int> pattern_factor_dims(const ZeroPattern& pattern, const TensorShape& shape) {
  const int d = shape.order();
  std::vector<int> zero_count(static_cast<std::size_t>(d), 0);
  for (const auto& row : pattern.rows) {
    for (int j : row) ++zero_count[static_cast<std::size_t>(j)];
  }
  std::vector<int> out(static_cast<std::size_t>(d));
  for (int j = 0; j < d; ++j) {
    out[static_cast<std::size_t>(j)] = shape.dim(j) - zero_count[static_cast<std::size_t>(j)] - 1;
  }
  return out;
}

Type2Counts type2_counts(const TensorShape& shape) {
  const int d = shape.order();
  const int n = shape.min_dim();
  const int c = shape.min_dim_multiplicity();
  Type2Counts out;
  out.closed_form = ipow(binomial(d, 2), n) - c * ipow(d - 1, n) + binomial(c, 2);
  out.chow_count = chow_pattern_count(shape);
  out.dimension = shape.base_locus_dimension();
  if (out.closed_form != out.chow_count) {
    throw std::logic_error("type2_counts: closed form and truncated expansion disagree for " +
                           shape.to_string());
  }
  return out;
}

void for_each_type1(const TensorShape& shape, const std::function<void(const TypeISpec&)>& fn) {
  const int d = shape.order();
  const int n = shape.min_dim();
  const int q = 2 * d - 4;
  const int free_count = d - 2;                  // free sign bits chi_2 ... chi_{d-1}
  const int local_choices = q << free_count;     // chi_d balances the product

  // local choice c = k * 2^(d-2) + s: exponent k first, sign bits after,
  // the first free sign in the highest bit
  auto decode_local = [&](int c, int& k, std::vector<int>& signs) {
    const int s = c & ((1 << free_count) - 1);
    k = c >> free_count;
    int prod = 1;
    for (int b = 0; b < free_count; ++b) {
      const int v = ((s >> (free_count - 1 - b)) & 1) ? -1 : 1;
      signs[static_cast<std::size_t>(b)] = v;
      prod *= v;
    }
    const int parity = (k % 2 == 0) ? 1 : -1;
    signs[static_cast<std::size_t>(d - 2)] = prod * parity;
  };

  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << n); ++mask) {
    TypeISpec spec;
    for (int i = 0; i < n; ++i) {
      if (mask & (std::uint64_t{1} << i)) spec.support.push_back(i);
    }
    const std::size_t nonleads = spec.support.size() - 1;
    spec.eta.assign(nonleads, 0);
    spec.signs.assign(nonleads, std::vector<int>(static_cast<std::size_t>(d - 1), 1));
    std::vector<int> odometer(nonleads, 0);
    bool more = true;
    while (more) {
      for (std::size_t i = 0; i < nonleads; ++i) {
        decode_local(odometer[i], spec.eta[i], spec.signs[i]);
      }
      fn(spec);
      more = false;
      for (std::size_t pos = nonleads; pos-- > 0;) {
        if (++odometer[pos] < local_choices) {
          more = true;
          break;
        }
        odometer[pos] = 0;
      }
    }
  }
}

std::vector<TypeISpec> enumerate_type1(const TensorShape& shape) {
  Type1Counts counts = type1_counts(shape.min_dim(), shape.order());
  if (counts.total > kEnumerationLimit) {
    throw std::length_error("enumerate_type1: " + counts.total.str() +
                            " tuples exceed the enumeration limit; use for_each_type1");
  }
  std::vector<TypeISpec> out;
  out.reserve(static_cast<std::size_t>(counts.total));
  for_each_type1(shape, [&](const TypeISpec& spec) { out.push_back(spec); });
  return out;
}

void for_each_type2(const TensorShape& shape, const std::function<void(const TypeIIComponent&)>& fn) {
  const int d = shape.order();
  const int n = shape.min_dim();
  std::vector<std::pair<int, int>> pairs;
  for (int j = 0; j < d; ++j) {
    for (int k = j + 1; k < d; ++k) pairs.emplace_back(j, k);
  }
  const std::size_t pair_count = pairs.size();
  std::vector<std::size_t> choice(static_cast<std::size_t>(n), 0);
  for (;;) {
    ZeroPattern pattern;
    pattern.rows.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      const auto& [a, b] = pairs[choice[static_cast<std::size_t>(i)]];
      pattern.rows.push_back({a, b});
    }
    if (pattern_valid(pattern, shape)) {
      TypeIIComponent component;
      component.dimension = pattern_dimension(pattern, shape);
      component.factor_dims = pattern_factor_dims(pattern, shape);
      component.pattern = std::move(pattern);
      fn(component);
    }
    int pos = n;
    while (pos > 0) {
      --pos;
      if (++choice[static_cast<std::size_t>(pos)] < pair_count) break;
      choice[static_cast<std::size_t>(pos)] = 0;
      if (pos == 0) return;
    }
  }
}

std::vector<TypeIIComponent> enumerate_type2(const TensorShape& shape) {
  Type2Counts counts = type2_counts(shape);
  if (counts.closed_form > kEnumerationLimit) {
    throw std::length_error("enumerate_type2: " + counts.closed_form.str() +
                            " components exceed the enumeration limit; use for_each_type2");
  }
  std::vector<TypeIIComponent> out;
  out.reserve(static_cast<std::size_t>(counts.closed_form));
  for_each_type2(shape, [&](const TypeIIComponent& component) { out.push_back(component); });
  return out;
}

SingularTuple realize_type1_diagonal(const TypeISpec& spec, const TensorShape& shape,
                                     const Eigen::VectorXd& sigmas) {
  const int d = shape.order();
  const int n = shape.min_dim();
  spec.validate(d, n);
  if (sigmas.size() != n) throw std::invalid_argument("realize_type1_diagonal: weight count mismatch");
  for (int i = 0; i < n; ++i) {
    if (!(sigmas[i] > 0.0)) throw std::invalid_argument("realize_type1_diagonal: weights must be positive");
  }
  const int q = 2 * d - 4;
  const double inv_power = -1.0 / static_cast<double>(d - 2);
  SingularTuple tuple;
  tuple.kind = TupleKind::fixed;
  std::vector<Eigen::VectorXcd> coords(static_cast<std::size_t>(d));
  for (int j = 0; j < d; ++j) coords[static_cast<std::size_t>(j)] = Eigen::VectorXcd::Zero(shape.dim(j));
  const int lead = spec.support.front();
  const double lead_rho = std::pow(sigmas[lead], inv_power);
  for (int j = 0; j < d; ++j) coords[static_cast<std::size_t>(j)][lead] = lead_rho;
  for (std::size_t t = 1; t < spec.support.size(); ++t) {
    const int i = spec.support[t];
    const double rho = std::pow(sigmas[i], inv_power);
    const Complex eta = root_of_unity(spec.eta[t - 1], q);
    coords[0][i] = eta * rho;
    for (int j = 1; j < d; ++j) {
      coords[static_cast<std::size_t>(j)][i] =
          eta * static_cast<double>(spec.signs[t - 1][static_cast<std::size_t>(j - 1)]) * rho;
    }
  }
  for (int j = 0; j < d; ++j) tuple.points.emplace_back(std::move(coords[static_cast<std::size_t>(j)]));
  return tuple;
}

SingularTuple realize_type1(const TypeISpec& spec, const OdecoTensor& odeco) {
  odeco.validate(1e-10);
  SingularTuple diag = realize_type1_diagonal(spec, odeco.shape, odeco.sigmas);
  SingularTuple out;
  out.kind = TupleKind::fixed;
  for (int j = 0; j < odeco.shape.order(); ++j) {
    out.points.emplace_back(odeco.factors[static_cast<std::size_t>(j)] *
                            diag.points[static_cast<std::size_t>(j)].coords());
  }
  return out;
}

SingularTuple sample_base_point_diagonal(const TypeIIComponent& component, const TensorShape& shape,
                                         std::uint64_t seed, bool real_only) {
  const int d = shape.order();
  const int n = shape.min_dim();
  if (!pattern_valid(component.pattern, shape)) {
    throw std::invalid_argument("sample_base_point_diagonal: invalid pattern for shape " +
                                shape.to_string());
  }
  Rng rng(seed);
  SingularTuple tuple;
  tuple.kind = TupleKind::base;
  for (int j = 0; j < d; ++j) {
    Eigen::VectorXcd x = Eigen::VectorXcd::Zero(shape.dim(j));
    bool any = false;
    for (int i = 0; i < shape.dim(j); ++i) {
      const bool forced = i < n && std::binary_search(component.pattern.rows[static_cast<std::size_t>(i)].begin(),
                                                      component.pattern.rows[static_cast<std::size_t>(i)].end(), j);
      if (!forced) {
        x[i] = real_only ? Complex(rng.gaussian(), 0.0) : rng.complex_gaussian();
        any = true;
      }
    }
    if (!any) throw std::logic_error("sample_base_point_diagonal: mode with no free coordinate");
    tuple.points.emplace_back(std::move(x));
  }
  return tuple;
}

SingularTuple sample_base_point(const TypeIIComponent& component, const OdecoTensor& odeco,
                                std::uint64_t seed, bool real_only) {
  odeco.validate(1e-10);
  SingularTuple diag = sample_base_point_diagonal(component, odeco.shape, seed, real_only);
  SingularTuple out;
  out.kind = TupleKind::base;
  for (int j = 0; j < odeco.shape.order(); ++j) {
    out.points.emplace_back(odeco.factors[static_cast<std::size_t>(j)] *
                            diag.points[static_cast<std::size_t>(j)].coords());
  }
  return out;
}

}  // namespace odeco
