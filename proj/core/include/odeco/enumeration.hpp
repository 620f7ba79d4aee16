#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "odeco/bigint.hpp"
#include "odeco/projective.hpp"
#include "odeco/tensor.hpp"

namespace odeco {

// Discrete data selecting one isolated singular vector tuple of a weighted
// diagonal tensor: a nonempty support inside {0, ..., n-1}, and for every
// support index after the first (the lead) a root-of-unity exponent and a
// sign vector. With q = 2d-4, the root factor is eta = exp(2*pi*i*k/q) and
// the signs (chi_2, ..., chi_d) in {-1, +1} must satisfy
// prod_j chi_j = (-1)^k; the lead index carries eta = 1 and all-plus signs.
struct TypeISpec {
  std::vector<int> support;              // ascending, 0-based
  std::vector<int> eta;                  // exponent k per non-lead, 0 <= k < 2d-4
  std::vector<std::vector<int>> signs;   // per non-lead: d-1 entries in {-1, +1}

  // real iff every eta exponent is a multiple of d-2 (eta = +1 or -1)
  bool is_real(int order) const;

  void validate(int order, int min_dim) const;
};

struct Type1Counts {
  BigInt total;
  BigInt real_total;
};

// closed forms ((q+1)^n - 1)/q with q = 2^(d-1) (d-2), resp. q = 2^(d-1)
Type1Counts type1_counts(int n, int d);

// Forced-zero pattern: rows[i] lists the modes (0-based) whose vector is
// zero in coordinate i. Exactly one row per i in {0, ..., n-1}, each row
// ascending with at least two modes.
struct ZeroPattern {
  std::vector<std::vector<int>> rows;

  bool operator==(const ZeroPattern&) const = default;
  auto operator<=>(const ZeroPattern&) const = default;
};

// a pattern is realizable iff no mode is forced to zero in n_j or more rows
bool pattern_valid(const ZeroPattern& pattern, const TensorShape& shape);

// sum_j (n_j - 1) minus the total number of forced zeros
int pattern_dimension(const ZeroPattern& pattern, const TensorShape& shape);

// per-mode projective dimension of the free subspace
std::vector<int> pattern_factor_dims(const ZeroPattern& pattern, const TensorShape& shape);

// One maximal component of the base locus: every row picks exactly one
// mode pair.
struct TypeIIComponent {
  ZeroPattern pattern;
  int dimension = 0;
  std::vector<int> factor_dims;
};

struct Type2Counts {
  BigInt closed_form;   // C(d,2)^n - c (d-1)^n + C(c,2)
  BigInt chow_count;    // coefficient sum of the truncated expansion
  int dimension = 0;    // sum_j (n_j - 1) - 2n
  bool empty() const { return closed_form == 0; }
};

// computes both routes; they must agree (logic_error otherwise)
Type2Counts type2_counts(const TensorShape& shape);

inline constexpr std::int64_t kEnumerationLimit = 1000000;

// Streaming enumeration in a fixed deterministic order: supports by
// increasing bitmask value, per-support choices as an odometer over the
// non-lead indices (last index fastest), each local choice ordered by
// (eta exponent, sign bits).
void for_each_type1(const TensorShape& shape, const std::function<void(const TypeISpec&)>& fn);

// materialized variant; throws std::length_error past kEnumerationLimit
std::vector<TypeISpec> enumerate_type1(const TensorShape& shape);

// rows as an odometer (row 0 slowest), mode pairs in lexicographic order
void for_each_type2(const TensorShape& shape, const std::function<void(const TypeIIComponent&)>& fn);

std::vector<TypeIIComponent> enumerate_type2(const TensorShape& shape);

// Coordinates of the tuple selected by spec for the weighted diagonal
// tensor with the given positive weights: modulus sigma_i^(-1/(d-2)) on the
// support, zero elsewhere. kind = fixed.
SingularTuple realize_type1_diagonal(const TypeISpec& spec, const TensorShape& shape,
                                     const Eigen::VectorXd& sigmas);

// Same tuple pushed through the factors of a validated odeco tensor.
SingularTuple realize_type1(const TypeISpec& spec, const OdecoTensor& odeco);

// Random point of the component: free coordinates drawn Gaussian (complex
// unless real_only), forced coordinates exactly zero. kind = base.
SingularTuple sample_base_point_diagonal(const TypeIIComponent& component, const TensorShape& shape,
                                         std::uint64_t seed, bool real_only = false);

SingularTuple sample_base_point(const TypeIIComponent& component, const OdecoTensor& odeco,
                                std::uint64_t seed, bool real_only = false);

}  // namespace odeco
