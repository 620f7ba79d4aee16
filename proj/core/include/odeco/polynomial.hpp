#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "odeco/bigint.hpp"
#include "odeco/shape.hpp"

namespace odeco {

// Multivariate polynomial with exact integer coefficients over t_1 ... t_v,
// truncated by per-variable degree caps: any monomial whose exponent
// exceeds a cap is dropped immediately. Supports at most 8 variables with
// caps below 256 so an exponent vector packs into one 64-bit key; keys are
// kept in a std::map for deterministic iteration.
class TruncatedPolynomial {
 public:
  TruncatedPolynomial(int var_count, std::vector<int> caps);

  static TruncatedPolynomial one(std::vector<int> caps);
  static TruncatedPolynomial variable(int index, std::vector<int> caps);

  int var_count() const { return var_count_; }
  const std::vector<int>& caps() const { return caps_; }

  void add_term(std::span<const int> exponents, const BigInt& coeff);
  BigInt coefficient(std::span<const int> exponents) const;

  TruncatedPolynomial operator+(const TruncatedPolynomial& other) const;
  TruncatedPolynomial operator*(const TruncatedPolynomial& other) const;
  TruncatedPolynomial pow(int exponent) const;

  std::int64_t term_count() const { return static_cast<std::int64_t>(terms_.size()); }
  BigInt coefficient_sum() const;

 private:
  std::uint64_t pack(std::span<const int> exponents) const;
  void unpack(std::uint64_t key, std::span<int> exponents) const;
  bool within_caps(std::span<const int> exponents) const;

  int var_count_;
  std::vector<int> caps_;
  std::map<std::uint64_t, BigInt> terms_;
};

// Number of forced-zero patterns of a format: the coefficient sum of
// (sum_{j<k} t_j t_k)^n in the ring truncated by t_j^{n_j} = 0.
BigInt chow_pattern_count(const TensorShape& shape);

}  // namespace odeco
