#include "odeco/polynomial.hpp"

#include <stdexcept>

namespace odeco {

TruncatedPolynomial::TruncatedPolynomial(int var_count, std::vector<int> caps)
    : var_count_(var_count), caps_(std::move(caps)) {
  if (var_count_ < 1 || var_count_ > 8) {
    throw std::invalid_argument("TruncatedPolynomial: variable count must be in [1, 8]");
  }
  if (static_cast<int>(caps_.size()) != var_count_) {
    throw std::invalid_argument("TruncatedPolynomial: one cap per variable required");
  }
  for (int cap : caps_) {
    if (cap < 0 || cap > 255) throw std::invalid_argument("TruncatedPolynomial: caps must be in [0, 255]");
  }
}

TruncatedPolynomial TruncatedPolynomial::one(std::vector<int> caps) {
  const int nvars = static_cast<int>(caps.size());
  TruncatedPolynomial p(nvars, std::move(caps));
  std::vector<int> zero(static_cast<std::size_t>(p.var_count_), 0);
  p.add_term(zero, 1);
  return p;
}

TruncatedPolynomial TruncatedPolynomial::variable(int index, std::vector<int> caps) {
  const int nvars = static_cast<int>(caps.size());
  TruncatedPolynomial p(nvars, std::move(caps));
  if (index < 0 || index >= p.var_count_) throw std::invalid_argument("TruncatedPolynomial: bad variable index");
  std::vector<int> e(static_cast<std::size_t>(p.var_count_), 0);
  e[static_cast<std::size_t>(index)] = 1;
  p.add_term(e, 1);
  return p;
}

std::uint64_t TruncatedPolynomial::pack(std::span<const int> exponents) const {
  std::uint64_t key = 0;
  for (int j = 0; j < var_count_; ++j) {
    key |= static_cast<std::uint64_t>(exponents[static_cast<std::size_t>(j)] & 0xff) << (8 * j);
  }
  return key;
}

void TruncatedPolynomial::unpack(std::uint64_t key, std::span<int> exponents) const {
  for (int j = 0; j < var_count_; ++j) {
    exponents[static_cast<std::size_t>(j)] = static_cast<int>((key >> (8 * j)) & 0xff);
  }
}

bool TruncatedPolynomial::within_caps(std::span<const int> exponents) const {
  for (int j = 0; j < var_count_; ++j) {
    if (exponents[static_cast<std::size_t>(j)] < 0 ||
        exponents[static_cast<std::size_t>(j)] > caps_[static_cast<std::size_t>(j)]) {
      return false;
    }
  }
  return true;
}

void TruncatedPolynomial::add_term(std::span<const int> exponents, const BigInt& coeff) {
  if (static_cast<int>(exponents.size()) != var_count_) {
    throw std::invalid_argument("TruncatedPolynomial: exponent vector length mismatch");
  }
  if (coeff == 0 || !within_caps(exponents)) return;
  const std::uint64_t key = pack(exponents);
  auto it = terms_.find(key);
  if (it == terms_.end()) {
    terms_.emplace(key, coeff);
  } else {
    it->second += coeff;
    if (it->second == 0) terms_.erase(it);
  }
}

BigInt TruncatedPolynomial::coefficient(std::span<const int> exponents) const {
  if (static_cast<int>(exponents.size()) != var_count_) {
    throw std::invalid_argument("TruncatedPolynomial: exponent vector length mismatch");
  }
  if (!within_caps(exponents)) return 0;
  auto it = terms_.find(pack(exponents));
  return it == terms_.end() ? BigInt(0) : it->second;
}

TruncatedPolynomial TruncatedPolynomial::operator+(const TruncatedPolynomial& other) const {
  if (var_count_ != other.var_count_ || caps_ != other.caps_) {
    throw std::invalid_argument("TruncatedPolynomial: ring mismatch in +");
  }
  TruncatedPolynomial out = *this;
  for (const auto& [key, coeff] : other.terms_) {
    auto it = out.terms_.find(key);
    if (it == out.terms_.end()) {
      out.terms_.emplace(key, coeff);
    } else {
      it->second += coeff;
      if (it->second == 0) out.terms_.erase(it);
    }
  }
  return out;
}

TruncatedPolynomial TruncatedPolynomial::operator*(const TruncatedPolynomial& other) const {
  if (var_count_ != other.var_count_ || caps_ != other.caps_) {
    throw std::invalid_argument("TruncatedPolynomial: ring mismatch in *");
  }
  TruncatedPolynomial out(var_count_, caps_);
  std::vector<int> ea(static_cast<std::size_t>(var_count_));
  std::vector<int> eb(static_cast<std::size_t>(var_count_));
  std::vector<int> e(static_cast<std::size_t>(var_count_));
  for (const auto& [ka, ca] : terms_) {
    unpack(ka, ea);
    for (const auto& [kb, cb] : other.terms_) {
      unpack(kb, eb);
      bool ok = true;
      for (int j = 0; j < var_count_; ++j) {
        e[static_cast<std::size_t>(j)] = ea[static_cast<std::size_t>(j)] + eb[static_cast<std::size_t>(j)];
        if (e[static_cast<std::size_t>(j)] > caps_[static_cast<std::size_t>(j)]) {
          ok = false;
          break;
        }
      }
      if (!ok) continue;
      const std::uint64_t key = ka + kb;  // no byte carries: both under caps
      auto it = out.terms_.find(key);
      if (it == out.terms_.end()) {
        out.terms_.emplace(key, ca * cb);
      } else {
        it->second += ca * cb;
        if (it->second == 0) out.terms_.erase(it);
      }
    }
  }
  return out;
}

TruncatedPolynomial TruncatedPolynomial::pow(int exponent) const {
  if (exponent < 0) throw std::invalid_argument("TruncatedPolynomial: negative power");
  TruncatedPolynomial acc = one(caps_);
  TruncatedPolynomial base = *this;
  while (exponent > 0) {
    if (exponent & 1) acc = acc * base;
    base = base * base;
    exponent >>= 1;
  }
  return acc;
}

BigInt TruncatedPolynomial::coefficient_sum() const {
  BigInt s = 0;
  for (const auto& [key, coeff] : terms_) s += coeff;
  return s;
}

BigInt chow_pattern_count(const TensorShape& shape) {
  const int d = shape.order();
  if (d > 8) throw std::invalid_argument("chow_pattern_count: more than 8 modes unsupported");
  std::vector<int> caps(static_cast<std::size_t>(d));
  for (int j = 0; j < d; ++j) caps[static_cast<std::size_t>(j)] = shape.dim(j) - 1;
  TruncatedPolynomial edges(d, caps);
  std::vector<int> e(static_cast<std::size_t>(d), 0);
  for (int j = 0; j < d; ++j) {
    for (int k = j + 1; k < d; ++k) {
      e.assign(static_cast<std::size_t>(d), 0);
      e[static_cast<std::size_t>(j)] = 1;
      e[static_cast<std::size_t>(k)] = 1;
      edges.add_term(e, 1);
    }
  }
  return edges.pow(shape.min_dim()).coefficient_sum();
}

}  // namespace odeco
