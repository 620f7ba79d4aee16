#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace odeco {

// Format of a dense real tensor: the axis lengths n_1, ..., n_d. Requires
// d >= 3 and every n_j >= 2; anything smaller is a matrix or degenerate and
// is rejected at construction.
class TensorShape {
 public:
  explicit TensorShape(std::vector<int> dims);

  int order() const { return static_cast<int>(dims_.size()); }
  int dim(int mode) const { return dims_[static_cast<std::size_t>(mode)]; }
  const std::vector<int>& dims() const { return dims_; }

  // smallest axis length n and how many modes attain it
  int min_dim() const { return min_dim_; }
  int min_dim_multiplicity() const { return min_count_; }

  std::int64_t entry_count() const { return entry_count_; }

  // sum_j (n_j - 1) - 2n: the common dimension of the maximal components of
  // the base locus; -1 means the locus is empty.
  int base_locus_dimension() const;

  std::string to_string() const;  // "2x3x3"

  // accepts "2,3,3" and "2x3x3"
  static TensorShape parse(const std::string& text);

  bool operator==(const TensorShape&) const = default;
  bool operator<(const TensorShape& other) const;

 private:
  std::vector<int> dims_;
  int min_dim_ = 0;
  int min_count_ = 0;
  std::int64_t entry_count_ = 0;
};

}  // namespace odeco
