#include "odeco/shape.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace odeco {

TensorShape::TensorShape(std::vector<int> dims) : dims_(std::move(dims)) {
  if (dims_.size() < 3) {
    throw std::invalid_argument("TensorShape: order must be at least 3, got " +
                                std::to_string(dims_.size()));
  }
  for (int n : dims_) {
    if (n < 2) {
      throw std::invalid_argument("TensorShape: every axis length must be at least 2, got " +
                                  std::to_string(n));
    }
  }
  min_dim_ = *std::min_element(dims_.begin(), dims_.end());
  min_count_ = static_cast<int>(std::count(dims_.begin(), dims_.end(), min_dim_));
  entry_count_ = 1;
  for (int n : dims_) {
    if (entry_count_ > std::numeric_limits<std::int64_t>::max() / n) {
      throw std::invalid_argument("TensorShape: entry count overflows 64 bits");
    }
    entry_count_ *= n;
  }
}

int TensorShape::base_locus_dimension() const {
  int s = 0;
  for (int n : dims_) s += n - 1;
  return s - 2 * min_dim_;
}

std::string TensorShape::to_string() const {
  std::ostringstream os;
  for (std::size_t j = 0; j < dims_.size(); ++j) {
    if (j) os << 'x';
    os << dims_[j];
  }
  return os.str();
}

TensorShape TensorShape::parse(const std::string& text) {
  std::vector<int> dims;
  std::string cur;
  auto flush = [&] {
    if (cur.empty()) throw std::invalid_argument("TensorShape::parse: empty component in '" + text + "'");
    std::size_t pos = 0;
    int v = std::stoi(cur, &pos);
    if (pos != cur.size()) throw std::invalid_argument("TensorShape::parse: bad component '" + cur + "'");
    dims.push_back(v);
    cur.clear();
  };
  for (char c : text) {
    if (c == ',' || c == 'x' || c == 'X') {
      flush();
    } else if (c >= '0' && c <= '9') {
      cur += c;
    } else if (c == ' ') {
      continue;
    } else {
      throw std::invalid_argument("TensorShape::parse: unexpected character in '" + text + "'");
    }
  }
  flush();
  return TensorShape(std::move(dims));
}

bool TensorShape::operator<(const TensorShape& other) const {
  if (dims_.size() != other.dims_.size()) return dims_.size() < other.dims_.size();
  return dims_ < other.dims_;
}

}  // namespace odeco
