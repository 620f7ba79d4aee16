#pragma once

#include <boost/multiprecision/cpp_int.hpp>

namespace odeco {

// Exact arbitrary-precision integer. Counting formulas overflow 64 bits
// already for moderate formats (e.g. 10 modes of length 4), so every count
// in the public API uses this type.
using BigInt = boost::multiprecision::cpp_int;

BigInt binomial(int n, int k);
BigInt ipow(const BigInt& base, int exp);

}  // namespace odeco
