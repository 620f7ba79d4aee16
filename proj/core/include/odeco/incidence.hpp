#pragma once

#include <optional>
#include <string>
#include <vector>

#include "odeco/bigint.hpp"
#include "odeco/enumeration.hpp"
#include "odeco/shape.hpp"

namespace odeco {

// Rowwise union of the forced zeros; empty when the union violates some
// mode's realizability bound.
std::optional<ZeroPattern> intersect_patterns(const ZeroPattern& a, const ZeroPattern& b,
                                              const TensorShape& shape);

// How the maximal components of the base locus meet pairwise. Vertices are
// the distinct zero-dimensional pairwise meets; for formats of base-locus
// dimension <= 1 every zero-dimensional stratum arises this way.
struct IncidenceComplex {
  struct Intersection {
    int a = 0;
    int b = 0;
    ZeroPattern pattern;
    int dimension = 0;
  };
  struct Vertex {
    ZeroPattern pattern;
    std::vector<int> facets;  // indices of containing facets, ascending
  };

  TensorShape shape;
  std::vector<TypeIIComponent> facets;
  std::vector<Intersection> intersections;  // valid meets only, a < b, lex order
  std::vector<Vertex> vertices;             // sorted by pattern

  int max_facets_per_vertex() const;
};

inline constexpr std::int64_t kIncidenceFacetLimit = 100000;

// throws std::length_error when the format has more facets than the limit
IncidenceComplex build_incidence_complex(const TensorShape& shape);

// All formats (ascending dims, n_j >= 2, d >= 3) whose base locus has
// dimension exactly k, i.e. the solutions of sum_j (n_j - 1) - 2 min_j n_j
// = k; sorted by order, then lexicographically.
std::vector<TensorShape> formats_with_dimension(int k);

// Count of singular vector tuples of a generic tensor of the given format:
// the coefficient of prod_j t_j^(n_j - 1) in prod_j ((s_j^{n_j} - t_j^{n_j})
// / (s_j - t_j)) where s_j is the sum of the other variables. The
// dims overload accepts d >= 2 (the matrix case returns min(m, n)).
BigInt generic_count(const std::vector<int>& dims);
BigInt generic_count(const TensorShape& shape);

// Exact accounting of the degeneration from a generic tensor: in dimension
// <= 0 the isolated tuples plus the point components attain the generic
// count; in dimension 1 each facet absorbs one tuple and each vertex two.
struct DegenerationReport {
  TensorShape shape;
  int base_dimension = 0;
  BigInt type1;
  BigInt facet_count;
  BigInt vertex_count;
  BigInt degenerate_total;  // type1 + facets + 2 * vertices
  BigInt generic;
  bool holds = false;
};

// throws std::invalid_argument when the base locus dimension exceeds 1
DegenerationReport degeneration_check(const TensorShape& shape);

std::string export_complex_json(const IncidenceComplex& complex);
std::string export_complex_dot(const IncidenceComplex& complex);

}  // namespace odeco
