#include "odeco/incidence.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "json_detail.hpp"
#include "odeco/polynomial.hpp"

namespace odeco {

namespace {

// union of two ascending mode lists
std::vector<int> merge_rows(const std::vector<int>& a, const std::vector<int>& b) {
  std::vector<int> out;
  out.reserve(a.size() + b.size());
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

bool pattern_contains(const ZeroPattern& coarse, const ZeroPattern& fine) {
  // every zero forced by coarse is forced by fine
  for (std::size_t i = 0; i < coarse.rows.size(); ++i) {
    if (!std::includes(fine.rows[i].begin(), fine.rows[i].end(), coarse.rows[i].begin(),
                       coarse.rows[i].end())) {
      return false;
    }
  }
  return true;
}

std::string pattern_to_string(const ZeroPattern& pattern) {
  std::ostringstream os;
  for (const auto& row : pattern.rows) {
    os << '(';
    for (std::size_t t = 0; t < row.size(); ++t) {
      if (t) os << ',';
      os << row[t] + 1;
    }
    os << ')';
  }
  return os.str();
}

}  // namespace

std::optional<ZeroPattern> intersect_patterns(const ZeroPattern& a, const ZeroPattern& b,
                                              const TensorShape& shape) {
  if (a.rows.size() != b.rows.size()) {
    throw std::invalid_argument("intersect_patterns: row count mismatch");
  }
  ZeroPattern out;
  out.rows.reserve(a.rows.size());
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    out.rows.push_back(merge_rows(a.rows[i], b.rows[i]));
  }
  if (!pattern_valid(out, shape)) return std::nullopt;
  return out;
}

int IncidenceComplex::max_facets_per_vertex() const {
  int best = 0;
  for (const auto& v : vertices) best = std::max(best, static_cast<int>(v.facets.size()));
  return best;
}

IncidenceComplex build_incidence_complex(const TensorShape& shape) {
  Type2Counts counts = type2_counts(shape);
  if (counts.closed_form > kIncidenceFacetLimit) {
    throw std::length_error("build_incidence_complex: " + counts.closed_form.str() +
                            " facets exceed the limit");
  }
  IncidenceComplex complex{shape, enumerate_type2(shape), {}, {}};
  const int m = static_cast<int>(complex.facets.size());
  std::map<ZeroPattern, std::vector<int>> vertex_patterns;
  for (int a = 0; a < m; ++a) {
    for (int b = a + 1; b < m; ++b) {
      auto meet = intersect_patterns(complex.facets[static_cast<std::size_t>(a)].pattern,
                                     complex.facets[static_cast<std::size_t>(b)].pattern, shape);
      if (!meet) continue;
      const int dim = pattern_dimension(*meet, shape);
      complex.intersections.push_back({a, b, *meet, dim});
      if (dim == 0) vertex_patterns.emplace(std::move(*meet), std::vector<int>{});
    }
  }
  for (auto& [pattern, facet_list] : vertex_patterns) {
    for (int f = 0; f < m; ++f) {
      if (pattern_contains(complex.facets[static_cast<std::size_t>(f)].pattern, pattern)) {
        facet_list.push_back(f);
      }
    }
    complex.vertices.push_back({pattern, facet_list});
  }
  return complex;
}

namespace {

void enumerate_tails(int d, int pos, int min_val, int remaining, std::vector<int>& dims,
                     std::vector<TensorShape>& out) {
  if (pos == d) {
    if (remaining == 0) out.emplace_back(dims);
    return;
  }
  const int slots = d - pos;
  for (int v = min_val; (v - 1) * slots <= remaining; ++v) {
    dims.push_back(v);
    enumerate_tails(d, pos + 1, v, remaining - (v - 1), dims, out);
    dims.pop_back();
  }
}

}  // namespace

std::vector<TensorShape> formats_with_dimension(int k) {
  if (k < 0) throw std::invalid_argument("formats_with_dimension: dimension must be nonnegative");
  std::vector<TensorShape> out;
  for (int d = 3; d <= k + 4; ++d) {
    for (int n1 = 2; (n1 - 1) * (d - 1) <= n1 + k + 1; ++n1) {
      std::vector<int> dims{n1};
      enumerate_tails(d, 1, n1, n1 + k + 1, dims, out);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

BigInt generic_count(const std::vector<int>& dims) {
  const int d = static_cast<int>(dims.size());
  if (d < 2) throw std::invalid_argument("generic_count: need at least two modes");
  if (d > 8) throw std::invalid_argument("generic_count: more than 8 modes unsupported");
  for (int n : dims) {
    if (n < 1) throw std::invalid_argument("generic_count: axis lengths must be positive");
  }
  std::vector<int> caps(static_cast<std::size_t>(d));
  for (int j = 0; j < d; ++j) caps[static_cast<std::size_t>(j)] = dims[static_cast<std::size_t>(j)] - 1;
  TruncatedPolynomial product = TruncatedPolynomial::one(caps);
  for (int j = 0; j < d; ++j) {
    // f_j = sum_{i=0}^{n_j - 1} s_j^(n_j - 1 - i) t_j^i with s_j the sum of
    // the other variables
    TruncatedPolynomial s = TruncatedPolynomial(d, caps);
    for (int m = 0; m < d; ++m) {
      if (m != j) s = s + TruncatedPolynomial::variable(m, caps);
    }
    const int nj = dims[static_cast<std::size_t>(j)];
    std::vector<TruncatedPolynomial> spow;
    spow.reserve(static_cast<std::size_t>(nj));
    spow.push_back(TruncatedPolynomial::one(caps));
    for (int p = 1; p < nj; ++p) spow.push_back(spow.back() * s);
    TruncatedPolynomial fj(d, caps);
    std::vector<int> e(static_cast<std::size_t>(d), 0);
    for (int i = 0; i < nj; ++i) {
      TruncatedPolynomial term = spow[static_cast<std::size_t>(nj - 1 - i)];
      e.assign(static_cast<std::size_t>(d), 0);
      e[static_cast<std::size_t>(j)] = i;
      TruncatedPolynomial ti(d, caps);
      ti.add_term(e, 1);
      fj = fj + term * ti;
    }
    product = product * fj;
  }
  return product.coefficient(caps);
}

BigInt generic_count(const TensorShape& shape) { return generic_count(shape.dims()); }

DegenerationReport degeneration_check(const TensorShape& shape) {
  const int dim = shape.base_locus_dimension();
  if (dim > 1) {
    throw std::invalid_argument("degeneration_check: identity implemented for base locus dimension <= 1, " +
                                shape.to_string() + " has dimension " + std::to_string(dim));
  }
  DegenerationReport report{shape, dim, 0, 0, 0, 0, 0, false};
  report.type1 = type1_counts(shape.min_dim(), shape.order()).total;
  IncidenceComplex complex = build_incidence_complex(shape);
  report.facet_count = static_cast<std::int64_t>(complex.facets.size());
  report.vertex_count = static_cast<std::int64_t>(complex.vertices.size());
  report.degenerate_total = report.type1 + report.facet_count + 2 * report.vertex_count;
  report.generic = generic_count(shape);
  report.holds = report.degenerate_total == report.generic;
  return report;
}

std::string export_complex_json(const IncidenceComplex& complex) {
  nlohmann::json root;
  root["shape"] = complex.shape.dims();
  nlohmann::json facets = nlohmann::json::array();
  for (std::size_t f = 0; f < complex.facets.size(); ++f) {
    const auto& facet = complex.facets[f];
    facets.push_back({{"index", f},
                      {"rows", detail::pattern_to_json(facet.pattern)},
                      {"dimension", facet.dimension},
                      {"factor_dims", facet.factor_dims}});
  }
  root["facets"] = std::move(facets);
  nlohmann::json meets = nlohmann::json::array();
  for (const auto& meet : complex.intersections) {
    meets.push_back({{"a", meet.a},
                     {"b", meet.b},
                     {"rows", detail::pattern_to_json(meet.pattern)},
                     {"dimension", meet.dimension}});
  }
  root["intersections"] = std::move(meets);
  nlohmann::json vertices = nlohmann::json::array();
  for (const auto& vertex : complex.vertices) {
    vertices.push_back({{"rows", detail::pattern_to_json(vertex.pattern)}, {"facets", vertex.facets}});
  }
  root["vertices"] = std::move(vertices);
  return root.dump(2);
}

std::string export_complex_dot(const IncidenceComplex& complex) {
  std::ostringstream os;
  os << "graph incidence {\n";
  os << "  label=\"" << complex.shape.to_string() << "\";\n";
  for (std::size_t f = 0; f < complex.facets.size(); ++f) {
    os << "  f" << f << " [label=\"F" << f << " " << pattern_to_string(complex.facets[f].pattern)
       << " dim " << complex.facets[f].dimension << "\"];\n";
  }
  for (std::size_t v = 0; v < complex.vertices.size(); ++v) {
    os << "  v" << v << " [shape=box, label=\"V" << v << " "
       << pattern_to_string(complex.vertices[v].pattern) << "\"];\n";
  }
  for (const auto& meet : complex.intersections) {
    if (meet.dimension > 0) {
      os << "  f" << meet.a << " -- f" << meet.b << " [label=\"dim " << meet.dimension << "\"];\n";
    }
  }
  for (std::size_t v = 0; v < complex.vertices.size(); ++v) {
    for (int f : complex.vertices[v].facets) {
      os << "  v" << v << " -- f" << f << ";\n";
    }
  }
  os << "}\n";
  return os.str();
}

}  // namespace odeco
