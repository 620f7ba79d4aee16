#pragma once

#include <json.hpp>

#include "odeco/enumeration.hpp"
#include "odeco/projective.hpp"
#include "odeco/tensor.hpp"

namespace odeco::detail {

inline nlohmann::json complex_to_json(const Complex& z) {
  return nlohmann::json::array({z.real(), z.imag()});
}

inline Complex complex_from_json(const nlohmann::json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw std::invalid_argument("expected a complex value as [re, im]");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

inline nlohmann::json point_to_json(const ProjectivePoint& p) {
  nlohmann::json out = nlohmann::json::array();
  for (int i = 0; i < p.dim(); ++i) out.push_back(complex_to_json(p.coords()[i]));
  return out;
}

inline nlohmann::json tuple_to_json(const SingularTuple& tuple) {
  nlohmann::json points = nlohmann::json::array();
  for (const auto& p : tuple.points) points.push_back(point_to_json(p));
  nlohmann::json out;
  out["points"] = std::move(points);
  switch (tuple.kind) {
    case TupleKind::fixed: out["kind"] = "fixed"; break;
    case TupleKind::base: out["kind"] = "base"; break;
    case TupleKind::unclassified: out["kind"] = "unclassified"; break;
  }
  return out;
}

// forced-zero rows with 1-based mode numbers
inline nlohmann::json pattern_to_json(const ZeroPattern& pattern) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : pattern.rows) {
    nlohmann::json r = nlohmann::json::array();
    for (int j : row) r.push_back(j + 1);
    rows.push_back(std::move(r));
  }
  return rows;
}

}  // namespace odeco::detail
