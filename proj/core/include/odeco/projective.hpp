#pragma once

#include <vector>

#include <Eigen/Dense>

#include "odeco/tensor.hpp"

namespace odeco {

// Point of complex projective space, stored as one homogeneous
// representative (never the zero vector).
class ProjectivePoint {
 public:
  explicit ProjectivePoint(Eigen::VectorXcd coords);

  const Eigen::VectorXcd& coords() const { return coords_; }
  int dim() const { return static_cast<int>(coords_.size()); }

  // index of the largest-modulus coordinate, lowest index on near-ties
  int pivot_index() const;

  // representative scaled so the pivot coordinate is exactly 1; idempotent
  ProjectivePoint canonical() const;

  // unit-norm representative
  Eigen::VectorXcd unit() const { return coords_ / coords_.norm(); }

  bool is_real(double tol = 1e-10) const;

 private:
  Eigen::VectorXcd coords_;
};

// sqrt(1 - |<p, q>|^2) on unit representatives; zero iff equal as
// projective points, scale-invariant
double chordal_distance(const ProjectivePoint& p, const ProjectivePoint& q);

enum class TupleKind { fixed, base, unclassified };

// One candidate singular vector tuple: a projective point per mode.
struct SingularTuple {
  std::vector<ProjectivePoint> points;
  TupleKind kind = TupleKind::unclassified;

  SingularTuple canonical() const;
  bool is_real(double tol = 1e-10) const;
};

// max over modes of the chordal distance
double tuple_distance(const SingularTuple& a, const SingularTuple& b);

enum class ClassifyVerdict { fixed, base, not_singular };

struct ClassifyReport {
  ClassifyVerdict verdict = ClassifyVerdict::not_singular;
  // per mode: || u_j - <x_j, u_j> x_j || / (1 + ||u_j||) on unit
  // representatives, where u_j is the mode-j partial contraction
  std::vector<double> mode_residuals;
  double max_residual = 0.0;
  // |T(x_1, ..., x_d)| on unit representatives
  double contraction_magnitude = 0.0;
};

// Tests the parallelism condition in every mode; a singular tuple is fixed
// when the full contraction is nonzero (above tol) and base when it
// vanishes.
ClassifyReport singular_classify(const DenseTensor& tensor, const SingularTuple& tuple,
                                 double tol = 1e-8);

}  // namespace odeco
