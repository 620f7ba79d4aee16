#include "odeco/projective.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace odeco {

ProjectivePoint::ProjectivePoint(Eigen::VectorXcd coords) : coords_(std::move(coords)) {
  if (coords_.size() == 0) throw std::invalid_argument("ProjectivePoint: empty coordinate vector");
  if (coords_.norm() == 0.0) throw std::invalid_argument("ProjectivePoint: zero vector");
}

int ProjectivePoint::pivot_index() const {
  int best = 0;
  double best_mod = std::abs(coords_[0]);
  for (int i = 1; i < coords_.size(); ++i) {
    double m = std::abs(coords_[i]);
    if (m > best_mod) {
      best_mod = m;
      best = i;
    }
  }
  return best;
}

ProjectivePoint ProjectivePoint::canonical() const {
  const int p = pivot_index();
  Eigen::VectorXcd scaled = coords_ / coords_[p];
  scaled[p] = 1.0;
  return ProjectivePoint(std::move(scaled));
}

bool ProjectivePoint::is_real(double tol) const {
  Eigen::VectorXcd c = canonical().coords();
  for (int i = 0; i < c.size(); ++i) {
    if (std::abs(c[i].imag()) > tol) return false;
  }
  return true;
}

double chordal_distance(const ProjectivePoint& p, const ProjectivePoint& q) {
  if (p.dim() != q.dim()) throw std::invalid_argument("chordal_distance: dimension mismatch");
  const double c = std::abs(p.unit().dot(q.unit()));
  return std::sqrt(std::max(0.0, 1.0 - c * c));
}

SingularTuple SingularTuple::canonical() const {
  SingularTuple out{{}, kind};
  out.points.reserve(points.size());
  for (const auto& p : points) out.points.push_back(p.canonical());
  return out;
}

bool SingularTuple::is_real(double tol) const {
  return std::all_of(points.begin(), points.end(),
                     [&](const ProjectivePoint& p) { return p.is_real(tol); });
}

double tuple_distance(const SingularTuple& a, const SingularTuple& b) {
  if (a.points.size() != b.points.size()) throw std::invalid_argument("tuple_distance: mode count mismatch");
  double worst = 0.0;
  for (std::size_t j = 0; j < a.points.size(); ++j) {
    worst = std::max(worst, chordal_distance(a.points[j], b.points[j]));
  }
  return worst;
}

ClassifyReport singular_classify(const DenseTensor& tensor, const SingularTuple& tuple, double tol) {
  const int d = tensor.shape().order();
  if (static_cast<int>(tuple.points.size()) != d) {
    throw std::invalid_argument("singular_classify: tuple has wrong number of modes");
  }
  std::vector<Eigen::VectorXcd> units;
  units.reserve(static_cast<std::size_t>(d));
  for (int j = 0; j < d; ++j) {
    if (tuple.points[static_cast<std::size_t>(j)].dim() != tensor.shape().dim(j)) {
      throw std::invalid_argument("singular_classify: mode " + std::to_string(j) + " dimension mismatch");
    }
    units.push_back(tuple.points[static_cast<std::size_t>(j)].unit());
  }
  ClassifyReport report;
  report.mode_residuals.resize(static_cast<std::size_t>(d));
  for (int j = 0; j < d; ++j) {
    Eigen::VectorXcd u = contract_missing(tensor, units, j);
    const Complex coeff = units[static_cast<std::size_t>(j)].dot(u);
    const double r = (u - coeff * units[static_cast<std::size_t>(j)]).norm();
    report.mode_residuals[static_cast<std::size_t>(j)] = r / (1.0 + u.norm());
  }
  report.max_residual =
      *std::max_element(report.mode_residuals.begin(), report.mode_residuals.end());
  report.contraction_magnitude = std::abs(contract_full(tensor, units));
  if (report.max_residual > tol) {
    report.verdict = ClassifyVerdict::not_singular;
  } else if (report.contraction_magnitude > tol) {
    report.verdict = ClassifyVerdict::fixed;
  } else {
    report.verdict = ClassifyVerdict::base;
  }
  return report;
}

}  // namespace odeco
