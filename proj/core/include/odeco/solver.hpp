#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "odeco/enumeration.hpp"
#include "odeco/incidence.hpp"
#include "odeco/newton.hpp"
#include "odeco/projective.hpp"
#include "odeco/tensor.hpp"

namespace odeco {

// Seeding policy for the global search. When a reference decomposition is
// given, its isolated tuples are realized as warm starts, every base
// component contributes sampled points, and found solutions are tagged by
// the nearest degenerate locus of the reference.
struct SeedStrategy {
  const OdecoTensor* reference = nullptr;
  int samples_per_component = 5;
  int random_starts = 500;
  bool real_only = false;
};

struct SolutionCluster {
  SingularTuple representative;  // canonical, classified
  int members = 0;               // converged seeds that landed here
  double residual = 0.0;         // Newton residual of the representative
  double condition = 0.0;        // Jacobian condition of the representative
  std::string tag;               // "type1:<i>", "facet:<i>", "vertex:<i>" or ""
  double tag_distance = std::numeric_limits<double>::infinity();
};

struct SolveOptions {
  NewtonOptions newton;
  double dedup_tol = 1e-6;     // chordal distance separating clusters
  double classify_tol = 1e-8;  // converged points must classify as singular
  int threads = 0;             // 0: ODECO_SPECTRA_THREADS or hardware
};

struct SolveSummary {
  std::vector<SolutionCluster> clusters;  // in order of first discovery
  int seeds_total = 0;
  int converged = 0;
  int diverged = 0;
  int rejected = 0;  // converged but not singular at classify_tol
};

// Newton from every seed, deduplication by tuple distance, classification
// and tagging. Deterministic for fixed inputs and seed, independent of the
// thread count.
SolveSummary find_all_singular_tuples(const DenseTensor& tensor, const SeedStrategy& strategy,
                                      std::uint64_t seed, const SolveOptions& options = {});

// Clusters of the perturbed tensor merged by collapse neighborhoods: roots
// that collide at a degenerate locus as eps -> 0 separate at rate
// eps^(1/multiplicity), so clusters within collapse_factor * sqrt(eps) of
// each other are reported as one group whose root_count is the observed
// local multiplicity.
struct DegenerationGroup {
  SingularTuple representative;
  int root_count = 1;
  int members = 0;
  std::string tag;
  double tag_distance = std::numeric_limits<double>::infinity();
  double max_condition = 0.0;
  double max_residual = 0.0;
};

struct PerturbationRow {
  double epsilon = 0.0;
  std::vector<DegenerationGroup> groups;
  int cluster_count = 0;       // before merging
  int multiplicity_total = 0;  // sum of root counts
  int converged = 0;
  int diverged = 0;
};

struct PerturbationTable {
  TensorShape shape;
  std::vector<PerturbationRow> rows;
};

struct PerturbationOptions {
  std::vector<double> epsilons;
  int samples_per_component = 5;
  int random_starts = 500;  // ignored at eps = 0: the locus is not isolated
  bool real_only = false;
  double collapse_factor = 10.0;
  SolveOptions solve;
};

PerturbationTable perturbation_experiment(const OdecoTensor& reference, const DenseTensor& direction,
                                          std::uint64_t seed, const PerturbationOptions& options);

std::string perturbation_csv(const PerturbationTable& table);
std::string perturbation_json(const PerturbationTable& table);

struct ResidualRow {
  int index = 0;
  ClassifyVerdict verdict = ClassifyVerdict::not_singular;
  double max_residual = 0.0;
  double contraction_magnitude = 0.0;
  bool real_point = false;
};

struct ResidualTable {
  std::vector<ResidualRow> rows;
  bool all_singular = true;
};

ResidualTable residual_report(const DenseTensor& tensor, std::span<const SingularTuple> tuples,
                              double tol = 1e-8);

std::string residual_csv(const ResidualTable& table);
std::string residual_json(const ResidualTable& table);
std::string residual_text(const ResidualTable& table);

const char* verdict_name(ClassifyVerdict verdict);

}  // namespace odeco
