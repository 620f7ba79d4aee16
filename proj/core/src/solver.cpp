#include "odeco/solver.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <iomanip>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "json_detail.hpp"
#include "odeco/parallel.hpp"
#include "odeco/random.hpp"

namespace odeco {

namespace {

// Degenerate loci of the reference decomposition, used to label found
// solutions: realized isolated tuples, plus the forced-zero subspaces of
// the base components and their zero-dimensional meets.
struct DegenerateAtlas {
  std::vector<SingularTuple> type1;
  std::vector<std::vector<std::vector<bool>>> facet_masks;   // facet -> mode -> forced rows
  std::vector<std::vector<std::vector<bool>>> vertex_masks;
  std::vector<Eigen::MatrixXd> factors;  // for back-rotation into diagonal coordinates

  bool empty() const { return type1.empty() && facet_masks.empty() && vertex_masks.empty(); }
};

std::vector<std::vector<bool>> pattern_masks(const ZeroPattern& pattern, const TensorShape& shape) {
  const int d = shape.order();
  const int n = shape.min_dim();
  std::vector<std::vector<bool>> masks(static_cast<std::size_t>(d));
  for (int j = 0; j < d; ++j) {
    masks[static_cast<std::size_t>(j)].assign(static_cast<std::size_t>(shape.dim(j)), false);
  }
  for (int i = 0; i < n; ++i) {
    for (int j : pattern.rows[static_cast<std::size_t>(i)]) {
      masks[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] = true;
    }
  }
  return masks;
}

DegenerateAtlas build_atlas(const OdecoTensor& reference) {
  DegenerateAtlas atlas;
  const TensorShape& shape = reference.shape;
  atlas.factors = reference.factors;
  Type1Counts t1 = type1_counts(shape.min_dim(), shape.order());
  if (t1.total <= kEnumerationLimit) {
    for_each_type1(shape, [&](const TypeISpec& spec) {
      atlas.type1.push_back(realize_type1(spec, reference));
    });
  }
  Type2Counts t2 = type2_counts(shape);
  if (!t2.empty() && t2.closed_form <= kIncidenceFacetLimit) {
    IncidenceComplex complex = build_incidence_complex(shape);
    for (const auto& facet : complex.facets) {
      atlas.facet_masks.push_back(pattern_masks(facet.pattern, shape));
    }
    for (const auto& vertex : complex.vertices) {
      atlas.vertex_masks.push_back(pattern_masks(vertex.pattern, shape));
    }
  }
  return atlas;
}

// distance of a tuple to a forced-zero locus: the largest mass any mode
// places on its forced rows, measured in the reference's diagonal frame
double mask_distance(const SingularTuple& tuple, const std::vector<std::vector<bool>>& masks,
                     const std::vector<Eigen::MatrixXd>& factors) {
  double worst = 0.0;
  for (std::size_t j = 0; j < masks.size(); ++j) {
    const Eigen::VectorXcd back = factors[j].transpose() * tuple.points[j].unit();
    double mass = 0.0;
    for (std::size_t i = 0; i < masks[j].size(); ++i) {
      if (masks[j][i]) mass += std::norm(back[static_cast<Eigen::Index>(i)]);
    }
    worst = std::max(worst, std::sqrt(mass));
  }
  return worst;
}

// a vertex refines each of its facets, so a plain argmin would always pick
// the facet; prefer the vertex while it is within a factor of the facet
constexpr double kVertexPreference = 10.0;

void tag_cluster(SolutionCluster& cluster, const DegenerateAtlas& atlas) {
  if (atlas.empty()) return;
  double d1 = std::numeric_limits<double>::infinity();
  int i1 = -1;
  for (std::size_t i = 0; i < atlas.type1.size(); ++i) {
    const double dist = tuple_distance(cluster.representative, atlas.type1[i]);
    if (dist < d1) {
      d1 = dist;
      i1 = static_cast<int>(i);
    }
  }
  double df = std::numeric_limits<double>::infinity();
  int fi = -1;
  for (std::size_t f = 0; f < atlas.facet_masks.size(); ++f) {
    const double dist = mask_distance(cluster.representative, atlas.facet_masks[f], atlas.factors);
    if (dist < df) {
      df = dist;
      fi = static_cast<int>(f);
    }
  }
  double dv = std::numeric_limits<double>::infinity();
  int vi = -1;
  for (std::size_t v = 0; v < atlas.vertex_masks.size(); ++v) {
    const double dist = mask_distance(cluster.representative, atlas.vertex_masks[v], atlas.factors);
    if (dist < dv) {
      dv = dist;
      vi = static_cast<int>(v);
    }
  }
  if (i1 >= 0 && d1 <= std::min(df, dv)) {
    cluster.tag = "type1:" + std::to_string(i1);
    cluster.tag_distance = d1;
  } else if (vi >= 0 && dv <= kVertexPreference * df) {
    cluster.tag = "vertex:" + std::to_string(vi);
    cluster.tag_distance = dv;
  } else if (fi >= 0) {
    cluster.tag = "facet:" + std::to_string(fi);
    cluster.tag_distance = df;
  }
}

std::vector<SingularTuple> build_seeds(const TensorShape& shape, const SeedStrategy& strategy,
                                       std::uint64_t seed) {
  std::vector<SingularTuple> seeds;
  Rng rng(seed);
  if (strategy.reference) {
    const OdecoTensor& ref = *strategy.reference;
    if (!(ref.shape == shape)) {
      throw std::invalid_argument("find_all_singular_tuples: reference shape mismatch");
    }
    Type1Counts t1 = type1_counts(shape.min_dim(), shape.order());
    if (t1.total <= kEnumerationLimit) {
      for_each_type1(shape, [&](const TypeISpec& spec) { seeds.push_back(realize_type1(spec, ref)); });
    }
    Type2Counts t2 = type2_counts(shape);
    if (!t2.empty() && t2.closed_form <= kIncidenceFacetLimit && strategy.samples_per_component > 0) {
      std::vector<TypeIIComponent> facets = enumerate_type2(shape);
      for (const auto& facet : facets) {
        for (int s = 0; s < strategy.samples_per_component; ++s) {
          seeds.push_back(sample_base_point(facet, ref, rng.bits(), strategy.real_only));
        }
      }
    }
  }
  for (int r = 0; r < strategy.random_starts; ++r) {
    SingularTuple t;
    t.kind = TupleKind::unclassified;
    for (int j = 0; j < shape.order(); ++j) {
      Eigen::VectorXcd x(shape.dim(j));
      for (int i = 0; i < shape.dim(j); ++i) {
        x[i] = strategy.real_only ? Complex(rng.gaussian(), 0.0) : rng.complex_gaussian();
      }
      t.points.emplace_back(std::move(x));
    }
    seeds.push_back(std::move(t));
  }
  return seeds;
}

}  // namespace

SolveSummary find_all_singular_tuples(const DenseTensor& tensor, const SeedStrategy& strategy,
                                      std::uint64_t seed, const SolveOptions& options) {
  const TensorShape& shape = tensor.shape();
  std::vector<SingularTuple> seeds = build_seeds(shape, strategy, seed);
  SolveSummary summary;
  summary.seeds_total = static_cast<int>(seeds.size());

  std::vector<NewtonResult> results(seeds.size(),
                                    NewtonResult{NewtonStatus::diverged, SingularTuple{}, 0.0, 0.0, 0});
  parallel_for(seeds.size(), options.threads, [&](std::size_t i) {
    results[i] = newton_refine(tensor, seeds[i], options.newton);
  });

  DegenerateAtlas atlas;
  if (strategy.reference) atlas = build_atlas(*strategy.reference);

  for (std::size_t i = 0; i < results.size(); ++i) {
    NewtonResult& result = results[i];
    if (result.status != NewtonStatus::converged) {
      ++summary.diverged;
      continue;
    }
    ++summary.converged;
    ClassifyReport report = singular_classify(tensor, result.tuple, options.classify_tol);
    if (report.verdict == ClassifyVerdict::not_singular) {
      ++summary.rejected;
      continue;
    }
    result.tuple.kind = report.verdict == ClassifyVerdict::fixed ? TupleKind::fixed : TupleKind::base;
    bool merged = false;
    for (auto& cluster : summary.clusters) {
      if (tuple_distance(cluster.representative, result.tuple) < options.dedup_tol) {
        ++cluster.members;
        merged = true;
        break;
      }
    }
    if (!merged) {
      SolutionCluster cluster;
      cluster.representative = result.tuple.canonical();
      cluster.representative.kind = result.tuple.kind;
      cluster.members = 1;
      cluster.residual = result.residual;
      cluster.condition = result.condition;
      tag_cluster(cluster, atlas);
      summary.clusters.push_back(std::move(cluster));
    }
  }
  return summary;
}

PerturbationTable perturbation_experiment(const OdecoTensor& reference, const DenseTensor& direction,
                                          std::uint64_t seed, const PerturbationOptions& options) {
  reference.validate(1e-10);
  if (!(direction.shape() == reference.shape)) {
    throw std::invalid_argument("perturbation_experiment: direction shape mismatch");
  }
  const DenseTensor base = materialize(reference);
  PerturbationTable table{reference.shape, {}};
  for (double eps : options.epsilons) {
    DenseTensor perturbed = base;
    if (eps != 0.0) perturbed.add_scaled(direction, eps);
    SeedStrategy strategy;
    strategy.reference = &reference;
    strategy.samples_per_component = options.samples_per_component;
    strategy.random_starts = eps == 0.0 ? 0 : options.random_starts;
    strategy.real_only = options.real_only;
    SolveSummary summary = find_all_singular_tuples(perturbed, strategy, seed, options.solve);

    PerturbationRow row;
    row.epsilon = eps;
    row.cluster_count = static_cast<int>(summary.clusters.size());
    row.converged = summary.converged;
    row.diverged = summary.diverged;

    // merge clusters lying in the same collapse neighborhood
    const double radius = options.collapse_factor * std::sqrt(std::max(eps, 0.0));
    const int m = row.cluster_count;
    std::vector<int> group_of(static_cast<std::size_t>(m));
    std::iota(group_of.begin(), group_of.end(), 0);
    std::function<int(int)> find = [&](int a) {
      while (group_of[static_cast<std::size_t>(a)] != a) {
        group_of[static_cast<std::size_t>(a)] = group_of[static_cast<std::size_t>(group_of[static_cast<std::size_t>(a)])];
        a = group_of[static_cast<std::size_t>(a)];
      }
      return a;
    };
    for (int a = 0; a < m; ++a) {
      for (int b = a + 1; b < m; ++b) {
        if (tuple_distance(summary.clusters[static_cast<std::size_t>(a)].representative,
                           summary.clusters[static_cast<std::size_t>(b)].representative) <= radius) {
          group_of[find(a)] = find(b);
        }
      }
    }
    std::vector<int> roots;
    for (int a = 0; a < m; ++a) {
      if (find(a) == a) roots.push_back(a);
    }
    // groups in order of their first cluster
    std::vector<int> first_cluster(roots.size(), m);
    for (std::size_t g = 0; g < roots.size(); ++g) {
      for (int a = 0; a < m; ++a) {
        if (find(a) == roots[g]) {
          first_cluster[g] = std::min(first_cluster[g], a);
        }
      }
    }
    std::vector<std::size_t> order(roots.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t x, std::size_t y) { return first_cluster[x] < first_cluster[y]; });
    for (std::size_t g : order) {
      DegenerationGroup group;
      const SolutionCluster& head = summary.clusters[static_cast<std::size_t>(first_cluster[g])];
      group.representative = head.representative;
      group.tag = head.tag;
      group.tag_distance = head.tag_distance;
      group.root_count = 0;
      for (int a = 0; a < m; ++a) {
        if (find(a) != roots[g]) continue;
        const SolutionCluster& cluster = summary.clusters[static_cast<std::size_t>(a)];
        ++group.root_count;
        group.members += cluster.members;
        group.max_condition = std::max(group.max_condition, cluster.condition);
        group.max_residual = std::max(group.max_residual, cluster.residual);
        group.tag_distance = std::min(group.tag_distance, cluster.tag_distance);
      }
      row.multiplicity_total += group.root_count;
      row.groups.push_back(std::move(group));
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

std::string perturbation_csv(const PerturbationTable& table) {
  std::ostringstream os;
  os << "epsilon,group,tag,tag_distance,root_count,members,max_condition,max_residual\n";
  os << std::setprecision(17);
  for (const auto& row : table.rows) {
    for (std::size_t g = 0; g < row.groups.size(); ++g) {
      const auto& group = row.groups[g];
      os << row.epsilon << ',' << g << ',' << (group.tag.empty() ? "-" : group.tag) << ','
         << group.tag_distance << ',' << group.root_count << ',' << group.members << ','
         << group.max_condition << ',' << group.max_residual << '\n';
    }
  }
  return os.str();
}

std::string perturbation_json(const PerturbationTable& table) {
  nlohmann::json root;
  root["shape"] = table.shape.dims();
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : table.rows) {
    nlohmann::json groups = nlohmann::json::array();
    for (const auto& group : row.groups) {
      groups.push_back({{"tag", group.tag},
                        {"tag_distance", group.tag_distance},
                        {"root_count", group.root_count},
                        {"members", group.members},
                        {"max_condition", group.max_condition},
                        {"max_residual", group.max_residual},
                        {"representative", detail::tuple_to_json(group.representative)}});
    }
    rows.push_back({{"epsilon", row.epsilon},
                    {"cluster_count", row.cluster_count},
                    {"multiplicity_total", row.multiplicity_total},
                    {"converged", row.converged},
                    {"diverged", row.diverged},
                    {"groups", std::move(groups)}});
  }
  root["rows"] = std::move(rows);
  return root.dump(2);
}

ResidualTable residual_report(const DenseTensor& tensor, std::span<const SingularTuple> tuples,
                              double tol) {
  ResidualTable table;
  table.rows.reserve(tuples.size());
  for (std::size_t i = 0; i < tuples.size(); ++i) {
    ClassifyReport report = singular_classify(tensor, tuples[i], tol);
    ResidualRow row;
    row.index = static_cast<int>(i);
    row.verdict = report.verdict;
    row.max_residual = report.max_residual;
    row.contraction_magnitude = report.contraction_magnitude;
    row.real_point = tuples[i].is_real();
    if (report.verdict == ClassifyVerdict::not_singular) table.all_singular = false;
    table.rows.push_back(row);
  }
  return table;
}

const char* verdict_name(ClassifyVerdict verdict) {
  switch (verdict) {
    case ClassifyVerdict::fixed: return "fixed";
    case ClassifyVerdict::base: return "base";
    case ClassifyVerdict::not_singular: return "not_singular";
  }
  return "unknown";
}

std::string residual_csv(const ResidualTable& table) {
  std::ostringstream os;
  os << "index,verdict,max_residual,contraction_magnitude,real\n";
  os << std::setprecision(17);
  for (const auto& row : table.rows) {
    os << row.index << ',' << verdict_name(row.verdict) << ',' << row.max_residual << ','
       << row.contraction_magnitude << ',' << (row.real_point ? 1 : 0) << '\n';
  }
  return os.str();
}

std::string residual_json(const ResidualTable& table) {
  nlohmann::json root;
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : table.rows) {
    rows.push_back({{"index", row.index},
                    {"verdict", verdict_name(row.verdict)},
                    {"max_residual", row.max_residual},
                    {"contraction_magnitude", row.contraction_magnitude},
                    {"real", row.real_point}});
  }
  root["rows"] = std::move(rows);
  root["all_singular"] = table.all_singular;
  return root.dump(2);
}

std::string residual_text(const ResidualTable& table) {
  std::ostringstream os;
  os << std::left << std::setw(7) << "index" << std::setw(14) << "verdict" << std::setw(15)
     << "residual" << std::setw(15) << "contraction" << "real\n";
  for (const auto& row : table.rows) {
    std::ostringstream res, con;
    res << std::scientific << std::setprecision(3) << row.max_residual;
    con << std::scientific << std::setprecision(3) << row.contraction_magnitude;
    os << std::left << std::setw(7) << row.index << std::setw(14) << verdict_name(row.verdict)
       << std::setw(15) << res.str() << std::setw(15) << con.str() << (row.real_point ? "yes" : "no")
       << '\n';
  }
  os << (table.all_singular ? "all tuples singular\n" : "NOT all tuples singular\n");
  return os.str();
}

}  // namespace odeco
