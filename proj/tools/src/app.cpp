#include "app.hpp"

#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "odeco/enumeration.hpp"
#include "odeco/fixtures.hpp"
#include "odeco/incidence.hpp"
#include "odeco/power_method.hpp"
#include "odeco/random.hpp"
#include "odeco/serialization.hpp"
#include "odeco/solver.hpp"

namespace odeco::cli {

namespace {

void emit(const std::string& payload, const std::string& path) {
  if (path.empty()) {
    std::cout << payload;
    if (!payload.empty() && payload.back() != '\n') std::cout << '\n';
  } else {
    save_file(path, payload);
  }
}

int run_count(const std::string& shape_text, const std::string& format, const std::string& out) {
  const TensorShape shape = TensorShape::parse(shape_text);
  const Type1Counts t1 = type1_counts(shape.min_dim(), shape.order());
  const Type2Counts t2 = type2_counts(shape);
  const BigInt generic = generic_count(shape);
  std::ostringstream os;
  if (format == "json") {
    // assembled by hand: the counts overflow every built-in integer type
    os << "{\"type1\":" << t1.total << ",\"type1_real\":" << t1.real_total << ",\"type2\":"
       << t2.closed_form << ",\"dim\":";
    if (t2.empty()) {
      os << "null";
    } else {
      os << t2.dimension;
    }
    os << ",\"generic\":" << generic << "}";
  } else {
    os << "shape       " << shape.to_string() << '\n';
    os << "type1       " << t1.total << '\n';
    os << "type1_real  " << t1.real_total << '\n';
    os << "type2       " << t2.closed_form << '\n';
    os << "dim         ";
    if (t2.empty()) {
      os << "-\n";
    } else {
      os << t2.dimension << '\n';
    }
    os << "generic     " << generic << '\n';
  }
  emit(os.str(), out);
  return 0;
}

nlohmann::json spec_to_json(const TypeISpec& spec) {
  nlohmann::json support = nlohmann::json::array();
  for (int i : spec.support) support.push_back(i + 1);
  nlohmann::json item;
  item["support"] = std::move(support);
  item["eta"] = spec.eta;
  item["signs"] = spec.signs;
  return item;
}

std::string spec_to_text(const TypeISpec& spec, int order) {
  std::ostringstream os;
  os << "support ";
  for (std::size_t i = 0; i < spec.support.size(); ++i) {
    os << (i ? "," : "") << spec.support[i] + 1;
  }
  if (!spec.eta.empty()) {
    os << "  eta ";
    for (std::size_t i = 0; i < spec.eta.size(); ++i) os << (i ? "," : "") << spec.eta[i];
    os << "  signs ";
    for (std::size_t i = 0; i < spec.signs.size(); ++i) {
      if (i) os << ' ';
      for (int s : spec.signs[i]) os << (s > 0 ? '+' : '-');
    }
  }
  if (spec.is_real(order)) os << "  real";
  return os.str();
}

std::string pattern_to_text(const ZeroPattern& pattern) {
  std::ostringstream os;
  os << "rows ";
  for (std::size_t r = 0; r < pattern.rows.size(); ++r) {
    if (r) os << ';';
    for (std::size_t j = 0; j < pattern.rows[r].size(); ++j) {
      os << (j ? "," : "") << pattern.rows[r][j] + 1;
    }
  }
  return os.str();
}

int run_enumerate(const std::string& shape_text, const std::string& input, int type,
                  std::uint64_t seed, const std::string& format, const std::string& out) {
  std::optional<OdecoTensor> ref;
  if (!input.empty()) ref = load_odeco(input);
  if (shape_text.empty() && !ref) {
    throw std::invalid_argument("enumerate needs --shape or --input");
  }
  const TensorShape shape = shape_text.empty() ? ref->shape : TensorShape::parse(shape_text);
  if (ref && !(ref->shape == shape)) {
    throw std::invalid_argument("--shape " + shape.to_string() + " does not match the input file's " +
                                ref->shape.to_string());
  }
  std::ostringstream text;
  nlohmann::json items = nlohmann::json::array();
  int real_count = 0;
  if (type == 1) {
    const std::vector<TypeISpec> specs = enumerate_type1(shape);
    int index = 0;
    for (const TypeISpec& spec : specs) {
      if (spec.is_real(shape.order())) ++real_count;
      if (format == "json") {
        nlohmann::json item = spec_to_json(spec);
        if (ref) {
          item["tuple"] = nlohmann::json::parse(write_json(realize_type1(spec, *ref)));
        }
        items.push_back(std::move(item));
      } else {
        text << '#' << index << "  " << spec_to_text(spec, shape.order()) << '\n';
      }
      ++index;
    }
  } else {
    const std::vector<TypeIIComponent> components = enumerate_type2(shape);
    Rng rng(seed);
    int index = 0;
    for (const TypeIIComponent& component : components) {
      if (format == "json") {
        nlohmann::json item;
        item["rows"] = nlohmann::json::parse(write_json(component.pattern))["rows"];
        item["dimension"] = component.dimension;
        item["factor_dims"] = component.factor_dims;
        if (ref) {
          item["sample"] = nlohmann::json::parse(write_json(sample_base_point(component, *ref, rng.bits())));
        }
        items.push_back(std::move(item));
      } else {
        text << '#' << index << "  " << pattern_to_text(component.pattern) << "  dim "
             << component.dimension << '\n';
      }
      ++index;
    }
  }
  if (format == "json") {
    nlohmann::json root;
    root["shape"] = shape.dims();
    root["type"] = type;
    root["count"] = items.size();
    if (type == 1) root["real_count"] = real_count;
    root["items"] = std::move(items);
    emit(root.dump(2), out);
  } else {
    emit(text.str(), out);
  }
  return 0;
}

int run_complex(const std::string& shape_text, const std::string& format, const std::string& out) {
  const TensorShape shape = TensorShape::parse(shape_text);
  const IncidenceComplex complex = build_incidence_complex(shape);
  if (format == "json") {
    emit(export_complex_json(complex), out);
  } else if (format == "dot") {
    emit(export_complex_dot(complex), out);
  } else {
    std::ostringstream os;
    os << "shape                 " << shape.to_string() << '\n';
    os << "base locus dimension  " << shape.base_locus_dimension() << '\n';
    os << "facets                " << complex.facets.size() << '\n';
    os << "pairwise meets        " << complex.intersections.size() << '\n';
    os << "vertices              " << complex.vertices.size() << '\n';
    os << "max facets at vertex  " << complex.max_facets_per_vertex() << '\n';
    if (shape.base_locus_dimension() <= 1) {
      const DegenerationReport report = degeneration_check(shape);
      os << "degeneration          " << report.type1 << " + " << report.facet_count << " + 2*"
         << report.vertex_count << " = " << report.degenerate_total << " vs generic "
         << report.generic << (report.holds ? "  (holds)" : "  (FAILS)") << '\n';
    }
    emit(os.str(), out);
  }
  return 0;
}

int run_formats(int k, const std::string& format, const std::string& out) {
  const std::vector<TensorShape> shapes = formats_with_dimension(k);
  if (format == "json") {
    nlohmann::json root;
    root["k"] = k;
    root["count"] = shapes.size();
    nlohmann::json list = nlohmann::json::array();
    for (const TensorShape& shape : shapes) list.push_back(shape.to_string());
    root["shapes"] = std::move(list);
    emit(root.dump(2), out);
  } else {
    std::ostringstream os;
    for (const TensorShape& shape : shapes) os << shape.to_string() << '\n';
    emit(os.str(), out);
  }
  return 0;
}

int run_verify(const std::string& input, const std::string& tuples_path, int samples,
               std::uint64_t seed, bool real_only, double tol, const std::string& format,
               const std::string& out) {
  std::vector<SingularTuple> tuples;
  std::optional<DenseTensor> tensor;
  if (!tuples_path.empty()) {
    tensor = load_dense(input);
    tuples = read_tuples_json(load_file(tuples_path), tensor->shape());
  } else {
    // self-check: every enumerated tuple and sampled base point of the
    // decomposition must verify against its own dense form
    const OdecoTensor odeco = load_odeco(input);
    tensor = materialize(odeco);
    for (const TypeISpec& spec : enumerate_type1(odeco.shape)) {
      tuples.push_back(realize_type1(spec, odeco));
    }
    Rng rng(seed);
    for (const TypeIIComponent& component : enumerate_type2(odeco.shape)) {
      for (int s = 0; s < samples; ++s) {
        tuples.push_back(sample_base_point(component, odeco, rng.bits(), real_only));
      }
    }
  }
  const ResidualTable table = residual_report(*tensor, tuples, tol);
  if (format == "csv") {
    emit(residual_csv(table), out);
  } else if (format == "json") {
    emit(residual_json(table), out);
  } else {
    emit(residual_text(table), out);
  }
  return table.all_singular ? 0 : 1;
}

int run_perturb(const std::string& fixture, const std::string& input, const std::string& direction,
                const std::vector<double>& eps, std::uint64_t seed, int samples, int starts,
                bool real_only, double collapse, int threads, const std::string& format,
                const std::string& out) {
  std::optional<OdecoTensor> ref;
  std::optional<DenseTensor> dir;
  if (fixture == "demo233") {
    ref = demo233_odeco();
    dir = demo233_perturbation();
  } else if (!fixture.empty()) {
    throw std::invalid_argument("unknown fixture " + fixture);
  } else if (!input.empty() && !direction.empty()) {
    ref = load_odeco(input);
    dir = load_dense(direction);
  } else {
    throw std::invalid_argument("perturb needs --fixture or both --input and --direction");
  }
  PerturbationOptions options;
  options.epsilons = eps;
  options.samples_per_component = samples;
  options.random_starts = starts;
  options.real_only = real_only;
  options.collapse_factor = collapse;
  options.solve.threads = threads;
  const PerturbationTable table = perturbation_experiment(*ref, *dir, seed, options);
  emit(format == "json" ? perturbation_json(table) : perturbation_csv(table), out);
  return 0;
}

int run_decompose(const std::string& input, double tol, int restarts, std::uint64_t seed,
                  const std::string& out) {
  const DenseTensor tensor = load_dense(input);
  PowerMethodOptions options;
  options.tol = tol;
  options.restarts = restarts;
  options.seed = seed;
  const DecomposeResult result = power_method_decompose(tensor, options);
  if (result.decomposition) emit(write_json(*result.decomposition), out);
  switch (result.status) {
    case DecomposeStatus::ok:
      std::cerr << "ok: relative residual " << result.relative_residual << '\n';
      return 0;
    case DecomposeStatus::nonconvergence:
      std::cerr << "nonconvergence: " << result.message << '\n';
      return 2;
    case DecomposeStatus::residual_floor:
      std::cerr << "residual floor: " << result.message << '\n';
      return 2;
  }
  return 2;
}

}  // namespace

int run(int argc, char** argv) {
  CLI::App app{"singular vector tuples of orthogonally decomposable tensors"};
  app.set_version_flag("--version", ODECO_SPECTRA_VERSION);
  app.require_subcommand(1);

  std::string shape_text, input, direction, tuples_path, fixture, output;
  std::string format = "text";
  std::uint64_t seed = 1;
  double tol = 1e-8;
  double power_tol = 1e-10;
  double collapse = 10.0;
  int type = 1;
  int k = 0;
  int samples = 5;
  int verify_samples = 3;
  int starts = 500;
  int restarts = 5;
  int threads = 0;
  bool real_only = false;
  std::vector<double> eps;

  CLI::App* count = app.add_subcommand("count", "closed-form counts for a format");
  count->add_option("--shape", shape_text, "format, e.g. 2x3x3")->required();
  count->add_option("--format", format)->check(CLI::IsMember({"json", "text"}));
  count->add_option("--output", output, "write to a file instead of stdout");

  CLI::App* enumerate = app.add_subcommand("enumerate", "list isolated tuples or base components");
  enumerate->add_option("--shape", shape_text, "format, e.g. 2x3x3");
  enumerate->add_option("--input", input, "decomposition file; adds coordinates");
  enumerate->add_option("--type", type, "1: isolated tuples, 2: base components")
      ->check(CLI::IsMember({1, 2}));
  enumerate->add_option("--seed", seed, "sampling seed for base points");
  enumerate->add_option("--format", format)->check(CLI::IsMember({"json", "text"}));
  enumerate->add_option("--output", output);

  CLI::App* complex_cmd = app.add_subcommand("complex", "incidence of the base components");
  complex_cmd->add_option("--shape", shape_text)->required();
  complex_cmd->add_option("--format", format)->check(CLI::IsMember({"json", "dot", "text"}));
  complex_cmd->add_option("--output", output);

  CLI::App* formats_cmd = app.add_subcommand("formats", "formats with a given base locus dimension");
  formats_cmd->add_option("--k", k, "base locus dimension")->required()->check(CLI::NonNegativeNumber);
  formats_cmd->add_option("--format", format)->check(CLI::IsMember({"json", "text"}));
  formats_cmd->add_option("--output", output);

  CLI::App* verify = app.add_subcommand("verify", "residual check of a decomposition's tuples");
  verify->add_option("--input", input, "decomposition file; dense allowed with --tuples")->required();
  verify->add_option("--tuples", tuples_path, "check these candidates instead of enumerating");
  verify->add_option("--samples", verify_samples, "sampled points per base component");
  verify->add_option("--seed", seed);
  verify->add_flag("--real-only", real_only, "sample real base points");
  verify->add_option("--tol", tol, "classification tolerance");
  verify->add_option("--format", format)->check(CLI::IsMember({"csv", "json", "text"}));
  verify->add_option("--output", output);

  CLI::App* perturb = app.add_subcommand("perturb", "track tuples of a perturbed decomposition");
  perturb->add_option("--fixture", fixture, "built-in pair; only demo233");
  perturb->add_option("--input", input, "decomposition file");
  perturb->add_option("--direction", direction, "dense direction file");
  perturb->add_option("--eps", eps, "perturbation sizes")->required()->delimiter(',');
  perturb->add_option("--seed", seed);
  perturb->add_option("--samples", samples, "seeds per base component");
  perturb->add_option("--starts", starts, "random starts per epsilon");
  perturb->add_flag("--real-only", real_only, "restrict sampling to real starts");
  perturb->add_option("--collapse", collapse, "group radius in units of sqrt(eps)");
  perturb->add_option("--threads", threads, "0: ODECO_SPECTRA_THREADS or hardware");
  perturb->add_option("--format", format, "csv unless json is asked for")
      ->check(CLI::IsMember({"csv", "json"}));
  perturb->add_option("--output", output);

  CLI::App* decompose = app.add_subcommand("decompose", "recover a decomposition by power iteration");
  decompose->add_option("--input", input, "dense tensor file")->required();
  decompose->add_option("--tol", power_tol, "sweep convergence tolerance");
  decompose->add_option("--restarts", restarts, "random starts per extracted term");
  decompose->add_option("--seed", seed);
  decompose->add_option("--output", output);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (count->parsed()) return run_count(shape_text, format, output);
    if (enumerate->parsed()) return run_enumerate(shape_text, input, type, seed, format, output);
    if (complex_cmd->parsed()) return run_complex(shape_text, format, output);
    if (formats_cmd->parsed()) return run_formats(k, format, output);
    if (verify->parsed()) {
      return run_verify(input, tuples_path, verify_samples, seed, real_only, tol, format, output);
    }
    if (perturb->parsed()) {
      return run_perturb(fixture, input, direction, eps, seed, samples, starts, real_only, collapse,
                         threads, format, output);
    }
    if (decompose->parsed()) return run_decompose(input, power_tol, restarts, seed, output);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}

}  // namespace odeco::cli
