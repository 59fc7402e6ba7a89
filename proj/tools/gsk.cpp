#include <cstdint>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gsk/diagnostics.hpp"
#include "gsk/errors.hpp"
#include "gsk/graph.hpp"
#include "gsk/interpolation.hpp"
#include "gsk/io.hpp"
#include "gsk/ml.hpp"
#include "gsk/spectral.hpp"
#include "manifest.hpp"
#include "verify.hpp"

#ifndef GSK_VERSION
#define GSK_VERSION "0.0.0"
#endif

using namespace gsk;

namespace {

constexpr int kUsage = 1;
constexpr int kInput = 2;
constexpr int kNumerical = 3;
constexpr int kVerification = 4;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

const char* const kEdgeFormat = "edge list   CSV with header u,v,weight,length; vertices are 0-based integers";
const char* const kNodeFormat = "node set    CSV with header vertex";
const char* const kValueFormat = "function    CSV with header vertex,value";
const char* const kPointFormat = "points      delimited numeric table, one point per row";

std::string footer(std::initializer_list<const char*> lines) {
  std::string out = "File formats:\n";
  for (const char* l : lines) out += std::string("  ") + l + "\n";
  return out;
}

const std::map<std::string, LaplacianKind> kKinds{{"normalized", LaplacianKind::Normalized},
                                                  {"unnormalized", LaplacianKind::Unnormalized}};

CLI::Option* add_kind(CLI::App* app, std::string& kind) {
  return app->add_option("--laplacian", kind, "Laplacian used for the kernel")
      ->check(CLI::IsMember({"normalized", "unnormalized"}))
      ->capture_default_str();
}

CLI::Option* add_input(CLI::App* app, const std::string& name, std::string& var, const std::string& help) {
  CLI::Option* opt = app->add_option(name, var, help)->required();
  cli::mark_input(opt);
  return opt;
}

struct Spectral {
  std::shared_ptr<const SpectralDecomposition> s;
  std::shared_ptr<const KernelMatrix> k;
};

Spectral spectral(const WeightedGraph& g, const std::string& kind, double alpha) {
  auto s = std::make_shared<SpectralDecomposition>(eigendecompose(g, kKinds.at(kind)));
  auto k = std::make_shared<KernelMatrix>(pseudo_inverse_power(*s, alpha));
  return {s, k};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Polyharmonic spline interpolation, Lagrange bases and decay diagnostics on weighted graphs.\n"
               "Results go to standard output as CSV, or to --output together with a\n"
               "<output>.manifest.json run record.",
               "gsk"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", GSK_VERSION);
  app.footer(footer({kEdgeFormat, kNodeFormat, kValueFormat, kPointFormat}) +
             "Exit codes: 0 success, 1 usage, 2 invalid input, 3 numerical failure, 4 verification failure.\n"
             "GSK_THREADS caps the number of worker threads.");

  std::string output;
  app.add_option("-o,--output", output, "Write the result here instead of standard output");

  std::function<int(std::ostream&)> action;
  std::optional<std::uint64_t> run_seed;

  // graph ------------------------------------------------------------------
  auto* graph = app.add_subcommand("graph", "Generate a graph and print its edge list");
  graph->require_subcommand(1);
  graph->footer(footer({kEdgeFormat, kPointFormat}));

  std::size_t cycle_n = 0;
  double weight = 1.0, length = 1.0;
  auto* cycle = graph->add_subcommand("cycle", "Cycle graph on n vertices");
  cycle->add_option("--n", cycle_n, "Number of vertices (>= 3)")->required();
  cycle->add_option("--weight", weight, "Edge weight")->capture_default_str();
  cycle->add_option("--length", length, "Edge length")->capture_default_str();
  cycle->callback([&] {
    action = [&](std::ostream& os) {
      io::write_edge_list(os, cycle_graph(cycle_n, weight, length));
      return 0;
    };
  });

  std::size_t rows = 0, cols = 0;
  auto* lattice = graph->add_subcommand("lattice", "Rectangular grid; vertex (r, c) is r * cols + c");
  lattice->add_option("--rows", rows, "Grid rows")->required();
  lattice->add_option("--cols", cols, "Grid columns")->required();
  lattice->add_option("--weight", weight, "Edge weight")->capture_default_str();
  lattice->add_option("--length", length, "Edge length")->capture_default_str();
  lattice->callback([&] {
    action = [&](std::ostream& os) {
      io::write_edge_list(os, lattice_graph(rows, cols, weight, length));
      return 0;
    };
  });

  std::string points_path;
  std::size_t knn_k = 0;
  bool no_header = false;
  double duplicate_length = 0.0;
  auto* knn = graph->add_subcommand("knn", "Symmetrised k-nearest-neighbour graph; weight = 1 / Euclidean length");
  add_input(knn, "--points", points_path, "Point table");
  knn->add_option("--k", knn_k, "Neighbours per point")->required();
  knn->add_flag("--no-header", no_header, "The point table has no header row");
  knn->add_option("--duplicate-length", duplicate_length,
                  "Length for edges between coincident points (0 rejects duplicates)")
      ->capture_default_str();
  knn->callback([&] {
    action = [&](std::ostream& os) {
      const Eigen::MatrixXd pts = io::read_points(points_path, !no_header);
      io::write_edge_list(os, knn_graph(pts, knn_k, KnnOptions{duplicate_length}));
      return 0;
    };
  });

  std::size_t random_n = 0;
  double random_p = 0.1;
  std::uint64_t seed = 0;
  bool unit_lengths = false;
  auto* random = graph->add_subcommand("random", "Random spanning tree plus extra edges; weights and lengths in [0.5, 2]");
  random->add_option("--n", random_n, "Number of vertices")->required();
  random->add_option("--p", random_p, "Probability of each extra edge")->capture_default_str();
  random->add_option("--seed", seed, "Random seed")->capture_default_str();
  random->add_flag("--unit-lengths", unit_lengths, "Use length 1 on every edge");
  random->callback([&] {
    run_seed = seed;
    action = [&](std::ostream& os) {
      io::write_edge_list(os, random_connected_graph(random_n, random_p, seed, unit_lengths));
      return 0;
    };
  });

  // lagrange ---------------------------------------------------------------
  std::string graph_path, nodes_path, kind = "normalized";
  Vertex center = 0;
  double alpha = 2.0, radius = 0.0, truncate = 0.0;
  bool local = false, no_project = false;
  auto* lagrange = app.add_subcommand("lagrange", "Lagrange function of one node, evaluated on every vertex");
  lagrange->footer(footer({kEdgeFormat, kNodeFormat, "output      function CSV (vertex,value)"}));
  add_input(lagrange, "--graph", graph_path, "Edge list");
  add_input(lagrange, "--nodes", nodes_path, "Interpolation nodes");
  lagrange->add_option("--center", center, "Node whose Lagrange function is computed")->required();
  lagrange->add_option("--alpha", alpha, "Kernel exponent")->capture_default_str();
  add_kind(lagrange, kind);
  auto* local_opt = lagrange->add_flag("--local", local, "Use only the nodes within --radius of the centre");
  auto* radius_opt = lagrange->add_option("--radius", radius, "Neighbourhood radius for --local");
  auto* trunc_opt = lagrange->add_option("--truncate", truncate, "Drop coefficients farther than this from the centre");
  auto* project_opt = lagrange->add_flag("--no-project", no_project, "Keep truncated coefficients as they are");
  local_opt->needs(radius_opt)->excludes(trunc_opt);
  project_opt->needs(trunc_opt);
  lagrange->callback([&] {
    action = [&](std::ostream& os) {
      const WeightedGraph g = io::read_edge_list(graph_path);
      const std::vector<Vertex> nodes = io::read_node_set(nodes_path);
      const Spectral sp = spectral(g, kind, alpha);
      if (local) {
        io::write_vertex_function(os, local_lagrange(*sp.k, *sp.s, g, nodes, center, radius).values);
      } else if (*trunc_opt) {
        const LagrangeBasis basis = lagrange_basis(*sp.k, *sp.s, nodes);
        io::write_vertex_function(
            os, truncated_lagrange(basis, *sp.k, *sp.s, g, center, truncate, {!no_project}).values);
      } else {
        const auto it = std::find(nodes.begin(), nodes.end(), center);
        if (it == nodes.end()) throw Error(ErrorCode::InvalidArgument, "center is not a node");
        InterpolationProblem p{sp.s, sp.k, nodes,
                               Eigen::VectorXd::Unit(static_cast<Eigen::Index>(nodes.size()), it - nodes.begin())};
        io::write_vertex_function(os, evaluate(solve_interpolant(p), p));
      }
      return 0;
    };
  });

  // interp -----------------------------------------------------------------
  std::string known_path, interpolant_out;
  bool all_vertices = false;
  auto* interp = app.add_subcommand("interp", "Interpolate known values and predict the remaining vertices");
  interp->footer(footer({kEdgeFormat, kValueFormat,
                         "output      function CSV (vertex,value) for the unknown vertices",
                         "interpolant CSV with header node,beta and a final row constant,C"}));
  add_input(interp, "--graph", graph_path, "Edge list");
  add_input(interp, "--known", known_path, "Known values");
  interp->add_option("--alpha", alpha, "Kernel exponent")->capture_default_str();
  add_kind(interp, kind);
  interp->add_flag("--all", all_vertices, "Print every vertex, not only the unknown ones");
  interp->add_option("--interpolant-out", interpolant_out, "Also write the coefficients here");
  interp->callback([&] {
    action = [&](std::ostream& os) {
      const WeightedGraph g = io::read_edge_list(graph_path);
      const io::VertexValues known = io::read_vertex_values(known_path);
      const Spectral sp = spectral(g, kind, alpha);
      const InterpolationProblem p{sp.s, sp.k, known.vertices, known.values};
      const Interpolant s = solve_interpolant(p);
      const Eigen::VectorXd f = evaluate(s, p);
      if (!interpolant_out.empty()) {
        std::ofstream file(interpolant_out);
        if (!file) throw std::runtime_error("cannot write " + interpolant_out);
        io::write_interpolant(file, s);
      }
      const auto is_known = membership(g.size(), known.vertices);
      std::vector<Vertex> shown;
      for (Vertex v = 0; v < g.size(); ++v) {
        if (all_vertices || !is_known[v]) shown.push_back(v);
      }
      Eigen::VectorXd values(static_cast<Eigen::Index>(shown.size()));
      for (std::size_t i = 0; i < shown.size(); ++i) values(static_cast<Eigen::Index>(i)) = f(static_cast<Eigen::Index>(shown[i]));
      io::write_vertex_values(os, shown, values);
      return 0;
    };
  });

  // decay ------------------------------------------------------------------
  std::string function_path;
  double bin_width = 0.0, fill = 0.0, min_envelope = 0.0;
  bool fit = false;
  auto* decay = app.add_subcommand("decay", "Distance-binned envelope of a function around a centre");
  decay->footer(footer({kEdgeFormat, kValueFormat, kNodeFormat, "profile     CSV with header distance,envelope",
                        "fit         CSV with header amplitude,slope,rate,scale,r_squared,no_decay,bins"}));
  add_input(decay, "--graph", graph_path, "Edge list");
  add_input(decay, "--function", function_path, "Function on every vertex");
  decay->add_option("--center", center, "Centre vertex")->required();
  decay->add_option("--bin-width", bin_width, "Bin width (default: longest edge)");
  decay->add_flag("--fit", fit, "Print an exponential fit of the envelope instead of the profile");
  auto* dnodes = decay->add_option("--nodes", nodes_path, "Node set, used for the fill distance of --fit");
  cli::mark_input(dnodes);
  auto* dfill = decay->add_option("--fill-distance", fill, "Fill distance for --fit");
  dnodes->excludes(dfill);
  decay->add_option("--min-envelope", min_envelope, "Ignore bins at or below this envelope in --fit")
      ->capture_default_str();
  decay->callback([&] {
    action = [&](std::ostream& os) {
      if (fit && !*dnodes && !*dfill) throw UsageError("--fit needs --nodes or --fill-distance");
      const WeightedGraph g = io::read_edge_list(graph_path);
      const Eigen::VectorXd f = io::read_vertex_function(function_path, g.size());
      const double rho_max = g.metrics().rho_max;
      const DecayProfile p = decay_profile(f, g, center, bin_width > 0.0 ? bin_width : rho_max);
      if (!fit) {
        io::write_profile(os, p);
        return 0;
      }
      const double h = *dnodes ? fill_distance(g, io::read_node_set(nodes_path)) : fill;
      io::write_fit(os, fit_exponential_decay(p, h, rho_max, {min_envelope}));
      return 0;
    };
  });

  // verify -----------------------------------------------------------------
  auto* verify = app.add_subcommand("verify", "Randomised checks of the interpolation theory");
  verify->require_subcommand(1);
  verify->footer("Output: CSV with header check,observed,limit,status and a final overall row.\n"
                 "Exits with 4 when any check fails.");
  std::size_t trials = 0;
  auto add_verify = [&](const std::string& name, const std::string& help, std::size_t default_trials, bool with_alpha,
                        std::function<cli::VerifyReport()> run) {
    auto* sub = verify->add_subcommand(name, help);
    sub->add_option("--trials", trials, "Number of random trials")->default_val(default_trials);
    sub->add_option("--seed", seed, "Random seed")->capture_default_str();
    if (with_alpha) sub->add_option("--alpha", alpha, "Kernel exponent")->capture_default_str();
    sub->callback([&, run] {
      run_seed = seed;
      action = [&, run](std::ostream& os) {
        const cli::VerifyReport r = run();
        r.write(os);
        return r.pass() ? 0 : kVerification;
      };
    });
  };
  add_verify("zeros-lemma", "Norm bound for functions with a zero, alpha in {1, 2, 4}, random graphs", 100, false,
             [&] { return cli::verify_zeros_lemma(trials, seed); });
  add_verify("min-norm", "Interpolant semi-norm against perturbations that vanish on the nodes", 100, true,
             [&] { return cli::verify_min_norm(trials, seed, alpha); });
  add_verify("coeff-symmetry", "Lagrange coefficients against native inner products, random graphs", 20, true,
             [&] { return cli::verify_coeff_symmetry(trials, seed, alpha); });
  add_verify("bulk-ratio", "Tail semi-norm ratios on cycle 256 with every fourth vertex a node", 1, false,
             [&] { return cli::verify_bulk_ratio(trials, seed); });
  add_verify("cover-constant", "Cycle and known/unknown cover constants on random instances", 50, false,
             [&] { return cli::verify_cover_constant(trials, seed); });

  // ml ---------------------------------------------------------------------
  auto* ml = app.add_subcommand("ml", "Regression experiments on tabular data");
  ml->require_subcommand(1);
  std::string data_path;
  std::vector<std::string> features, targets;
  std::vector<std::size_t> ks{10};
  CVConfig cv;
  auto* cvcmd = ml->add_subcommand("cv", "Repeated k-fold cross-validation of spline regression against NNR");
  cvcmd->footer(footer({"data        delimited table with a header row; columns by name or 0-based index",
                        "output      CSV with header method,target,k,mean_mse,std_mse"}));
  add_input(cvcmd, "--data", data_path, "Data table");
  cvcmd->add_option("--features", features, "Feature columns (default: every non-target column)");
  cvcmd->add_option("--targets", targets, "Target columns")->required();
  cvcmd->add_option("--k", ks, "Neighbour counts of the k-NN graph")->capture_default_str();
  cvcmd->add_option("--alpha", cv.alpha, "Kernel exponent")->capture_default_str();
  cvcmd->add_option("--folds", cv.folds, "Folds per repeat")->capture_default_str();
  cvcmd->add_option("--repeats", cv.repeats, "Repeats with fresh shuffles")->capture_default_str();
  cvcmd->add_option("--seed", cv.seed, "Random seed")->capture_default_str();
  cvcmd->add_option("--duplicate-length", cv.duplicate_length, "Edge length between identical feature rows")
      ->capture_default_str();
  add_kind(cvcmd, kind);
  cvcmd->callback([&] {
    run_seed = cv.seed;
    action = [&](std::ostream& os) {
      const Dataset d = load_dataset(data_path, features, targets);
      cv.kind = kKinds.at(kind);
      RegressionReport all;
      for (std::size_t k : ks) {
        cv.k_neighbors = k;
        RegressionReport r = cross_validate(d, cv);
        all.nnr_fallbacks += r.nnr_fallbacks;
        for (auto& e : r.entries) all.entries.push_back(std::move(e));
      }
      if (all.nnr_fallbacks > 0) std::cerr << "NNR fell back to the known mean " << all.nnr_fallbacks << " times\n";
      io::write_report(os, all);
      return 0;
    };
  });

  // experiment -------------------------------------------------------------
  auto* experiment = app.add_subcommand("experiment", "Synthetic experiments");
  experiment->require_subcommand(1);
  SmoothnessConfig sm;
  auto* smooth = experiment->add_subcommand(
      "smoothness", "Interpolation error against H2 semi-norm for Wendland bumps on a random k-NN graph");
  smooth->footer("Output: CSV with header seminorm,error, one row per magnitude.");
  smooth->add_option("--n", sm.n_points, "Number of points (even)")->capture_default_str();
  smooth->add_option("--seed", sm.seed, "Random seed")->capture_default_str();
  smooth->add_option("--magnitudes", sm.magnitudes, "Bump magnitudes")->capture_default_str();
  smooth->add_option("--k", sm.k_neighbors, "Neighbours per point")->capture_default_str();
  smooth->add_option("--bumps", sm.n_bumps_per_axis, "Bumps per axis")->capture_default_str();
  smooth->add_option("--alpha", sm.alpha, "Kernel exponent")->capture_default_str();
  add_kind(smooth, kind);
  smooth->callback([&] {
    run_seed = sm.seed;
    action = [&](std::ostream& os) {
      sm.kind = kKinds.at(kind);
      const auto samples = smoothness_experiment(sm);
      io::write_smoothness(os, samples);
      if (samples.size() >= 2) {
        std::vector<double> x, y;
        for (const auto& s : samples) {
          x.push_back(s.seminorm);
          y.push_back(s.l2_error);
        }
        std::cerr << "spearman " << io::format_double(spearman(x, y)) << '\n';
      }
      return 0;
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kUsage;
  }

  std::ostringstream buffer;
  int rc = 0;
  try {
    rc = action(buffer);
    if (output.empty()) {
      std::cout << buffer.str();
    } else {
      std::ofstream out(output, std::ios::binary);
      if (!out) throw std::runtime_error("cannot write " + output);
      out << buffer.str();
      std::ofstream manifest(output + ".manifest.json", std::ios::binary);
      if (!manifest) throw std::runtime_error("cannot write " + output + ".manifest.json");
      manifest << cli::build_manifest(app, run_seed, GSK_VERSION).dump(2) << '\n';
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return category(e.code()) == ErrorCategory::Numerical ? kNumerical : kInput;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInput;
  }
  return rc;
}
