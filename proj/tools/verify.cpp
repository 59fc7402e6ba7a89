#include "verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <memory>
#include <ostream>
#include <random>

#include "gsk/diagnostics.hpp"
#include "gsk/graph.hpp"
#include "gsk/interpolation.hpp"
#include "gsk/io.hpp"
#include "gsk/spectral.hpp"

namespace gsk::cli {

namespace {

std::vector<Vertex> random_subset(std::size_t n, std::size_t m, std::mt19937_64& rng) {
  std::vector<Vertex> all(n);
  for (Vertex v = 0; v < n; ++v) all[v] = v;
  std::shuffle(all.begin(), all.end(), rng);
  all.resize(m);
  std::sort(all.begin(), all.end());
  return all;
}

std::string short_number(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

Check at_most(std::string name, double observed, double limit) {
  return {std::move(name), observed, "<= " + short_number(limit), observed <= limit};
}

Check at_least(std::string name, double observed, double limit) {
  return {std::move(name), observed, ">= " + short_number(limit), observed >= limit};
}

}  // namespace

bool VerifyReport::pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

void VerifyReport::write(std::ostream& os) const {
  os << "check,observed,limit,status\n";
  for (const auto& c : checks) {
    os << c.name << ',' << io::format_double(c.observed) << ',' << c.limit << ',' << (c.pass ? "PASS" : "FAIL")
       << '\n';
  }
  os << "overall,,," << (pass() ? "PASS" : "FAIL") << '\n';
}

VerifyReport verify_zeros_lemma(std::size_t trials, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  double max_ratio = 0.0;
  std::size_t violations = 0;
  for (std::size_t t = 0; t < trials; ++t) {
    const std::size_t n = 2 + static_cast<std::size_t>(rng() % 63);
    const WeightedGraph g = random_connected_graph(n, 0.1, rng());
    for (double alpha : {1.0, 2.0, 4.0}) {
      const ZerosLemmaReport r = zeros_lemma_check(g, alpha, 5, rng());
      violations += r.violations.size();
      max_ratio = std::max(max_ratio, r.max_ratio);
    }
  }
  const SpectralDecomposition pair = eigendecompose(build_graph({{0, 1, 1.0, 1.0}}), LaplacianKind::Unnormalized);
  const double tight = zeros_lemma_ratio(pair, Eigen::Vector2d(0.0, 1.0), 2.0).value();

  VerifyReport r;
  r.checks.push_back(at_most("violations", static_cast<double>(violations), 0.0));
  r.checks.push_back(at_most("max_ratio", max_ratio, 1.0 + 1e-9));
  r.checks.push_back(at_most("two_vertex_deviation", std::abs(tight - 1.0), 1e-12));
  return r;
}

VerifyReport verify_min_norm(std::size_t trials, std::uint64_t seed, double alpha) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const std::size_t n = 60;
  const WeightedGraph g = random_connected_graph(n, 0.08, rng());
  const auto s = std::make_shared<SpectralDecomposition>(eigendecompose(g, LaplacianKind::Normalized));
  const auto k = std::make_shared<KernelMatrix>(pseudo_inverse_power(*s, alpha));
  InterpolationProblem p{s, k, random_subset(n, 20, rng), Eigen::VectorXd(20)};
  for (Eigen::Index i = 0; i < 20; ++i) p.values(i) = u(rng);
  const Eigen::VectorXd interp = evaluate(solve_interpolant(p), p);
  const double base = native_semi_inner_product(*s, interp, interp, alpha);
  const auto is_node = membership(n, p.nodes);

  double worst_orth = 0.0;
  double worst_drop = 0.0;
  for (std::size_t t = 0; t < trials; ++t) {
    Eigen::VectorXd eta = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
    for (Vertex v = 0; v < n; ++v) {
      if (!is_node[v]) eta(static_cast<Eigen::Index>(v)) = u(rng);
    }
    const double orth = native_semi_inner_product(*s, interp, eta, alpha);
    const double scale = std::max(1.0, std::sqrt(base * native_semi_inner_product(*s, eta, eta, alpha)));
    worst_orth = std::max(worst_orth, std::abs(orth) / scale);
    const Eigen::VectorXd moved = interp + eta;
    worst_drop = std::max(worst_drop, base - native_semi_inner_product(*s, moved, moved, alpha));
  }
  VerifyReport r;
  r.checks.push_back(at_most("max_relative_orthogonality", worst_orth, 1e-9));
  r.checks.push_back(at_most("max_seminorm_decrease", worst_drop, 0.0));
  return r;
}

VerifyReport verify_coeff_symmetry(std::size_t trials, std::uint64_t seed, double alpha) {
  std::mt19937_64 rng(seed);
  double worst_sym = 0.0, worst_inner = 0.0;
  for (std::size_t t = 0; t < trials; ++t) {
    const std::size_t n = 20 + static_cast<std::size_t>(rng() % 81);
    const WeightedGraph g = random_connected_graph(n, 0.05, rng());
    const SpectralDecomposition s = eigendecompose(g, LaplacianKind::Normalized);
    const KernelMatrix k = pseudo_inverse_power(s, alpha);
    const LagrangeBasis b = lagrange_basis(k, s, random_subset(n, std::max<std::size_t>(2, n / 3), rng));
    for (std::size_t i = 0; i < b.size(); ++i) {
      for (std::size_t j = 0; j < b.size(); ++j) {
        const double gamma = b.coefficients(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i));
        const double beta = b.coefficients(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
        const double inner = native_semi_inner_product(s, b.function(i), b.function(j), alpha);
        worst_sym = std::max(worst_sym, std::abs(gamma - beta));
        worst_inner = std::max({worst_inner, std::abs(gamma - inner), std::abs(beta - inner)});
      }
    }
  }
  VerifyReport r;
  r.checks.push_back(at_most("max_gamma_beta_difference", worst_sym, 1e-8));
  r.checks.push_back(at_most("max_coefficient_inner_product_difference", worst_inner, 1e-8));
  return r;
}

VerifyReport verify_bulk_ratio(std::size_t trials, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const WeightedGraph g = cycle_graph(256);
  std::vector<Vertex> nodes;
  for (Vertex v = 0; v < 256; v += 4) nodes.push_back(v);
  const SpectralDecomposition s = eigendecompose(g, LaplacianKind::Normalized);
  const KernelMatrix k = pseudo_inverse_power(s, 2.0);
  const LagrangeBasis basis = lagrange_basis(k, s, nodes);
  const double h = fill_distance(g, nodes);
  const double rho_max = g.metrics().rho_max;

  double worst = 0.0;
  std::size_t degenerate = 0;
  for (std::size_t t = 0; t < trials; ++t) {
    const std::size_t j = static_cast<std::size_t>(rng() % nodes.size());
    for (double r2 : {8.0, 12.0, 16.0, 20.0, 24.0}) {
      for (double gap : {4.0, 8.0, 12.0, 16.0, 24.0}) {
        const BulkRatio b = bulk_ratio(basis.function(j), s, g, nodes[j], r2, r2 + gap, h, rho_max);
        if (b.ratio) worst = std::max(worst, *b.ratio);
        else ++degenerate;
      }
    }
  }
  VerifyReport r;
  r.checks.push_back({"max_ratio", worst, "< 1", worst < 1.0});
  r.checks.push_back({"degenerate_denominators", static_cast<double>(degenerate), "reported", true});
  return r;
}

VerifyReport verify_cover_constant(std::size_t trials, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  double worst_rotation = 0.0, min_cycle = std::numeric_limits<double>::infinity(), worst_ml = 0.0;
  std::uniform_real_distribution<double> len(1.0, 1.9);
  for (std::size_t t = 0; t < trials; ++t) {
    const std::size_t n = 6 + static_cast<std::size_t>(rng() % 59);
    const WeightedGraph cyc = cycle_graph(n);
    const std::size_t m = 2 + static_cast<std::size_t>(rng() % (n - 1));
    const auto nodes = random_subset(n, m, rng);
    const double c = cycle_cover_constant(cyc, nodes).constant;
    const Vertex shift = static_cast<Vertex>(rng() % n);
    std::vector<Vertex> rotated;
    for (Vertex v : nodes) rotated.push_back((v + shift) % n);
    const double cr = cycle_cover_constant(cyc, rotated).constant;
    worst_rotation = std::max(worst_rotation, std::abs(c - cr) / c);
    min_cycle = std::min(min_cycle, c);

    // Known vertices form a path; each unknown vertex hangs off two known ones.
    const std::size_t known = 3 + static_cast<std::size_t>(rng() % 10);
    const std::size_t unknown = 1 + static_cast<std::size_t>(rng() % 8);
    std::vector<Edge> edges;
    for (Vertex v = 0; v + 1 < known; ++v) {
      const double l = len(rng);
      edges.push_back({v, v + 1, 1.0 / l, l});
    }
    for (Vertex u = known; u < known + unknown; ++u) {
      const Vertex a = static_cast<Vertex>(rng() % known);
      const Vertex b = static_cast<Vertex>((a + 1 + rng() % (known - 1)) % known);
      for (Vertex v : {a, b}) {
        const double l = len(rng);
        edges.push_back({u, v, 1.0 / l, l});
      }
    }
    std::vector<Vertex> known_set(known);
    for (Vertex v = 0; v < known; ++v) known_set[v] = v;
    const MlCover ml = ml_cover_constant(build_graph(edges), known_set);
    worst_ml = std::max(worst_ml, ml.empirical_constant / ml.formula_constant);
  }
  VerifyReport r;
  r.checks.push_back(at_most("cycle_rotation_relative_difference", worst_rotation, 1e-10));
  r.checks.push_back(at_least("cycle_min_constant", min_cycle, 2.0));
  r.checks.push_back(at_most("ml_empirical_over_formula", worst_ml, 1.0));
  return r;
}

}  // namespace gsk::cli
