#include "gsk/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <random>
#include <string>

#include "gsk/errors.hpp"

namespace gsk {

namespace {

Eigen::Index idx(Vertex v) { return static_cast<Eigen::Index>(v); }

DecayProfile bin_values(const std::vector<std::pair<double, double>>& samples, Vertex center,
                        double bin_width) {
  if (!(bin_width > 0.0)) throw Error(ErrorCode::InvalidArgument, "bin width must be positive");
  std::map<long long, double> bins;
  for (auto [distance, magnitude] : samples) {
    const long long b = std::llround(distance / bin_width);
    auto [it, inserted] = bins.emplace(b, magnitude);
    if (!inserted) it->second = std::max(it->second, magnitude);
  }
  DecayProfile p;
  p.center = center;
  p.bin_width = bin_width;
  for (auto [b, envelope] : bins) p.bins.push_back({static_cast<double>(b) * bin_width, envelope});
  return p;
}

}  // namespace

DecayProfile decay_profile(const Eigen::VectorXd& f, const WeightedGraph& g, Vertex center,
                           double bin_width) {
  if (f.size() != idx(g.size())) throw Error(ErrorCode::DimensionMismatch, "function length");
  if (center >= g.size()) throw Error(ErrorCode::InvalidArgument, "center out of range");
  const auto& d = g.distances();
  std::vector<std::pair<double, double>> samples;
  samples.reserve(g.size());
  for (Vertex u = 0; u < g.size(); ++u) samples.emplace_back(d(idx(center), idx(u)), std::abs(f(idx(u))));
  return bin_values(samples, center, bin_width);
}

DecayProfile decay_profile(const Eigen::VectorXd& f, const WeightedGraph& g, Vertex center) {
  return decay_profile(f, g, center, g.metrics().rho_max);
}

DecayFit fit_exponential_decay(const DecayProfile& p, double fill_distance, double rho_max,
                               DecayFitOptions options) {
  const double denom = 4.0 * fill_distance + 3.0 * rho_max;
  if (!(denom > 0.0)) throw Error(ErrorCode::InvalidArgument, "4h + 3 rho_max must be positive");
  const double floor = std::max(0.0, options.min_envelope);

  std::vector<double> x;
  std::vector<double> y;
  for (const auto& bin : p.bins) {
    if (bin.envelope > floor) {
      x.push_back(bin.distance);
      y.push_back(std::log(bin.envelope));
    }
  }
  if (x.size() < 3) {
    throw Error(ErrorCode::InsufficientData,
                std::to_string(x.size()) + " usable bins, at least 3 required");
  }
  const auto n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (!(sxx > 0.0)) throw Error(ErrorCode::InsufficientData, "all bins at the same distance");

  DecayFit fit;
  fit.bins_used = x.size();
  fit.slope = sxy / sxx;
  fit.amplitude = std::exp(my - fit.slope * mx);
  double ss_res = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (my + fit.slope * (x[i] - mx));
    ss_res += r * r;
  }
  fit.r_squared = syy > 0.0 ? std::clamp(1.0 - ss_res / syy, 0.0, 1.0) : 1.0;
  fit.scale = 1.0 / denom;
  fit.rate = std::exp(fit.slope / fit.scale);
  fit.no_decay = fit.slope >= -1e-12;
  return fit;
}

double expansion_noise_floor(const KernelMatrix& kernel, const Eigen::VectorXd& coefficients,
                             double constant) {
  // The null vector has unit norm, so |C| bounds its contribution.
  const double kernel_part = kernel.matrix.cwiseAbs().maxCoeff() * coefficients.cwiseAbs().sum();
  return 10.0 * std::numeric_limits<double>::epsilon() * (kernel_part + std::abs(constant));
}

BulkRatio bulk_ratio(const Eigen::VectorXd& chi, const SpectralDecomposition& s,
                     const WeightedGraph& g, Vertex center, double r2, double r3, double h,
                     double rho_max) {
  if (chi.size() != idx(g.size()) || s.size() != g.size()) {
    throw Error(ErrorCode::DimensionMismatch, "function, graph and decomposition must agree");
  }
  if (center >= g.size()) throw Error(ErrorCode::InvalidArgument, "center out of range");
  if (!(3.0 * rho_max + 2.0 * h < r2 && r2 < r3)) {
    throw Error(ErrorCode::InvalidArgument, "need 3 rho_max + 2h < r2 < r3");
  }
  BulkRatio out;
  out.r1 = r2 - 2.0 * rho_max - 2.0 * h;
  out.r4 = r3 + 2.0 * h;

  // alpha = 2 exactly, so L chi by matrix action; far-field zeros stay exact.
  const Eigen::VectorXd lchi = laplacian(g, s.kind) * chi;
  const auto inner = ball(g, center, out.r1);
  const auto outer = ball(g, center, out.r4);
  const auto in_inner = membership(g.size(), inner);
  const auto in_outer = membership(g.size(), outer);
  double num = 0.0, den = 0.0;
  for (Vertex v = 0; v < g.size(); ++v) {
    const double sq = lchi(idx(v)) * lchi(idx(v));
    if (!in_outer[v]) num += sq;
    if (!in_inner[v]) den += sq;
  }
  out.numerator = std::sqrt(num);
  out.denominator = std::sqrt(den);
  if (out.denominator > 0.0) out.ratio = out.numerator / out.denominator;
  return out;
}

std::optional<double> zeros_lemma_ratio(const SpectralDecomposition& s, const Eigen::VectorXd& f,
                                        double alpha) {
  if (s.kind != LaplacianKind::Unnormalized) {
    throw Error(ErrorCode::InvalidArgument, "the zeros bound is stated for the unnormalized Laplacian");
  }
  const double norm = f.norm();
  if (norm == 0.0) return std::nullopt;
  const double semi = sobolev_seminorm(s, f, alpha);
  const double bound_factor = std::sqrt(static_cast<double>(s.size())) / std::pow(s.eigenvalue(1), alpha / 2.0);
  if (semi == 0.0) return std::numeric_limits<double>::infinity();
  return norm / (bound_factor * semi);
}

ZerosLemmaReport zeros_lemma_check(const WeightedGraph& g, double alpha, std::size_t trials,
                                   std::uint64_t seed) {
  if (trials < 1) throw Error(ErrorCode::InvalidArgument, "trials must be at least 1");
  const SpectralDecomposition s = eigendecompose(g, LaplacianKind::Unnormalized);
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<Vertex> pick(0, g.size() - 1);
  std::normal_distribution<double> normal(0.0, 1.0);

  ZerosLemmaReport report;
  report.trials = trials;
  for (std::size_t t = 0; t < trials; ++t) {
    const Vertex zero = pick(rng);
    Eigen::VectorXd f(idx(g.size()));
    for (Eigen::Index i = 0; i < f.size(); ++i) f(i) = normal(rng);
    f(idx(zero)) = 0.0;
    const auto ratio = zeros_lemma_ratio(s, f, alpha);
    if (!ratio) {
      ++report.skipped;
      continue;
    }
    report.max_ratio = std::max(report.max_ratio, *ratio);
    if (*ratio > 1.0 + 1e-9) report.violations.push_back({zero, *ratio, f});
  }
  return report;
}

CycleCover cycle_cover_constant(const WeightedGraph& g, std::span<const Vertex> nodes,
                                LaplacianKind kind) {
  const std::size_t n = g.size();
  if (n < 3 || g.edges().size() != n) throw Error(ErrorCode::NotACycle, "graph is not a cycle");
  for (Vertex v = 0; v < n; ++v) {
    if (g.degree(v) != 2) throw Error(ErrorCode::NotACycle, "vertex " + std::to_string(v) + " has degree != 2");
  }
  if (nodes.size() < 2) throw Error(ErrorCode::TooFewNodes, "need at least two nodes");
  membership(n, nodes);

  // Cyclic order starting at vertex 0, heading to its smaller neighbour.
  std::vector<Vertex> order{0};
  std::vector<std::size_t> position(n, 0);
  Vertex prev = 0;
  Vertex cur = std::min(g.neighbors(0)[0].vertex, g.neighbors(0)[1].vertex);
  while (cur != 0) {
    position[cur] = order.size();
    order.push_back(cur);
    const auto nbs = g.neighbors(cur);
    const Vertex next = nbs[0].vertex == prev ? nbs[1].vertex : nbs[0].vertex;
    prev = cur;
    cur = next;
  }

  std::vector<Vertex> sorted(nodes.begin(), nodes.end());
  std::sort(sorted.begin(), sorted.end(),
            [&](Vertex a, Vertex b) { return position[a] < position[b]; });
  const std::size_t count = sorted.size();

  CycleCover cover;
  double worst = 0.0;
  for (std::size_t k = 0; k < count; ++k) {
    const Vertex start = sorted[k];
    const Vertex end = sorted[(k + 2) % count];
    CoverPath path;
    std::size_t p = position[start];
    path.vertices.push_back(start);
    do {
      p = (p + 1) % n;
      path.vertices.push_back(order[p]);
    } while (order[p] != end);
    for (std::size_t i = 1; i + 1 < path.vertices.size(); ++i) path.interior.push_back(path.vertices[i]);
    std::sort(path.interior.begin(), path.interior.end());
    path.dirichlet_eigenvalue = dirichlet_eigenvalue(g, path.interior, kind);
    worst = std::max(worst, 1.0 / (path.dirichlet_eigenvalue * path.dirichlet_eigenvalue));
    cover.paths.push_back(std::move(path));
  }
  cover.constant = 2.0 * worst;
  return cover;
}

MlCover ml_cover_constant(const WeightedGraph& g, std::span<const Vertex> known, LaplacianKind kind) {
  if (known.empty()) throw Error(ErrorCode::EmptyNodeSet, "known set is empty");
  const auto is_known = membership(g.size(), known);
  const GraphMetrics metrics = g.metrics();

  for (const auto& e : g.edges()) {
    const std::string name = "(" + std::to_string(e.u) + "," + std::to_string(e.v) + ")";
    if (!is_known[e.u] && !is_known[e.v]) {
      throw Error(ErrorCode::HypothesisViolated, "edge " + name + " joins two unknown vertices");
    }
    if (e.length < 0.5 * metrics.rho_max) {
      throw Error(ErrorCode::HypothesisViolated, "edge " + name + " shorter than rho_max / 2");
    }
    if (std::abs(e.weight * e.length - 1.0) > 1e-12) {
      throw Error(ErrorCode::HypothesisViolated, "edge " + name + " weight is not 1 / length");
    }
  }

  MlCover out;
  out.max_degree = metrics.max_degree;
  const auto m = static_cast<double>(out.max_degree);
  out.formula_constant = 64.0 * std::pow(m + 1.0, 4) * std::pow(m, 5);
  out.min_dirichlet_eigenvalue = std::numeric_limits<double>::infinity();

  for (Vertex v0 = 0; v0 < g.size(); ++v0) {
    // Interior of the subgraph grown from v0: v0 and its unknown neighbours.
    // The rest of that subgraph (known neighbours, and neighbours of the
    // unknown neighbours) is its boundary and consists of known vertices.
    std::vector<Vertex> interior{v0};
    for (const auto& nb : g.neighbors(v0)) {
      if (!is_known[nb.vertex]) interior.push_back(nb.vertex);
    }
    std::sort(interior.begin(), interior.end());
    if (interior.size() == g.size()) continue;  // no boundary left to impose zeros on
    const double lambda = dirichlet_eigenvalue(g, interior, kind);
    out.min_dirichlet_eigenvalue = std::min(out.min_dirichlet_eigenvalue, lambda);
    ++out.subgraphs;
  }
  if (out.subgraphs == 0) {
    throw Error(ErrorCode::HypothesisViolated, "no subgraph has a nonempty boundary");
  }
  out.empirical_constant = m / (out.min_dirichlet_eigenvalue * out.min_dirichlet_eigenvalue);
  return out;
}

double fitted_decay_constant(const Eigen::VectorXd& chi, const WeightedGraph& g, Vertex center,
                             const DecayFit& fit, double seminorm) {
  if (!(seminorm > 0.0)) throw Error(ErrorCode::InvalidArgument, "semi-norm must be positive");
  const auto& d = g.distances();
  double c = 0.0;
  for (Vertex v = 0; v < g.size(); ++v) {
    const double envelope = std::exp(fit.slope * d(idx(center), idx(v))) * seminorm;
    c = std::max(c, std::abs(chi(idx(v))) / envelope);
  }
  return c;
}

double decay_bound_ratio(const Eigen::VectorXd& chi, const WeightedGraph& g, Vertex center,
                         const DecayFit& fit, double constant, double seminorm) {
  const auto& d = g.distances();
  double worst = 0.0;
  for (Vertex v = 0; v < g.size(); ++v) {
    const double bound = constant * std::exp(fit.slope * d(idx(center), idx(v))) * seminorm;
    worst = std::max(worst, std::abs(chi(idx(v))) / bound);
  }
  return worst;
}

DecayProfile coefficient_profile(const LagrangeBasis& basis, std::size_t j, const WeightedGraph& g,
                                 double bin_width) {
  if (j >= basis.size()) throw Error(ErrorCode::InvalidArgument, "basis index out of range");
  const auto& d = g.distances();
  const Vertex center = basis.nodes[j];
  std::vector<std::pair<double, double>> samples;
  for (std::size_t i = 0; i < basis.size(); ++i) {
    samples.emplace_back(d(idx(center), idx(basis.nodes[i])),
                         std::abs(basis.coefficients(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j))));
  }
  return bin_values(samples, center, bin_width);
}

}  // namespace gsk
