#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "gsk/graph.hpp"
#include "gsk/interpolation.hpp"
#include "gsk/spectral.hpp"

namespace gsk {

struct DecayBin {
  double distance;  // bin centre
  double envelope;  // max |f| over the vertices in the bin
};

// Distance-binned magnitude envelope of a function around a centre.
struct DecayProfile {
  Vertex center = 0;
  double bin_width = 1.0;
  std::vector<DecayBin> bins;  // non-empty bins, increasing distance
};

// Vertex u goes to bin round(rho(u, center) / bin_width).
DecayProfile decay_profile(const Eigen::VectorXd& f, const WeightedGraph& g, Vertex center,
                           double bin_width);
// Same with bin_width = rho_max.
DecayProfile decay_profile(const Eigen::VectorXd& f, const WeightedGraph& g, Vertex center);

// Least-squares fit of log(envelope) = log(amplitude) + slope * distance,
// also expressed as amplitude * rate^(scale * distance) with
// scale = 1 / (4h + 3 rho_max).
struct DecayFit {
  double amplitude = 0.0;
  double slope = 0.0;
  double rate = 1.0;   // mu = exp(slope / scale)
  double scale = 0.0;  // T
  double r_squared = 0.0;
  bool no_decay = false;  // slope >= 0
  std::size_t bins_used = 0;
};

struct DecayFitOptions {
  // Bins whose envelope is at or below this value are left out. The default
  // keeps every strictly positive bin.
  double min_envelope = 0.0;
};

DecayFit fit_exponential_decay(const DecayProfile& p, double fill_distance, double rho_max,
                               DecayFitOptions options = {});

// Rounding level of a kernel expansion C*Lambda_0 + K beta: entries below it
// are not resolved in double precision.
double expansion_noise_floor(const KernelMatrix& kernel, const Eigen::VectorXd& coefficients,
                             double constant);

// Tail ratio |chi|_{H^2(G \ B(r4))} / |chi|_{H^2(G \ B(r1))} with
// r1 = r2 - 2 rho_max - 2h and r4 = r3 + 2h.
struct BulkRatio {
  double r1 = 0.0;
  double r4 = 0.0;
  double numerator = 0.0;
  double denominator = 0.0;
  // Empty when the denominator vanishes (the function has decayed to nothing).
  std::optional<double> ratio;
};

// The H^2 semi-norms use L chi with L of the decomposition's kind.
BulkRatio bulk_ratio(const Eigen::VectorXd& chi, const SpectralDecomposition& s,
                     const WeightedGraph& g, Vertex center, double r2, double r3, double h,
                     double rho_max);

struct ZerosWitness {
  Vertex zero_vertex;
  double ratio;
  Eigen::VectorXd f;
};

struct ZerosLemmaReport {
  std::size_t trials = 0;
  std::size_t skipped = 0;  // f identically zero
  double max_ratio = 0.0;
  std::vector<ZerosWitness> violations;
};

// ||f|| lambda_1^{alpha/2} / (sqrt(N) |f|_{H^alpha}); at most 1 when f has a zero.
// Empty for f = 0. Needs an unnormalized decomposition.
std::optional<double> zeros_lemma_ratio(const SpectralDecomposition& s, const Eigen::VectorXd& f,
                                        double alpha);

ZerosLemmaReport zeros_lemma_check(const WeightedGraph& g, double alpha, std::size_t trials,
                                   std::uint64_t seed);

struct CoverPath {
  std::vector<Vertex> vertices;  // along the cycle, both end nodes included
  std::vector<Vertex> interior;  // vertices minus the two end nodes
  double dirichlet_eigenvalue = 0.0;
};

struct CycleCover {
  std::vector<CoverPath> paths;
  double constant = 0.0;  // 2 * max (1 / lambda)^2
};

// Covers a cycle by the paths joining every other node and returns the
// zeros-inequality constant built from their Dirichlet eigenvalues.
CycleCover cycle_cover_constant(const WeightedGraph& g, std::span<const Vertex> nodes,
                                LaplacianKind kind = LaplacianKind::Normalized);

struct MlCover {
  std::size_t max_degree = 0;
  double formula_constant = 0.0;    // 64 (M+1)^4 M^5
  double min_dirichlet_eigenvalue = 0.0;
  double empirical_constant = 0.0;  // M * max (1 / lambda)^2
  std::size_t subgraphs = 0;
};

// Checks the known/unknown graph hypotheses (no unknown-unknown edge, edge
// lengths >= rho_max / 2, w = 1 / length) and evaluates both constants.
MlCover ml_cover_constant(const WeightedGraph& g, std::span<const Vertex> known,
                          LaplacianKind kind = LaplacianKind::Normalized);

// Smallest C with |chi(v)| <= C rate^(scale * rho(v, center)) |chi|_{H^2} for all v.
double fitted_decay_constant(const Eigen::VectorXd& chi, const WeightedGraph& g, Vertex center,
                             const DecayFit& fit, double seminorm);

// max over v of |chi(v)| / (C rate^(scale * rho) |chi|_{H^2}); at most 1 when
// C comes from fitted_decay_constant.
double decay_bound_ratio(const Eigen::VectorXd& chi, const WeightedGraph& g, Vertex center,
                         const DecayFit& fit, double constant, double seminorm);

// |beta_v| of chi(., nodes[j]) binned by rho(v, nodes[j]).
DecayProfile coefficient_profile(const LagrangeBasis& basis, std::size_t j, const WeightedGraph& g,
                                 double bin_width);

}  // namespace gsk
