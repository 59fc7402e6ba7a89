#pragma once

#include <memory>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "gsk/graph.hpp"
#include "gsk/spectral.hpp"

namespace gsk {

// Data on a node subset together with the kernel it is interpolated with.
struct InterpolationProblem {
  std::shared_ptr<const SpectralDecomposition> spectrum;
  std::shared_ptr<const KernelMatrix> kernel;
  std::vector<Vertex> nodes;  // distinct, nonempty
  Eigen::VectorXd values;     // one per node, finite

  void validate() const;
};

// s = C * Lambda_0 + sum_v beta_v * Phi_alpha(., v), with beta orthogonal to
// Lambda_0 restricted to the nodes.
struct Interpolant {
  std::vector<Vertex> nodes;
  Eigen::VectorXd coefficients;  // beta, aligned with `nodes`
  double constant = 0.0;         // C
  double alpha = 2.0;
};

// Factorised augmented matrix [Phi~ l0; l0^T 0] for one node set.
//
// The factorisation is symmetric indefinite (Bunch-Kaufman) and is reused by
// every solve. Construction throws SingularSystem when the ratio of the
// smallest to the largest pivot magnitude drops below `kPivotRatio`.
class AugmentedSystem {
 public:
  static constexpr double kPivotRatio = 1e-12;

  AugmentedSystem(const KernelMatrix& kernel, const SpectralDecomposition& spectrum,
                  std::vector<Vertex> nodes);

  const std::vector<Vertex>& nodes() const noexcept { return nodes_; }
  double pivot_ratio() const noexcept { return pivot_ratio_; }
  double alpha() const noexcept { return alpha_; }

  Interpolant solve(const Eigen::VectorXd& values) const;
  // Column j of `rhs` is one data vector; returns [beta; C] per column.
  Eigen::MatrixXd solve_many(const Eigen::MatrixXd& rhs) const;

 private:
  std::vector<Vertex> nodes_;
  double alpha_;
  Eigen::MatrixXd factor_;
  std::vector<int> pivots_;
  double pivot_ratio_ = 0.0;
};

Interpolant solve_interpolant(const InterpolationProblem& p);

// The interpolant on every vertex.
Eigen::VectorXd evaluate(const Interpolant& s, const KernelMatrix& kernel,
                         const SpectralDecomposition& spectrum);
Eigen::VectorXd evaluate(const Interpolant& s, const InterpolationProblem& p);

// <L^{alpha/2} f, L^{alpha/2} g>.
double native_semi_inner_product(const SpectralDecomposition& s, const Eigen::VectorXd& f,
                                 const Eigen::VectorXd& g, double alpha);

// Lagrange (cardinal) functions for a node set.
struct LagrangeBasis {
  std::vector<Vertex> nodes;
  double alpha = 2.0;
  Eigen::MatrixXd coefficients;  // m x m; column j is beta of chi(., nodes[j])
  Eigen::VectorXd constants;     // C of each chi(., nodes[j])
  Eigen::MatrixXd values;        // N x m; column j is chi(., nodes[j]) on all vertices

  std::size_t size() const noexcept { return nodes.size(); }
  // Position of `v` in `nodes`; throws if `v` is not a node.
  std::size_t index_of(Vertex v) const;
  Interpolant interpolant(std::size_t j) const;
  auto function(std::size_t j) const { return values.col(static_cast<Eigen::Index>(j)); }
};

LagrangeBasis lagrange_basis(const KernelMatrix& kernel, const SpectralDecomposition& spectrum,
                             std::vector<Vertex> nodes);

// Lagrange-type function with coefficients supported on a neighbourhood of
// its centre.
struct LocalExpansion {
  Vertex center = 0;
  double radius = 0.0;
  std::vector<Vertex> nodes;     // kept nodes, B(center, radius) intersected with the node set
  Eigen::VectorXd coefficients;  // aligned with `nodes`
  double constant = 0.0;
  Eigen::VectorXd values;        // evaluated on all vertices
};

struct TruncationOptions {
  // Project the kept coefficients back onto the side condition.
  bool project = true;
};

// Drops the coefficients of chi(., center) outside B(center, radius).
LocalExpansion truncated_lagrange(const LagrangeBasis& basis, const KernelMatrix& kernel,
                                  const SpectralDecomposition& spectrum, const WeightedGraph& g,
                                  Vertex center, double radius, TruncationOptions options = {});

// Cardinal interpolant using only the nodes in B(center, radius), evaluated
// everywhere.
LocalExpansion local_lagrange(const KernelMatrix& kernel, const SpectralDecomposition& spectrum,
                              const WeightedGraph& g, std::span<const Vertex> nodes,
                              Vertex center, double radius);

}  // namespace gsk
