#pragma once

#include <span>

#include <Eigen/Core>

#include "gsk/graph.hpp"

namespace gsk {

enum class LaplacianKind {
  Normalized,    // D^{-1/2} (D - A) D^{-1/2}
  Unnormalized,  // D - A
};

// Dense graph Laplacian. Throws IsolatedVertex for a zero row sum.
Eigen::MatrixXd laplacian(const WeightedGraph& g, LaplacianKind kind);

// Full eigendecomposition of a connected-graph Laplacian.
//
// Eigenvalues ascend; column k of `eigenvectors` is the unit eigenvector for
// eigenvalue k. Eigenvalues at or below `zero_tolerance` are treated as exact
// zeros; exactly one such eigenvalue is allowed. The null vector (column 0)
// is signed to be non-negative, every other column has its first
// significant entry positive.
struct SpectralDecomposition {
  LaplacianKind kind = LaplacianKind::Normalized;
  Eigen::VectorXd eigenvalues;
  Eigen::MatrixXd eigenvectors;
  double zero_tolerance = 0.0;

  std::size_t size() const noexcept { return static_cast<std::size_t>(eigenvalues.size()); }
  double eigenvalue(std::size_t k) const { return eigenvalues(static_cast<Eigen::Index>(k)); }
  auto mode(std::size_t k) const { return eigenvectors.col(static_cast<Eigen::Index>(k)); }
  // Lambda_0, the normalised null vector.
  auto null_vector() const { return eigenvectors.col(0); }
};

SpectralDecomposition eigendecompose(const Eigen::MatrixXd& laplacian_matrix, LaplacianKind kind);
SpectralDecomposition eigendecompose(const WeightedGraph& g, LaplacianKind kind);

// max |P^T D P - L|.
double reconstruction_error(const SpectralDecomposition& s, const Eigen::MatrixXd& laplacian_matrix);

// (L^dagger)^alpha; column k is the polyharmonic spline centred at vertex k.
struct KernelMatrix {
  double alpha = 2.0;
  Eigen::MatrixXd matrix;

  std::size_t size() const noexcept { return static_cast<std::size_t>(matrix.rows()); }
  auto column(Vertex v) const { return matrix.col(static_cast<Eigen::Index>(v)); }
};

KernelMatrix pseudo_inverse_power(const SpectralDecomposition& s, double alpha);

// L^p f by spectral calculus; zero eigenvalues map to zero for p > 0.
Eigen::VectorXd apply_laplacian_power(const SpectralDecomposition& s, const Eigen::VectorXd& f,
                                      double p);

// || L^{alpha/2} f || restricted to `subset`.
double sobolev_seminorm(const SpectralDecomposition& s, const Eigen::VectorXd& f, double alpha,
                        std::span<const Vertex> subset);
// Same, over every vertex.
double sobolev_seminorm(const SpectralDecomposition& s, const Eigen::VectorXd& f, double alpha);

// Coefficients <f, Lambda_n>, n = 0..N-1.
Eigen::VectorXd graph_fourier(const SpectralDecomposition& s, const Eigen::VectorXd& f);
Eigen::VectorXd inverse_graph_fourier(const SpectralDecomposition& s, const Eigen::VectorXd& coeffs);

// Smallest eigenvalue of the principal submatrix of L on `interior`.
double dirichlet_eigenvalue(const WeightedGraph& g, std::span<const Vertex> interior,
                            LaplacianKind kind);

}  // namespace gsk
