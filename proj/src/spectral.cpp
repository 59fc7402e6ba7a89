#include "gsk/spectral.hpp"

#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Eigenvalues>
#include <lapacke.h>

#include "gsk/errors.hpp"

namespace gsk {

namespace {

constexpr double kNormalizedUpperSlack = 1e-9;

void fix_signs(Eigen::MatrixXd& vectors) {
  // Null vector: non-negative. Others: first entry that is clearly nonzero is
  // positive, so results do not depend on the solver's arbitrary sign choice.
  if (vectors.col(0).sum() < 0.0) vectors.col(0) *= -1.0;
  for (Eigen::Index k = 1; k < vectors.cols(); ++k) {
    auto col = vectors.col(k);
    const double cutoff = 1e-8 * col.cwiseAbs().maxCoeff();
    for (Eigen::Index i = 0; i < col.size(); ++i) {
      if (std::abs(col(i)) > cutoff) {
        if (col(i) < 0.0) col *= -1.0;
        break;
      }
    }
  }
}

}  // namespace

Eigen::MatrixXd laplacian(const WeightedGraph& g, LaplacianKind kind) {
  const auto n = static_cast<Eigen::Index>(g.size());
  Eigen::MatrixXd lap = Eigen::MatrixXd::Zero(n, n);
  Eigen::VectorXd degree(n);
  for (Vertex v = 0; v < g.size(); ++v) {
    degree(static_cast<Eigen::Index>(v)) = g.weighted_degree(v);
    if (!(degree(static_cast<Eigen::Index>(v)) > 0.0)) {
      throw Error(ErrorCode::IsolatedVertex, "vertex " + std::to_string(v) + " has zero degree");
    }
  }
  for (const auto& e : g.edges()) {
    const auto u = static_cast<Eigen::Index>(e.u);
    const auto v = static_cast<Eigen::Index>(e.v);
    lap(u, v) -= e.weight;
    lap(v, u) -= e.weight;
  }
  if (kind == LaplacianKind::Unnormalized) {
    lap.diagonal() = degree;
  } else {
    const Eigen::VectorXd inv_sqrt = degree.cwiseSqrt().cwiseInverse();
    lap = inv_sqrt.asDiagonal() * lap * inv_sqrt.asDiagonal();
    lap.diagonal().setOnes();
  }
  return lap;
}

SpectralDecomposition eigendecompose(const Eigen::MatrixXd& laplacian_matrix, LaplacianKind kind) {
  const Eigen::Index n = laplacian_matrix.rows();
  if (n < 2 || laplacian_matrix.cols() != n) {
    throw Error(ErrorCode::DimensionMismatch, "Laplacian must be square with N >= 2");
  }
  const double scale = laplacian_matrix.cwiseAbs().maxCoeff();
  if ((laplacian_matrix - laplacian_matrix.transpose()).cwiseAbs().maxCoeff() >
      1e-12 * std::max(scale, 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "Laplacian is not symmetric");
  }

  SpectralDecomposition s;
  s.kind = kind;
  s.eigenvectors = laplacian_matrix;
  s.eigenvalues.resize(n);
  const lapack_int info =
      LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'V', 'U', static_cast<lapack_int>(n),
                     s.eigenvectors.data(), static_cast<lapack_int>(n), s.eigenvalues.data());
  if (info != 0) {
    throw Error(ErrorCode::EigensolverFailure, "dsyevd returned " + std::to_string(info));
  }

  const double lambda_max = std::max(std::abs(s.eigenvalues(n - 1)), std::abs(s.eigenvalues(0)));
  s.zero_tolerance = static_cast<double>(n) * std::numeric_limits<double>::epsilon() * lambda_max;

  if (s.eigenvalues(0) < -s.zero_tolerance) {
    throw Error(ErrorCode::EigensolverFailure,
                "negative eigenvalue " + std::to_string(s.eigenvalues(0)) + " (matrix not PSD)");
  }
  if (s.eigenvalues(0) > s.zero_tolerance) {
    throw Error(ErrorCode::EigensolverFailure, "no zero eigenvalue; not a Laplacian");
  }
  if (s.eigenvalues(1) <= s.zero_tolerance) {
    throw Error(ErrorCode::MultipleZeroEigenvalues,
                "lambda_1 = " + std::to_string(s.eigenvalues(1)) + " (graph disconnected?)");
  }
  if (kind == LaplacianKind::Normalized && s.eigenvalues(n - 1) > 2.0 + kNormalizedUpperSlack) {
    throw Error(ErrorCode::EigensolverFailure,
                "normalized eigenvalue " + std::to_string(s.eigenvalues(n - 1)) + " above 2");
  }
  fix_signs(s.eigenvectors);
  return s;
}

SpectralDecomposition eigendecompose(const WeightedGraph& g, LaplacianKind kind) {
  return eigendecompose(laplacian(g, kind), kind);
}

double reconstruction_error(const SpectralDecomposition& s, const Eigen::MatrixXd& laplacian_matrix) {
  const Eigen::MatrixXd rebuilt =
      s.eigenvectors * s.eigenvalues.asDiagonal() * s.eigenvectors.transpose();
  return (rebuilt - laplacian_matrix).cwiseAbs().maxCoeff();
}

KernelMatrix pseudo_inverse_power(const SpectralDecomposition& s, double alpha) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw Error(ErrorCode::NonPositiveAlpha, "alpha = " + std::to_string(alpha));
  }
  const Eigen::Index n = s.eigenvalues.size();
  const Eigen::Index m = n - 1;
  Eigen::VectorXd scale(m);
  for (Eigen::Index k = 0; k < m; ++k) scale(k) = std::pow(s.eigenvalues(k + 1), -alpha);
  const auto modes = s.eigenvectors.rightCols(m);
  KernelMatrix kernel;
  kernel.alpha = alpha;
  kernel.matrix = modes * scale.asDiagonal() * modes.transpose();
  kernel.matrix = 0.5 * (kernel.matrix + kernel.matrix.transpose()).eval();
  return kernel;
}

Eigen::VectorXd apply_laplacian_power(const SpectralDecomposition& s, const Eigen::VectorXd& f,
                                      double p) {
  if (f.size() != s.eigenvalues.size()) {
    throw Error(ErrorCode::DimensionMismatch, "function length does not match the graph");
  }
  if (p < 0.0) throw Error(ErrorCode::InvalidArgument, "negative power; use pseudo_inverse_power");
  if (p == 0.0) return f;
  Eigen::VectorXd coeffs = s.eigenvectors.transpose() * f;
  for (Eigen::Index k = 0; k < coeffs.size(); ++k) {
    const double lambda = s.eigenvalues(k);
    coeffs(k) *= (lambda <= s.zero_tolerance) ? 0.0 : std::pow(lambda, p);
  }
  return s.eigenvectors * coeffs;
}

double sobolev_seminorm(const SpectralDecomposition& s, const Eigen::VectorXd& f, double alpha,
                        std::span<const Vertex> subset) {
  if (subset.empty()) throw Error(ErrorCode::EmptySubset, "semi-norm over an empty subset");
  if (alpha < 0.0) throw Error(ErrorCode::InvalidArgument, "alpha must be non-negative");
  const Eigen::VectorXd g = apply_laplacian_power(s, f, alpha / 2.0);
  double sum = 0.0;
  for (Vertex v : subset) {
    if (v >= s.size()) throw Error(ErrorCode::InvalidArgument, "subset vertex out of range");
    sum += g(static_cast<Eigen::Index>(v)) * g(static_cast<Eigen::Index>(v));
  }
  return std::sqrt(sum);
}

double sobolev_seminorm(const SpectralDecomposition& s, const Eigen::VectorXd& f, double alpha) {
  if (alpha < 0.0) throw Error(ErrorCode::InvalidArgument, "alpha must be non-negative");
  return apply_laplacian_power(s, f, alpha / 2.0).norm();
}

Eigen::VectorXd graph_fourier(const SpectralDecomposition& s, const Eigen::VectorXd& f) {
  if (f.size() != s.eigenvalues.size()) {
    throw Error(ErrorCode::DimensionMismatch, "function length does not match the graph");
  }
  return s.eigenvectors.transpose() * f;
}

Eigen::VectorXd inverse_graph_fourier(const SpectralDecomposition& s, const Eigen::VectorXd& coeffs) {
  if (coeffs.size() != s.eigenvalues.size()) {
    throw Error(ErrorCode::DimensionMismatch, "coefficient count does not match the graph");
  }
  return s.eigenvectors * coeffs;
}

double dirichlet_eigenvalue(const WeightedGraph& g, std::span<const Vertex> interior,
                            LaplacianKind kind) {
  if (interior.empty()) throw Error(ErrorCode::EmptyInterior, "empty interior");
  const auto in = membership(g.size(), interior);
  if (interior.size() == g.size()) {
    throw Error(ErrorCode::FullVertexSet, "interior must be a proper subset");
  }
  const Eigen::MatrixXd lap = laplacian(g, kind);
  const auto m = static_cast<Eigen::Index>(interior.size());
  Eigen::MatrixXd sub(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) {
      sub(i, j) = lap(static_cast<Eigen::Index>(interior[static_cast<std::size_t>(i)]),
                      static_cast<Eigen::Index>(interior[static_cast<std::size_t>(j)]));
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sub, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::EigensolverFailure, "Dirichlet eigensolve failed");
  }
  return solver.eigenvalues()(0);
}

}  // namespace gsk
