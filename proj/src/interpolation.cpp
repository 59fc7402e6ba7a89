#include "gsk/interpolation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <lapacke.h>

#include "gsk/errors.hpp"

namespace gsk {

namespace {

Eigen::Index idx(Vertex v) { return static_cast<Eigen::Index>(v); }

void check_consistent(const KernelMatrix& kernel, const SpectralDecomposition& spectrum) {
  if (kernel.size() != spectrum.size()) {
    throw Error(ErrorCode::InconsistentDimensions, "kernel and decomposition sizes differ");
  }
}

Eigen::MatrixXd kernel_columns(const KernelMatrix& kernel, std::span<const Vertex> nodes) {
  Eigen::MatrixXd cols(kernel.matrix.rows(), static_cast<Eigen::Index>(nodes.size()));
  for (std::size_t j = 0; j < nodes.size(); ++j) cols.col(static_cast<Eigen::Index>(j)) = kernel.column(nodes[j]);
  return cols;
}

Eigen::VectorXd restrict_to(const Eigen::VectorXd& f, std::span<const Vertex> nodes) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(nodes.size()));
  for (std::size_t j = 0; j < nodes.size(); ++j) out(static_cast<Eigen::Index>(j)) = f(idx(nodes[j]));
  return out;
}

std::vector<Vertex> nodes_in_ball(const WeightedGraph& g, std::span<const Vertex> nodes,
                                  Vertex center, double radius) {
  std::vector<Vertex> kept;
  const auto in_ball = ball(g, center, radius);
  for (Vertex v : nodes) {
    if (std::binary_search(in_ball.begin(), in_ball.end(), v)) kept.push_back(v);
  }
  return kept;
}

}  // namespace

void InterpolationProblem::validate() const {
  if (!spectrum || !kernel) throw Error(ErrorCode::InvalidArgument, "problem has no kernel");
  check_consistent(*kernel, *spectrum);
  if (nodes.empty()) throw Error(ErrorCode::EmptyNodeSet, "interpolation needs at least one node");
  membership(spectrum->size(), nodes);
  if (values.size() != static_cast<Eigen::Index>(nodes.size())) {
    throw Error(ErrorCode::InconsistentDimensions, "one value per node required");
  }
  if (!values.allFinite()) throw Error(ErrorCode::InvalidArgument, "non-finite data value");
}

AugmentedSystem::AugmentedSystem(const KernelMatrix& kernel, const SpectralDecomposition& spectrum,
                                 std::vector<Vertex> nodes)
    : nodes_(std::move(nodes)), alpha_(kernel.alpha) {
  check_consistent(kernel, spectrum);
  if (nodes_.empty()) throw Error(ErrorCode::EmptyNodeSet, "interpolation needs at least one node");
  membership(spectrum.size(), nodes_);

  const auto m = static_cast<Eigen::Index>(nodes_.size());
  factor_.setZero(m + 1, m + 1);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) {
      factor_(i, j) = kernel.matrix(idx(nodes_[static_cast<std::size_t>(i)]),
                                    idx(nodes_[static_cast<std::size_t>(j)]));
    }
    const double l0 = spectrum.null_vector()(idx(nodes_[static_cast<std::size_t>(i)]));
    factor_(i, m) = l0;
    factor_(m, i) = l0;
  }

  const auto n = static_cast<lapack_int>(m + 1);
  pivots_.resize(static_cast<std::size_t>(n));
  const lapack_int info = LAPACKE_dsytrf(LAPACK_COL_MAJOR, 'L', n, factor_.data(), n, pivots_.data());
  if (info < 0) throw Error(ErrorCode::InvalidArgument, "dsytrf argument " + std::to_string(-info));
  if (info > 0) throw Error(ErrorCode::SingularSystem, "exactly singular augmented matrix");

  // Pivot magnitudes of the block-diagonal factor D.
  double smallest = std::numeric_limits<double>::infinity();
  double largest = 0.0;
  for (lapack_int k = 0; k < n;) {
    if (pivots_[static_cast<std::size_t>(k)] > 0) {
      const double d = std::abs(factor_(k, k));
      smallest = std::min(smallest, d);
      largest = std::max(largest, d);
      k += 1;
    } else {
      const double a = factor_(k, k);
      const double b = factor_(k + 1, k);
      const double c = factor_(k + 1, k + 1);
      const double mid = 0.5 * (a + c);
      const double rad = std::hypot(0.5 * (a - c), b);
      const double e1 = std::abs(mid - rad);
      const double e2 = std::abs(mid + rad);
      smallest = std::min({smallest, e1, e2});
      largest = std::max({largest, e1, e2});
      k += 2;
    }
  }
  pivot_ratio_ = largest > 0.0 ? smallest / largest : 0.0;
  if (!(pivot_ratio_ >= kPivotRatio)) {
    throw Error(ErrorCode::SingularSystem,
                "pivot ratio " + std::to_string(pivot_ratio_) + " below threshold");
  }
}

Eigen::MatrixXd AugmentedSystem::solve_many(const Eigen::MatrixXd& rhs) const {
  const auto m = static_cast<Eigen::Index>(nodes_.size());
  if (rhs.rows() != m) {
    throw Error(ErrorCode::InconsistentDimensions, "right-hand side needs one row per node");
  }
  Eigen::MatrixXd x = Eigen::MatrixXd::Zero(m + 1, rhs.cols());
  x.topRows(m) = rhs;
  const auto n = static_cast<lapack_int>(m + 1);
  const lapack_int info =
      LAPACKE_dsytrs(LAPACK_COL_MAJOR, 'L', n, static_cast<lapack_int>(rhs.cols()), factor_.data(),
                     n, pivots_.data(), x.data(), n);
  if (info != 0) throw Error(ErrorCode::SingularSystem, "dsytrs returned " + std::to_string(info));
  return x;
}

Interpolant AugmentedSystem::solve(const Eigen::VectorXd& values) const {
  if (!values.allFinite()) throw Error(ErrorCode::InvalidArgument, "non-finite data value");
  const Eigen::MatrixXd x = solve_many(values);
  const auto m = static_cast<Eigen::Index>(nodes_.size());
  Interpolant s;
  s.nodes = nodes_;
  s.coefficients = x.col(0).head(m);
  s.constant = x(m, 0);
  s.alpha = alpha_;
  return s;
}

Interpolant solve_interpolant(const InterpolationProblem& p) {
  p.validate();
  return AugmentedSystem(*p.kernel, *p.spectrum, p.nodes).solve(p.values);
}

Eigen::VectorXd evaluate(const Interpolant& s, const KernelMatrix& kernel,
                         const SpectralDecomposition& spectrum) {
  check_consistent(kernel, spectrum);
  if (s.coefficients.size() != static_cast<Eigen::Index>(s.nodes.size())) {
    throw Error(ErrorCode::InconsistentDimensions, "one coefficient per node required");
  }
  Eigen::VectorXd out = s.constant * spectrum.null_vector();
  for (std::size_t j = 0; j < s.nodes.size(); ++j) {
    if (s.nodes[j] >= kernel.size()) throw Error(ErrorCode::InconsistentDimensions, "node out of range");
    out += s.coefficients(static_cast<Eigen::Index>(j)) * kernel.column(s.nodes[j]);
  }
  return out;
}

Eigen::VectorXd evaluate(const Interpolant& s, const InterpolationProblem& p) {
  if (!p.spectrum || !p.kernel) throw Error(ErrorCode::InvalidArgument, "problem has no kernel");
  return evaluate(s, *p.kernel, *p.spectrum);
}

double native_semi_inner_product(const SpectralDecomposition& s, const Eigen::VectorXd& f,
                                 const Eigen::VectorXd& g, double alpha) {
  if (f.size() != g.size() || f.size() != s.eigenvalues.size()) {
    throw Error(ErrorCode::DimensionMismatch, "functions must live on the same graph");
  }
  const Eigen::VectorXd fh = s.eigenvectors.transpose() * f;
  const Eigen::VectorXd gh = s.eigenvectors.transpose() * g;
  double sum = 0.0;
  for (Eigen::Index k = 0; k < fh.size(); ++k) {
    const double lambda = s.eigenvalues(k);
    if (lambda <= s.zero_tolerance) continue;
    sum += std::pow(lambda, alpha) * fh(k) * gh(k);
  }
  return sum;
}

std::size_t LagrangeBasis::index_of(Vertex v) const {
  auto it = std::find(nodes.begin(), nodes.end(), v);
  if (it == nodes.end()) {
    throw Error(ErrorCode::InvalidArgument, "vertex " + std::to_string(v) + " is not a node");
  }
  return static_cast<std::size_t>(it - nodes.begin());
}

Interpolant LagrangeBasis::interpolant(std::size_t j) const {
  Interpolant s;
  s.nodes = nodes;
  s.coefficients = coefficients.col(static_cast<Eigen::Index>(j));
  s.constant = constants(static_cast<Eigen::Index>(j));
  s.alpha = alpha;
  return s;
}

LagrangeBasis lagrange_basis(const KernelMatrix& kernel, const SpectralDecomposition& spectrum,
                             std::vector<Vertex> nodes) {
  const AugmentedSystem system(kernel, spectrum, std::move(nodes));
  const auto m = static_cast<Eigen::Index>(system.nodes().size());
  const Eigen::MatrixXd x = system.solve_many(Eigen::MatrixXd::Identity(m, m));

  LagrangeBasis basis;
  basis.nodes = system.nodes();
  basis.alpha = kernel.alpha;
  basis.coefficients = x.topRows(m);
  basis.constants = x.row(m).transpose();
  basis.values = spectrum.null_vector() * basis.constants.transpose() +
                 kernel_columns(kernel, basis.nodes) * basis.coefficients;
  return basis;
}

LocalExpansion truncated_lagrange(const LagrangeBasis& basis, const KernelMatrix& kernel,
                                  const SpectralDecomposition& spectrum, const WeightedGraph& g,
                                  Vertex center, double radius, TruncationOptions options) {
  check_consistent(kernel, spectrum);
  if (!(radius > 0.0)) throw Error(ErrorCode::InvalidArgument, "radius must be positive");
  const std::size_t j = basis.index_of(center);

  LocalExpansion out;
  out.center = center;
  out.radius = radius;
  out.nodes = nodes_in_ball(g, basis.nodes, center, radius);
  if (out.nodes.empty()) throw Error(ErrorCode::EmptyNeighborhood, "no nodes within radius");

  out.coefficients.resize(static_cast<Eigen::Index>(out.nodes.size()));
  for (std::size_t i = 0; i < out.nodes.size(); ++i) {
    out.coefficients(static_cast<Eigen::Index>(i)) =
        basis.coefficients(static_cast<Eigen::Index>(basis.index_of(out.nodes[i])),
                           static_cast<Eigen::Index>(j));
  }
  if (options.project) {
    const Eigen::VectorXd l0 = restrict_to(spectrum.null_vector(), out.nodes);
    const double norm2 = l0.squaredNorm();
    if (norm2 > 0.0) out.coefficients -= (out.coefficients.dot(l0) / norm2) * l0;
  }
  out.constant = basis.constants(static_cast<Eigen::Index>(j));
  out.values = out.constant * spectrum.null_vector() + kernel_columns(kernel, out.nodes) * out.coefficients;
  return out;
}

LocalExpansion local_lagrange(const KernelMatrix& kernel, const SpectralDecomposition& spectrum,
                              const WeightedGraph& g, std::span<const Vertex> nodes,
                              Vertex center, double radius) {
  check_consistent(kernel, spectrum);
  if (!(radius > 0.0)) throw Error(ErrorCode::InvalidArgument, "radius must be positive");
  if (std::find(nodes.begin(), nodes.end(), center) == nodes.end()) {
    throw Error(ErrorCode::InvalidArgument, "center must be one of the nodes");
  }
  LocalExpansion out;
  out.center = center;
  out.radius = radius;
  out.nodes = nodes_in_ball(g, nodes, center, radius);
  if (out.nodes.empty()) throw Error(ErrorCode::EmptyNeighborhood, "no nodes within radius");

  const AugmentedSystem system(kernel, spectrum, out.nodes);
  Eigen::VectorXd cardinal = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(out.nodes.size()));
  const auto pos = std::find(out.nodes.begin(), out.nodes.end(), center) - out.nodes.begin();
  cardinal(static_cast<Eigen::Index>(pos)) = 1.0;
  const Interpolant s = system.solve(cardinal);
  out.coefficients = s.coefficients;
  out.constant = s.constant;
  out.values = evaluate(s, kernel, spectrum);
  return out;
}

}  // namespace gsk
