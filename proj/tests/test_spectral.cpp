#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "gsk/graph.hpp"
#include "gsk/spectral.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace gsk;

namespace {

const WeightedGraph& pair_graph() {
  static const WeightedGraph g = build_graph({{0, 1, 1.0, 1.0}});
  return g;
}

Eigen::VectorXd random_vector(Eigen::Index n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Eigen::VectorXd f(n);
  for (Eigen::Index i = 0; i < n; ++i) f(i) = u(rng);
  return f;
}

}  // namespace

TEST_CASE("normalized cycle Laplacian is the circulant with -1/2 off the diagonal") {
  const Eigen::MatrixXd L = laplacian(cycle_graph(7), LaplacianKind::Normalized);
  for (Eigen::Index i = 0; i < 7; ++i) {
    CHECK(L(i, i) == 1.0);
    CHECK(L(i, (i + 1) % 7) == doctest::Approx(-0.5));
    CHECK(L(i, (i + 6) % 7) == doctest::Approx(-0.5));
    CHECK(L(i, (i + 3) % 7) == 0.0);
  }
}

TEST_CASE("unnormalized Laplacian of the two-vertex graph and the row-sum identity") {
  const Eigen::MatrixXd L = laplacian(pair_graph(), LaplacianKind::Unnormalized);
  CHECK(L(0, 0) == 1.0);
  CHECK(L(0, 1) == -1.0);
  CHECK(L(1, 1) == 1.0);
  const WeightedGraph g = random_connected_graph(30, 0.1, 3);
  const Eigen::MatrixXd Lu = laplacian(g, LaplacianKind::Unnormalized);
  CHECK((Lu * Eigen::VectorXd::Ones(30)).cwiseAbs().maxCoeff() <= 1e-13);
}

TEST_CASE("Laplacians match the dense oracle") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const WeightedGraph g = random_connected_graph(25, 0.1, seed);
    CHECK((laplacian(g, LaplacianKind::Normalized) - oracle::laplacian(g, true)).cwiseAbs().maxCoeff() <= 1e-14);
    CHECK((laplacian(g, LaplacianKind::Unnormalized) - oracle::laplacian(g, false)).cwiseAbs().maxCoeff() <= 1e-14);
  }
}

TEST_CASE("cycle 4 normalized eigenvalues are 0, 1, 1, 2") {
  const SpectralDecomposition s = eigendecompose(cycle_graph(4), LaplacianKind::Normalized);
  const auto ref = oracle::cycle_eigenvalues(4);
  for (std::size_t k = 0; k < 4; ++k) CHECK(s.eigenvalue(k) == doctest::Approx(ref[k]).epsilon(1e-12));
  CHECK(std::abs(s.eigenvalue(0)) <= s.zero_tolerance);
}

TEST_CASE("cycle eigenvalues follow 1 - cos(2 pi k / N)") {
  for (std::size_t n : {5, 16, 33}) {
    const SpectralDecomposition s = eigendecompose(cycle_graph(n), LaplacianKind::Normalized);
    const auto ref = oracle::cycle_eigenvalues(n);
    for (std::size_t k = 0; k < n; ++k) CHECK(std::abs(s.eigenvalue(k) - ref[k]) <= 1e-12);
  }
}

TEST_CASE("two-vertex unnormalized eigenvalues are 0 and 2") {
  const SpectralDecomposition s = eigendecompose(pair_graph(), LaplacianKind::Unnormalized);
  CHECK(std::abs(s.eigenvalue(0)) <= 1e-15);
  CHECK(s.eigenvalue(1) == doctest::Approx(2.0));
}

TEST_CASE("null vector is the positive unit multiple of sqrt(d) or e") {
  const WeightedGraph g = random_connected_graph(20, 0.2, 17);
  for (bool normalized : {true, false}) {
    const auto kind = normalized ? LaplacianKind::Normalized : LaplacianKind::Unnormalized;
    const SpectralDecomposition s = eigendecompose(g, kind);
    const Eigen::VectorXd ref = oracle::null_vector(g, normalized);
    CHECK((s.null_vector() - ref).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK(s.null_vector().minCoeff() > 0.0);
  }
}

TEST_CASE("decomposition is orthonormal and reconstructs L") {
  const WeightedGraph g = random_connected_graph(40, 0.1, 4);
  const Eigen::MatrixXd L = laplacian(g, LaplacianKind::Normalized);
  const SpectralDecomposition s = eigendecompose(L, LaplacianKind::Normalized);
  const auto n = static_cast<Eigen::Index>(s.size());
  CHECK((s.eigenvectors.transpose() * s.eigenvectors - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK(reconstruction_error(s, L) <= 1e-12);
  for (std::size_t k = 1; k < s.size(); ++k) CHECK(s.eigenvalue(k) >= s.eigenvalue(k - 1));
}

TEST_CASE("eigendecompose rejects bad input") {
  Eigen::MatrixXd disconnected = Eigen::MatrixXd::Zero(4, 4);
  disconnected << 1, -1, 0, 0, -1, 1, 0, 0, 0, 0, 1, -1, 0, 0, -1, 1;
  CHECK(code_of([&] { eigendecompose(disconnected, LaplacianKind::Unnormalized); }) ==
        ErrorCode::MultipleZeroEigenvalues);
  Eigen::MatrixXd asym = Eigen::MatrixXd::Zero(2, 2);
  asym << 1, -1, 0, 1;
  CHECK(code_of([&] { eigendecompose(asym, LaplacianKind::Unnormalized); }) == ErrorCode::InvalidArgument);
  Eigen::MatrixXd pd = Eigen::MatrixXd::Identity(3, 3);
  CHECK(code_of([&] { eigendecompose(pd, LaplacianKind::Unnormalized); }) == ErrorCode::EigensolverFailure);
  CHECK(code_of([&] { eigendecompose(Eigen::MatrixXd(2, 3), LaplacianKind::Unnormalized); }) ==
        ErrorCode::DimensionMismatch);
}

TEST_CASE("pseudo-inverse of the two-vertex Laplacian") {
  const SpectralDecomposition s = eigendecompose(pair_graph(), LaplacianKind::Unnormalized);
  const KernelMatrix k = pseudo_inverse_power(s, 1.0);
  Eigen::Matrix2d ref;
  ref << 0.25, -0.25, -0.25, 0.25;
  CHECK((k.matrix - ref).cwiseAbs().maxCoeff() <= 1e-15);
  const Eigen::MatrixXd cod = oracle::pseudo_inverse(oracle::laplacian(pair_graph(), false));
  CHECK((k.matrix - cod).cwiseAbs().maxCoeff() <= 1e-14);
  CHECK(code_of([&] { pseudo_inverse_power(s, 0.0); }) == ErrorCode::NonPositiveAlpha);
  CHECK(code_of([&] { pseudo_inverse_power(s, -1.0); }) == ErrorCode::NonPositiveAlpha);
}

TEST_CASE("kernel powers match the SVD pseudo-inverse oracle") {
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    const WeightedGraph g = random_connected_graph(30, 0.1, 40 + seed);
    const bool normalized = seed % 2 == 0;
    const auto kind = normalized ? LaplacianKind::Normalized : LaplacianKind::Unnormalized;
    const SpectralDecomposition s = eigendecompose(g, kind);
    const Eigen::MatrixXd L = oracle::laplacian(g, normalized);
    for (int alpha : {1, 2, 4}) {
      const KernelMatrix k = pseudo_inverse_power(s, alpha);
      const Eigen::MatrixXd ref = oracle::kernel(L, alpha);
      const double scale = ref.cwiseAbs().maxCoeff();
      CHECK((k.matrix - ref).cwiseAbs().maxCoeff() <= 1e-9 * scale);
      CHECK((k.matrix - k.matrix.transpose()).cwiseAbs().maxCoeff() == 0.0);
      CHECK((k.matrix * s.null_vector()).cwiseAbs().maxCoeff() <= 1e-10 * scale);
    }
  }
}

TEST_CASE("alpha = 2 kernel is the square of the alpha = 1 kernel") {
  const SpectralDecomposition s = eigendecompose(random_connected_graph(35, 0.1, 6), LaplacianKind::Normalized);
  const KernelMatrix k1 = pseudo_inverse_power(s, 1.0);
  const KernelMatrix k2 = pseudo_inverse_power(s, 2.0);
  CHECK((k2.matrix - k1.matrix * k1.matrix).cwiseAbs().maxCoeff() <= 1e-10 * k2.matrix.cwiseAbs().maxCoeff());
}

TEST_CASE("fractional kernels are positive semi-definite") {
  const SpectralDecomposition s = eigendecompose(random_connected_graph(20, 0.1, 9), LaplacianKind::Normalized);
  const KernelMatrix k = pseudo_inverse_power(s, 1.5);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(k.matrix);
  CHECK(es.eigenvalues().minCoeff() >= -1e-10 * es.eigenvalues().maxCoeff());
}

TEST_CASE("sobolev semi-norm examples") {
  const SpectralDecomposition s = eigendecompose(random_connected_graph(15, 0.2, 10), LaplacianKind::Normalized);
  CHECK(sobolev_seminorm(s, s.null_vector(), 2.0) <= 1e-12);
  for (std::size_t k : {1, 5, 14}) {
    CHECK(sobolev_seminorm(s, s.mode(k), 2.0) == doctest::Approx(std::pow(s.eigenvalue(k), 1.0)).epsilon(1e-12));
    CHECK(sobolev_seminorm(s, s.mode(k), 3.0) == doctest::Approx(std::pow(s.eigenvalue(k), 1.5)).epsilon(1e-12));
  }
  const SpectralDecomposition p = eigendecompose(pair_graph(), LaplacianKind::Unnormalized);
  CHECK(sobolev_seminorm(p, Eigen::Vector2d(0.0, 1.0), 2.0) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
  CHECK(code_of([&] { sobolev_seminorm(p, Eigen::Vector2d(0.0, 1.0), 2.0, std::vector<Vertex>{}); }) ==
        ErrorCode::EmptySubset);
  CHECK(code_of([&] { sobolev_seminorm(p, Eigen::Vector3d(0.0, 1.0, 2.0), 2.0); }) == ErrorCode::DimensionMismatch);
}

TEST_CASE("alpha = 2 semi-norm equals the norm of L f, also on subsets") {
  std::mt19937_64 rng(12);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const WeightedGraph g = random_connected_graph(30, 0.1, 70 + seed);
    const Eigen::MatrixXd L = oracle::laplacian(g, true);
    const SpectralDecomposition s = eigendecompose(g, LaplacianKind::Normalized);
    const Eigen::VectorXd f = random_vector(30, rng);
    const Eigen::VectorXd lf = L * f;
    CHECK(std::abs(sobolev_seminorm(s, f, 2.0) - lf.norm()) <= 1e-10);
    const std::vector<Vertex> subset{1, 4, 9, 16, 25};
    double ref = 0.0;
    for (Vertex v : subset) ref += lf(static_cast<Eigen::Index>(v)) * lf(static_cast<Eigen::Index>(v));
    CHECK(std::abs(sobolev_seminorm(s, f, 2.0, subset) - std::sqrt(ref)) <= 1e-10);
  }
}

TEST_CASE("apply_laplacian_power matches integer matrix powers") {
  std::mt19937_64 rng(13);
  const WeightedGraph g = random_connected_graph(25, 0.1, 13);
  const Eigen::MatrixXd L = oracle::laplacian(g, false);
  const SpectralDecomposition s = eigendecompose(g, LaplacianKind::Unnormalized);
  const Eigen::VectorXd f = random_vector(25, rng);
  CHECK((apply_laplacian_power(s, f, 0.0) - f).cwiseAbs().maxCoeff() == 0.0);
  CHECK((apply_laplacian_power(s, f, 1.0) - L * f).cwiseAbs().maxCoeff() <= 1e-10);
  CHECK((apply_laplacian_power(s, f, 3.0) - L * (L * (L * f))).cwiseAbs().maxCoeff() <= 1e-8);
  CHECK(code_of([&] { apply_laplacian_power(s, f, -1.0); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("graph Fourier transform") {
  const WeightedGraph g = random_connected_graph(12, 0.2, 14);
  const SpectralDecomposition s = eigendecompose(g, LaplacianKind::Unnormalized);
  const Eigen::VectorXd hat = graph_fourier(s, Eigen::VectorXd::Ones(12));
  CHECK(hat(0) == doctest::Approx(std::sqrt(12.0)).epsilon(1e-13));
  CHECK(hat.tail(11).cwiseAbs().maxCoeff() <= 1e-12);
  const Eigen::VectorXd e2 = graph_fourier(s, s.mode(2));
  CHECK((e2 - Eigen::VectorXd::Unit(12, 2)).cwiseAbs().maxCoeff() <= 1e-13);

  std::mt19937_64 rng(15);
  const Eigen::VectorXd f = random_vector(12, rng);
  const Eigen::VectorXd fh = graph_fourier(s, f);
  CHECK(std::abs(fh.norm() - f.norm()) <= 1e-10);
  CHECK((inverse_graph_fourier(s, fh) - f).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK(code_of([&] { graph_fourier(s, Eigen::VectorXd::Ones(5)); }) == ErrorCode::DimensionMismatch);
  CHECK(code_of([&] { inverse_graph_fourier(s, Eigen::VectorXd::Ones(5)); }) == ErrorCode::DimensionMismatch);
}

TEST_CASE("Dirichlet eigenvalues on the normalized cycle") {
  const WeightedGraph g = cycle_graph(10);
  CHECK(dirichlet_eigenvalue(g, std::vector<Vertex>{3}, LaplacianKind::Normalized) == doctest::Approx(1.0));
  CHECK(dirichlet_eigenvalue(g, std::vector<Vertex>{3, 4}, LaplacianKind::Normalized) == doctest::Approx(0.5));
  for (std::size_t m : {3, 5, 7}) {
    std::vector<Vertex> path;
    for (Vertex v = 0; v < m; ++v) path.push_back(v);
    CHECK(dirichlet_eigenvalue(g, path, LaplacianKind::Normalized) ==
          doctest::Approx(oracle::tridiagonal_min_eigenvalue(m, 1.0, -0.5)).epsilon(1e-12));
  }
  std::vector<Vertex> all(10);
  std::iota(all.begin(), all.end(), Vertex{0});
  CHECK(code_of([&] { dirichlet_eigenvalue(g, all, LaplacianKind::Normalized); }) == ErrorCode::FullVertexSet);
  CHECK(code_of([&] { dirichlet_eigenvalue(g, std::vector<Vertex>{}, LaplacianKind::Normalized); }) ==
        ErrorCode::EmptyInterior);
}

TEST_CASE("spectral sanity on random graphs") {
  std::mt19937_64 rng(16);
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const std::size_t n = 3 + seed % 60;
    const WeightedGraph g = random_connected_graph(n, 0.1, 300 + seed);
    const Eigen::MatrixXd L = oracle::laplacian(g, true);
    const SpectralDecomposition s = eigendecompose(g, LaplacianKind::Normalized);
    CHECK(s.eigenvalues.minCoeff() >= -1e-9);
    CHECK(s.eigenvalues.maxCoeff() <= 2.0 + 1e-9);
    CHECK(s.eigenvalue(1) > s.zero_tolerance);
    const KernelMatrix k = pseudo_inverse_power(s, 2.0);
    const Eigen::VectorXd f = random_vector(static_cast<Eigen::Index>(n), rng);
    const Eigen::VectorXd projected = f - f.dot(s.null_vector()) * s.null_vector();
    CHECK((k.matrix * (L * (L * f)) - projected).cwiseAbs().maxCoeff() <= 1e-8);
  }
}
