#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <numeric>
#include <random>
#include <set>

#include "gsk/graph.hpp"
#include "gsk/ml.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace gsk;

namespace {

Dataset synthetic_dataset(std::size_t rows, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> z;
  Dataset d;
  d.features.resize(static_cast<Eigen::Index>(rows), 3);
  d.targets.resize(static_cast<Eigen::Index>(rows), 2);
  for (Eigen::Index i = 0; i < d.features.rows(); ++i) {
    for (Eigen::Index j = 0; j < 3; ++j) d.features(i, j) = z(rng);
    d.targets(i, 0) = std::sin(d.features(i, 0)) + 0.5 * d.features(i, 1);
    d.targets(i, 1) = d.features(i, 2) * d.features(i, 2) + 0.1 * z(rng);
  }
  d.feature_names = {"a", "b", "c"};
  d.target_names = {"y1", "y2"};
  return d;
}

struct ScopedEnv {
  std::string name;
  ScopedEnv(std::string n, const std::string& value) : name(std::move(n)) { ::setenv(name.c_str(), value.c_str(), 1); }
  ~ScopedEnv() { ::unsetenv(name.c_str()); }
};

}  // namespace

TEST_CASE("load_dataset selects features and targets") {
  TempDir dir;
  const auto p = dir.write("d.csv", "x1,x2,y\n1,2,3\n4,5,6\n7,8,9\n");
  const Dataset d = load_dataset(p, {"x1", "x2"}, {"y"});
  CHECK(d.features.rows() == 3);
  CHECK(d.features.cols() == 2);
  CHECK(d.targets.cols() == 1);
  CHECK(d.features(2, 1) == 8.0);
  CHECK(d.targets(1, 0) == 6.0);

  const Dataset by_index = load_dataset(p, {}, {"2"});
  CHECK(by_index.feature_names == std::vector<std::string>{"x1", "x2"});
  CHECK(by_index.targets(0, 0) == 3.0);

  const auto semi = dir.write("s.csv", "x1;x2;y\n1;2;3\n4;5;6\n");
  CHECK(load_dataset(semi, {"0"}, {"y"}).features(1, 0) == 4.0);
}

TEST_CASE("load_dataset errors") {
  TempDir dir;
  CHECK(code_of([&] { load_dataset(dir.write("na.csv", "x,y\n1,2\nNA,3\n"), {"x"}, {"y"}); }) == ErrorCode::MissingValue);
  CHECK(code_of([&] { load_dataset(dir.write("s.csv", "x,y\n1,2\nabc,3\n"), {"x"}, {"y"}); }) == ErrorCode::NonNumericColumn);
  CHECK(code_of([&] { load_dataset(dir / "absent.csv", {"x"}, {"y"}); }) == ErrorCode::FileNotFound);
  CHECK(code_of([&] { load_dataset(dir.write("one.csv", "x,y\n1,2\n"), {"x"}, {"y"}); }) == ErrorCode::TooFewRows);
  CHECK(code_of([&] { load_dataset(dir.write("ok.csv", "x,y\n1,2\n3,4\n"), {"x"}, {}); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([&] { load_dataset(dir / "ok.csv", {"z"}, {"y"}); }) != ErrorCode::FileNotFound);
}

TEST_CASE("normalize") {
  Dataset d;
  d.features.resize(3, 2);
  d.features << 0.0, 5.0, 1.0, 7.0, 2.0, 9.0;
  d.targets = Eigen::MatrixXd::Ones(3, 1);
  const Dataset z = normalize(d);
  const double s = std::sqrt(1.5);
  CHECK(z.features(0, 0) == doctest::Approx(-s).epsilon(1e-14));
  CHECK(std::abs(z.features(1, 0)) <= 1e-15);
  CHECK(z.features(2, 0) == doctest::Approx(s).epsilon(1e-14));
  for (Eigen::Index j = 0; j < 2; ++j) {
    CHECK(std::abs(z.features.col(j).mean()) <= 1e-14);
    CHECK(std::sqrt(z.features.col(j).squaredNorm() / 3.0) == doctest::Approx(1.0).epsilon(1e-14));
  }
  CHECK((normalize(z).features - z.features).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK(z.targets == d.targets);

  d.features.col(1).setConstant(4.0);
  CHECK(code_of([&] { normalize(d); }) == ErrorCode::ZeroVarianceColumn);
}

TEST_CASE("nearest-neighbour regression") {
  // Star: 0 in the middle, leaves 1..3.
  const WeightedGraph star = build_graph({{0, 1, 1.0, 1.0}, {0, 2, 1.0, 1.0}, {0, 3, 1.0, 1.0}});
  const std::vector<Vertex> two{1, 2};
  const NnrPrediction mean = nnr_predict(star, two, Eigen::Vector2d(2.0, 4.0), 0);
  CHECK(mean.value == 3.0);
  CHECK_FALSE(mean.fallback);

  const std::vector<Vertex> one{3};
  CHECK(nnr_predict(star, one, Eigen::VectorXd::Constant(1, 7.0), 0).value == 7.0);

  // Leaf 1 only touches the unknown centre.
  const NnrPrediction fb = nnr_predict(star, two, Eigen::Vector2d(2.0, 4.0), 3);
  CHECK(fb.fallback);
  CHECK(fb.value == 3.0);

  CHECK(nnr_predict(star, two, Eigen::Vector2d(2.0, 4.0), 2).value == 4.0);

  const WeightedGraph weighted = build_graph({{0, 1, 3.0, 1.0}, {0, 2, 1.0, 1.0}});
  CHECK(nnr_predict(weighted, two, Eigen::Vector2d(1.0, 5.0), 0).value == doctest::Approx(2.0));

  CHECK(code_of([&] { nnr_predict(star, std::vector<Vertex>{}, Eigen::VectorXd(), 0); }) == ErrorCode::EmptyNodeSet);
  CHECK(code_of([&] { nnr_predict(star, two, Eigen::VectorXd::Ones(3), 0); }) == ErrorCode::DimensionMismatch);
  CHECK(code_of([&] { nnr_predict(star, two, Eigen::Vector2d::Ones(), 9); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("spline regression examples") {
  SUBCASE("every vertex known") {
    const WeightedGraph g = random_connected_graph(12, 0.2, 3);
    std::vector<Vertex> all(12);
    std::iota(all.begin(), all.end(), Vertex{0});
    const Eigen::VectorXd y = Eigen::VectorXd::LinSpaced(12, -1.0, 2.0);
    const SplinePrediction p = spline_regress(g, all, y, 2.0);
    CHECK(p.unknown.empty());
    CHECK(p.values.size() == 0);
    CHECK((p.fitted - y).cwiseAbs().maxCoeff() <= 1e-10);
  }
  SUBCASE("cycle 4") {
    const SplinePrediction p = spline_regress(cycle_graph(4), std::vector<Vertex>{0, 2}, Eigen::Vector2d(1.0, 0.0), 2.0);
    REQUIRE(p.unknown == std::vector<Vertex>{1, 3});
    CHECK(p.values(0) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(p.values(1) == doctest::Approx(0.5).epsilon(1e-12));
  }
  SUBCASE("an unknown point duplicating a known one takes its value") {
    std::mt19937_64 rng(4);
    std::normal_distribution<double> z;
    Eigen::MatrixXd pts(30, 2);
    for (Eigen::Index i = 0; i < 29; ++i) pts.row(i) << z(rng), z(rng);
    pts.row(29) = pts.row(7);
    const WeightedGraph g = knn_graph(pts, 4, KnnOptions{1e-12});
    std::vector<Vertex> known(29);
    std::iota(known.begin(), known.end(), Vertex{0});
    Eigen::VectorXd y(29);
    for (Eigen::Index i = 0; i < 29; ++i) y(i) = z(rng);
    const SplinePrediction p = spline_regress(g, known, y, 2.0);
    REQUIRE(p.unknown == std::vector<Vertex>{29});
    const Eigen::VectorXd ref = oracle::min_energy_interpolant(oracle::laplacian(g, true), 2, known, y);
    CHECK(std::abs(p.values(0) - ref(29)) <= 1e-6);
    CHECK(std::abs(p.values(0) - y(7)) <= 1e-6);
  }
  SUBCASE("a shared model gives the same answer") {
    const WeightedGraph g = random_connected_graph(20, 0.15, 5);
    const SplineModel model = SplineModel::build(g, 2.0);
    const std::vector<Vertex> known{0, 3, 8, 11, 19};
    const Eigen::VectorXd y = Eigen::VectorXd::LinSpaced(5, 0.0, 1.0);
    CHECK((spline_regress(model, known, y).fitted - spline_regress(g, known, y, 2.0).fitted).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("cross-validation configuration") {
  CVConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.folds = 1;
  CHECK(code_of([&] { cfg.validate(); }) == ErrorCode::InvalidArgument);
  cfg = {};
  cfg.repeats = 0;
  CHECK(code_of([&] { cfg.validate(); }) == ErrorCode::InvalidArgument);
  cfg = {};
  cfg.k_neighbors = 0;
  CHECK(code_of([&] { cfg.validate(); }) == ErrorCode::InvalidArgument);
  cfg = {};
  cfg.alpha = 0.0;
  CHECK(code_of([&] { cfg.validate(); }) == ErrorCode::NonPositiveAlpha);
  cfg = {};
  cfg.duplicate_length = -1.0;
  CHECK(code_of([&] { cfg.validate(); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("cross-validation report shape and basic properties") {
  const Dataset d = synthetic_dataset(60, 6);
  CVConfig cfg;
  cfg.k_neighbors = 5;
  cfg.folds = 2;
  cfg.repeats = 1;
  cfg.seed = 3;
  const RegressionReport r = cross_validate(d, cfg);
  REQUIRE(r.entries.size() == 4);
  for (const auto& e : r.entries) {
    CHECK(e.k == 5);
    CHECK(e.std_mse == 0.0);
    CHECK(e.mean_mse >= 0.0);
    CHECK(e.repeat_mse.size() == 1);
  }
  CHECK(r.find("Spline", "y2", 5).target == "y2");
  CHECK(r.find("NNR", "y1", 5).method == "NNR");
  CHECK(code_of([&] { (void)r.find("NNR", "y1", 6); }) == ErrorCode::InvalidArgument);

  Dataset tiny = synthetic_dataset(3, 1);
  cfg.folds = 4;
  CHECK(code_of([&] { cross_validate(tiny, cfg); }) == ErrorCode::TooFewRows);
}

TEST_CASE("constant targets give zero NNR error") {
  Dataset d = synthetic_dataset(50, 7);
  d.targets.col(0).setConstant(3.7);
  d.targets.col(1).setConstant(-0.3);
  CVConfig cfg;
  cfg.k_neighbors = 4;
  cfg.folds = 5;
  cfg.repeats = 3;
  const RegressionReport r = cross_validate(d, cfg);
  for (const auto& t : d.target_names) {
    CHECK(r.find("NNR", t, 4).mean_mse == 0.0);
  }
}

TEST_CASE("both methods see the same disjoint folds") {
  const Dataset d = synthetic_dataset(47, 8);
  CVConfig cfg;
  cfg.k_neighbors = 4;
  cfg.folds = 5;
  cfg.repeats = 3;
  cfg.record_splits = true;
  const RegressionReport r = cross_validate(d, cfg);
  REQUIRE(r.splits.size() == 3);
  for (const auto& repeat : r.splits) {
    REQUIRE(repeat.size() == 5);
    std::set<Vertex> seen;
    for (const auto& fold : repeat) {
      CHECK(fold.size() >= 9);
      CHECK(fold.size() <= 10);
      for (Vertex v : fold) CHECK(seen.insert(v).second);
    }
    CHECK(seen.size() == 47);
  }
  CHECK(r.splits[0] != r.splits[1]);
}

TEST_CASE("cross-validation is reproducible across seeds and thread counts") {
  const Dataset d = synthetic_dataset(80, 9);
  CVConfig cfg;
  cfg.k_neighbors = 6;
  cfg.folds = 4;
  cfg.repeats = 4;
  cfg.seed = 11;
  RegressionReport serial, wide;
  {
    ScopedEnv env("GSK_THREADS", "1");
    serial = cross_validate(d, cfg);
  }
  {
    ScopedEnv env("GSK_THREADS", "7");
    wide = cross_validate(d, cfg);
  }
  REQUIRE(serial.entries.size() == wide.entries.size());
  for (std::size_t i = 0; i < serial.entries.size(); ++i) {
    CHECK(serial.entries[i].mean_mse == wide.entries[i].mean_mse);
    CHECK(serial.entries[i].repeat_mse == wide.entries[i].repeat_mse);
  }
  cfg.seed = 12;
  const RegressionReport other = cross_validate(d, cfg);
  CHECK(other.entries[0].mean_mse != serial.entries[0].mean_mse);
}

TEST_CASE("reported spread is the sample standard deviation of repeats") {
  const Dataset d = synthetic_dataset(40, 10);
  CVConfig cfg;
  cfg.k_neighbors = 4;
  cfg.folds = 4;
  cfg.repeats = 5;
  const RegressionReport r = cross_validate(d, cfg);
  for (const auto& e : r.entries) {
    const Eigen::Map<const Eigen::VectorXd> v(e.repeat_mse.data(), static_cast<Eigen::Index>(e.repeat_mse.size()));
    const double mean = v.mean();
    CHECK(e.mean_mse == doctest::Approx(mean).epsilon(1e-14));
    CHECK(e.std_mse == doctest::Approx(std::sqrt((v.array() - mean).square().sum() / 4.0)).epsilon(1e-12));
  }
}

TEST_CASE("Wendland bump") {
  CHECK(wendland_bump(0.0) == 1.0);
  CHECK(wendland_bump(1.0) == 0.0);
  CHECK(wendland_bump(0.5) == doctest::Approx(0.1875).epsilon(1e-15));
  CHECK(wendland_bump(-0.5) == 1.0);
  CHECK(wendland_bump(2.0) == 0.0);
}

TEST_CASE("smoothness experiment") {
  SmoothnessConfig cfg;
  cfg.n_points = 200;
  cfg.seed = 3;
  cfg.magnitudes = {0.0, 1.0, 2.0, 8.0};
  const auto samples = smoothness_experiment(cfg);
  REQUIRE(samples.size() == 4);
  CHECK(samples[0].seminorm == 0.0);
  CHECK(samples[0].l2_error == 0.0);
  CHECK(samples[2].seminorm == doctest::Approx(2.0 * samples[1].seminorm).epsilon(1e-14));
  CHECK(samples[3].seminorm == doctest::Approx(8.0 * samples[1].seminorm).epsilon(1e-14));
  CHECK(samples[1].seminorm > 0.0);
  CHECK(samples[1].l2_error > 0.0);

  const auto again = smoothness_experiment(cfg);
  CHECK(again[3].l2_error == samples[3].l2_error);

  cfg.n_points = 201;
  CHECK(code_of([&] { smoothness_experiment(cfg); }) == ErrorCode::InvalidArgument);
  cfg.n_points = 200;
  cfg.n_bumps_per_axis = 0;
  CHECK(code_of([&] { smoothness_experiment(cfg); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("Spearman rank correlation") {
  const std::vector<double> x{1, 2, 3, 4, 5};
  const std::vector<double> up{2, 4, 9, 10, 30};
  const std::vector<double> down{5, 4, 3, 2, 1};
  CHECK(spearman(x, up) == doctest::Approx(1.0));
  CHECK(spearman(x, down) == doctest::Approx(-1.0));
  const std::vector<double> a{1, 2, 2, 3};
  const std::vector<double> b{1, 3, 2, 4};
  // Ranks (1, 2.5, 2.5, 4) and (1, 3, 2, 4).
  CHECK(spearman(a, b) == doctest::Approx(0.9486832980505138).epsilon(1e-12));
  CHECK(code_of([&] { spearman(x, a); }) == ErrorCode::DimensionMismatch);
  const std::vector<double> single{1.0};
  CHECK(code_of([&] { spearman(single, single); }) == ErrorCode::InsufficientData);
}
