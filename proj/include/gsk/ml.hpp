#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "gsk/graph.hpp"
#include "gsk/interpolation.hpp"
#include "gsk/spectral.hpp"

namespace gsk {

struct Dataset {
  Eigen::MatrixXd features;  // rows x d
  Eigen::MatrixXd targets;   // rows x t
  std::vector<std::string> feature_names;
  std::vector<std::string> target_names;

  std::size_t rows() const noexcept { return static_cast<std::size_t>(features.rows()); }
};

// Reads a delimited table with a header row (comma, tab or semicolon).
// Columns are selected by header name or by 0-based index; an empty feature
// list selects every column that is not a target.
Dataset load_dataset(const std::filesystem::path& path, const std::vector<std::string>& feature_columns,
                     const std::vector<std::string>& target_columns);

// Z-scores each feature column (population standard deviation); targets untouched.
Dataset normalize(const Dataset& d);

struct NnrPrediction {
  double value = 0.0;
  bool fallback = false;  // no known neighbour; global mean of the known values
};

// Weighted average of the known neighbours of `query`.
NnrPrediction nnr_predict(const WeightedGraph& g, std::span<const Vertex> known,
                          const Eigen::VectorXd& values, Vertex query);

// Kernel and decomposition of one graph, shared across regressions.
struct SplineModel {
  std::shared_ptr<const SpectralDecomposition> spectrum;
  std::shared_ptr<const KernelMatrix> kernel;

  static SplineModel build(const WeightedGraph& g, double alpha,
                           LaplacianKind kind = LaplacianKind::Normalized);
};

struct SplinePrediction {
  std::vector<Vertex> unknown;  // ascending
  Eigen::VectorXd values;       // aligned with `unknown`
  Eigen::VectorXd fitted;       // interpolant on every vertex
};

// Interpolates the known values and reads the interpolant off the unknown vertices.
SplinePrediction spline_regress(const SplineModel& model, std::span<const Vertex> known,
                                const Eigen::VectorXd& values);
SplinePrediction spline_regress(const WeightedGraph& g, std::span<const Vertex> known,
                                const Eigen::VectorXd& values, double alpha,
                                LaplacianKind kind = LaplacianKind::Normalized);

struct CVConfig {
  std::size_t k_neighbors = 10;
  std::size_t folds = 10;
  std::size_t repeats = 20;
  double alpha = 2.0;
  std::uint64_t seed = 0;
  LaplacianKind kind = LaplacianKind::Normalized;
  // Length given to edges between coincident feature vectors.
  double duplicate_length = 1e-6;
  // Keep the unknown index set of every (repeat, fold).
  bool record_splits = false;

  void validate() const;
};

struct RegressionEntry {
  std::string method;  // "Spline" or "NNR"
  std::string target;
  std::size_t k = 0;
  double mean_mse = 0.0;
  double std_mse = 0.0;
  std::vector<double> repeat_mse;  // per repeat, averaged over folds
};

struct RegressionReport {
  std::vector<RegressionEntry> entries;
  std::size_t nnr_fallbacks = 0;
  // splits[repeat][fold] = unknown rows, when recorded.
  std::vector<std::vector<std::vector<Vertex>>> splits;

  const RegressionEntry& find(const std::string& method, const std::string& target, std::size_t k) const;
};

// Repeated k-fold cross-validation of spline regression against NNR on one
// transductive k-NN graph over all rows. Both methods see the same splits.
RegressionReport cross_validate(const Dataset& d, const CVConfig& cfg);

// (1 - r)^4 (4r + 1) on [0, 1]; 1 for r < 0, 0 for r > 1.
double wendland_bump(double r);

struct SmoothnessConfig {
  std::size_t n_points = 1000;
  std::size_t n_bumps_per_axis = 4;
  std::vector<double> magnitudes{0.25, 0.5, 1, 2, 4, 8, 16, 32, 64, 128};
  std::size_t k_neighbors = 8;
  double alpha = 2.0;
  std::uint64_t seed = 0;
  LaplacianKind kind = LaplacianKind::Normalized;
};

struct SmoothnessSample {
  double magnitude = 0.0;
  double seminorm = 0.0;  // |f|_{H^2} of the full data
  double l2_error = 0.0;  // on the held-out half
};

std::vector<SmoothnessSample> smoothness_experiment(const SmoothnessConfig& cfg);

// Spearman rank correlation (average ranks for ties).
double spearman(std::span<const double> x, std::span<const double> y);

}  // namespace gsk
