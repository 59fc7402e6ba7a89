#include "gsk/ml.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>
#include <random>

#include "gsk/errors.hpp"
#include "gsk/io.hpp"
#include "gsk/parallel.hpp"

namespace gsk {

namespace {

std::size_t resolve_column(const io::Table& t, const std::string& name, const std::filesystem::path& path) {
  for (std::size_t i = 0; i < t.header.size(); ++i) {
    if (t.header[i] == name) return i;
  }
  std::size_t idx = 0;
  const auto [ptr, ec] = std::from_chars(name.data(), name.data() + name.size(), idx);
  if (ec == std::errc() && ptr == name.data() + name.size() && idx < t.header.size()) return idx;
  throw Error(ErrorCode::InvalidArgument, path.string() + ": no column '" + name + "'");
}

Eigen::MatrixXd extract(const io::Table& t, const std::vector<std::size_t>& cols,
                        const std::filesystem::path& path) {
  Eigen::MatrixXd m(static_cast<Eigen::Index>(t.rows.size()), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t j = 0; j < cols.size(); ++j) {
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
      std::optional<double> v;
      try {
        v = io::parse_number(t.rows[r][cols[j]]);
      } catch (const Error&) {
        throw Error(ErrorCode::NonNumericColumn, path.string() + ": column '" + t.header[cols[j]] + "'");
      }
      if (!v) {
        throw Error(ErrorCode::MissingValue,
                    path.string() + ": column '" + t.header[cols[j]] + "' row " + std::to_string(r + 1));
      }
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(j)) = *v;
    }
  }
  return m;
}

// splitmix64 step; used to derive independent per-repeat seeds.
std::uint64_t mix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

NnrPrediction nnr_masked(const WeightedGraph& g, const std::vector<bool>& is_known, const Eigen::VectorXd& dense,
                         double fallback_mean, Vertex query) {
  if (is_known[query]) return {dense(static_cast<Eigen::Index>(query)), false};
  // Averaging deviations from the first known value keeps constant data exact.
  double base = 0.0, num = 0.0, den = 0.0;
  for (const auto& nb : g.neighbors(query)) {
    if (!is_known[nb.vertex]) continue;
    const double x = dense(static_cast<Eigen::Index>(nb.vertex));
    if (den == 0.0) base = x;
    num += nb.weight * (x - base);
    den += nb.weight;
  }
  if (den == 0.0) return {fallback_mean, true};
  return {base + num / den, false};
}

std::vector<double> average_ranks(std::span<const double> x) {
  std::vector<std::size_t> order(x.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
  std::vector<double> ranks(x.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && x[order[j + 1]] == x[order[i]]) ++j;
    const double r = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = r;
    i = j + 1;
  }
  return ranks;
}

}  // namespace

Dataset load_dataset(const std::filesystem::path& path, const std::vector<std::string>& feature_columns,
                     const std::vector<std::string>& target_columns) {
  const io::Table t = io::read_table(path);
  if (target_columns.empty()) throw Error(ErrorCode::InvalidArgument, "no target columns given");
  std::vector<std::size_t> tcols, fcols;
  for (const auto& s : target_columns) tcols.push_back(resolve_column(t, s, path));
  if (feature_columns.empty()) {
    for (std::size_t i = 0; i < t.header.size(); ++i) {
      if (std::find(tcols.begin(), tcols.end(), i) == tcols.end()) fcols.push_back(i);
    }
  } else {
    for (const auto& s : feature_columns) fcols.push_back(resolve_column(t, s, path));
  }
  if (fcols.empty()) throw Error(ErrorCode::InvalidArgument, "no feature columns selected");
  if (t.rows.size() < 2) throw Error(ErrorCode::TooFewRows, path.string() + ": need at least 2 rows");

  Dataset d;
  d.features = extract(t, fcols, path);
  d.targets = extract(t, tcols, path);
  for (auto c : fcols) d.feature_names.push_back(t.header[c]);
  for (auto c : tcols) d.target_names.push_back(t.header[c]);
  return d;
}

Dataset normalize(const Dataset& d) {
  Dataset out = d;
  const double n = static_cast<double>(d.features.rows());
  for (Eigen::Index j = 0; j < d.features.cols(); ++j) {
    auto col = out.features.col(j);
    const double mean = col.mean();
    col.array() -= mean;
    const double sd = std::sqrt(col.squaredNorm() / n);
    if (!(sd > 0.0) || sd <= 1e-14 * std::max(1.0, std::abs(mean))) {
      const std::string name = j < static_cast<Eigen::Index>(d.feature_names.size())
                                   ? d.feature_names[static_cast<std::size_t>(j)]
                                   : std::to_string(j);
      throw Error(ErrorCode::ZeroVarianceColumn, "feature '" + name + "' is constant");
    }
    col /= sd;
  }
  return out;
}

NnrPrediction nnr_predict(const WeightedGraph& g, std::span<const Vertex> known, const Eigen::VectorXd& values,
                          Vertex query) {
  if (known.empty()) throw Error(ErrorCode::EmptyNodeSet, "NNR needs at least one known vertex");
  if (static_cast<std::size_t>(values.size()) != known.size()) {
    throw Error(ErrorCode::DimensionMismatch, "one value per known vertex expected");
  }
  if (query >= g.size()) throw Error(ErrorCode::InvalidArgument, "query vertex out of range");
  const auto is_known = membership(g.size(), known);
  Eigen::VectorXd dense = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(g.size()));
  for (std::size_t i = 0; i < known.size(); ++i) dense(static_cast<Eigen::Index>(known[i])) = values(static_cast<Eigen::Index>(i));
  return nnr_masked(g, is_known, dense, values.mean(), query);
}

SplineModel SplineModel::build(const WeightedGraph& g, double alpha, LaplacianKind kind) {
  SplineModel m;
  auto spectrum = std::make_shared<SpectralDecomposition>(eigendecompose(g, kind));
  m.kernel = std::make_shared<KernelMatrix>(pseudo_inverse_power(*spectrum, alpha));
  m.spectrum = std::move(spectrum);
  return m;
}

SplinePrediction spline_regress(const SplineModel& model, std::span<const Vertex> known,
                                const Eigen::VectorXd& values) {
  InterpolationProblem p{model.spectrum, model.kernel, {known.begin(), known.end()}, values};
  const Interpolant s = solve_interpolant(p);
  SplinePrediction out;
  out.fitted = evaluate(s, p);
  const auto is_known = membership(model.kernel->size(), known);
  for (Vertex v = 0; v < is_known.size(); ++v) {
    if (!is_known[v]) out.unknown.push_back(v);
  }
  out.values.resize(static_cast<Eigen::Index>(out.unknown.size()));
  for (std::size_t i = 0; i < out.unknown.size(); ++i) {
    out.values(static_cast<Eigen::Index>(i)) = out.fitted(static_cast<Eigen::Index>(out.unknown[i]));
  }
  return out;
}

SplinePrediction spline_regress(const WeightedGraph& g, std::span<const Vertex> known,
                                const Eigen::VectorXd& values, double alpha, LaplacianKind kind) {
  return spline_regress(SplineModel::build(g, alpha, kind), known, values);
}

void CVConfig::validate() const {
  if (folds < 2) throw Error(ErrorCode::InvalidArgument, "folds must be at least 2");
  if (repeats < 1) throw Error(ErrorCode::InvalidArgument, "repeats must be at least 1");
  if (k_neighbors < 1) throw Error(ErrorCode::InvalidArgument, "k_neighbors must be at least 1");
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw Error(ErrorCode::NonPositiveAlpha, "alpha must be positive");
  if (duplicate_length < 0.0) throw Error(ErrorCode::InvalidArgument, "duplicate_length must be non-negative");
}

const RegressionEntry& RegressionReport::find(const std::string& method, const std::string& target,
                                              std::size_t k) const {
  for (const auto& e : entries) {
    if (e.method == method && e.target == target && e.k == k) return e;
  }
  throw Error(ErrorCode::InvalidArgument, "no entry for " + method + "/" + target + "/k=" + std::to_string(k));
}

RegressionReport cross_validate(const Dataset& d, const CVConfig& cfg) {
  cfg.validate();
  const std::size_t n = d.rows();
  if (n < cfg.folds) {
    throw Error(ErrorCode::TooFewRows,
                std::to_string(n) + " rows cannot fill " + std::to_string(cfg.folds) + " folds");
  }
  if (d.targets.rows() != d.features.rows() || d.targets.cols() == 0) {
    throw Error(ErrorCode::DimensionMismatch, "targets must have one row per feature row");
  }
  const Dataset z = normalize(d);
  const auto t = static_cast<std::size_t>(d.targets.cols());

  // The graph does not depend on the split, so one model serves every fold.
  const WeightedGraph g = knn_graph(z.features, cfg.k_neighbors, KnnOptions{cfg.duplicate_length});
  const SplineModel model = SplineModel::build(g, cfg.alpha, cfg.kind);
  const Eigen::MatrixXd& K = model.kernel->matrix;
  const auto lambda0 = model.spectrum->null_vector();

  struct FoldResult {
    std::vector<double> spline_mse, nnr_mse;
    std::size_t fallbacks = 0;
    std::vector<Vertex> unknown;
  };
  const std::size_t jobs = cfg.repeats * cfg.folds;
  std::vector<FoldResult> results(jobs);

  std::vector<std::vector<Vertex>> permutations(cfg.repeats);
  for (std::size_t r = 0; r < cfg.repeats; ++r) {
    std::vector<Vertex> perm(n);
    std::iota(perm.begin(), perm.end(), Vertex{0});
    std::mt19937_64 rng(mix(cfg.seed ^ mix(r)));
    std::shuffle(perm.begin(), perm.end(), rng);
    permutations[r] = std::move(perm);
  }

  parallel_for(jobs, [&](std::size_t job) {
    const std::size_t r = job / cfg.folds, f = job % cfg.folds;
    const auto& perm = permutations[r];
    const std::size_t lo = f * n / cfg.folds, hi = (f + 1) * n / cfg.folds;
    std::vector<Vertex> unknown(perm.begin() + static_cast<std::ptrdiff_t>(lo),
                                perm.begin() + static_cast<std::ptrdiff_t>(hi));
    std::sort(unknown.begin(), unknown.end());
    std::vector<bool> is_known(n, true);
    for (Vertex v : unknown) is_known[v] = false;
    std::vector<Vertex> known;
    known.reserve(n - unknown.size());
    for (Vertex v = 0; v < n; ++v) {
      if (is_known[v]) known.push_back(v);
    }

    const auto m = static_cast<Eigen::Index>(known.size());
    const auto q = static_cast<Eigen::Index>(unknown.size());
    Eigen::MatrixXd rhs(m, static_cast<Eigen::Index>(t));
    for (Eigen::Index i = 0; i < m; ++i) rhs.row(i) = d.targets.row(static_cast<Eigen::Index>(known[static_cast<std::size_t>(i)]));
    const AugmentedSystem system(*model.kernel, *model.spectrum, known);
    const Eigen::MatrixXd sol = system.solve_many(rhs);
    Eigen::MatrixXd cross(q, m);
    Eigen::VectorXd lambda0_unknown(q);
    for (Eigen::Index a = 0; a < q; ++a) {
      const auto ua = static_cast<Eigen::Index>(unknown[static_cast<std::size_t>(a)]);
      lambda0_unknown(a) = lambda0(ua);
      for (Eigen::Index i = 0; i < m; ++i) cross(a, i) = K(ua, static_cast<Eigen::Index>(known[static_cast<std::size_t>(i)]));
    }
    const Eigen::MatrixXd predicted = cross * sol.topRows(m) + lambda0_unknown * sol.row(m);

    FoldResult res;
    res.spline_mse.assign(t, 0.0);
    res.nnr_mse.assign(t, 0.0);
    for (std::size_t c = 0; c < t; ++c) {
      const Eigen::VectorXd dense = d.targets.col(static_cast<Eigen::Index>(c));
      double mean_known = 0.0;
      for (Vertex v : known) mean_known += dense(static_cast<Eigen::Index>(v));
      mean_known /= static_cast<double>(known.size());
      double se_spline = 0.0, se_nnr = 0.0;
      for (Eigen::Index a = 0; a < q; ++a) {
        const Vertex u = unknown[static_cast<std::size_t>(a)];
        const double s = predicted(a, static_cast<Eigen::Index>(c));
        const double truth = dense(static_cast<Eigen::Index>(u));
        se_spline += (s - truth) * (s - truth);
        const NnrPrediction p = nnr_masked(g, is_known, dense, mean_known, u);
        if (p.fallback) ++res.fallbacks;
        se_nnr += (p.value - truth) * (p.value - truth);
      }
      res.spline_mse[c] = se_spline / static_cast<double>(unknown.size());
      res.nnr_mse[c] = se_nnr / static_cast<double>(unknown.size());
    }
    if (cfg.record_splits) res.unknown = std::move(unknown);
    results[job] = std::move(res);
  });

  RegressionReport report;
  auto summarize = [&](const std::string& method, std::size_t c, bool spline) {
    RegressionEntry e{method, d.target_names.size() > c ? d.target_names[c] : std::to_string(c), cfg.k_neighbors, 0.0, 0.0, {}};
    for (std::size_t r = 0; r < cfg.repeats; ++r) {
      double acc = 0.0;
      for (std::size_t f = 0; f < cfg.folds; ++f) {
        const auto& res = results[r * cfg.folds + f];
        acc += spline ? res.spline_mse[c] : res.nnr_mse[c];
      }
      e.repeat_mse.push_back(acc / static_cast<double>(cfg.folds));
    }
    const double R = static_cast<double>(cfg.repeats);
    e.mean_mse = std::accumulate(e.repeat_mse.begin(), e.repeat_mse.end(), 0.0) / R;
    if (cfg.repeats > 1) {
      double ss = 0.0;
      for (double x : e.repeat_mse) ss += (x - e.mean_mse) * (x - e.mean_mse);
      e.std_mse = std::sqrt(ss / (R - 1.0));
    }
    report.entries.push_back(std::move(e));
  };
  for (std::size_t c = 0; c < t; ++c) {
    summarize("Spline", c, true);
    summarize("NNR", c, false);
  }
  for (const auto& res : results) report.nnr_fallbacks += res.fallbacks;
  if (cfg.record_splits) {
    report.splits.assign(cfg.repeats, {});
    for (std::size_t r = 0; r < cfg.repeats; ++r) {
      for (std::size_t f = 0; f < cfg.folds; ++f) report.splits[r].push_back(results[r * cfg.folds + f].unknown);
    }
  }
  return report;
}

double wendland_bump(double r) {
  if (r < 0.0) return 1.0;
  if (r > 1.0) return 0.0;
  const double s = 1.0 - r;
  return s * s * s * s * (4.0 * r + 1.0);
}

std::vector<SmoothnessSample> smoothness_experiment(const SmoothnessConfig& cfg) {
  if (cfg.n_points < 4 || cfg.n_points % 2 != 0) {
    throw Error(ErrorCode::InvalidArgument, "n_points must be even and at least 4");
  }
  if (cfg.n_bumps_per_axis < 1) throw Error(ErrorCode::InvalidArgument, "need at least one bump per axis");
  if (cfg.k_neighbors < 1) throw Error(ErrorCode::InvalidArgument, "k_neighbors must be at least 1");

  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const auto n = static_cast<Eigen::Index>(cfg.n_points);
  Eigen::MatrixXd pts(n, 2);
  for (Eigen::Index i = 0; i < n; ++i) {
    pts(i, 0) = unit(rng);
    pts(i, 1) = unit(rng);
  }

  const double nb = static_cast<double>(cfg.n_bumps_per_axis);
  const double radius = 1.0 / nb;
  Eigen::VectorXd base = Eigen::VectorXd::Zero(n);
  for (std::size_t a = 0; a < cfg.n_bumps_per_axis; ++a) {
    for (std::size_t b = 0; b < cfg.n_bumps_per_axis; ++b) {
      const double cx = (static_cast<double>(a) + 0.5) / nb, cy = (static_cast<double>(b) + 0.5) / nb;
      for (Eigen::Index i = 0; i < n; ++i) base(i) += wendland_bump(std::hypot(pts(i, 0) - cx, pts(i, 1) - cy) / radius);
    }
  }

  std::vector<Vertex> perm(cfg.n_points);
  std::iota(perm.begin(), perm.end(), Vertex{0});
  std::shuffle(perm.begin(), perm.end(), rng);
  std::vector<Vertex> known(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(cfg.n_points / 2));
  std::vector<Vertex> unknown(perm.begin() + static_cast<std::ptrdiff_t>(cfg.n_points / 2), perm.end());
  std::sort(known.begin(), known.end());
  std::sort(unknown.begin(), unknown.end());

  const WeightedGraph g = knn_graph(pts, cfg.k_neighbors);
  const SplineModel model = SplineModel::build(g, cfg.alpha, cfg.kind);
  const AugmentedSystem system(*model.kernel, *model.spectrum, known);

  std::vector<SmoothnessSample> out;
  for (double mag : cfg.magnitudes) {
    const Eigen::VectorXd f = mag * base;
    Eigen::VectorXd data(static_cast<Eigen::Index>(known.size()));
    for (std::size_t i = 0; i < known.size(); ++i) data(static_cast<Eigen::Index>(i)) = f(static_cast<Eigen::Index>(known[i]));
    const Eigen::VectorXd fitted = evaluate(system.solve(data), *model.kernel, *model.spectrum);
    double err = 0.0;
    for (Vertex u : unknown) {
      const double e = fitted(static_cast<Eigen::Index>(u)) - f(static_cast<Eigen::Index>(u));
      err += e * e;
    }
    out.push_back({mag, sobolev_seminorm(*model.spectrum, f, cfg.alpha), std::sqrt(err)});
  }
  return out;
}

double spearman(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw Error(ErrorCode::DimensionMismatch, "spearman needs equal-length samples");
  if (x.size() < 2) throw Error(ErrorCode::InsufficientData, "spearman needs at least two samples");
  const auto rx = average_ranks(x), ry = average_ranks(y);
  const Eigen::Map<const Eigen::VectorXd> a(rx.data(), static_cast<Eigen::Index>(rx.size()));
  const Eigen::Map<const Eigen::VectorXd> b(ry.data(), static_cast<Eigen::Index>(ry.size()));
  const Eigen::VectorXd ca = a.array() - a.mean(), cb = b.array() - b.mean();
  const double den = ca.norm() * cb.norm();
  if (den == 0.0) throw Error(ErrorCode::InsufficientData, "spearman undefined for constant samples");
  return ca.dot(cb) / den;
}

}  // namespace gsk
