#include "gsk/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <ostream>

#include "gsk/errors.hpp"

namespace gsk::io {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
  return s;
}

std::vector<std::string> split(const std::string& line, char delim) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(delim, start);
    out.emplace_back(trim(std::string_view(line).substr(start, pos - start)));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return out;
}

char sniff(const std::string& line) {
  for (char c : {'\t', ',', ';'}) {
    if (line.find(c) != std::string::npos) return c;
  }
  return ',';
}

bool blank(const std::string& line) {
  return std::all_of(line.begin(), line.end(), [](char c) {
    return std::isspace(static_cast<unsigned char>(c)) || c == ',' || c == ';';
  });
}

std::size_t column(const Table& t, std::string_view name, const std::filesystem::path& path) {
  for (std::size_t i = 0; i < t.header.size(); ++i) {
    if (t.header[i] == name) return i;
  }
  throw Error(ErrorCode::ParseError, path.string() + ": missing column '" + std::string(name) + "'");
}

double number(const std::string& cell, const std::filesystem::path& path, std::size_t row) {
  const auto v = parse_number(cell);
  if (!v) {
    throw Error(ErrorCode::MissingValue, path.string() + ": missing value in row " + std::to_string(row + 1));
  }
  return *v;
}

Vertex vertex_id(const std::string& cell, const std::filesystem::path& path, std::size_t row) {
  const double v = number(cell, path, row);
  if (v < 0.0 || v != static_cast<double>(static_cast<Vertex>(v))) {
    throw Error(ErrorCode::ParseError, path.string() + ": bad vertex index '" + cell + "'");
  }
  return static_cast<Vertex>(v);
}

}  // namespace

Table read_table(const std::filesystem::path& path, bool has_header) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::FileNotFound, path.string());
  Table t;
  std::string line;
  char delim = 0;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (blank(line)) continue;
    if (delim == 0) {
      delim = sniff(line);
      if (has_header) {
        t.header = split(line, delim);
        while (!t.header.empty() && t.header.back().empty()) t.header.pop_back();
        continue;
      }
    }
    auto cells = split(line, delim);
    // Spreadsheet exports often pad rows with empty trailing cells.
    const std::size_t width = has_header ? t.header.size() : (t.rows.empty() ? cells.size() : t.rows.front().size());
    while (cells.size() > width && cells.back().empty()) cells.pop_back();
    if (cells.size() != width) {
      throw Error(ErrorCode::ParseError, path.string() + ": row " + std::to_string(t.rows.size() + 1) +
                                             " has " + std::to_string(cells.size()) + " cells, expected " +
                                             std::to_string(width));
    }
    t.rows.push_back(std::move(cells));
  }
  return t;
}

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::optional<double> parse_number(std::string_view cell) {
  cell = trim(cell);
  if (cell.empty()) return std::nullopt;
  std::string lower(cell);
  std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
  if (lower == "na" || lower == "nan" || lower == "?" || lower == "null" || lower == "n/a") return std::nullopt;
  if (cell.front() == '+') cell.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  if (ec != std::errc() || ptr != cell.data() + cell.size()) {
    throw Error(ErrorCode::ParseError, "not a number: '" + std::string(cell) + "'");
  }
  return v;
}

WeightedGraph read_edge_list(const std::filesystem::path& path) {
  const Table t = read_table(path);
  const auto cu = column(t, "u", path), cv = column(t, "v", path);
  const auto cw = column(t, "weight", path), cl = column(t, "length", path);
  std::vector<Edge> edges;
  edges.reserve(t.rows.size());
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const auto& row = t.rows[r];
    edges.push_back({vertex_id(row[cu], path, r), vertex_id(row[cv], path, r), number(row[cw], path, r),
                     number(row[cl], path, r)});
  }
  return build_graph(std::move(edges));
}

void write_edge_list(std::ostream& os, const WeightedGraph& g) {
  os << "u,v,weight,length\n";
  std::vector<Edge> edges = g.edges();
  for (auto& e : edges) {
    if (e.u > e.v) std::swap(e.u, e.v);
  }
  std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
    return a.u < b.u || (a.u == b.u && a.v < b.v);
  });
  for (const auto& e : edges) {
    os << e.u << ',' << e.v << ',' << format_double(e.weight) << ',' << format_double(e.length) << '\n';
  }
}

Eigen::MatrixXd read_points(const std::filesystem::path& path, bool has_header) {
  const Table t = read_table(path, has_header);
  if (t.rows.empty()) throw Error(ErrorCode::TooFewRows, path.string() + ": no points");
  const auto d = static_cast<Eigen::Index>(t.rows.front().size());
  Eigen::MatrixXd pts(static_cast<Eigen::Index>(t.rows.size()), d);
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    for (Eigen::Index c = 0; c < d; ++c) {
      std::optional<double> v;
      try {
        v = parse_number(t.rows[r][static_cast<std::size_t>(c)]);
      } catch (const Error&) {
        throw Error(ErrorCode::NonNumericColumn, path.string() + ": column " + std::to_string(c));
      }
      if (!v) throw Error(ErrorCode::MissingValue, path.string() + ": row " + std::to_string(r + 1));
      pts(static_cast<Eigen::Index>(r), c) = *v;
    }
  }
  return pts;
}

std::vector<Vertex> read_node_set(const std::filesystem::path& path) {
  const Table t = read_table(path);
  const auto c = column(t, "vertex", path);
  std::vector<Vertex> nodes;
  for (std::size_t r = 0; r < t.rows.size(); ++r) nodes.push_back(vertex_id(t.rows[r][c], path, r));
  return nodes;
}

void write_node_set(std::ostream& os, const std::vector<Vertex>& nodes) {
  os << "vertex\n";
  for (Vertex v : nodes) os << v << '\n';
}

VertexValues read_vertex_values(const std::filesystem::path& path) {
  const Table t = read_table(path);
  const auto cv = column(t, "vertex", path), cx = column(t, "value", path);
  VertexValues out;
  out.values.resize(static_cast<Eigen::Index>(t.rows.size()));
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    out.vertices.push_back(vertex_id(t.rows[r][cv], path, r));
    out.values(static_cast<Eigen::Index>(r)) = number(t.rows[r][cx], path, r);
  }
  return out;
}

Eigen::VectorXd read_vertex_function(const std::filesystem::path& path, std::size_t n) {
  const VertexValues vv = read_vertex_values(path);
  if (vv.vertices.size() != n) {
    throw Error(ErrorCode::DimensionMismatch, path.string() + ": expected " + std::to_string(n) + " vertices");
  }
  membership(n, vv.vertices);
  Eigen::VectorXd f(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) f(static_cast<Eigen::Index>(vv.vertices[i])) = vv.values(static_cast<Eigen::Index>(i));
  return f;
}

void write_vertex_function(std::ostream& os, const Eigen::VectorXd& f) {
  os << "vertex,value\n";
  for (Eigen::Index i = 0; i < f.size(); ++i) os << i << ',' << format_double(f(i)) << '\n';
}

void write_vertex_values(std::ostream& os, const std::vector<Vertex>& vertices, const Eigen::VectorXd& values) {
  os << "vertex,value\n";
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    os << vertices[i] << ',' << format_double(values(static_cast<Eigen::Index>(i))) << '\n';
  }
}

void write_interpolant(std::ostream& os, const Interpolant& s) {
  os << "node,beta\n";
  for (std::size_t i = 0; i < s.nodes.size(); ++i) {
    os << s.nodes[i] << ',' << format_double(s.coefficients(static_cast<Eigen::Index>(i))) << '\n';
  }
  os << "constant," << format_double(s.constant) << '\n';
}

Interpolant read_interpolant(const std::filesystem::path& path, double alpha) {
  const Table t = read_table(path);
  const auto cn = column(t, "node", path), cb = column(t, "beta", path);
  Interpolant s;
  s.alpha = alpha;
  std::vector<double> betas;
  bool have_constant = false;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    if (t.rows[r][cn] == "constant") {
      s.constant = number(t.rows[r][cb], path, r);
      have_constant = true;
    } else {
      s.nodes.push_back(vertex_id(t.rows[r][cn], path, r));
      betas.push_back(number(t.rows[r][cb], path, r));
    }
  }
  if (!have_constant) throw Error(ErrorCode::ParseError, path.string() + ": no constant row");
  s.coefficients = Eigen::Map<Eigen::VectorXd>(betas.data(), static_cast<Eigen::Index>(betas.size()));
  return s;
}

void write_profile(std::ostream& os, const DecayProfile& p) {
  os << "distance,envelope\n";
  for (const auto& b : p.bins) os << format_double(b.distance) << ',' << format_double(b.envelope) << '\n';
}

void write_fit(std::ostream& os, const DecayFit& fit) {
  os << "amplitude,slope,rate,scale,r_squared,no_decay,bins\n";
  os << format_double(fit.amplitude) << ',' << format_double(fit.slope) << ',' << format_double(fit.rate) << ','
     << format_double(fit.scale) << ',' << format_double(fit.r_squared) << ',' << (fit.no_decay ? 1 : 0) << ','
     << fit.bins_used << '\n';
}

void write_report(std::ostream& os, const RegressionReport& report) {
  os << "method,target,k,mean_mse,std_mse\n";
  for (const auto& e : report.entries) {
    os << e.method << ',' << e.target << ',' << e.k << ',' << format_double(e.mean_mse) << ','
       << format_double(e.std_mse) << '\n';
  }
}

void write_smoothness(std::ostream& os, const std::vector<SmoothnessSample>& samples) {
  os << "seminorm,error\n";
  for (const auto& s : samples) os << format_double(s.seminorm) << ',' << format_double(s.l2_error) << '\n';
}

void write_matrix(std::ostream& os, const Eigen::MatrixXd& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) os << ',';
      os << format_double(m(i, j));
    }
    os << '\n';
  }
}

}  // namespace gsk::io
