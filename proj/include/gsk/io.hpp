#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "gsk/diagnostics.hpp"
#include "gsk/graph.hpp"
#include "gsk/interpolation.hpp"
#include "gsk/ml.hpp"

namespace gsk::io {

// Raw delimited text; the delimiter is sniffed from the first line.
struct Table {
  std::vector<std::string> header;  // empty when read without a header
  std::vector<std::vector<std::string>> rows;
};

Table read_table(const std::filesystem::path& path, bool has_header = true);

// 17 significant digits; round-trips through strtod.
std::string format_double(double x);
// Parses a full cell as a number. Missing markers (empty, NA, NaN, ?) give
// std::nullopt; anything else unparseable throws ParseError.
std::optional<double> parse_number(std::string_view cell);

// Edge list: header u,v,weight,length.
WeightedGraph read_edge_list(const std::filesystem::path& path);
void write_edge_list(std::ostream& os, const WeightedGraph& g);

// Point cloud, one row per point, numeric columns only.
Eigen::MatrixXd read_points(const std::filesystem::path& path, bool has_header);

// Node set: header vertex.
std::vector<Vertex> read_node_set(const std::filesystem::path& path);
void write_node_set(std::ostream& os, const std::vector<Vertex>& nodes);

// Function on vertices: header vertex,value.
struct VertexValues {
  std::vector<Vertex> vertices;
  Eigen::VectorXd values;
};
VertexValues read_vertex_values(const std::filesystem::path& path);
// Dense function; every vertex 0..n-1 must appear exactly once.
Eigen::VectorXd read_vertex_function(const std::filesystem::path& path, std::size_t n);
void write_vertex_function(std::ostream& os, const Eigen::VectorXd& f);
void write_vertex_values(std::ostream& os, const std::vector<Vertex>& vertices, const Eigen::VectorXd& values);

// Rows node,beta followed by one constant,C row.
void write_interpolant(std::ostream& os, const Interpolant& s);
Interpolant read_interpolant(const std::filesystem::path& path, double alpha);

void write_profile(std::ostream& os, const DecayProfile& p);
void write_fit(std::ostream& os, const DecayFit& fit);
void write_report(std::ostream& os, const RegressionReport& report);
void write_smoothness(std::ostream& os, const std::vector<SmoothnessSample>& samples);
void write_matrix(std::ostream& os, const Eigen::MatrixXd& m);

}  // namespace gsk::io
