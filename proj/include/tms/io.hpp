#pragma once

#include "tms/metric.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace tms::io {

/// One point per line, whitespace-separated coordinates.  Blank lines and
/// lines starting with '#' are skipped.
MatrixXd read_points(std::istream& in);
/// First line n, then n lines of n reals.
MatrixXd read_distance_matrix(std::istream& in);
/// Whitespace-separated 0-based indices.
std::vector<Index> read_terminals(std::istream& in);

void write_points(std::ostream& out, const MatrixXd& coords);
void write_distance_matrix(std::ostream& out, const MatrixXd& dist);
void write_terminals(std::ostream& out, const std::vector<Index>& terminals);

enum class MetricFormat { kAuto, kPoints, kMatrix };

/// kAuto picks the matrix format for ".dist"/".mat"/".matrix" extensions and
/// the point format otherwise.
FiniteMetric load_metric(const std::filesystem::path& path, MetricFormat format = MetricFormat::kAuto);
void save_metric(const std::filesystem::path& path, const FiniteMetric& metric);
std::vector<Index> load_terminals(const std::filesystem::path& path);
void save_terminals(const std::filesystem::path& path, const std::vector<Index>& terminals);

/// Shortest decimal text that round-trips the double exactly.
std::string format_double(double v);

}  // namespace tms::io
