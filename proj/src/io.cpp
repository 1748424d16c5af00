#include "tms/io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace tms::io {
namespace {

std::vector<double> parse_reals(const std::string& line) {
  std::istringstream ss(line);
  std::vector<double> row;
  std::string tok;
  while (ss >> tok) {
    std::size_t used = 0;
    double v = 0;
    try {
      v = std::stod(tok, &used);
    } catch (const std::exception&) {
      throw std::runtime_error("not a number: '" + tok + "'");
    }
    if (used != tok.size()) throw std::runtime_error("not a number: '" + tok + "'");
    row.push_back(v);
  }
  return row;
}

bool skippable(const std::string& line) {
  const auto pos = line.find_first_not_of(" \t\r");
  return pos == std::string::npos || line[pos] == '#';
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return in;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

MatrixXd read_points(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (skippable(line)) continue;
    rows.push_back(parse_reals(line));
    if (rows.back().size() != rows.front().size())
      throw std::runtime_error("point file: inconsistent dimension on line " +
                               std::to_string(rows.size()));
  }
  if (rows.empty()) return MatrixXd(0, 0);
  MatrixXd m(static_cast<Index>(rows.size()), static_cast<Index>(rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j)
      m(static_cast<Index>(i), static_cast<Index>(j)) = rows[i][j];
  return m;
}

MatrixXd read_distance_matrix(std::istream& in) {
  std::string line;
  Index n = -1;
  while (n < 0 && std::getline(in, line)) {
    if (skippable(line)) continue;
    const auto v = parse_reals(line);
    if (v.size() != 1 || v[0] < 0 || v[0] != static_cast<double>(static_cast<Index>(v[0])))
      throw std::runtime_error("distance matrix: first line must be n");
    n = static_cast<Index>(v[0]);
  }
  if (n < 0) throw std::runtime_error("distance matrix: missing header");
  MatrixXd m(n, n);
  Index row = 0;
  while (row < n && std::getline(in, line)) {
    if (skippable(line)) continue;
    const auto v = parse_reals(line);
    if (static_cast<Index>(v.size()) != n)
      throw std::runtime_error("distance matrix: row " + std::to_string(row) + " has " +
                               std::to_string(v.size()) + " entries, expected " +
                               std::to_string(n));
    for (Index j = 0; j < n; ++j) m(row, j) = v[static_cast<std::size_t>(j)];
    ++row;
  }
  if (row != n) throw std::runtime_error("distance matrix: expected " + std::to_string(n) + " rows");
  return m;
}

std::vector<Index> read_terminals(std::istream& in) {
  std::vector<Index> out;
  std::string tok;
  while (in >> tok) {
    if (tok[0] == '#') {
      std::string rest;
      std::getline(in, rest);
      continue;
    }
    Index v = 0;
    auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (res.ec != std::errc() || res.ptr != tok.data() + tok.size() || v < 0)
      throw std::runtime_error("terminal file: bad index '" + tok + "'");
    out.push_back(v);
  }
  return out;
}

void write_points(std::ostream& out, const MatrixXd& coords) {
  for (Index i = 0; i < coords.rows(); ++i) {
    for (Index j = 0; j < coords.cols(); ++j) {
      if (j) out << ' ';
      out << format_double(coords(i, j));
    }
    out << '\n';
  }
}

void write_distance_matrix(std::ostream& out, const MatrixXd& dist) {
  out << dist.rows() << '\n';
  write_points(out, dist);
}

void write_terminals(std::ostream& out, const std::vector<Index>& terminals) {
  for (std::size_t i = 0; i < terminals.size(); ++i) out << (i ? " " : "") << terminals[i];
  out << '\n';
}

FiniteMetric load_metric(const std::filesystem::path& path, MetricFormat format) {
  if (format == MetricFormat::kAuto) {
    const auto ext = path.extension().string();
    format = (ext == ".dist" || ext == ".mat" || ext == ".matrix") ? MetricFormat::kMatrix
                                                                   : MetricFormat::kPoints;
  }
  auto in = open_in(path);
  if (format == MetricFormat::kMatrix) return FiniteMetric::from_matrix(read_distance_matrix(in));
  return FiniteMetric::from_points(read_points(in));
}

void save_metric(const std::filesystem::path& path, const FiniteMetric& metric) {
  auto out = open_out(path);
  if (metric.euclidean())
    write_points(out, metric.coords());
  else
    write_distance_matrix(out, metric.matrix());
}

std::vector<Index> load_terminals(const std::filesystem::path& path) {
  auto in = open_in(path);
  return read_terminals(in);
}

void save_terminals(const std::filesystem::path& path, const std::vector<Index>& terminals) {
  auto out = open_out(path);
  write_terminals(out, terminals);
}

}  // namespace tms::io
