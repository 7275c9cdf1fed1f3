#include "wigner/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "wigner/error.hpp"

namespace wigner {

std::string format_double(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return {buf, res.ptr};
}

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  return out;
}

bool parse_number(std::string_view tok, double& out) {
  while (!tok.empty() && (tok.front() == ' ' || tok.front() == '\t')) tok.remove_prefix(1);
  while (!tok.empty() && (tok.back() == ' ' || tok.back() == '\t' || tok.back() == '\r'))
    tok.remove_suffix(1);
  if (tok.empty()) return false;
  if (tok.front() == '+') tok.remove_prefix(1);
  auto res = std::from_chars(tok.data(), tok.data() + tok.size(), out);
  return res.ec == std::errc() && res.ptr == tok.data() + tok.size();
}

}  // namespace

std::pair<std::vector<double>, std::vector<double>> read_two_column_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open " + path);
  std::vector<double> a, b;
  std::string line;
  int lineno = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    for (char& c : line) {
      if (c == ',' || c == '\t' || c == ';') c = ' ';
    }
    std::istringstream ls(line);
    std::string t1, t2, extra;
    if (!(ls >> t1)) continue;
    double x = 0.0, y = 0.0;
    if (!(ls >> t2) || (ls >> extra)) {
      throw DomainError(path + ":" + std::to_string(lineno) + ": expected two columns");
    }
    if (!parse_number(t1, x) || !parse_number(t2, y)) {
      // tolerate a single header line before any data
      if (a.empty() && !header_seen) {
        header_seen = true;
        continue;
      }
      throw DomainError(path + ":" + std::to_string(lineno) + ": non-numeric value");
    }
    a.push_back(x);
    b.push_back(y);
  }
  return {std::move(a), std::move(b)};
}

void write_grid_function_csv(const std::filesystem::path& path, const GridFunction& f) {
  auto out = open_out(path);
  out << "v,value\n";
  for (int i = 0; i < f.size(); ++i) {
    out << format_double(f.grid.node(i)) << ',' << format_double(f[i]) << '\n';
  }
}

GridFunction read_grid_function_csv(const std::string& path, const VelocityGrid& grid) {
  auto [v, val] = read_two_column_csv(path);
  if (static_cast<int>(v.size()) != grid.size())
    throw ContractError(path + ": expected " + std::to_string(grid.size()) + " rows");
  for (int i = 0; i < grid.size(); ++i) {
    if (std::abs(v[static_cast<size_t>(i)] - grid.node(i)) > 1e-9 * grid.spacing)
      throw ContractError(path + ": node " + std::to_string(i) + " does not match the grid");
  }
  return GridFunction(grid, std::move(val));
}

void write_field_csv(const std::filesystem::path& path, const SpaceGrid& sgrid,
                     const std::vector<GridFunction>& slices) {
  auto out = open_out(path);
  out << "x,v,value\n";
  for (size_t i = 0; i < slices.size(); ++i) {
    const std::string xs = format_double(sgrid.node(static_cast<int>(i)));
    const auto& f = slices[i];
    for (int j = 0; j < f.size(); ++j) {
      out << xs << ',' << format_double(f.grid.node(j)) << ',' << format_double(f[j]) << '\n';
    }
  }
}

void write_columns_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
                       const std::vector<std::vector<double>>& rows) {
  auto out = open_out(path);
  for (size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
  out << '\n';
  for (const auto& row : rows) {
    for (size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << format_double(row[i]);
    out << '\n';
  }
}

void write_matrix_csv(const std::filesystem::path& path, const Eigen::MatrixXd& m) {
  auto out = open_out(path);
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) out << (c ? "," : "") << format_double(m(r, c));
    out << '\n';
  }
}

void write_json(const std::filesystem::path& path, const nlohmann::json& j) {
  auto out = open_out(path);
  out << j.dump(2) << '\n';
}

}  // namespace wigner
