#pragma once

#include <Eigen/Dense>
#include <filesystem>
#include <nlohmann/json.hpp>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "wigner/grid.hpp"

namespace wigner {

/// Shortest decimal string that round-trips to the same double.
std::string format_double(double x);

/// Two numeric columns, comma or whitespace separated; '#' starts a comment.
std::pair<std::vector<double>, std::vector<double>> read_two_column_csv(const std::string& path);

/// CSV with header "v,value".
void write_grid_function_csv(const std::filesystem::path& path, const GridFunction& f);
GridFunction read_grid_function_csv(const std::string& path, const VelocityGrid& grid);

/// CSV with header "x,v,value", one row per (x node, v node).
void write_field_csv(const std::filesystem::path& path, const SpaceGrid& sgrid,
                     const std::vector<GridFunction>& slices);

/// CSV with header "x,<col1>,<col2>,...".
void write_columns_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
                       const std::vector<std::vector<double>>& rows);

/// Row-major dense matrix, no header.
void write_matrix_csv(const std::filesystem::path& path, const Eigen::MatrixXd& m);

void write_json(const std::filesystem::path& path, const nlohmann::json& j);

}  // namespace wigner
