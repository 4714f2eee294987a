#pragma once

#include "ufem/adapt.hpp"

#include <map>
#include <string>
#include <vector>

namespace ufem {

/// `key = value` lines; `#` starts a comment.
std::map<std::string, std::string> read_config(const std::string& path);
std::map<std::string, std::string> parse_config(const std::string& text);

const char* history_header();
std::string history_line(const HistoryRow& row);
void write_history(const std::string& path, const std::vector<HistoryRow>& rows);

struct HistoryPoint {
  double n_dofs = 0, eta = 0;
  double err_dg = -1;  // negative when absent
};
std::vector<HistoryPoint> read_history(const std::string& path);

/// Least-squares slope of log(y) against log(x).
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

void write_mesh_dump(const std::string& path, const InducedMesh& im, const QuadMesh& leaves);
std::string mesh_svg(const InducedMesh& im, const InterfaceCurve& curve, const Rect& domain);
void write_text(const std::string& path, const std::string& text);

}  // namespace ufem
