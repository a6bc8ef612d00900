#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace hfabm::svg {

enum class Style { Solid, Dashed, Markers };

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
  Style style = Style::Solid;
  std::string color = "#1f4e79";
};

struct Axes {
  std::string title;
  std::string xlabel;
  std::string ylabel;
  bool log_x = false;
  bool log_y = false;
  std::optional<std::pair<double, double>> xlim;
  std::optional<std::pair<double, double>> ylim;
  /// Horizontal reference lines (e.g. confidence bands), drawn dotted.
  std::vector<double> hlines;
  int width = 640;
  int height = 420;
};

/// Line/marker chart. Points that cannot be placed on a log axis are dropped.
std::string line_plot(const Axes& axes, const std::vector<Series>& series);

/// One box per group: quartile box, median bar, whiskers at the most extreme
/// points within 1.5 IQR, remaining points as outliers.
std::string box_plot(const Axes& axes, const std::vector<std::vector<double>>& groups,
                     const std::vector<std::string>& labels);

/// Chart with two y axes sharing x (left: first series, right: second).
std::string dual_axis_plot(const Axes& axes, const Series& left, const Series& right, const std::string& right_label);

}  // namespace hfabm::svg
