#pragma once

#include <string>
#include <utility>
#include <vector>

namespace scenex {

/// Minimal data-driven scatter/line plot writer. Output is deterministic for
/// identical inputs.
class SvgPlot {
 public:
  SvgPlot(std::string title, std::string x_label, std::string y_label);

  void add_point(double x, double y, const std::string& color);
  void add_line(const std::vector<std::pair<double, double>>& points,
                const std::string& color);

  std::string render() const;

 private:
  std::string title_;
  std::string x_label_;
  std::string y_label_;
  struct Point {
    double x, y;
    std::string color;
  };
  struct Line {
    std::vector<std::pair<double, double>> points;
    std::string color;
  };
  std::vector<Point> points_;
  std::vector<Line> lines_;
};

/// Fixed palette by cluster label; -1 (noise) is light grey.
std::string cluster_color(int label);

/// Three-stop dark-to-bright color scale for t in [0,1].
std::string heat_color(double t);

}  // namespace scenex
