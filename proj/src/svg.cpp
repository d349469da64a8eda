#include "scenex/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "scenex/io.hpp"

namespace scenex {

SvgPlot::SvgPlot(std::string title, std::string x_label, std::string y_label)
    : title_(std::move(title)), x_label_(std::move(x_label)), y_label_(std::move(y_label)) {}

void SvgPlot::add_point(double x, double y, const std::string& color) {
  points_.push_back({x, y, color});
}

void SvgPlot::add_line(const std::vector<std::pair<double, double>>& points,
                       const std::string& color) {
  lines_.push_back({points, color});
}

namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 480.0;
constexpr double kLeft = 62.0;
constexpr double kRight = 18.0;
constexpr double kTop = 34.0;
constexpr double kBottom = 50.0;

std::string px(double v) {
  return format_double(std::round(v * 100.0) / 100.0);
}

// Largest 1/2/5-decade step not exceeding the raw spacing; keeps tick labels
// short and the layout deterministic.
double nice_step(double range) {
  const double raw = range / 5.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  const double frac = raw / mag;
  double step = 1.0;
  if (frac >= 5.0) {
    step = 5.0;
  } else if (frac >= 2.0) {
    step = 2.0;
  }
  return step * mag;
}

std::string escape_xml(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::string SvgPlot::render() const {
  double xmin = std::numeric_limits<double>::infinity();
  double xmax = -xmin, ymin = xmin, ymax = -xmin;
  auto grow = [&](double x, double y) {
    xmin = std::min(xmin, x);
    xmax = std::max(xmax, x);
    ymin = std::min(ymin, y);
    ymax = std::max(ymax, y);
  };
  for (const auto& p : points_) grow(p.x, p.y);
  for (const auto& l : lines_) {
    for (const auto& [x, y] : l.points) grow(x, y);
  }
  if (!std::isfinite(xmin)) {
    xmin = 0.0;
    xmax = 1.0;
    ymin = 0.0;
    ymax = 1.0;
  }
  if (xmax - xmin < 1e-12) {
    xmin -= 1.0;
    xmax += 1.0;
  }
  if (ymax - ymin < 1e-12) {
    ymin -= 1.0;
    ymax += 1.0;
  }
  const double xpad = 0.04 * (xmax - xmin);
  const double ypad = 0.04 * (ymax - ymin);
  xmin -= xpad;
  xmax += xpad;
  ymin -= ypad;
  ymax += ypad;

  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;
  auto sx = [&](double x) { return kLeft + (x - xmin) / (xmax - xmin) * plot_w; };
  auto sy = [&](double y) { return kTop + plot_h - (y - ymin) / (ymax - ymin) * plot_h; };

  std::string out;
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + px(kWidth) + "\" height=\"" +
         px(kHeight) + "\" viewBox=\"0 0 " + px(kWidth) + " " + px(kHeight) + "\">\n";
  out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out += "<text x=\"" + px(kWidth / 2) + "\" y=\"20\" text-anchor=\"middle\" font-size=\"15\" "
         "font-family=\"sans-serif\">" +
         escape_xml(title_) + "</text>\n";

  // Axes with 1/2/5 ticks.
  out += "<g stroke=\"#333333\" stroke-width=\"1\" font-size=\"11\" "
         "font-family=\"sans-serif\">\n";
  out += "<line x1=\"" + px(kLeft) + "\" y1=\"" + px(kTop + plot_h) + "\" x2=\"" +
         px(kLeft + plot_w) + "\" y2=\"" + px(kTop + plot_h) + "\"/>\n";
  out += "<line x1=\"" + px(kLeft) + "\" y1=\"" + px(kTop) + "\" x2=\"" + px(kLeft) +
         "\" y2=\"" + px(kTop + plot_h) + "\"/>\n";
  const double xstep = nice_step(xmax - xmin);
  for (double t = std::ceil(xmin / xstep) * xstep; t <= xmax + 1e-12; t += xstep) {
    const double gx = sx(t);
    out += "<line x1=\"" + px(gx) + "\" y1=\"" + px(kTop + plot_h) + "\" x2=\"" + px(gx) +
           "\" y2=\"" + px(kTop + plot_h + 5) + "\"/>\n";
    out += "<text x=\"" + px(gx) + "\" y=\"" + px(kTop + plot_h + 18) +
           "\" text-anchor=\"middle\" stroke=\"none\" fill=\"#333333\">" +
           format_double(std::round(t / xstep) * xstep) + "</text>\n";
  }
  const double ystep = nice_step(ymax - ymin);
  for (double t = std::ceil(ymin / ystep) * ystep; t <= ymax + 1e-12; t += ystep) {
    const double gy = sy(t);
    out += "<line x1=\"" + px(kLeft - 5) + "\" y1=\"" + px(gy) + "\" x2=\"" + px(kLeft) +
           "\" y2=\"" + px(gy) + "\"/>\n";
    out += "<text x=\"" + px(kLeft - 8) + "\" y=\"" + px(gy + 4) +
           "\" text-anchor=\"end\" stroke=\"none\" fill=\"#333333\">" +
           format_double(std::round(t / ystep) * ystep) + "</text>\n";
  }
  out += "<text x=\"" + px(kLeft + plot_w / 2) + "\" y=\"" + px(kHeight - 12) +
         "\" text-anchor=\"middle\" stroke=\"none\" fill=\"#333333\">" + escape_xml(x_label_) +
         "</text>\n";
  out += "<text x=\"16\" y=\"" + px(kTop + plot_h / 2) +
         "\" text-anchor=\"middle\" stroke=\"none\" fill=\"#333333\" transform=\"rotate(-90 16 " +
         px(kTop + plot_h / 2) + ")\">" + escape_xml(y_label_) + "</text>\n";
  out += "</g>\n";

  for (const auto& l : lines_) {
    out += "<polyline fill=\"none\" stroke=\"" + l.color + "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < l.points.size(); ++i) {
      if (i > 0) out += ' ';
      out += px(sx(l.points[i].first)) + "," + px(sy(l.points[i].second));
    }
    out += "\"/>\n";
  }
  for (const auto& p : points_) {
    out += "<circle cx=\"" + px(sx(p.x)) + "\" cy=\"" + px(sy(p.y)) +
           "\" r=\"3\" fill=\"" + p.color + "\" fill-opacity=\"0.8\"/>\n";
  }
  out += "</svg>\n";
  return out;
}

std::string cluster_color(int label) {
  static const char* palette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                                  "#8c564b", "#e377c2", "#17becf", "#bcbd22", "#8dd3c7"};
  if (label < 0) return "#bdbdbd";
  return palette[static_cast<std::size_t>(label) % 10];
}

std::string heat_color(double t) {
  t = std::clamp(t, 0.0, 1.0);
  // dark violet -> teal -> yellow
  const int stops[3][3] = {{68, 1, 84}, {33, 145, 140}, {253, 231, 37}};
  const double pos = t * 2.0;
  const int seg = pos >= 1.0 ? 1 : 0;
  const double f = pos - seg;
  char buf[8];
  std::snprintf(buf, sizeof(buf), "#%02x%02x%02x",
                static_cast<int>(std::lround(stops[seg][0] + f * (stops[seg + 1][0] - stops[seg][0]))),
                static_cast<int>(std::lround(stops[seg][1] + f * (stops[seg + 1][1] - stops[seg][1]))),
                static_cast<int>(std::lround(stops[seg][2] + f * (stops[seg + 1][2] - stops[seg][2]))));
  return buf;
}

}  // namespace scenex
