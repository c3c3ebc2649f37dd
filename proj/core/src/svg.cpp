// Copyright 2026 The nedenoise Authors
// SPDX-License-Identifier: Apache-2.0

#include "nedenoise/svg.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>

#include "nedenoise/csv.hpp"
#include "nedenoise/instance.hpp"

namespace nedenoise {

namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 420.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 150.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 55.0;

constexpr std::array<const char*, 8> kPalette = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                                 "#9467bd", "#8c564b", "#e377c2", "#17becf"};

std::string fmt(double v, int digits = 2) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string header(double w, double h) {
  return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt(w, 0) + "\" height=\"" + fmt(h, 0) +
         "\" viewBox=\"0 0 " + fmt(w, 0) + " " + fmt(h, 0) + "\" font-family=\"sans-serif\" font-size=\"12\">\n" +
         "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
}

std::string text(double x, double y, const std::string& s, const char* anchor = "middle", const char* extra = "") {
  return "<text x=\"" + fmt(x) + "\" y=\"" + fmt(y) + "\" text-anchor=\"" + anchor + "\"" + extra + ">" +
         xml_escape(s) + "</text>\n";
}

}  // namespace

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string svg_line_plot(const std::vector<LineSeries>& series, const PlotLabels& labels) {
  double x0 = std::numeric_limits<double>::infinity();
  double x1 = -x0;
  double y0 = x0;
  double y1 = -x0;
  for (const auto& s : series) {
    if (s.x.size() != s.y.size()) throw Error("svg: series '" + s.label + "' has mismatched x/y lengths");
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      x0 = std::min(x0, s.x[i]);
      x1 = std::max(x1, s.x[i]);
      y0 = std::min(y0, s.y[i]);
      y1 = std::max(y1, s.y[i]);
    }
  }
  if (!std::isfinite(x0)) {
    x0 = 0.0, x1 = 1.0, y0 = 0.0, y1 = 1.0;
  }
  if (x1 == x0) x1 = x0 + 1.0;
  if (y1 == y0) y1 = y0 + 1.0;
  const double pw = kWidth - kLeft - kRight;
  const double ph = kHeight - kTop - kBottom;
  auto sx = [&](double v) { return kLeft + (v - x0) / (x1 - x0) * pw; };
  auto sy = [&](double v) { return kTop + ph - (v - y0) / (y1 - y0) * ph; };

  std::string out = header(kWidth, kHeight);
  out += text(kWidth / 2, 22, labels.title, "middle", " font-size=\"14\"");
  out += "<rect x=\"" + fmt(kLeft) + "\" y=\"" + fmt(kTop) + "\" width=\"" + fmt(pw) + "\" height=\"" + fmt(ph) +
         "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int k = 0; k <= 4; ++k) {
    const double xv = x0 + (x1 - x0) * k / 4.0;
    const double yv = y0 + (y1 - y0) * k / 4.0;
    out += text(sx(xv), kTop + ph + 16, format_number(std::round(xv * 1000) / 1000));
    out += text(kLeft - 6, sy(yv) + 4, format_number(std::round(yv * 1000) / 1000), "end");
  }
  out += text(kLeft + pw / 2, kHeight - 12, labels.x_label);
  out += text(16, kTop + ph / 2, labels.y_label, "middle",
              (" transform=\"rotate(-90 16 " + fmt(kTop + ph / 2) + ")\"").c_str());
  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& s = series[k];
    const char* color = kPalette[k % kPalette.size()];
    std::string pts;
    std::string marks;
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      pts += fmt(sx(s.x[i])) + "," + fmt(sy(s.y[i])) + " ";
      marks += "<circle cx=\"" + fmt(sx(s.x[i])) + "\" cy=\"" + fmt(sy(s.y[i])) + "\" r=\"2.5\" fill=\"" + color +
               "\"/>\n";
    }
    out += "<polyline fill=\"none\" stroke=\"" + std::string(color) + "\" stroke-width=\"1.5\" points=\"" + pts +
           "\"/>\n" + marks;
    const double ly = kTop + 14 + 18.0 * static_cast<double>(k);
    out += "<line x1=\"" + fmt(kWidth - kRight + 12) + "\" y1=\"" + fmt(ly - 4) + "\" x2=\"" +
           fmt(kWidth - kRight + 32) + "\" y2=\"" + fmt(ly - 4) + "\" stroke=\"" + color + "\" stroke-width=\"2\"/>\n";
    out += text(kWidth - kRight + 36, ly, s.label, "start");
  }
  out += "</svg>\n";
  return out;
}

std::string svg_heatmap(const std::vector<std::vector<double>>& values, const std::vector<std::string>& row_labels,
                        const std::vector<std::string>& col_labels, const PlotLabels& labels) {
  const std::size_t rows = values.size();
  const std::size_t cols = rows ? values.front().size() : 0;
  if (row_labels.size() != rows || col_labels.size() != cols) throw Error("svg: heatmap label count mismatch");
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const auto& r : values) {
    if (r.size() != cols) throw Error("svg: ragged heatmap");
    for (double v : r) {
      if (!std::isfinite(v)) continue;
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  if (!(hi > lo)) hi = lo + 1.0;
  const double cell = 56.0;
  const double left = 90.0;
  const double top = 50.0;
  const double w = left + cell * static_cast<double>(cols) + 30.0;
  const double h = top + cell * static_cast<double>(rows) + 50.0;
  std::string out = header(w, h);
  out += text(w / 2, 22, labels.title, "middle", " font-size=\"14\"");
  for (std::size_t i = 0; i < rows; ++i) {
    out += text(left - 8, top + cell * (static_cast<double>(i) + 0.5) + 4, row_labels[i], "end");
    for (std::size_t j = 0; j < cols; ++j) {
      const double v = values[i][j];
      const double t = std::isfinite(v) ? (v - lo) / (hi - lo) : 0.0;
      const int r = static_cast<int>(255 - 200 * t);
      const int g = static_cast<int>(255 - 120 * t);
      const int b = 255;
      const double x = left + cell * static_cast<double>(j);
      const double y = top + cell * static_cast<double>(i);
      out += "<rect x=\"" + fmt(x) + "\" y=\"" + fmt(y) + "\" width=\"" + fmt(cell) + "\" height=\"" + fmt(cell) +
             "\" fill=\"rgb(" + std::to_string(r) + "," + std::to_string(g) + "," + std::to_string(b) +
             ")\" stroke=\"white\"/>\n";
      out += text(x + cell / 2, y + cell / 2 + 4, fmt(v, 1));
    }
  }
  for (std::size_t j = 0; j < cols; ++j) {
    out += text(left + cell * (static_cast<double>(j) + 0.5), top + cell * static_cast<double>(rows) + 18,
                col_labels[j]);
  }
  out += text(left + cell * static_cast<double>(cols) / 2, h - 10, labels.x_label);
  out += text(14, top + cell * static_cast<double>(rows) / 2, labels.y_label, "middle",
              (" transform=\"rotate(-90 14 " + fmt(top + cell * static_cast<double>(rows) / 2) + ")\"").c_str());
  out += "</svg>\n";
  return out;
}

}  // namespace nedenoise
