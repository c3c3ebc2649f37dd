// Copyright 2026 The nedenoise Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

namespace nedenoise {

struct LineSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

struct PlotLabels {
  std::string title;
  std::string x_label;
  std::string y_label;
};

/// Polyline chart with markers and a legend. Non-finite points are skipped.
std::string svg_line_plot(const std::vector<LineSeries>& series, const PlotLabels& labels);

/// Heatmap of values[row][col] with every cell annotated by its value.
std::string svg_heatmap(const std::vector<std::vector<double>>& values, const std::vector<std::string>& row_labels,
                        const std::vector<std::string>& col_labels, const PlotLabels& labels);

/// Escapes &, <, > and quotes for text content.
std::string xml_escape(const std::string& text);

}  // namespace nedenoise
