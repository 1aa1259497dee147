// Copyright 2026 The Sentinel Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <sentinel/metrics.hpp>

namespace sentinel::report {

struct Series {
    std::string name;
    std::vector<std::pair<double, double>> points;
};

struct ChartSpec {
    std::string title;
    std::string x_label;
    std::string y_label;
    std::optional<std::pair<double, double>> x_range;  // derived from the data when absent
    std::optional<std::pair<double, double>> y_range;
};

//! Pixel geometry of the plotting area and the data-to-pixel mapping.
struct PlotFrame {
    double width{640};
    double height{480};
    double left{70};
    double right{20};
    double top{40};
    double bottom{60};
    std::pair<double, double> x_range{0, 1};
    std::pair<double, double> y_range{0, 1};

    [[nodiscard]] double px(double x) const;
    [[nodiscard]] double py(double y) const;
};

//! Frame the chart functions use for `spec` and `series`.
[[nodiscard]] PlotFrame frame_for(const ChartSpec& spec, std::span<const Series> series);

//! Coordinates are printed with two decimals.
[[nodiscard]] std::string format_coord(double v);

[[nodiscard]] std::string svg_line_chart(const ChartSpec& spec, std::span<const Series> series);
[[nodiscard]] std::string svg_scatter(const ChartSpec& spec, std::span<const Series> series);
//! Horizontal bars, one per (label, value), in the given order.
[[nodiscard]] std::string svg_bar_chart(const ChartSpec& spec, std::span<const std::pair<std::string, double>> bars);

[[nodiscard]] std::string importance_csv(std::span<const std::pair<std::string, double>> importance);
[[nodiscard]] std::vector<std::pair<std::string, double>> parse_importance_csv(std::string_view text);

struct Projection {
    std::vector<std::vector<double>> coords;  // rows x 2 or more; the first two are plotted
    std::vector<int> labels;                  // empty or one per row
};
[[nodiscard]] std::string projection_csv(const Projection& p);
[[nodiscard]] Projection parse_projection_csv(std::string_view text);

struct ReportInputs {
    std::optional<std::vector<metrics::RocPoint>> roc;
    std::optional<double> auc;
    std::optional<std::vector<metrics::PrPoint>> pr;
    std::optional<std::vector<std::pair<std::string, double>>> importance;
    std::optional<Projection> projection;
    std::string projection_title{"Transactions projected on the first two components"};
};

//! Writes <name>.csv and <name>.svg for every present input (roc, pr, feature_importance,
//! projection) and returns the paths, each CSV followed by its SVG. Throws IoError when out_dir cannot be
//! created or written.
std::vector<std::filesystem::path> emit_report(const ReportInputs& in, const std::filesystem::path& out_dir);

//! Renders SVGs from CSVs previously written by emit_report.
std::vector<std::filesystem::path> render_svgs(const ReportInputs& in, const std::filesystem::path& out_dir);

void write_text(const std::filesystem::path& path, std::string_view text);
[[nodiscard]] std::string read_text(const std::filesystem::path& path);

}  // namespace sentinel::report
