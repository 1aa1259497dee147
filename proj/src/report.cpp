// Copyright 2026 The Sentinel Authors
// SPDX-License-Identifier: Apache-2.0

#include <sentinel/report.hpp>

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include <sentinel/errors.hpp>

namespace sentinel::report {

namespace {

    constexpr std::array<const char*, 6> kPalette{"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"};

    std::string escape(std::string_view s) {
        std::string out;
        for (const char c : s) {
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

    std::string shortest(double v) {
        char buf[32];
        const auto res = std::to_chars(buf, buf + sizeof(buf), v);
        return {buf, res.ptr};
    }

    std::string tick_label(double v) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.3g", std::abs(v) < 1e-12 ? 0.0 : v);
        return buf;
    }

    std::pair<double, double> padded(double lo, double hi) {
        if (!(lo <= hi)) return {0.0, 1.0};
        if (lo == hi) return {lo - 0.5, hi + 0.5};
        return {lo, hi};
    }

    std::pair<double, double> data_range(std::span<const Series> series, bool x_axis) {
        double lo = std::numeric_limits<double>::infinity();
        double hi = -lo;
        for (const auto& s : series) {
            for (const auto& [x, y] : s.points) {
                const double v = x_axis ? x : y;
                if (!std::isfinite(v)) continue;
                lo = std::min(lo, v);
                hi = std::max(hi, v);
            }
        }
        return padded(lo, hi);
    }

    void open_svg(std::ostringstream& o, const PlotFrame& f, const ChartSpec& spec) {
        o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << format_coord(f.width) << "\" height=\""
          << format_coord(f.height) << "\" viewBox=\"0 0 " << format_coord(f.width) << ' ' << format_coord(f.height)
          << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
        o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
        o << "<text x=\"" << format_coord(f.width / 2) << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">"
          << escape(spec.title) << "</text>\n";
    }

    void draw_axes(std::ostringstream& o, const PlotFrame& f, const ChartSpec& spec, bool y_ticks = true) {
        const double x0 = f.left;
        const double x1 = f.width - f.right;
        const double y0 = f.height - f.bottom;
        const double y1 = f.top;
        o << "<g class=\"axes\" stroke=\"black\" fill=\"none\">\n";
        o << "<line x1=\"" << format_coord(x0) << "\" y1=\"" << format_coord(y0) << "\" x2=\"" << format_coord(x1)
          << "\" y2=\"" << format_coord(y0) << "\"/>\n";
        o << "<line x1=\"" << format_coord(x0) << "\" y1=\"" << format_coord(y0) << "\" x2=\"" << format_coord(x0)
          << "\" y2=\"" << format_coord(y1) << "\"/>\n";
        o << "</g>\n<g class=\"ticks\" text-anchor=\"middle\">\n";
        constexpr int kTicks = 5;
        for (int i = 0; i <= kTicks; ++i) {
            const double t = static_cast<double>(i) / kTicks;
            const double xv = f.x_range.first + t * (f.x_range.second - f.x_range.first);
            o << "<line x1=\"" << format_coord(f.px(xv)) << "\" y1=\"" << format_coord(y0) << "\" x2=\""
              << format_coord(f.px(xv)) << "\" y2=\"" << format_coord(y0 + 5) << "\" stroke=\"black\"/>";
            o << "<text x=\"" << format_coord(f.px(xv)) << "\" y=\"" << format_coord(y0 + 18) << "\">" << tick_label(xv)
              << "</text>\n";
            if (y_ticks) {
                const double yv = f.y_range.first + t * (f.y_range.second - f.y_range.first);
                o << "<line x1=\"" << format_coord(x0 - 5) << "\" y1=\"" << format_coord(f.py(yv)) << "\" x2=\""
                  << format_coord(x0) << "\" y2=\"" << format_coord(f.py(yv)) << "\" stroke=\"black\"/>";
                o << "<text x=\"" << format_coord(x0 - 8) << "\" y=\"" << format_coord(f.py(yv) + 4)
                  << "\" text-anchor=\"end\">" << tick_label(yv) << "</text>\n";
            }
        }
        o << "</g>\n";
        o << "<text class=\"x-label\" x=\"" << format_coord((x0 + x1) / 2) << "\" y=\"" << format_coord(f.height - 15)
          << "\" text-anchor=\"middle\">" << escape(spec.x_label) << "</text>\n";
        o << "<text class=\"y-label\" x=\"18\" y=\"" << format_coord((y0 + y1) / 2)
          << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 " << format_coord((y0 + y1) / 2) << ")\">"
          << escape(spec.y_label) << "</text>\n";
    }

    void draw_legend(std::ostringstream& o, const PlotFrame& f, std::span<const Series> series) {
        if (series.size() < 2 && (series.empty() || series.front().name.empty())) return;
        o << "<g class=\"legend\">\n";
        for (std::size_t i = 0; i < series.size(); ++i) {
            const double y = f.top + 14 + 16 * static_cast<double>(i);
            const double x = f.width - f.right - 150;
            o << "<rect x=\"" << format_coord(x) << "\" y=\"" << format_coord(y - 9) << "\" width=\"10\" height=\"10\" fill=\""
              << kPalette[i % kPalette.size()] << "\"/><text x=\"" << format_coord(x + 16) << "\" y=\"" << format_coord(y)
              << "\">" << escape(series[i].name) << "</text>\n";
        }
        o << "</g>\n";
    }

    std::vector<std::string> split(std::string_view line, char sep) {
        std::vector<std::string> out;
        std::size_t start = 0;
        while (true) {
            const auto pos = line.find(sep, start);
            out.emplace_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
            if (pos == std::string_view::npos) break;
            start = pos + 1;
        }
        return out;
    }

    double parse_double(const std::string& s, std::string_view what) {
        double v{};
        const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
        if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
            throw SchemaError(std::string{what} + ": not a number: \"" + s + "\"");
        }
        return v;
    }

    std::vector<std::string> data_lines(std::string_view text) {
        std::vector<std::string> lines;
        std::istringstream in{std::string{text}};
        bool header = true;
        for (std::string line; std::getline(in, line);) {
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (line.empty()) continue;
            if (header) {
                header = false;
                continue;
            }
            lines.push_back(std::move(line));
        }
        return lines;
    }

}  // namespace

double PlotFrame::px(double x) const {
    const double span = x_range.second - x_range.first;
    return left + (x - x_range.first) / span * (width - left - right);
}

double PlotFrame::py(double y) const {
    const double span = y_range.second - y_range.first;
    return height - bottom - (y - y_range.first) / span * (height - top - bottom);
}

std::string format_coord(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", std::abs(v) < 0.005 ? 0.0 : v);
    return buf;
}

PlotFrame frame_for(const ChartSpec& spec, std::span<const Series> series) {
    PlotFrame f;
    f.x_range = spec.x_range.value_or(data_range(series, true));
    f.y_range = spec.y_range.value_or(data_range(series, false));
    return f;
}

std::string svg_line_chart(const ChartSpec& spec, std::span<const Series> series) {
    const auto f = frame_for(spec, series);
    std::ostringstream o;
    open_svg(o, f, spec);
    draw_axes(o, f, spec);
    for (std::size_t i = 0; i < series.size(); ++i) {
        o << "<polyline class=\"series\" fill=\"none\" stroke-width=\"2\" stroke=\"" << kPalette[i % kPalette.size()]
          << "\" points=\"";
        bool first = true;
        for (const auto& [x, y] : series[i].points) {
            if (!std::isfinite(x) || !std::isfinite(y)) continue;
            o << (first ? "" : " ") << format_coord(f.px(x)) << ',' << format_coord(f.py(y));
            first = false;
        }
        o << "\"/>\n";
    }
    draw_legend(o, f, series);
    o << "</svg>\n";
    return o.str();
}

std::string svg_scatter(const ChartSpec& spec, std::span<const Series> series) {
    const auto f = frame_for(spec, series);
    std::ostringstream o;
    open_svg(o, f, spec);
    draw_axes(o, f, spec);
    for (std::size_t i = 0; i < series.size(); ++i) {
        o << "<g class=\"series\" fill=\"" << kPalette[i % kPalette.size()] << "\" fill-opacity=\"0.7\">\n";
        for (const auto& [x, y] : series[i].points) {
            if (!std::isfinite(x) || !std::isfinite(y)) continue;
            o << "<circle cx=\"" << format_coord(f.px(x)) << "\" cy=\"" << format_coord(f.py(y)) << "\" r=\"3\"/>\n";
        }
        o << "</g>\n";
    }
    draw_legend(o, f, series);
    o << "</svg>\n";
    return o.str();
}

std::string svg_bar_chart(const ChartSpec& spec, std::span<const std::pair<std::string, double>> bars) {
    PlotFrame f;
    f.left = 190;
    double lo = 0.0;
    double hi = 0.0;
    for (const auto& [_, v] : bars) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    f.x_range = spec.x_range.value_or(padded(lo, hi == lo ? lo + 1.0 : hi));
    f.y_range = {0.0, static_cast<double>(std::max<std::size_t>(bars.size(), 1))};
    f.height = std::max(200.0, f.top + f.bottom + 18.0 * static_cast<double>(bars.size()));

    std::ostringstream o;
    open_svg(o, f, spec);
    draw_axes(o, f, spec, false);
    o << "<g class=\"bars\" fill=\"" << kPalette[0] << "\">\n";
    for (std::size_t i = 0; i < bars.size(); ++i) {
        const double slot_top = f.py(static_cast<double>(bars.size() - i));
        const double slot_bottom = f.py(static_cast<double>(bars.size() - i - 1));
        const double x_a = f.px(std::min(0.0, bars[i].second));
        const double x_b = f.px(std::max(0.0, bars[i].second));
        o << "<rect x=\"" << format_coord(x_a) << "\" y=\"" << format_coord(slot_top + 2) << "\" width=\""
          << format_coord(x_b - x_a) << "\" height=\"" << format_coord(std::max(0.0, slot_bottom - slot_top - 4))
          << "\"/><text x=\"" << format_coord(f.left - 8) << "\" y=\"" << format_coord((slot_top + slot_bottom) / 2 + 4)
          << "\" text-anchor=\"end\" fill=\"black\">" << escape(bars[i].first) << "</text>\n";
    }
    o << "</g>\n</svg>\n";
    return o.str();
}

std::string importance_csv(std::span<const std::pair<std::string, double>> importance) {
    std::string out = "feature,importance\n";
    for (const auto& [name, v] : importance) out += name + "," + shortest(v) + "\n";
    return out;
}

std::vector<std::pair<std::string, double>> parse_importance_csv(std::string_view text) {
    std::vector<std::pair<std::string, double>> out;
    for (const auto& line : data_lines(text)) {
        const auto cols = split(line, ',');
        if (cols.size() != 2) throw SchemaError("importance CSV row needs feature,importance: " + line);
        out.emplace_back(cols[0], parse_double(cols[1], "importance CSV"));
    }
    return out;
}

std::string projection_csv(const Projection& p) {
    const std::size_t dims = p.coords.empty() ? 2 : p.coords.front().size();
    std::string out;
    for (std::size_t c = 0; c < dims; ++c) out += "c" + std::to_string(c) + ",";
    out += "label\n";
    for (std::size_t r = 0; r < p.coords.size(); ++r) {
        for (const double v : p.coords[r]) out += shortest(v) + ",";
        if (r < p.labels.size()) out += std::to_string(p.labels[r]);
        out += '\n';
    }
    return out;
}

Projection parse_projection_csv(std::string_view text) {
    Projection p;
    bool any_label = false;
    for (const auto& line : data_lines(text)) {
        auto cols = split(line, ',');
        if (cols.size() < 2) throw SchemaError("projection CSV row needs coordinates and a label column: " + line);
        const std::string label = cols.back();
        cols.pop_back();
        std::vector<double> row;
        for (const auto& c : cols) row.push_back(parse_double(c, "projection CSV"));
        p.coords.push_back(std::move(row));
        if (!label.empty()) {
            any_label = true;
            p.labels.push_back(static_cast<int>(parse_double(label, "projection CSV label")));
        } else {
            p.labels.push_back(-1);
        }
    }
    if (!any_label) p.labels.clear();
    return p;
}

void write_text(const std::filesystem::path& path, std::string_view text) {
    std::error_code ec;
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) throw IoError("cannot create directory " + path.parent_path().string() + ": " + ec.message());
    std::ofstream out{path, std::ios::binary | std::ios::trunc};
    if (!out) throw IoError("cannot write " + path.string());
    out << text;
    if (!out) throw IoError("write failed: " + path.string());
}

std::string read_text(const std::filesystem::path& path) {
    std::ifstream in{path, std::ios::binary};
    if (!in) throw IoError("cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::filesystem::path> render_svgs(const ReportInputs& in, const std::filesystem::path& out_dir) {
    std::vector<std::filesystem::path> written;
    if (in.roc) {
        Series curve{"ROC", {}};
        for (const auto& pt : *in.roc) curve.points.emplace_back(pt.fpr, pt.tpr);
        const std::vector<Series> series{curve, Series{"chance", {{0, 0}, {1, 1}}}};
        std::string title = "ROC curve";
        if (in.auc) title += " (AUC = " + tick_label(*in.auc) + ")";
        const auto path = out_dir / "roc.svg";
        write_text(path, svg_line_chart({title, "False positive rate", "True positive rate", {{0, 1}}, {{0, 1}}}, series));
        written.push_back(path);
    }
    if (in.pr) {
        Series precision{"precision", {}};
        Series recall{"recall", {}};
        for (const auto& pt : *in.pr) {
            precision.points.emplace_back(pt.threshold, pt.precision);
            recall.points.emplace_back(pt.threshold, pt.recall);
        }
        const std::vector<Series> series{precision, recall};
        const auto path = out_dir / "pr.svg";
        write_text(path, svg_line_chart({"Precision and recall by threshold", "Threshold", "Value", {{0, 1}}, {{0, 1}}},
                                        series));
        written.push_back(path);
    }
    if (in.importance) {
        const auto path = out_dir / "feature_importance.svg";
        write_text(path, svg_bar_chart({"Feature importance (total gain)", "Importance", "", {}, {}}, *in.importance));
        written.push_back(path);
    }
    if (in.projection) {
        std::vector<Series> series;
        const auto& p = *in.projection;
        auto series_for = [&](int label) -> Series& {
            const std::string name = label == 1 ? "malicious" : label == 0 ? "benign" : "unlabeled";
            for (auto& s : series) {
                if (s.name == name) return s;
            }
            return series.emplace_back(Series{name, {}});
        };
        for (std::size_t r = 0; r < p.coords.size(); ++r) {
            const int label = r < p.labels.size() ? p.labels[r] : -1;
            const double x = p.coords[r].empty() ? 0.0 : p.coords[r][0];
            const double y = p.coords[r].size() > 1 ? p.coords[r][1] : 0.0;
            series_for(label).points.emplace_back(x, y);
        }
        std::sort(series.begin(), series.end(), [](const Series& a, const Series& b) { return a.name < b.name; });
        const auto path = out_dir / "projection.svg";
        write_text(path, svg_scatter({in.projection_title, "Component 1", "Component 2", {}, {}}, series));
        written.push_back(path);
    }
    return written;
}

std::vector<std::filesystem::path> emit_report(const ReportInputs& in, const std::filesystem::path& out_dir) {
    std::vector<std::filesystem::path> written;
    if (in.roc) {
        written.push_back(out_dir / "roc.csv");
        write_text(written.back(), metrics::roc_csv(*in.roc));
    }
    if (in.pr) {
        written.push_back(out_dir / "pr.csv");
        write_text(written.back(), metrics::pr_csv(*in.pr));
    }
    if (in.importance) {
        written.push_back(out_dir / "feature_importance.csv");
        write_text(written.back(), importance_csv(*in.importance));
    }
    if (in.projection) {
        written.push_back(out_dir / "projection.csv");
        write_text(written.back(), projection_csv(*in.projection));
    }
    const auto svgs = render_svgs(in, out_dir);
    // interleave so each CSV is followed by its SVG
    std::vector<std::filesystem::path> ordered;
    for (const auto& csv : written) {
        ordered.push_back(csv);
        auto svg = csv;
        svg.replace_extension(".svg");
        if (std::find(svgs.begin(), svgs.end(), svg) != svgs.end()) ordered.push_back(svg);
    }
    return ordered;
}

}  // namespace sentinel::report
