// Copyright 2026 The Sentinel Authors
// SPDX-License-Identifier: Apache-2.0

#include <sentinel/metrics.hpp>

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <limits>
#include <numeric>

#include <sentinel/errors.hpp>

namespace sentinel::metrics {

namespace {

    struct Counts {
        std::size_t pos{0};
        std::size_t neg{0};
    };

    Counts validate(const ScoredLabels& sl) {
        if (sl.scores.size() != sl.labels.size()) {
            throw SchemaError("scores and labels differ in length");
        }
        if (sl.scores.empty()) {
            throw EmptyDataset("no scored rows");
        }
        Counts c;
        for (const int y : sl.labels) {
            if (y == 1) {
                ++c.pos;
            } else if (y == 0) {
                ++c.neg;
            } else {
                throw SchemaError("labels must be 0 or 1");
            }
        }
        for (const double s : sl.scores) {
            if (std::isnan(s)) throw SchemaError("score is NaN");
        }
        return c;
    }

    Counts require_both(const ScoredLabels& sl) {
        const auto c = validate(sl);
        if (c.pos == 0 || c.neg == 0) {
            throw DegenerateLabels("ROC and precision/recall need both classes; got only label " +
                                   std::to_string(c.pos == 0 ? 0 : 1));
        }
        return c;
    }

    std::string format_double(double v) {
        if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
        char buf[64];
        const auto res = std::to_chars(buf, buf + sizeof(buf), v);
        return std::string(buf, res.ptr);
    }

    double parse_double(std::string_view s) {
        if (s == "inf") return std::numeric_limits<double>::infinity();
        if (s == "-inf") return -std::numeric_limits<double>::infinity();
        double v = 0.0;
        const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
        if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
            throw SchemaError("'" + std::string{s} + "' is not a number");
        }
        return v;
    }

    std::vector<std::array<double, 3>> parse_triples(std::string_view text) {
        std::vector<std::array<double, 3>> rows;
        bool header = true;
        while (!text.empty()) {
            const auto nl = text.find('\n');
            auto line = text.substr(0, nl);
            text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
            if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
            if (line.empty()) continue;
            if (header) {
                header = false;
                continue;
            }
            std::array<double, 3> row{};
            for (std::size_t k = 0; k < 3; ++k) {
                const auto comma = line.find(',');
                if ((comma == std::string_view::npos) != (k == 2)) throw SchemaError("curve rows need 3 columns");
                row[k] = parse_double(line.substr(0, comma));
                line = comma == std::string_view::npos ? std::string_view{} : line.substr(comma + 1);
            }
            rows.push_back(row);
        }
        return rows;
    }

}  // namespace

std::vector<RocPoint> roc_curve(const ScoredLabels& sl) {
    const auto counts = require_both(sl);
    std::vector<std::size_t> order(sl.scores.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return sl.scores[a] > sl.scores[b]; });

    const double p = static_cast<double>(counts.pos);
    const double n = static_cast<double>(counts.neg);
    std::vector<RocPoint> curve{{0.0, 0.0, std::numeric_limits<double>::infinity()}};
    std::size_t tp = 0;
    std::size_t fp = 0;
    for (std::size_t k = 0; k < order.size();) {
        const double s = sl.scores[order[k]];
        while (k < order.size() && sl.scores[order[k]] == s) {
            (sl.labels[order[k]] == 1 ? tp : fp) += 1;
            ++k;
        }
        curve.push_back({static_cast<double>(fp) / n, static_cast<double>(tp) / p, s});
    }
    return curve;
}

double auc(const ScoredLabels& sl) {
    const auto curve = roc_curve(sl);
    double area = 0.0;
    for (std::size_t k = 1; k < curve.size(); ++k) {
        area += (curve[k].fpr - curve[k - 1].fpr) * (curve[k].tpr + curve[k - 1].tpr) / 2.0;
    }
    return area;
}

ConfusionMatrix confusion_matrix(const ScoredLabels& sl, double threshold) {
    validate(sl);
    ConfusionMatrix cm;
    for (std::size_t i = 0; i < sl.scores.size(); ++i) {
        const bool predicted = sl.scores[i] >= threshold;
        const bool actual = sl.labels[i] == 1;
        if (predicted && actual) ++cm.tp;
        if (predicted && !actual) ++cm.fp;
        if (!predicted && !actual) ++cm.tn;
        if (!predicted && actual) ++cm.fn;
    }
    return cm;
}

std::vector<PrPoint> precision_recall(const ScoredLabels& sl, std::span<const double> thresholds) {
    require_both(sl);
    std::vector<PrPoint> out;
    out.reserve(thresholds.size());
    for (const double t : thresholds) {
        const auto cm = confusion_matrix(sl, t);
        const double predicted = static_cast<double>(cm.tp + cm.fp);
        const double precision = predicted == 0.0 ? 1.0 : static_cast<double>(cm.tp) / predicted;
        const double recall = static_cast<double>(cm.tp) / static_cast<double>(cm.tp + cm.fn);
        out.push_back({precision, recall, t});
    }
    return out;
}

std::string roc_csv(std::span<const RocPoint> curve) {
    std::string out = "threshold,fpr,tpr\n";
    for (const auto& pt : curve) out += format_double(pt.threshold) + "," + format_double(pt.fpr) + "," + format_double(pt.tpr) + "\n";
    return out;
}

std::string pr_csv(std::span<const PrPoint> curve) {
    std::string out = "threshold,precision,recall\n";
    for (const auto& pt : curve) {
        out += format_double(pt.threshold) + "," + format_double(pt.precision) + "," + format_double(pt.recall) + "\n";
    }
    return out;
}

std::vector<RocPoint> parse_roc_csv(std::string_view text) {
    std::vector<RocPoint> out;
    for (const auto& r : parse_triples(text)) out.push_back({r[1], r[2], r[0]});
    return out;
}

std::vector<PrPoint> parse_pr_csv(std::string_view text) {
    std::vector<PrPoint> out;
    for (const auto& r : parse_triples(text)) out.push_back({r[1], r[2], r[0]});
    return out;
}

}  // namespace sentinel::metrics
