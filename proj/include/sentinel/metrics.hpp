// Copyright 2026 The Sentinel Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace sentinel::metrics {

struct ScoredLabels {
    std::vector<double> scores;
    std::vector<int> labels;  // 0 or 1
};

struct RocPoint {
    double fpr{0.0};
    double tpr{0.0};
    double threshold{0.0};  // a row is predicted positive when score >= threshold
};

struct PrPoint {
    double precision{1.0};
    double recall{0.0};
    double threshold{0.0};
};

struct ConfusionMatrix {
    std::size_t tp{0};
    std::size_t fp{0};
    std::size_t tn{0};
    std::size_t fn{0};
};

//! Points by descending threshold from (0,0) (threshold +inf) to (1,1). Tied scores
//! collapse into one point. Throws DegenerateLabels unless both classes are present.
[[nodiscard]] std::vector<RocPoint> roc_curve(const ScoredLabels& sl);

//! Trapezoidal area under roc_curve(); equals the pair statistic with ties counted 1/2.
[[nodiscard]] double auc(const ScoredLabels& sl);

//! precision = TP / (TP + FP), defined as 1 when nothing is predicted positive; recall = TP / P.
[[nodiscard]] std::vector<PrPoint> precision_recall(const ScoredLabels& sl, std::span<const double> thresholds);

[[nodiscard]] ConfusionMatrix confusion_matrix(const ScoredLabels& sl, double threshold);

[[nodiscard]] std::string roc_csv(std::span<const RocPoint> curve);  // threshold,fpr,tpr
[[nodiscard]] std::string pr_csv(std::span<const PrPoint> curve);    // threshold,precision,recall

//! Reads back roc_csv()/pr_csv() output.
[[nodiscard]] std::vector<RocPoint> parse_roc_csv(std::string_view text);
[[nodiscard]] std::vector<PrPoint> parse_pr_csv(std::string_view text);

}  // namespace sentinel::metrics
