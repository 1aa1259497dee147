// Copyright 2026 The Sentinel Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <sentinel/feature_vector.hpp>

namespace sentinel::gbdt {

inline constexpr int kModelFormatVersion = 1;

//! Flat tree node. feature < 0 marks a leaf.
struct TreeNode {
    int feature{-1};
    double threshold{0.0};  // rows with value < threshold go left
    bool default_left{true};  // branch taken when the value is missing (NaN)
    int left{-1};
    int right{-1};
    double weight{0.0};  // leaf output in log-odds, before the learning rate
    double gain{0.0};    // split gain of an internal node

    [[nodiscard]] bool is_leaf() const noexcept { return feature < 0; }
    bool operator==(const TreeNode&) const = default;
};

struct Tree {
    std::vector<TreeNode> nodes;  // nodes[0] is the root

    [[nodiscard]] double leaf_value(std::span<const double> row) const;
    [[nodiscard]] int depth() const;
    bool operator==(const Tree&) const = default;
};

struct GbdtModel {
    std::vector<Tree> trees;
    double base_score{0.0};  // prior log-odds
    double learning_rate{0.1};
    std::vector<std::string> feature_schema;

    bool operator==(const GbdtModel&) const = default;
};

struct TrainConfig {
    int n_trees{200};
    int max_depth{4};
    double learning_rate{0.1};
    double min_child_weight{1.0};
    double lambda_l2{1.0};
    std::optional<double> positive_class_weight;  // defaults to n_neg / n_pos
    std::uint64_t rng_seed{0};
    double row_subsample{1.0};

    //! Throws ConfigError when a value is out of range.
    void validate() const;
};

//! Per-round training diagnostics. loss[0] is the weighted log-loss at the base score,
//! loss[k] the loss after tree k.
struct TrainLog {
    std::vector<double> loss;
    std::vector<int> shrink_steps;  // times tree k's leaves were halved to keep the loss from rising
    double positive_class_weight{1.0};
};

//! Second-order boosting on the weighted logistic loss with exact greedy splits.
//! Throws DegenerateLabels for fewer than 2 rows or a single class, SchemaError for
//! unlabeled or non-finite rows.
[[nodiscard]] GbdtModel train(const DenseDataset& data, const TrainConfig& cfg, TrainLog* log = nullptr);
[[nodiscard]] GbdtModel train(std::span<const FeatureVector> rows, const TrainConfig& cfg, TrainLog* log = nullptr);

//! base_score + learning_rate * sum of leaf values. `row` follows the model schema; NaN is missing.
[[nodiscard]] double predict_margin(const GbdtModel& model, std::span<const double> row);

//! Sigmoid of the margin, kept strictly inside (0, 1).
[[nodiscard]] double predict_proba(const GbdtModel& model, std::span<const double> row);
[[nodiscard]] double predict_proba(const GbdtModel& model, const FeatureVector& fv);
//! Columns are matched to the model schema by name.
[[nodiscard]] std::vector<double> predict_proba(const GbdtModel& model, const DenseDataset& data);

//! Total split gain per schema feature normalized to sum 1; all zeros when no split exists.
[[nodiscard]] std::vector<std::pair<std::string, double>> feature_importance(const GbdtModel& model);

struct GradientSums {
    double grad{0.0};
    double hess{0.0};
    bool operator==(const GradientSums&) const = default;
};

//! Sum of w * (p - y) and w * p * (1 - p) with p = sigmoid(margin).
[[nodiscard]] GradientSums gradient_sums(std::span<const double> margins, std::span<const int> labels,
                                         std::span<const double> weights);

//! Weighted mean log-loss.
[[nodiscard]] double weighted_log_loss(std::span<const double> margins, std::span<const int> labels,
                                       std::span<const double> weights);

[[nodiscard]] double sigmoid(double margin) noexcept;

[[nodiscard]] std::string to_json(const GbdtModel& model);
//! Throws ModelFormatError on malformed text or a version mismatch.
[[nodiscard]] GbdtModel from_json(std::string_view text);
void save_model(const GbdtModel& model, const std::filesystem::path& path);
[[nodiscard]] GbdtModel load_model(const std::filesystem::path& path);

}  // namespace sentinel::gbdt
