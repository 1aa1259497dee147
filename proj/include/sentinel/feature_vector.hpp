// Copyright 2026 The Sentinel Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace sentinel {

//! Named numeric features of one row, kept in insertion order, plus an optional binary label.
struct FeatureVector {
    std::vector<std::pair<std::string, double>> values;
    std::optional<int> label;
    std::string tx_hash;  // empty when the row is not tied to a transaction

    //! Overwrites an existing entry or appends a new one.
    void set(std::string_view name, double value);
    [[nodiscard]] std::optional<double> get(std::string_view name) const;
    [[nodiscard]] std::vector<std::string> names() const;
    [[nodiscard]] std::size_t size() const noexcept { return values.size(); }

    bool operator==(const FeatureVector&) const = default;
};

//! Row-major numeric matrix with a fixed schema; the form models train on.
struct DenseDataset {
    std::vector<std::string> schema;
    std::vector<double> data;  // rows() x cols()
    std::vector<int> labels;   // empty for unlabeled data

    [[nodiscard]] std::size_t cols() const noexcept { return schema.size(); }
    [[nodiscard]] std::size_t rows() const noexcept { return schema.empty() ? 0 : data.size() / schema.size(); }
    [[nodiscard]] double at(std::size_t r, std::size_t c) const { return data[r * cols() + c]; }
    [[nodiscard]] std::span<const double> row(std::size_t r) const { return {data.data() + r * cols(), cols()}; }
};

//! Converts rows to a dense matrix, using the first row's names as schema.
//! Throws SchemaError on name drift or non-finite values, and when require_labels is set
//! and a row has no label (or a label outside {0,1}).
[[nodiscard]] DenseDataset to_dense(std::span<const FeatureVector> rows, bool require_labels);

//! Projects one vector onto a schema; names absent from the vector become NaN.
[[nodiscard]] std::vector<double> project_onto(const FeatureVector& fv, std::span<const std::string> schema);

}  // namespace sentinel
