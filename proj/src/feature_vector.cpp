// Copyright 2026 The Sentinel Authors
// SPDX-License-Identifier: Apache-2.0

#include <sentinel/feature_vector.hpp>

#include <cmath>
#include <limits>
#include <unordered_map>

#include <sentinel/errors.hpp>

namespace sentinel {

void FeatureVector::set(std::string_view name, double value) {
    for (auto& [n, v] : values) {
        if (n == name) {
            v = value;
            return;
        }
    }
    values.emplace_back(std::string{name}, value);
}

std::optional<double> FeatureVector::get(std::string_view name) const {
    for (const auto& [n, v] : values) {
        if (n == name) return v;
    }
    return std::nullopt;
}

std::vector<std::string> FeatureVector::names() const {
    std::vector<std::string> out;
    out.reserve(values.size());
    for (const auto& entry : values) out.push_back(entry.first);
    return out;
}

DenseDataset to_dense(std::span<const FeatureVector> rows, bool require_labels) {
    DenseDataset out;
    if (rows.empty()) return out;
    out.schema = rows.front().names();
    out.data.reserve(rows.size() * out.schema.size());
    for (std::size_t r = 0; r < rows.size(); ++r) {
        const auto& fv = rows[r];
        if (fv.values.size() != out.schema.size()) {
            throw SchemaError("row " + std::to_string(r) + " has " + std::to_string(fv.values.size()) +
                              " features, schema has " + std::to_string(out.schema.size()));
        }
        for (std::size_t c = 0; c < out.schema.size(); ++c) {
            if (fv.values[c].first != out.schema[c]) {
                throw SchemaError("row " + std::to_string(r) + " feature " + std::to_string(c) + " is '" +
                                  fv.values[c].first + "', schema expects '" + out.schema[c] + "'");
            }
            if (!std::isfinite(fv.values[c].second)) {
                throw SchemaError("row " + std::to_string(r) + " feature '" + out.schema[c] + "' is not finite");
            }
            out.data.push_back(fv.values[c].second);
        }
        if (require_labels) {
            if (!fv.label || (*fv.label != 0 && *fv.label != 1)) {
                throw SchemaError("row " + std::to_string(r) + " has no binary label");
            }
            out.labels.push_back(*fv.label);
        }
    }
    return out;
}

std::vector<double> project_onto(const FeatureVector& fv, std::span<const std::string> schema) {
    std::unordered_map<std::string_view, double> lookup;
    lookup.reserve(fv.values.size());
    for (const auto& [n, v] : fv.values) lookup.emplace(n, v);
    std::vector<double> out(schema.size(), std::numeric_limits<double>::quiet_NaN());
    for (std::size_t c = 0; c < schema.size(); ++c) {
        if (auto it = lookup.find(schema[c]); it != lookup.end()) out[c] = it->second;
    }
    return out;
}

}  // namespace sentinel
