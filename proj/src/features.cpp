// Copyright 2026 The Sentinel Authors
// SPDX-License-Identifier: Apache-2.0

#include <sentinel/features.hpp>

#include <algorithm>
#include <cmath>

#include <sentinel/errors.hpp>

namespace sentinel::features {

namespace {

    constexpr double kAbsent = -1.0;

    double as_double(uint128 v) { return to_double(v); }

}  // namespace

const std::vector<std::string>& feature_schema() {
    static const std::vector<std::string> schema{
        "gas",
        "gas_price",
        "max_fee_per_gas",
        "max_priority_fee_per_gas",
        "value",
        "tx_type",
        "gas_used",
        "effective_gas_price",
        "cumulative_gas_used",
        "log_count",
        "status",
        "to_is_contract",
        "input_length",
        "gas_used_ratio",
        "fee_overhead",
        "tip_ratio",
        "value_per_gas",
        "block_position_ratio",
        "n_octets",
        "valid_octet",
        "benign_octet",
        "mal_octet",
    };
    return schema;
}

bool is_gas_feature(std::string_view name) {
    static constexpr std::string_view kGas[] = {
        "gas",      "gas_price",           "max_fee_per_gas",     "max_priority_fee_per_gas", "gas_used",
        "effective_gas_price", "cumulative_gas_used", "gas_used_ratio", "fee_overhead", "tip_ratio",
    };
    return std::find(std::begin(kGas), std::end(kGas), name) != std::end(kGas);
}

bool is_wei_feature(std::string_view name) {
    static constexpr std::string_view kWei[] = {
        "gas_price", "max_fee_per_gas", "max_priority_fee_per_gas", "value", "effective_gas_price", "value_per_gas",
    };
    return std::find(std::begin(kWei), std::end(kWei), name) != std::end(kWei);
}

FeatureVector extract_features(const TransactionRecord& tx, const ReceiptRecord& rc, const calldata::OctetFeatures& oct) {
    if (to_lower(tx.hash) != to_lower(rc.tx_hash)) {
        throw RecordMismatch("transaction " + tx.hash + " paired with receipt of " + rc.tx_hash);
    }
    const double gas = as_double(tx.gas);
    const double gas_price = as_double(tx.gas_price);
    const double gas_used = as_double(rc.gas_used);
    const double effective = as_double(rc.effective_gas_price);
    const double cumulative = as_double(rc.cumulative_gas_used);
    const double value = as_double(tx.value);
    const double max_fee = tx.max_fee_per_gas ? as_double(*tx.max_fee_per_gas) : kAbsent;
    const double max_tip = tx.max_priority_fee_per_gas ? as_double(*tx.max_priority_fee_per_gas) : kAbsent;

    FeatureVector fv;
    fv.tx_hash = to_lower(tx.hash);
    fv.values.reserve(feature_schema().size());
    fv.values.emplace_back("gas", gas);
    fv.values.emplace_back("gas_price", gas_price);
    fv.values.emplace_back("max_fee_per_gas", max_fee);
    fv.values.emplace_back("max_priority_fee_per_gas", max_tip);
    fv.values.emplace_back("value", value);
    fv.values.emplace_back("tx_type", static_cast<double>(tx.tx_type));
    fv.values.emplace_back("gas_used", gas_used);
    fv.values.emplace_back("effective_gas_price", effective);
    fv.values.emplace_back("cumulative_gas_used", cumulative);
    fv.values.emplace_back("log_count", static_cast<double>(rc.log_count));
    fv.values.emplace_back("status", static_cast<double>(rc.status));
    fv.values.emplace_back("to_is_contract", rc.to_is_contract ? 1.0 : 0.0);
    fv.values.emplace_back("input_length", static_cast<double>(calldata::input_length(tx.input)));

    fv.values.emplace_back("gas_used_ratio", tx.gas == 0 ? 0.0 : gas_used / gas);
    fv.values.emplace_back("fee_overhead", (effective - gas_price) / std::max(gas_price, 1.0));
    const bool both = tx.max_fee_per_gas && tx.max_priority_fee_per_gas;
    fv.values.emplace_back("tip_ratio", both ? max_tip / std::max(max_fee, 1.0) : kAbsent);
    fv.values.emplace_back("value_per_gas", value / std::max(gas_used, 1.0));
    fv.values.emplace_back("block_position_ratio", gas_used / std::max(cumulative, 1.0));

    fv.values.emplace_back("n_octets", static_cast<double>(oct.n_octets));
    fv.values.emplace_back("valid_octet", static_cast<double>(oct.valid_octet));
    fv.values.emplace_back("benign_octet", static_cast<double>(oct.benign_octet));
    fv.values.emplace_back("mal_octet", static_cast<double>(oct.mal_octet));
    return fv;
}

std::vector<FeatureVector> build_dataset(std::span<const LabeledRecord> rows, const calldata::SignatureDirectory& dir,
                                         std::vector<std::string>* warnings) {
    std::vector<FeatureVector> out;
    out.reserve(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& row = rows[i];
        if (row.label != 0 && row.label != 1) {
            throw SchemaError("row " + std::to_string(i) + " has label " + std::to_string(row.label));
        }
        if (warnings != nullptr && row.receipt.gas_used > row.tx.gas) {
            warnings->push_back("row " + std::to_string(i) + " (" + row.tx.hash + "): gas_used exceeds gas limit");
        }
        auto fv = extract_features(row.tx, row.receipt, calldata::octet_features(row.tx.input, dir));
        for (auto& [name, v] : fv.values) {
            if (is_wei_feature(name) && v >= 0.0) v = std::log10(1.0 + v);
        }
        fv.label = row.label;
        if (fv.names() != feature_schema()) {
            throw SchemaError("row " + std::to_string(i) + " does not match the feature schema");
        }
        out.push_back(std::move(fv));
    }
    return out;
}

}  // namespace sentinel::features
