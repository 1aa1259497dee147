// Copyright 2026 The Sentinel Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <sentinel/calldata.hpp>
#include <sentinel/feature_vector.hpp>
#include <sentinel/hex.hpp>

namespace sentinel::features {

//! Transaction fields as returned by eth_getTransactionByHash. Wei amounts can exceed 64 bits.
struct TransactionRecord {
    std::string hash;                  // 0x + 64 hex
    std::string from_addr;             // 0x + 40 hex
    std::optional<std::string> to_addr;  // absent for contract creation
    uint128 gas{0};
    uint128 gas_price{0};
    std::optional<uint128> max_fee_per_gas;
    std::optional<uint128> max_priority_fee_per_gas;
    uint128 value{0};
    calldata::CalldataInput input;
    int tx_type{0};  // 0 legacy, 1 access list, 2 EIP-1559, 3 blob
    std::uint64_t block_number{0};
    std::uint64_t nonce{0};

    bool operator==(const TransactionRecord&) const = default;
};

//! Receipt fields from eth_getTransactionReceipt, plus whether `to` holds code.
struct ReceiptRecord {
    std::string tx_hash;
    uint128 gas_used{0};
    uint128 effective_gas_price{0};
    uint128 cumulative_gas_used{0};
    std::uint64_t log_count{0};
    int status{1};
    bool to_is_contract{false};

    bool operator==(const ReceiptRecord&) const = default;
};

//! Feature names in emission order.
[[nodiscard]] const std::vector<std::string>& feature_schema();

//! Features that describe the gas bid: limits, prices, fee caps and the ratios built from them.
[[nodiscard]] bool is_gas_feature(std::string_view name);

//! Names that build_dataset() passes through log10(1 + x).
[[nodiscard]] bool is_wei_feature(std::string_view name);

//! Raw (untransformed) features. Absent EIP-1559 fields and tip_ratio use the sentinel -1.
//! Throws RecordMismatch when the receipt belongs to a different transaction.
[[nodiscard]] FeatureVector extract_features(const TransactionRecord& tx, const ReceiptRecord& rc,
                                             const calldata::OctetFeatures& oct);

struct LabeledRecord {
    TransactionRecord tx;
    ReceiptRecord receipt;
    int label{0};
};

//! Octet features + extract_features + log10(1 + x) on wei-denominated features, row order kept.
//! Rows with gas_used > gas are kept; a note is appended to `warnings` when given.
[[nodiscard]] std::vector<FeatureVector> build_dataset(std::span<const LabeledRecord> rows,
                                                       const calldata::SignatureDirectory& dir,
                                                       std::vector<std::string>* warnings = nullptr);

}  // namespace sentinel::features
