// Copyright 2026 The Sentinel Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include <sentinel/feature_vector.hpp>
#include <sentinel/features.hpp>
#include <sentinel/hex.hpp>

namespace sentinel::ingest {

inline constexpr std::string_view kRpcUrlEnv = "SENTINEL_RPC_URL";

struct RpcEndpoint {
    std::string url;
    std::chrono::milliseconds timeout{30'000};
    int max_retries{3};
    int max_concurrent_requests{8};
    std::chrono::milliseconds initial_backoff{200};  // doubled after every failed attempt

    //! Throws ConfigError for an empty url or negative limits.
    void validate() const;
};

//! JSON-RPC 2.0 over HTTP(S). Calls are safe from several threads; at most
//! max_concurrent_requests are in flight at once.
class RpcClient {
  public:
    explicit RpcClient(RpcEndpoint endpoint);
    ~RpcClient();
    RpcClient(const RpcClient&) = delete;
    RpcClient& operator=(const RpcClient&) = delete;

    //! Returns the "result" member (possibly null). Transport failures, HTTP 429 and 5xx are
    //! retried with exponential backoff; RpcError is thrown once retries are exhausted or the
    //! node answers with a JSON-RPC error. Unparseable bodies raise RpcSchemaError.
    [[nodiscard]] nlohmann::json call(std::string_view method, nlohmann::json params) const;

    [[nodiscard]] const RpcEndpoint& endpoint() const noexcept { return endpoint_; }
    //! HTTP requests attempted so far, retries included.
    [[nodiscard]] std::size_t attempts() const noexcept { return attempts_.load(); }

  private:
    struct Impl;
    RpcEndpoint endpoint_;
    std::unique_ptr<Impl> impl_;
    mutable std::atomic<std::size_t> attempts_{0};
    mutable std::atomic<std::uint64_t> next_id_{1};
};

//! Resolves the endpoint URL: explicit flag first, then SENTINEL_RPC_URL.
[[nodiscard]] std::optional<std::string> resolve_rpc_url(std::optional<std::string> flag);

//! Lowercased "0x" + 64 hex; throws InvalidHash otherwise.
[[nodiscard]] std::string normalize_tx_hash(std::string_view hash);
//! Lowercased "0x" + 40 hex; throws InvalidAddress otherwise.
[[nodiscard]] std::string normalize_address(std::string_view address);

//! Maps an eth_getTransactionByHash result object. Throws RpcSchemaError on missing or
//! malformed fields.
[[nodiscard]] features::TransactionRecord parse_transaction(const nlohmann::json& wire);
//! Maps an eth_getTransactionReceipt result object; log_count is the length of "logs".
[[nodiscard]] features::ReceiptRecord parse_receipt(const nlohmann::json& wire, bool to_is_contract);

//! Inverse of parse_transaction() for the fields it reads.
[[nodiscard]] nlohmann::json transaction_to_wire(const features::TransactionRecord& tx);

[[nodiscard]] features::TransactionRecord fetch_transaction(const RpcClient& client, std::string_view tx_hash);
//! Also fetches the code at the receipt's "to" address to fill to_is_contract.
[[nodiscard]] features::ReceiptRecord fetch_receipt(const RpcClient& client, std::string_view tx_hash);
//! Runtime bytecode; empty for externally owned accounts.
[[nodiscard]] Bytes fetch_code(const RpcClient& client, std::string_view address);

struct BlockTransactions {
    std::uint64_t number{0};
    std::vector<std::string> tx_hashes;
};
//! eth_getBlockByNumber in full-transaction form. Throws NotFound for an unknown block.
[[nodiscard]] BlockTransactions fetch_block(const RpcClient& client, std::uint64_t number);

//! Fetches transactions and receipts concurrently (bounded by the client); output order
//! follows the input.
[[nodiscard]] std::vector<std::pair<features::TransactionRecord, features::ReceiptRecord>> fetch_many(
    const RpcClient& client, std::span<const std::string> tx_hashes);

// ---------------------------------------------------------------------------
// Labels

enum class LabelKind { address, tx_hash };
enum class Label { benign, malicious };

struct LabelEntry {
    Label label{Label::malicious};
    std::string source;
    std::int64_t observed_at{0};  // unix seconds

    bool operator==(const LabelEntry&) const = default;
};

using LabelKey = std::pair<LabelKind, std::string>;

struct ImportSummary {
    std::size_t added{0};
    std::size_t duplicates{0};                 // rows agreeing with an existing entry
    std::vector<LabelKey> conflicts;           // ids quarantined by this import
    std::vector<std::string> skipped;          // "line N: reason"
};

//! Labeled ids with conflict quarantine: an id seen with both labels is removed and kept out
//! for good. Merging non-conflicting inputs is commutative and idempotent (ties keep the
//! lexicographically smaller source and the earlier timestamp).
class LabelStore {
  public:
    LabelStore() = default;
    LabelStore(const LabelStore& other);
    LabelStore& operator=(const LabelStore& other);

    //! Returns false when the row conflicts (the id becomes quarantined).
    bool merge(LabelKind kind, std::string_view id, const LabelEntry& entry, bool* was_duplicate = nullptr);

    [[nodiscard]] std::optional<LabelEntry> find(LabelKind kind, std::string_view id) const;
    [[nodiscard]] bool is_malicious(LabelKind kind, std::string_view id) const;
    [[nodiscard]] std::map<LabelKey, LabelEntry> snapshot() const;
    [[nodiscard]] std::vector<LabelKey> quarantined() const;
    [[nodiscard]] std::size_t size() const;

    bool operator==(const LabelStore& other) const;

  private:
    mutable std::mutex mutex_;
    std::map<LabelKey, LabelEntry> entries_;
    std::map<LabelKey, bool> quarantine_;
};

//! Reads a `kind,id,label,source` CSV into the store. An empty source column falls back to
//! source_name. Malformed rows are skipped and reported; an unreadable file throws IoError.
ImportSummary import_labels(LabelStore& store, const std::filesystem::path& path, std::string_view source_name,
                            std::int64_t observed_at);
ImportSummary import_labels_text(LabelStore& store, std::string_view csv, std::string_view source_name,
                                 std::int64_t observed_at);

[[nodiscard]] std::string_view to_string(LabelKind kind) noexcept;
[[nodiscard]] std::string_view to_string(Label label) noexcept;

//! For each block, draws per_block hashes uniformly without replacement among the block's
//! transactions that the store does not label malicious. Blocks are visited in ascending
//! order; empty blocks are skipped with a note.
[[nodiscard]] std::vector<std::string> sample_benign(const RpcClient& client, std::span<const std::uint64_t> blocks,
                                                     std::size_t per_block, std::uint64_t seed, const LabelStore& store,
                                                     std::vector<std::string>* notes = nullptr);

// ---------------------------------------------------------------------------
// Persistence

//! `<dataset>.schema.json`
[[nodiscard]] std::filesystem::path schema_manifest_path(const std::filesystem::path& dataset);

//! JSON lines {"features": {...}, "label": 0|1, "tx_hash": "..."} plus the schema manifest.
void persist_dataset(std::span<const FeatureVector> rows, const std::filesystem::path& path);
//! Throws SchemaError when a row disagrees with the manifest, IoError when unreadable.
[[nodiscard]] std::vector<FeatureVector> load_dataset(const std::filesystem::path& path);

//! Raw labeled records as JSON lines: {"transaction": <wire>, "receipt": {...}, "label": 0|1}.
void save_records(std::span<const features::LabeledRecord> rows, const std::filesystem::path& path);
[[nodiscard]] std::vector<features::LabeledRecord> load_records(const std::filesystem::path& path);

}  // namespace sentinel::ingest
