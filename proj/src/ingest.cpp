// Copyright 2026 The Sentinel Authors
// SPDX-License-Identifier: Apache-2.0

#include <sentinel/ingest.hpp>

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <semaphore>
#include <set>
#include <sstream>
#include <thread>

#include <httplib.h>

#include <sentinel/errors.hpp>
#include <sentinel/random.hpp>

namespace sentinel::ingest {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

    struct ParsedUrl {
        std::string scheme_host_port;
        std::string path;
        bool tls{false};
    };

    ParsedUrl parse_url(const std::string& url) {
        const auto sep = url.find("://");
        if (sep == std::string::npos) {
            throw ConfigError("RPC url must start with http:// or https://: " + url);
        }
        ParsedUrl out;
        const std::string scheme = to_lower(url.substr(0, sep));
        if (scheme == "https") {
            out.tls = true;
        } else if (scheme != "http") {
            throw ConfigError("unsupported RPC url scheme: " + scheme);
        }
        const auto rest = url.substr(sep + 3);
        const auto slash = rest.find('/');
        const auto authority = rest.substr(0, slash);
        if (authority.empty()) {
            throw ConfigError("RPC url has no host: " + url);
        }
        out.scheme_host_port = scheme + "://" + authority;
        out.path = slash == std::string::npos ? "/" : rest.substr(slash);
        return out;
    }

    bool retryable_status(int status) { return status == 429 || status >= 500; }

    std::string require_hex_id(std::string_view id, std::size_t digits) {
        const auto body = strip_0x(id);
        if (body.size() != id.size() - 2 || body.size() != digits || !is_hex(body)) {
            return {};
        }
        return "0x" + to_lower(body);
    }

    const json& field(const json& obj, const char* name) {
        const auto it = obj.find(name);
        if (it == obj.end()) {
            throw RpcSchemaError(std::string{"missing field \""} + name + "\"");
        }
        return *it;
    }

    std::string string_field(const json& obj, const char* name) {
        const auto& v = field(obj, name);
        if (!v.is_string()) {
            throw RpcSchemaError(std::string{"field \""} + name + "\" is not a string");
        }
        return v.get<std::string>();
    }

    uint128 quantity_of(const json& v, const char* name) {
        if (!v.is_string()) {
            throw RpcSchemaError(std::string{"field \""} + name + "\" is not a hex quantity");
        }
        try {
            return parse_quantity(v.get<std::string>());
        } catch (const std::out_of_range&) {
            throw RpcSchemaError(std::string{"field \""} + name + "\" exceeds 128 bits");
        } catch (const std::invalid_argument&) {
            throw RpcSchemaError(std::string{"field \""} + name + "\" is not a hex quantity");
        }
    }

    uint128 quantity_field(const json& obj, const char* name) { return quantity_of(field(obj, name), name); }

    std::optional<uint128> optional_quantity(const json& obj, const char* name) {
        const auto it = obj.find(name);
        if (it == obj.end() || it->is_null()) {
            return std::nullopt;
        }
        return quantity_of(*it, name);
    }

    std::uint64_t u64_quantity(const json& v, const char* name) {
        const uint128 q = quantity_of(v, name);
        if (q > UINT64_MAX) {
            throw RpcSchemaError(std::string{"field \""} + name + "\" exceeds 64 bits");
        }
        return static_cast<std::uint64_t>(q);
    }

    std::string wire_hash(const json& obj, const char* name) {
        const auto s = string_field(obj, name);
        auto id = require_hex_id(s, 64);
        if (id.empty()) {
            throw RpcSchemaError(std::string{"field \""} + name + "\" is not a 32-byte hash");
        }
        return id;
    }

    std::string wire_address(const json& obj, const char* name) {
        const auto s = string_field(obj, name);
        auto id = require_hex_id(s, 40);
        if (id.empty()) {
            throw RpcSchemaError(std::string{"field \""} + name + "\" is not a 20-byte address");
        }
        return id;
    }

    std::string trim(std::string_view s) {
        while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
        while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
        return std::string{s};
    }

    std::vector<std::string> split_csv(std::string_view line) {
        std::vector<std::string> out;
        std::size_t start = 0;
        while (true) {
            const auto comma = line.find(',', start);
            out.push_back(trim(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start)));
            if (comma == std::string_view::npos) break;
            start = comma + 1;
        }
        return out;
    }

    std::string read_file(const std::filesystem::path& path) {
        std::ifstream in{path, std::ios::binary};
        if (!in) {
            throw IoError("cannot read " + path.string());
        }
        std::ostringstream ss;
        ss << in.rdbuf();
        return ss.str();
    }

    std::ofstream open_out(const std::filesystem::path& path) {
        if (path.has_parent_path()) {
            std::error_code ec;
            std::filesystem::create_directories(path.parent_path(), ec);
        }
        std::ofstream out{path, std::ios::binary | std::ios::trunc};
        if (!out) {
            throw IoError("cannot write " + path.string());
        }
        return out;
    }

    template <typename Fn>
    void for_each_line(const std::string& text, Fn&& fn) {
        std::size_t line_no = 0;
        std::size_t start = 0;
        while (start < text.size()) {
            auto end = text.find('\n', start);
            if (end == std::string::npos) end = text.size();
            ++line_no;
            std::string_view line{text.data() + start, end - start};
            if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
            fn(line_no, line);
            start = end + 1;
        }
    }

}  // namespace

void RpcEndpoint::validate() const {
    if (url.empty()) {
        throw ConfigError("RPC url is empty; pass --rpc-url or set SENTINEL_RPC_URL");
    }
    if (max_retries < 0) {
        throw ConfigError("max_retries must be >= 0");
    }
    if (max_concurrent_requests < 1) {
        throw ConfigError("max_concurrent_requests must be >= 1");
    }
    if (timeout.count() <= 0) {
        throw ConfigError("timeout must be positive");
    }
    if (initial_backoff.count() < 0) {
        throw ConfigError("initial_backoff must be >= 0");
    }
}

struct RpcClient::Impl {
    ParsedUrl target;
    std::counting_semaphore<> slots;

    Impl(ParsedUrl t, int concurrency) : target(std::move(t)), slots(concurrency) {}
};

RpcClient::RpcClient(RpcEndpoint endpoint) : endpoint_(std::move(endpoint)) {
    endpoint_.validate();
    auto target = parse_url(endpoint_.url);
#ifndef CPPHTTPLIB_OPENSSL_SUPPORT
    if (target.tls) {
        throw ConfigError("this build has no TLS support; use an http:// endpoint");
    }
#endif
    impl_ = std::make_unique<Impl>(std::move(target), endpoint_.max_concurrent_requests);
}

RpcClient::~RpcClient() = default;

json RpcClient::call(std::string_view method, json params) const {
    const json request = {
        {"jsonrpc", "2.0"},
        {"id", next_id_.fetch_add(1)},
        {"method", std::string{method}},
        {"params", std::move(params)},
    };
    const std::string body = request.dump();

    impl_->slots.acquire();
    struct Release {
        std::counting_semaphore<>& s;
        ~Release() { s.release(); }
    } release{impl_->slots};

    std::string last_failure;
    const int attempts = endpoint_.max_retries + 1;
    for (int attempt = 0; attempt < attempts; ++attempt) {
        if (attempt > 0) {
            std::this_thread::sleep_for(endpoint_.initial_backoff * (1LL << std::min(attempt - 1, 20)));
        }
        ++attempts_;

        httplib::Client http{impl_->target.scheme_host_port};
        const auto secs = std::chrono::duration_cast<std::chrono::seconds>(endpoint_.timeout);
        const auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(endpoint_.timeout - secs);
        http.set_connection_timeout(secs.count(), usecs.count());
        http.set_read_timeout(secs.count(), usecs.count());
        http.set_write_timeout(secs.count(), usecs.count());

        auto res = http.Post(impl_->target.path, body, "application/json");
        if (!res) {
            last_failure = "transport error: " + httplib::to_string(res.error());
            continue;
        }
        if (retryable_status(res->status)) {
            last_failure = "HTTP " + std::to_string(res->status);
            continue;
        }
        if (res->status != 200) {
            throw RpcError(std::string{method} + ": HTTP " + std::to_string(res->status));
        }

        json reply;
        try {
            reply = json::parse(res->body);
        } catch (const json::exception&) {
            throw RpcSchemaError(std::string{method} + ": response is not JSON");
        }
        if (!reply.is_object()) {
            throw RpcSchemaError(std::string{method} + ": response is not a JSON-RPC object");
        }
        if (const auto err = reply.find("error"); err != reply.end() && !err->is_null()) {
            std::string message = err->is_object() && err->contains("message") && (*err)["message"].is_string()
                                      ? (*err)["message"].get<std::string>()
                                      : err->dump();
            throw RpcError(std::string{method} + ": node error: " + message);
        }
        const auto result = reply.find("result");
        if (result == reply.end()) {
            throw RpcSchemaError(std::string{method} + ": response has neither result nor error");
        }
        return *result;
    }
    throw RpcError(std::string{method} + ": giving up after " + std::to_string(attempts) + " attempts (" +
                   last_failure + ")");
}

std::optional<std::string> resolve_rpc_url(std::optional<std::string> flag) {
    if (flag && !flag->empty()) {
        return flag;
    }
    if (const char* env = std::getenv(std::string{kRpcUrlEnv}.c_str()); env && *env) {
        return std::string{env};
    }
    return std::nullopt;
}

std::string normalize_tx_hash(std::string_view hash) {
    auto id = require_hex_id(hash, 64);
    if (id.empty()) {
        throw InvalidHash("not a 32-byte transaction hash: " + std::string{hash});
    }
    return id;
}

std::string normalize_address(std::string_view address) {
    auto id = require_hex_id(address, 40);
    if (id.empty()) {
        throw InvalidAddress("not a 20-byte address: " + std::string{address});
    }
    return id;
}

features::TransactionRecord parse_transaction(const json& wire) {
    if (!wire.is_object()) {
        throw RpcSchemaError("transaction is not an object");
    }
    features::TransactionRecord tx;
    tx.hash = wire_hash(wire, "hash");
    tx.from_addr = wire_address(wire, "from");
    if (const auto to = wire.find("to"); to != wire.end() && !to->is_null()) {
        tx.to_addr = wire_address(wire, "to");
    }
    tx.gas = quantity_field(wire, "gas");
    tx.max_fee_per_gas = optional_quantity(wire, "maxFeePerGas");
    tx.max_priority_fee_per_gas = optional_quantity(wire, "maxPriorityFeePerGas");
    if (auto gp = optional_quantity(wire, "gasPrice")) {
        tx.gas_price = *gp;
    } else if (tx.max_fee_per_gas) {
        tx.gas_price = *tx.max_fee_per_gas;
    } else {
        throw RpcSchemaError("missing field \"gasPrice\"");
    }
    tx.value = quantity_field(wire, "value");
    try {
        tx.input = calldata::CalldataInput::parse(string_field(wire, "input"));
    } catch (const InvalidCalldata& e) {
        throw RpcSchemaError(std::string{"field \"input\": "} + e.what());
    }
    if (const auto t = wire.find("type"); t != wire.end() && !t->is_null()) {
        const auto type = u64_quantity(*t, "type");
        if (type > 0xff) {
            throw RpcSchemaError("field \"type\" is out of range");
        }
        tx.tx_type = static_cast<int>(type);
    }
    if (const auto b = wire.find("blockNumber"); b != wire.end() && !b->is_null()) {
        tx.block_number = u64_quantity(*b, "blockNumber");
    }
    tx.nonce = u64_quantity(field(wire, "nonce"), "nonce");
    return tx;
}

features::ReceiptRecord parse_receipt(const json& wire, bool to_is_contract) {
    if (!wire.is_object()) {
        throw RpcSchemaError("receipt is not an object");
    }
    features::ReceiptRecord rc;
    rc.tx_hash = wire_hash(wire, "transactionHash");
    rc.gas_used = quantity_field(wire, "gasUsed");
    rc.cumulative_gas_used = quantity_field(wire, "cumulativeGasUsed");
    if (auto p = optional_quantity(wire, "effectiveGasPrice")) {
        rc.effective_gas_price = *p;
    } else {
        throw RpcSchemaError("missing field \"effectiveGasPrice\"");
    }
    const auto& logs = field(wire, "logs");
    if (!logs.is_array()) {
        throw RpcSchemaError("field \"logs\" is not an array");
    }
    rc.log_count = logs.size();
    const auto status = quantity_field(wire, "status");
    if (status > 1) {
        throw RpcSchemaError("field \"status\" must be 0x0 or 0x1");
    }
    rc.status = static_cast<int>(status);
    rc.to_is_contract = to_is_contract;
    return rc;
}

json transaction_to_wire(const features::TransactionRecord& tx) {
    json w = {
        {"hash", tx.hash},
        {"from", tx.from_addr},
        {"to", tx.to_addr ? json(*tx.to_addr) : json(nullptr)},
        {"gas", to_quantity(tx.gas)},
        {"gasPrice", to_quantity(tx.gas_price)},
        {"value", to_quantity(tx.value)},
        {"input", tx.input.hex()},
        {"type", to_quantity(static_cast<uint128>(tx.tx_type))},
        {"blockNumber", to_quantity(tx.block_number)},
        {"nonce", to_quantity(tx.nonce)},
    };
    if (tx.max_fee_per_gas) w["maxFeePerGas"] = to_quantity(*tx.max_fee_per_gas);
    if (tx.max_priority_fee_per_gas) w["maxPriorityFeePerGas"] = to_quantity(*tx.max_priority_fee_per_gas);
    return w;
}

features::TransactionRecord fetch_transaction(const RpcClient& client, std::string_view tx_hash) {
    const auto hash = normalize_tx_hash(tx_hash);
    const auto result = client.call("eth_getTransactionByHash", json::array({hash}));
    if (result.is_null()) {
        throw NotFound("transaction " + hash + " not found");
    }
    return parse_transaction(result);
}

Bytes fetch_code(const RpcClient& client, std::string_view address) {
    const auto addr = normalize_address(address);
    const auto result = client.call("eth_getCode", json::array({addr, "latest"}));
    if (!result.is_string()) {
        throw RpcSchemaError("eth_getCode result is not a string");
    }
    const auto& text = result.get_ref<const std::string&>();
    if (text.size() < 2 || text[0] != '0' || (text[1] != 'x' && text[1] != 'X')) {
        throw RpcSchemaError("eth_getCode result lacks the 0x prefix");
    }
    try {
        return from_hex(text);
    } catch (const std::invalid_argument&) {
        throw RpcSchemaError("eth_getCode result is not hex");
    }
}

features::ReceiptRecord fetch_receipt(const RpcClient& client, std::string_view tx_hash) {
    const auto hash = normalize_tx_hash(tx_hash);
    const auto result = client.call("eth_getTransactionReceipt", json::array({hash}));
    if (result.is_null()) {
        throw NotFound("receipt for " + hash + " not found (pending or unknown)");
    }
    if (!result.is_object()) {
        throw RpcSchemaError("receipt is not an object");
    }
    bool to_is_contract = false;
    if (const auto to = result.find("to"); to != result.end() && !to->is_null()) {
        to_is_contract = !fetch_code(client, wire_address(result, "to")).empty();
    }
    return parse_receipt(result, to_is_contract);
}

BlockTransactions fetch_block(const RpcClient& client, std::uint64_t number) {
    const auto result = client.call("eth_getBlockByNumber", json::array({to_quantity(number), true}));
    if (result.is_null()) {
        throw NotFound("block " + std::to_string(number) + " not found");
    }
    if (!result.is_object()) {
        throw RpcSchemaError("block is not an object");
    }
    BlockTransactions out;
    out.number = u64_quantity(field(result, "number"), "number");
    const auto& txs = field(result, "transactions");
    if (!txs.is_array()) {
        throw RpcSchemaError("field \"transactions\" is not an array");
    }
    for (const auto& t : txs) {
        if (t.is_string()) {
            auto id = require_hex_id(t.get<std::string>(), 64);
            if (id.empty()) throw RpcSchemaError("block transaction entry is not a hash");
            out.tx_hashes.push_back(std::move(id));
        } else if (t.is_object()) {
            out.tx_hashes.push_back(wire_hash(t, "hash"));
        } else {
            throw RpcSchemaError("block transaction entry is neither hash nor object");
        }
    }
    return out;
}

std::vector<std::pair<features::TransactionRecord, features::ReceiptRecord>> fetch_many(
    const RpcClient& client, std::span<const std::string> tx_hashes) {
    std::vector<std::pair<features::TransactionRecord, features::ReceiptRecord>> out(tx_hashes.size());
    std::vector<std::exception_ptr> errors(tx_hashes.size());
    std::atomic<std::size_t> next{0};

    const auto workers = std::min<std::size_t>(tx_hashes.size(),
                                               static_cast<std::size_t>(client.endpoint().max_concurrent_requests));
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < tx_hashes.size(); i = next++) {
                try {
                    out[i].first = fetch_transaction(client, tx_hashes[i]);
                    out[i].second = fetch_receipt(client, tx_hashes[i]);
                } catch (...) {
                    errors[i] = std::current_exception();
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Labels

std::string_view to_string(LabelKind kind) noexcept { return kind == LabelKind::address ? "address" : "tx_hash"; }

std::string_view to_string(Label label) noexcept { return label == Label::malicious ? "malicious" : "benign"; }

LabelStore::LabelStore(const LabelStore& other) {
    std::scoped_lock lock{other.mutex_};
    entries_ = other.entries_;
    quarantine_ = other.quarantine_;
}

LabelStore& LabelStore::operator=(const LabelStore& other) {
    if (this != &other) {
        std::scoped_lock lock{mutex_, other.mutex_};
        entries_ = other.entries_;
        quarantine_ = other.quarantine_;
    }
    return *this;
}

bool LabelStore::merge(LabelKind kind, std::string_view id, const LabelEntry& entry, bool* was_duplicate) {
    LabelKey key{kind, kind == LabelKind::address ? normalize_address(id) : normalize_tx_hash(id)};
    if (was_duplicate) *was_duplicate = false;

    std::scoped_lock lock{mutex_};
    if (quarantine_.contains(key)) {
        return false;
    }
    const auto it = entries_.find(key);
    if (it == entries_.end()) {
        entries_.emplace(std::move(key), entry);
        return true;
    }
    if (it->second.label != entry.label) {
        entries_.erase(it);
        quarantine_.emplace(std::move(key), true);
        return false;
    }
    if (was_duplicate) *was_duplicate = true;
    it->second.source = std::min(it->second.source, entry.source);
    it->second.observed_at = std::min(it->second.observed_at, entry.observed_at);
    return true;
}

std::optional<LabelEntry> LabelStore::find(LabelKind kind, std::string_view id) const {
    std::string norm;
    try {
        norm = kind == LabelKind::address ? normalize_address(id) : normalize_tx_hash(id);
    } catch (const Error&) {
        return std::nullopt;
    }
    std::scoped_lock lock{mutex_};
    const auto it = entries_.find({kind, norm});
    if (it == entries_.end()) return std::nullopt;
    return it->second;
}

bool LabelStore::is_malicious(LabelKind kind, std::string_view id) const {
    const auto e = find(kind, id);
    return e && e->label == Label::malicious;
}

std::map<LabelKey, LabelEntry> LabelStore::snapshot() const {
    std::scoped_lock lock{mutex_};
    return entries_;
}

std::vector<LabelKey> LabelStore::quarantined() const {
    std::scoped_lock lock{mutex_};
    std::vector<LabelKey> out;
    for (const auto& [k, _] : quarantine_) out.push_back(k);
    return out;
}

std::size_t LabelStore::size() const {
    std::scoped_lock lock{mutex_};
    return entries_.size();
}

bool LabelStore::operator==(const LabelStore& other) const {
    if (this == &other) return true;
    std::scoped_lock lock{mutex_, other.mutex_};
    return entries_ == other.entries_ && quarantine_ == other.quarantine_;
}

ImportSummary import_labels_text(LabelStore& store, std::string_view csv, std::string_view source_name,
                                 std::int64_t observed_at) {
    ImportSummary summary;
    std::set<LabelKey> reported;
    for_each_line(std::string{csv}, [&](std::size_t line_no, std::string_view line) {
        const auto trimmed = trim(line);
        if (trimmed.empty() || trimmed.front() == '#') return;
        const auto cols = split_csv(trimmed);
        if (cols.size() >= 2 && cols[0] == "kind" && cols[1] == "id") return;

        auto skip = [&](const std::string& why) {
            summary.skipped.push_back("line " + std::to_string(line_no) + ": " + why);
        };
        if (cols.size() < 3 || cols.size() > 4) {
            skip("expected kind,id,label,source");
            return;
        }
        LabelKind kind;
        if (cols[0] == "address") {
            kind = LabelKind::address;
        } else if (cols[0] == "tx_hash") {
            kind = LabelKind::tx_hash;
        } else {
            skip("unknown kind \"" + cols[0] + "\"");
            return;
        }
        Label label;
        if (cols[2] == "malicious") {
            label = Label::malicious;
        } else if (cols[2] == "benign") {
            label = Label::benign;
        } else {
            skip("unknown label \"" + cols[2] + "\"");
            return;
        }
        std::string id;
        try {
            id = kind == LabelKind::address ? normalize_address(cols[1]) : normalize_tx_hash(cols[1]);
        } catch (const Error& e) {
            skip(e.what());
            return;
        }
        LabelEntry entry{label, cols.size() == 4 && !cols[3].empty() ? cols[3] : std::string{source_name},
                         observed_at};
        bool dup = false;
        if (store.merge(kind, id, entry, &dup)) {
            ++(dup ? summary.duplicates : summary.added);
        } else if (reported.insert({kind, id}).second) {
            summary.conflicts.emplace_back(kind, id);
        }
    });
    return summary;
}

ImportSummary import_labels(LabelStore& store, const std::filesystem::path& path, std::string_view source_name,
                            std::int64_t observed_at) {
    return import_labels_text(store, read_file(path), source_name, observed_at);
}

std::vector<std::string> sample_benign(const RpcClient& client, std::span<const std::uint64_t> blocks,
                                       std::size_t per_block, std::uint64_t seed, const LabelStore& store,
                                       std::vector<std::string>* notes) {
    if (per_block < 1) {
        throw ConfigError("per_block must be >= 1");
    }
    std::vector<std::uint64_t> ordered{blocks.begin(), blocks.end()};
    std::sort(ordered.begin(), ordered.end());
    ordered.erase(std::unique(ordered.begin(), ordered.end()), ordered.end());

    Rng rng{seed};
    std::vector<std::string> out;
    for (const auto number : ordered) {
        auto block = fetch_block(client, number);
        if (block.tx_hashes.empty()) {
            if (notes) notes->push_back("block " + std::to_string(number) + " is empty; skipped");
            continue;
        }
        std::vector<std::string> eligible;
        for (auto& h : block.tx_hashes) {
            if (!store.is_malicious(LabelKind::tx_hash, h)) eligible.push_back(std::move(h));
        }
        const auto take = std::min(per_block, eligible.size());
        if (take < per_block && notes) {
            notes->push_back("block " + std::to_string(number) + " has only " + std::to_string(eligible.size()) +
                             " eligible transactions");
        }
        for (std::size_t i = 0; i < take; ++i) {
            const auto j = i + static_cast<std::size_t>(rng.uniform_index(eligible.size() - i));
            std::swap(eligible[i], eligible[j]);
            out.push_back(eligible[i]);
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Persistence

std::filesystem::path schema_manifest_path(const std::filesystem::path& dataset) {
    auto p = dataset;
    p += ".schema.json";
    return p;
}

void persist_dataset(std::span<const FeatureVector> rows, const std::filesystem::path& path) {
    std::vector<std::string> schema;
    if (!rows.empty()) schema = rows.front().names();

    auto out = open_out(path);
    for (const auto& row : rows) {
        ordered_json features = ordered_json::object();
        for (const auto& [name, value] : row.values) features[name] = value;
        ordered_json line = {{"features", std::move(features)}};
        if (row.label) line["label"] = *row.label;
        line["tx_hash"] = row.tx_hash;
        out << line.dump() << '\n';
    }
    if (!out) throw IoError("write failed: " + path.string());

    auto manifest = open_out(schema_manifest_path(path));
    manifest << json(schema).dump() << '\n';
    if (!manifest) throw IoError("write failed: " + schema_manifest_path(path).string());
}

std::vector<FeatureVector> load_dataset(const std::filesystem::path& path) {
    const auto manifest_text = read_file(schema_manifest_path(path));
    std::vector<std::string> schema;
    try {
        schema = json::parse(manifest_text).get<std::vector<std::string>>();
    } catch (const json::exception&) {
        throw SchemaError("schema manifest is not a JSON array of names: " + schema_manifest_path(path).string());
    }
    const std::set<std::string> schema_set{schema.begin(), schema.end()};
    if (schema_set.size() != schema.size()) {
        throw SchemaError("schema manifest repeats a feature name");
    }

    std::vector<FeatureVector> rows;
    for_each_line(read_file(path), [&](std::size_t line_no, std::string_view line) {
        if (trim(line).empty()) return;
        const auto where = "line " + std::to_string(line_no) + ": ";
        ordered_json obj;
        try {
            obj = ordered_json::parse(line);
        } catch (const ordered_json::exception&) {
            throw SchemaError(where + "not valid JSON");
        }
        const auto feats = obj.find("features");
        if (!obj.is_object() || feats == obj.end() || !feats->is_object()) {
            throw SchemaError(where + "missing \"features\" object");
        }
        if (feats->size() != schema.size()) {
            throw SchemaError(where + "has " + std::to_string(feats->size()) + " features, manifest lists " +
                              std::to_string(schema.size()));
        }
        FeatureVector fv;
        fv.values.reserve(schema.size());
        for (const auto& name : schema) {
            const auto v = feats->find(name);
            if (v == feats->end()) {
                throw SchemaError(where + "missing feature \"" + name + "\"");
            }
            if (!v->is_number()) {
                throw SchemaError(where + "feature \"" + name + "\" is not a number");
            }
            fv.values.emplace_back(name, v->get<double>());
        }
        if (const auto l = obj.find("label"); l != obj.end() && !l->is_null()) {
            if (!l->is_number_integer() || (l->get<int>() != 0 && l->get<int>() != 1)) {
                throw SchemaError(where + "label must be 0 or 1");
            }
            fv.label = l->get<int>();
        }
        if (const auto h = obj.find("tx_hash"); h != obj.end() && h->is_string()) {
            fv.tx_hash = h->get<std::string>();
        }
        rows.push_back(std::move(fv));
    });
    return rows;
}

void save_records(std::span<const features::LabeledRecord> rows, const std::filesystem::path& path) {
    auto out = open_out(path);
    for (const auto& r : rows) {
        const json receipt = {
            {"transactionHash", r.receipt.tx_hash},
            {"gasUsed", to_quantity(r.receipt.gas_used)},
            {"effectiveGasPrice", to_quantity(r.receipt.effective_gas_price)},
            {"cumulativeGasUsed", to_quantity(r.receipt.cumulative_gas_used)},
            {"logCount", r.receipt.log_count},
            {"status", to_quantity(static_cast<uint128>(r.receipt.status))},
            {"toIsContract", r.receipt.to_is_contract},
        };
        out << json{{"transaction", transaction_to_wire(r.tx)}, {"receipt", receipt}, {"label", r.label}}.dump()
            << '\n';
    }
    if (!out) throw IoError("write failed: " + path.string());
}

std::vector<features::LabeledRecord> load_records(const std::filesystem::path& path) {
    std::vector<features::LabeledRecord> rows;
    for_each_line(read_file(path), [&](std::size_t line_no, std::string_view line) {
        if (trim(line).empty()) return;
        const auto where = path.string() + " line " + std::to_string(line_no) + ": ";
        try {
            const auto obj = json::parse(line);
            features::LabeledRecord r;
            r.tx = parse_transaction(field(obj, "transaction"));
            const auto& rc = field(obj, "receipt");
            r.receipt.tx_hash = wire_hash(rc, "transactionHash");
            r.receipt.gas_used = quantity_field(rc, "gasUsed");
            r.receipt.effective_gas_price = quantity_field(rc, "effectiveGasPrice");
            r.receipt.cumulative_gas_used = quantity_field(rc, "cumulativeGasUsed");
            r.receipt.log_count = field(rc, "logCount").get<std::uint64_t>();
            r.receipt.status = static_cast<int>(quantity_field(rc, "status"));
            r.receipt.to_is_contract = field(rc, "toIsContract").get<bool>();
            r.label = field(obj, "label").get<int>();
            if (r.label != 0 && r.label != 1) throw SchemaError("label must be 0 or 1");
            rows.push_back(std::move(r));
        } catch (const json::exception& e) {
            throw SchemaError(where + e.what());
        } catch (const Error& e) {
            throw SchemaError(where + e.what());
        }
    });
    return rows;
}

}  // namespace sentinel::ingest
