// Copyright 2026 The Sentinel Authors
// SPDX-License-Identifier: Apache-2.0

// Compares the RPC fetchers against the decoded values stored next to the replay fixtures.

#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include <sentinel/errors.hpp>
#include <sentinel/ingest.hpp>

namespace sentinel::test {

namespace detail {

    inline std::string opt_decimal(const std::optional<uint128>& v) { return v ? to_decimal(*v) : "null"; }

    inline std::string golden_text(const nlohmann::json& v) { return v.is_null() ? "null" : v.get<std::string>(); }

}  // namespace detail

//! One line per disagreement; empty when every fetch matches.
inline std::vector<std::string> golden_mismatches(const ingest::RpcClient& client, const nlohmann::json& golden) {
    std::vector<std::string> bad;
    const auto expect = [&bad](bool ok, const std::string& what) {
        if (!ok) bad.push_back(what);
    };

    for (const auto& [hash, g] : golden.at("transactions").items()) {
        const auto tx = ingest::fetch_transaction(client, hash);
        const std::string at = "tx " + hash + ": ";
        expect(tx.hash == hash, at + "hash");
        expect(tx.from_addr == g.at("from").get<std::string>(), at + "from");
        expect((tx.to_addr ? *tx.to_addr : "null") == detail::golden_text(g.at("to")), at + "to");
        expect(to_decimal(tx.gas) == g.at("gas").get<std::string>(), at + "gas");
        expect(to_decimal(tx.gas_price) == g.at("gas_price").get<std::string>(), at + "gas_price");
        expect(detail::opt_decimal(tx.max_fee_per_gas) == detail::golden_text(g.at("max_fee_per_gas")), at + "max_fee_per_gas");
        expect(detail::opt_decimal(tx.max_priority_fee_per_gas) == detail::golden_text(g.at("max_priority_fee_per_gas")),
               at + "max_priority_fee_per_gas");
        expect(to_decimal(tx.value) == g.at("value").get<std::string>(), at + "value");
        expect(tx.input.hex() == g.at("input").get<std::string>(), at + "input");
        expect(tx.tx_type == g.at("tx_type").get<int>(), at + "tx_type");
        expect(tx.block_number == g.at("block_number").get<std::uint64_t>(), at + "block_number");
        expect(tx.nonce == g.at("nonce").get<std::uint64_t>(), at + "nonce");
    }

    for (const auto& [hash, g] : golden.at("receipts").items()) {
        const auto rc = ingest::fetch_receipt(client, hash);
        const std::string at = "receipt " + hash + ": ";
        expect(rc.tx_hash == hash, at + "hash");
        expect(to_decimal(rc.gas_used) == g.at("gas_used").get<std::string>(), at + "gas_used");
        expect(to_decimal(rc.effective_gas_price) == g.at("effective_gas_price").get<std::string>(), at + "effective_gas_price");
        expect(to_decimal(rc.cumulative_gas_used) == g.at("cumulative_gas_used").get<std::string>(), at + "cumulative_gas_used");
        expect(rc.log_count == g.at("log_count").get<std::uint64_t>(), at + "log_count");
        expect(rc.status == g.at("status").get<int>(), at + "status");
        expect(rc.to_is_contract == g.at("to_is_contract").get<bool>(), at + "to_is_contract");
    }

    for (const auto& [address, code] : golden.at("codes").items()) {
        expect("0x" + to_hex(ingest::fetch_code(client, address)) == code.get<std::string>(), "code " + address);
    }

    for (const auto& [number, hashes] : golden.at("blocks").items()) {
        const auto block = ingest::fetch_block(client, std::stoull(number));
        expect(block.number == std::stoull(number), "block " + number + ": number");
        expect(block.tx_hashes == hashes.get<std::vector<std::string>>(), "block " + number + ": hashes");
    }

    for (const auto& m : golden.at("missing")) {
        const auto hash = m.at("hash").get<std::string>();
        const auto method = m.at("method").get<std::string>();
        try {
            if (method == "transaction") {
                (void)ingest::fetch_transaction(client, hash);
            } else {
                (void)ingest::fetch_receipt(client, hash);
            }
            bad.push_back("missing " + method + " " + hash + ": no NotFound");
        } catch (const NotFound&) {
        }
    }
    return bad;
}

}  // namespace sentinel::test
