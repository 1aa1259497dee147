// Copyright 2026 The Sentinel Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <sentinel/calldata.hpp>
#include <sentinel/errors.hpp>
#include <sentinel/random.hpp>

#include "../support/fixtures.hpp"
#include "../support/oracles.hpp"

using namespace sentinel;
using namespace sentinel::calldata;

namespace {

SignatureDirectory small_directory() {
    SignatureDirectory dir;
    dir.add("0xa9059cbb", "transfer(address,uint256)", SignatureClass::benign);
    dir.add("0x095ea7b3", "approve(address,uint256)", SignatureClass::benign);
    dir.add("0xdeadbeef", "drain(address)", SignatureClass::malicious);
    dir.add("0x3ccfd60b", "withdraw()", SignatureClass::malicious);
    dir.add("0x3ccfd60b", "withdraw()", SignatureClass::benign);  // in both sets
    dir.add("0x12345678", "mystery()", SignatureClass::unknown);
    return dir;
}

}  // namespace

TEST_CASE("calldata input validation") {
    CHECK(CalldataInput::parse("0xABCD").hex() == "0xabcd");
    CHECK(CalldataInput::parse("0x").body().empty());
    CHECK_THROWS_AS((void)CalldataInput::parse("abcd"), InvalidCalldata);
    CHECK_THROWS_AS((void)CalldataInput::parse("0xabz1"), InvalidCalldata);
    CHECK(CalldataInput::parse("0xabc").body() == "abc");  // odd lengths are accepted
}

TEST_CASE("selector extraction") {
    const auto dir = parse_directory(test::slurp(SENTINEL_DATA_DIR "/selectors.csv"));
    const auto transfer = CalldataInput::parse("0xa9059cbb" + std::string(128, '0'));
    const auto sel = extract_selector(transfer);
    REQUIRE(sel);
    CHECK(*sel == "0xa9059cbb");
    REQUIRE(dir.lookup(*sel) != nullptr);
    CHECK(*dir.lookup(*sel) == "transfer(address,uint256)");
    CHECK_FALSE(extract_selector(CalldataInput::parse("0x")));
    CHECK_FALSE(extract_selector(CalldataInput::parse("0xdeadbe")));
}

TEST_CASE("octet features") {
    const auto dir = small_directory();
    CHECK(octet_features(CalldataInput::parse("0x"), dir) == OctetFeatures{0, 0, 0, 0});
    CHECK(octet_features(CalldataInput::parse("0x" + std::string(64, '1')), dir) == OctetFeatures{8, 0, 0, 0});
    CHECK(octet_features(CalldataInput::parse("0xdeadbeef11111111"), dir) == OctetFeatures{2, 1, 0, 1});
    // a signature in both sets counts as malicious
    CHECK(octet_features(CalldataInput::parse("0x3ccfd60b"), dir) == OctetFeatures{1, 1, 0, 1});
    // unknown-class hits are valid but neither benign nor malicious
    CHECK(octet_features(CalldataInput::parse("0x12345678a9059cbb"), dir) == OctetFeatures{2, 2, 1, 0});
    // final short chunk
    CHECK(octet_features(CalldataInput::parse("0xa9059cbb123"), dir) == OctetFeatures{2, 1, 1, 0});

    CHECK(input_length(CalldataInput::parse("0x")) == 0);
    CHECK(input_length(CalldataInput::parse("0xa9059cbb")) == 8);
    CHECK(input_length(CalldataInput::parse("0xa9059cbb" + std::string(128, '0'))) == 136);
}

TEST_CASE("octet features agree with the listing oracle on random inputs") {
    const auto dir = small_directory();
    const std::vector<std::string> words{"a9059cbb", "095ea7b3", "deadbeef", "3ccfd60b", "12345678", "00000000", "ffffffff"};
    Rng rng{11};
    for (int trial = 0; trial < 500; ++trial) {
        std::string hex = "0x";
        const auto n = rng.uniform_index(8);
        for (std::uint64_t k = 0; k < n; ++k) hex += words[rng.uniform_index(words.size())];
        hex += std::string("0123456789abcdef").substr(0, rng.uniform_index(9));
        const auto f = octet_features(CalldataInput::parse(hex), dir);
        const auto o = test::octet_oracle(hex, dir.hex_dic(), dir.mal_dic(), dir.benign_dic());
        CAPTURE(hex);
        CHECK(f.n_octets == o.n_octets);
        CHECK(f.valid_octet == o.valid);
        CHECK(f.benign_octet == o.benign);
        CHECK(f.mal_octet == o.mal);
    }
}

TEST_CASE("directory parsing") {
    const auto one = parse_directory("0xa9059cbb,transfer(address,uint256),benign\n");
    CHECK(one.hex_dic().size() == 1);
    CHECK(one.benign_dic().contains("transfer(address,uint256)"));
    CHECK(parse_directory("").hex_dic().empty());
    CHECK_THROWS_AS((void)parse_directory("0xa9059cb,transfer(address,uint256),benign\n"), DirectoryParseError);
    CHECK_THROWS_AS((void)parse_directory("0xa9059cbb,transfer(address,uint256),evil\n"), DirectoryParseError);
    try {
        (void)parse_directory("# comment\n\n0xa9059cbb,t(),benign\nbad\n");
        FAIL("expected a parse error");
    } catch (const DirectoryParseError& e) {
        CHECK(std::string{e.what()}.find("line 4") != std::string::npos);
    }

    const auto quoted = parse_directory("selector,function_signature,class\n0x095ea7b3,\"approve(address,uint256)\",malicious\n");
    CHECK(quoted.mal_dic().contains("approve(address,uint256)"));

    SignatureDirectory dir;
    dir.add("0xa9059cbb", "transfer(address,uint256)", SignatureClass::benign);
    dir.add("0xA9059CBB", "other()", SignatureClass::malicious);
    CHECK(dir.collisions() == 1);
    CHECK(*dir.lookup("0xa9059cbb") == "transfer(address,uint256)");
    CHECK(dir.mal_dic().empty());
}

TEST_CASE("directory save and load round-trip") {
    const auto dir = small_directory();
    test::TempDir tmp;
    save_directory(dir, tmp / "dir.csv");
    CHECK(load_directory(tmp / "dir.csv") == dir);
    CHECK_THROWS_AS((void)load_directory(tmp / "absent.csv"), IoError);

    const auto shipped = load_directory(SENTINEL_DATA_DIR "/selectors.csv");
    CHECK(shipped.hex_dic().size() == 32);
    CHECK(parse_directory(format_directory(shipped)) == shipped);
}

TEST_CASE("signature statistics") {
    SignatureDirectory dir;
    std::vector<LabeledCalldata> rows;
    for (int i = 0; i < 4; ++i) rows.push_back({CalldataInput::parse("0xa9059cbb" + std::string(64, '0')), 0});
    rows.push_back({CalldataInput::parse("0xdeadbeef"), 1});
    const auto stats = signature_stats(rows, dir);
    CHECK(stats.malicious_only_selectors == std::set<std::string>{"0xdeadbeef"});
    CHECK(stats.benign.rows == 4);
    CHECK(stats.malicious.rows == 1);
    CHECK(stats.benign.selector_histogram.at("0xa9059cbb") == 4);

    std::vector<LabeledCalldata> empty_inputs{{CalldataInput::parse("0x"), 0}, {CalldataInput::parse("0x"), 1}};
    const auto flat = signature_stats(empty_inputs, dir);
    CHECK(flat.benign.length_histogram == std::map<std::size_t, std::size_t>{{0, 1}});
    CHECK(flat.malicious.length_histogram == std::map<std::size_t, std::size_t>{{0, 1}});
    CHECK(flat.malicious_only_selectors.empty());

    CHECK_THROWS_AS((void)signature_stats(std::span<const LabeledCalldata>{}, dir), EmptyDataset);
}
