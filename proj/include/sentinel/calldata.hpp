// Copyright 2026 The Sentinel Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace sentinel::calldata {

//! Transaction input: "0x" followed by zero or more hex digits, stored lowercase.
class CalldataInput {
  public:
    CalldataInput() = default;

    //! Throws InvalidCalldata when the prefix is missing or a non-hex character appears.
    [[nodiscard]] static CalldataInput parse(std::string_view text);

    [[nodiscard]] const std::string& hex() const noexcept { return hex_; }
    //! Hex digits after "0x".
    [[nodiscard]] std::string_view body() const noexcept { return std::string_view{hex_}.substr(2); }

    bool operator==(const CalldataInput&) const = default;

  private:
    explicit CalldataInput(std::string hex) : hex_(std::move(hex)) {}
    std::string hex_{"0x"};
};

enum class SignatureClass { benign, malicious, unknown };

[[nodiscard]] std::string_view to_string(SignatureClass c) noexcept;

//! Selector -> function text signature ("hexdic"), plus the signature sets observed
//! in benign and in malicious traffic. A signature may sit in both sets.
class SignatureDirectory {
  public:
    //! Adds one (selector, signature, class) row. The first signature seen for a selector
    //! wins; a later row that maps the same selector elsewhere is counted as a collision and
    //! otherwise ignored. Throws DirectoryParseError on a malformed selector.
    void add(std::string_view selector, std::string_view signature, SignatureClass cls);

    [[nodiscard]] const std::map<std::string, std::string>& hex_dic() const noexcept { return hex_dic_; }
    [[nodiscard]] const std::set<std::string>& mal_dic() const noexcept { return mal_dic_; }
    [[nodiscard]] const std::set<std::string>& benign_dic() const noexcept { return benign_dic_; }
    [[nodiscard]] std::size_t collisions() const noexcept { return collisions_; }

    [[nodiscard]] const std::string* lookup(std::string_view selector) const;

    bool operator==(const SignatureDirectory& other) const {
        return hex_dic_ == other.hex_dic_ && mal_dic_ == other.mal_dic_ && benign_dic_ == other.benign_dic_;
    }

  private:
    std::map<std::string, std::string> hex_dic_;
    std::set<std::string> mal_dic_;
    std::set<std::string> benign_dic_;
    std::size_t collisions_{0};
};

//! True for "0x" followed by exactly 8 lowercase hex digits.
[[nodiscard]] bool is_selector_key(std::string_view key) noexcept;

//! CSV rows "selector,function_signature,class". Signatures may contain commas: the
//! selector ends at the first comma and the class starts after the last one.
//! '#' lines, blank lines and a "selector,..." header are skipped.
[[nodiscard]] SignatureDirectory load_directory(const std::filesystem::path& path);
[[nodiscard]] SignatureDirectory parse_directory(std::string_view text);
void save_directory(const SignatureDirectory& dir, const std::filesystem::path& path);
[[nodiscard]] std::string format_directory(const SignatureDirectory& dir);

struct OctetFeatures {
    std::int64_t n_octets{0};
    std::int64_t valid_octet{0};
    std::int64_t benign_octet{0};
    std::int64_t mal_octet{0};

    OctetFeatures& operator+=(const OctetFeatures& o) noexcept {
        n_octets += o.n_octets;
        valid_octet += o.valid_octet;
        benign_octet += o.benign_octet;
        mal_octet += o.mal_octet;
        return *this;
    }
    bool operator==(const OctetFeatures&) const = default;
};

//! "0x" + first 8 hex digits, or nothing when fewer than 8 digits are present.
[[nodiscard]] std::optional<std::string> extract_selector(const CalldataInput& input);

//! Splits the body into consecutive 8-digit chunks (the last may be shorter) and counts
//! chunks found in the directory. A resolved signature counts as malicious when it is in
//! mal_dic, otherwise as benign when it is in benign_dic. Every chunk is scanned, so
//! argument words can match by chance.
[[nodiscard]] OctetFeatures octet_features(const CalldataInput& input, const SignatureDirectory& dir);

//! Number of hex digits after "0x".
[[nodiscard]] std::size_t input_length(const CalldataInput& input) noexcept;

struct LabeledCalldata {
    CalldataInput input;
    int label{0};
};

inline constexpr std::size_t kProportionBins = 10;

struct ClassSignatureStats {
    std::size_t rows{0};
    std::map<std::string, std::size_t> selector_histogram;        // rows with no selector are not counted
    std::map<std::size_t, std::size_t> length_histogram;          // input_length -> rows
    std::map<std::int64_t, std::size_t> valid_octet_histogram;    // valid_octet -> rows
    std::array<std::size_t, kProportionBins> valid_proportion_histogram{};  // valid/n_octets in tenths; 0 when no octets
};

struct SignatureStats {
    ClassSignatureStats benign;
    ClassSignatureStats malicious;
    std::set<std::string> malicious_only_selectors;
};

//! Throws EmptyDataset for an empty collection.
[[nodiscard]] SignatureStats signature_stats(std::span<const LabeledCalldata> rows, const SignatureDirectory& dir);

}  // namespace sentinel::calldata
