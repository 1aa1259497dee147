// Copyright 2026 The Sentinel Authors
// SPDX-License-Identifier: Apache-2.0

#include <sentinel/calldata.hpp>

#include <algorithm>
#include <fstream>
#include <sstream>

#include <sentinel/errors.hpp>
#include <sentinel/hex.hpp>

namespace sentinel::calldata {

namespace {

    std::string_view trim(std::string_view s) {
        while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
        while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
        return s;
    }

    SignatureClass parse_class(std::string_view s, std::size_t line_no) {
        if (s == "benign") return SignatureClass::benign;
        if (s == "malicious") return SignatureClass::malicious;
        if (s == "unknown") return SignatureClass::unknown;
        throw DirectoryParseError("line " + std::to_string(line_no) + ": class '" + std::string{s} +
                                  "' is not benign, malicious or unknown");
    }

}  // namespace

CalldataInput CalldataInput::parse(std::string_view text) {
    if (text.size() < 2 || text[0] != '0' || text[1] != 'x') {
        throw InvalidCalldata("calldata '" + std::string{text.substr(0, 16)} + "' does not start with 0x");
    }
    const auto body = text.substr(2);
    if (!is_hex(body)) {
        throw InvalidCalldata("calldata contains a non-hex character");
    }
    return CalldataInput{to_lower(text)};
}

std::string_view to_string(SignatureClass c) noexcept {
    switch (c) {
        case SignatureClass::benign:
            return "benign";
        case SignatureClass::malicious:
            return "malicious";
        case SignatureClass::unknown:
            break;
    }
    return "unknown";
}

bool is_selector_key(std::string_view key) noexcept {
    if (key.size() != 10 || !key.starts_with("0x")) return false;
    return std::all_of(key.begin() + 2, key.end(), [](char c) { return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'f'); });
}

void SignatureDirectory::add(std::string_view selector, std::string_view signature, SignatureClass cls) {
    const auto key = to_lower(selector);
    if (!is_selector_key(key)) {
        throw DirectoryParseError("selector '" + std::string{selector} + "' is not 0x followed by 8 hex digits");
    }
    auto [it, inserted] = hex_dic_.emplace(key, std::string{signature});
    if (!inserted && it->second != signature) {
        ++collisions_;
        return;
    }
    if (cls == SignatureClass::malicious) mal_dic_.emplace(signature);
    if (cls == SignatureClass::benign) benign_dic_.emplace(signature);
}

const std::string* SignatureDirectory::lookup(std::string_view selector) const {
    const auto it = hex_dic_.find(std::string{selector});
    return it == hex_dic_.end() ? nullptr : &it->second;
}

SignatureDirectory parse_directory(std::string_view text) {
    SignatureDirectory dir;
    std::size_t line_no = 0;
    bool seen_row = false;
    while (!text.empty()) {
        const auto nl = text.find('\n');
        auto line = trim(text.substr(0, nl));
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        ++line_no;
        if (line.empty() || line.front() == '#') continue;
        if (!seen_row && line.starts_with("selector,")) {
            seen_row = true;
            continue;
        }
        seen_row = true;
        const auto first = line.find(',');
        const auto last = line.rfind(',');
        if (first == std::string_view::npos || first == last) {
            throw DirectoryParseError("line " + std::to_string(line_no) + ": expected selector,function_signature,class");
        }
        const auto selector = trim(line.substr(0, first));
        auto signature = trim(line.substr(first + 1, last - first - 1));
        if (signature.size() >= 2 && signature.front() == '"' && signature.back() == '"') {
            signature = signature.substr(1, signature.size() - 2);
        }
        const auto cls = parse_class(trim(line.substr(last + 1)), line_no);
        if (signature.empty()) {
            throw DirectoryParseError("line " + std::to_string(line_no) + ": empty function signature");
        }
        try {
            dir.add(selector, signature, cls);
        } catch (const DirectoryParseError& e) {
            throw DirectoryParseError("line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return dir;
}

SignatureDirectory load_directory(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open signature directory " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_directory(buf.str());
}

std::string format_directory(const SignatureDirectory& dir) {
    std::string out = "selector,function_signature,class\n";
    for (const auto& [selector, signature] : dir.hex_dic()) {
        const bool mal = dir.mal_dic().contains(signature);
        const bool ben = dir.benign_dic().contains(signature);
        const auto row = [&](SignatureClass c) {
            out += selector + "," + signature + "," + std::string{to_string(c)} + "\n";
        };
        if (mal) row(SignatureClass::malicious);
        if (ben) row(SignatureClass::benign);
        if (!mal && !ben) row(SignatureClass::unknown);
    }
    return out;
}

void save_directory(const SignatureDirectory& dir, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError("cannot write signature directory " + path.string());
    }
    out << format_directory(dir);
}

std::optional<std::string> extract_selector(const CalldataInput& input) {
    const auto body = input.body();
    if (body.size() < 8) return std::nullopt;
    return "0x" + std::string{body.substr(0, 8)};
}

OctetFeatures octet_features(const CalldataInput& input, const SignatureDirectory& dir) {
    OctetFeatures f;
    const auto body = input.body();
    std::string key = "0x";
    for (std::size_t pos = 0; pos < body.size(); pos += 8) {
        const auto chunk = body.substr(pos, 8);
        ++f.n_octets;
        key.resize(2);
        key.append(chunk);
        const auto* signature = dir.lookup(key);
        if (signature == nullptr) continue;
        ++f.valid_octet;
        if (dir.mal_dic().contains(*signature)) {
            ++f.mal_octet;
        } else if (dir.benign_dic().contains(*signature)) {
            ++f.benign_octet;
        }
    }
    return f;
}

std::size_t input_length(const CalldataInput& input) noexcept { return input.body().size(); }

SignatureStats signature_stats(std::span<const LabeledCalldata> rows, const SignatureDirectory& dir) {
    if (rows.empty()) {
        throw EmptyDataset("signature statistics need at least one calldata row");
    }
    SignatureStats stats;
    std::set<std::string> benign_selectors;
    std::set<std::string> malicious_selectors;
    for (const auto& row : rows) {
        auto& cls = row.label == 1 ? stats.malicious : stats.benign;
        ++cls.rows;
        if (auto sel = extract_selector(row.input)) {
            ++cls.selector_histogram[*sel];
            (row.label == 1 ? malicious_selectors : benign_selectors).insert(*sel);
        }
        ++cls.length_histogram[input_length(row.input)];
        const auto oct = octet_features(row.input, dir);
        ++cls.valid_octet_histogram[oct.valid_octet];
        const double prop = oct.n_octets == 0 ? 0.0 : static_cast<double>(oct.valid_octet) / static_cast<double>(oct.n_octets);
        const auto bin = std::min<std::size_t>(kProportionBins - 1, static_cast<std::size_t>(prop * kProportionBins));
        ++cls.valid_proportion_histogram[bin];
    }
    std::set_difference(malicious_selectors.begin(), malicious_selectors.end(), benign_selectors.begin(),
                        benign_selectors.end(), std::inserter(stats.malicious_only_selectors, stats.malicious_only_selectors.end()));
    return stats;
}

}  // namespace sentinel::calldata
