// Copyright 2026 The Sentinel Authors
// SPDX-License-Identifier: Apache-2.0

#include <sentinel/hex.hpp>

#include <algorithm>
#include <stdexcept>

namespace sentinel {

namespace {

    int nibble(char c) {
        if (c >= '0' && c <= '9') return c - '0';
        if (c >= 'a' && c <= 'f') return c - 'a' + 10;
        if (c >= 'A' && c <= 'F') return c - 'A' + 10;
        return -1;
    }

}  // namespace

bool is_hex(std::string_view s) noexcept {
    return std::all_of(s.begin(), s.end(), [](char c) { return is_hex_digit(c); });
}

std::string to_lower(std::string_view s) {
    std::string out{s};
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) {
        return static_cast<char>(c >= 'A' && c <= 'Z' ? c - 'A' + 'a' : c);
    });
    return out;
}

std::string_view strip_0x(std::string_view s) noexcept {
    if (s.size() >= 2 && s[0] == '0' && (s[1] == 'x' || s[1] == 'X')) {
        s.remove_prefix(2);
    }
    return s;
}

Bytes from_hex(std::string_view hex) {
    hex = strip_0x(hex);
    if (hex.size() % 2 != 0) {
        throw std::invalid_argument("odd number of hex digits");
    }
    Bytes out;
    out.reserve(hex.size() / 2);
    for (std::size_t i = 0; i < hex.size(); i += 2) {
        const int hi = nibble(hex[i]);
        const int lo = nibble(hex[i + 1]);
        if (hi < 0 || lo < 0) {
            throw std::invalid_argument("non-hex character in input");
        }
        out.push_back(static_cast<std::uint8_t>((hi << 4) | lo));
    }
    return out;
}

std::string to_hex(ByteView bytes) {
    static constexpr char kDigits[] = "0123456789abcdef";
    std::string out;
    out.reserve(bytes.size() * 2);
    for (const auto b : bytes) {
        out.push_back(kDigits[b >> 4]);
        out.push_back(kDigits[b & 0x0f]);
    }
    return out;
}

uint128 parse_quantity(std::string_view quantity) {
    if (quantity.size() < 3 || quantity[0] != '0' || (quantity[1] != 'x' && quantity[1] != 'X')) {
        throw std::invalid_argument("quantity must be 0x-prefixed with at least one digit");
    }
    quantity.remove_prefix(2);
    uint128 value = 0;
    int significant = 0;
    for (const char c : quantity) {
        const int d = nibble(c);
        if (d < 0) {
            throw std::invalid_argument("non-hex character in quantity");
        }
        if (value == 0 && d == 0) continue;
        if (++significant > 32) {
            throw std::out_of_range("quantity exceeds 128 bits");
        }
        value = (value << 4) | static_cast<uint128>(d);
    }
    return value;
}

std::string to_quantity(uint128 value) {
    if (value == 0) return "0x0";
    static constexpr char kDigits[] = "0123456789abcdef";
    std::string digits;
    while (value != 0) {
        digits.push_back(kDigits[static_cast<int>(value & 0x0f)]);
        value >>= 4;
    }
    std::reverse(digits.begin(), digits.end());
    return "0x" + digits;
}

std::string to_decimal(uint128 value) {
    if (value == 0) return "0";
    std::string digits;
    while (value != 0) {
        digits.push_back(static_cast<char>('0' + static_cast<int>(value % 10)));
        value /= 10;
    }
    std::reverse(digits.begin(), digits.end());
    return digits;
}

double to_double(uint128 value) noexcept { return static_cast<double>(value); }

}  // namespace sentinel
