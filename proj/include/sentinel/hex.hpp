// Copyright 2026 The Sentinel Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace sentinel {

using Bytes = std::vector<std::uint8_t>;
using ByteView = std::span<const std::uint8_t>;

__extension__ typedef unsigned __int128 uint128;

[[nodiscard]] constexpr bool is_hex_digit(char c) noexcept {
    return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'f') || (c >= 'A' && c <= 'F');
}

[[nodiscard]] bool is_hex(std::string_view s) noexcept;

[[nodiscard]] std::string to_lower(std::string_view s);

//! Drops a leading "0x"/"0X" if present.
[[nodiscard]] std::string_view strip_0x(std::string_view s) noexcept;

//! Decodes hex (optional 0x prefix). Throws std::invalid_argument on odd length or non-hex input.
[[nodiscard]] Bytes from_hex(std::string_view hex);

//! Lowercase hex without prefix.
[[nodiscard]] std::string to_hex(ByteView bytes);

//! Parses a JSON-RPC quantity ("0x1a", "0x0"). Values are decoded digit by digit and
//! rejected with std::out_of_range once they exceed 128 bits.
[[nodiscard]] uint128 parse_quantity(std::string_view quantity);

//! Encodes as a JSON-RPC quantity (no leading zeros, "0x0" for zero).
[[nodiscard]] std::string to_quantity(uint128 value);

[[nodiscard]] std::string to_decimal(uint128 value);

[[nodiscard]] double to_double(uint128 value) noexcept;

}  // namespace sentinel
