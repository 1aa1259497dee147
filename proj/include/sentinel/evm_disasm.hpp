// Copyright 2026 The Sentinel Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <sentinel/feature_vector.hpp>
#include <sentinel/hex.hpp>

namespace sentinel::evm {

//! Instruction set the opcode table is frozen to.
inline constexpr std::string_view kOpcodeTableVersion = "shanghai";

struct Opcode {
    std::uint8_t byte_value{0};
    std::string_view mnemonic;
    std::uint8_t immediate_len{0};

    [[nodiscard]] bool is_push() const noexcept { return byte_value >= 0x5f && byte_value <= 0x7f; }
    [[nodiscard]] bool is_known() const noexcept { return !mnemonic.starts_with("UNKNOWN_"); }

    bool operator==(const Opcode& other) const noexcept { return byte_value == other.byte_value; }
};

//! Every byte resolves to exactly one entry; unassigned bytes are "UNKNOWN_0xNN".
[[nodiscard]] const Opcode& opcode(std::uint8_t byte_value) noexcept;

//! The full 256-entry table as CSV: byte_value,mnemonic,immediate_len.
[[nodiscard]] std::string opcode_table_csv();

struct Instruction {
    std::size_t offset{0};
    Opcode opcode;
    Bytes immediate;
    bool truncated{false};

    bool operator==(const Instruction&) const = default;
};

struct OpcodeSequence {
    std::vector<Instruction> instructions;
    std::string source_id;  // contract address or content hash

    [[nodiscard]] std::size_t size() const noexcept { return instructions.size(); }
};

//! Linear sweep. Never fails: unassigned bytes become UNKNOWN_0xNN instructions and a
//! PUSH running past the end is kept with the bytes that remain and truncated = true.
[[nodiscard]] OpcodeSequence disassemble(ByteView bytecode, std::string source_id = {});

//! Concatenates opcode and immediate bytes; the inverse of disassemble().
[[nodiscard]] Bytes reserialize(const OpcodeSequence& seq);

//! One line per instruction: "<offset hex> <MNEMONIC>[ 0x<immediate>][ (truncated)]".
[[nodiscard]] std::string format_listing(const OpcodeSequence& seq);

struct NormalizeConfig {
    std::size_t max_len{600};
    std::string pad_token{"PAD"};
};

//! Mnemonics only, exactly cfg.max_len long. Longer sequences lose their prefix
//! (the last max_len mnemonics are kept); shorter ones are padded at the end.
[[nodiscard]] std::vector<std::string> normalize_sequence(const OpcodeSequence& seq, const NormalizeConfig& cfg = {});

//! Unigram ("uni:<m>") and, for n_max = 2, bigram ("bi:<a>|<b>") counts over non-pad tokens.
//! Names are sorted so the output is deterministic.
[[nodiscard]] FeatureVector ngram_features(const std::vector<std::string>& tokens, int n_max,
                                           std::string_view pad_token = "PAD");

//! entry i is 1 iff vocabulary[i] occurs in seq.
[[nodiscard]] std::vector<std::uint8_t> occurrence_vector(const OpcodeSequence& seq,
                                                          const std::vector<std::string>& vocabulary);

}  // namespace sentinel::evm
