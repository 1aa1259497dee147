// Copyright 2026 The Sentinel Authors
// SPDX-License-Identifier: Apache-2.0

#include <sentinel/evm_disasm.hpp>

#include <algorithm>
#include <array>
#include <cstdio>
#include <map>
#include <set>
#include <unordered_set>

#include <sentinel/errors.hpp>

namespace sentinel::evm {

namespace {

    struct NamedByte {
        std::uint8_t value;
        std::string_view name;
    };

    // Shanghai. PUSH1..PUSH32, DUPn, SWAPn, LOGn are generated below.
    constexpr NamedByte kNamed[] = {
        {0x00, "STOP"},         {0x01, "ADD"},          {0x02, "MUL"},           {0x03, "SUB"},
        {0x04, "DIV"},          {0x05, "SDIV"},         {0x06, "MOD"},           {0x07, "SMOD"},
        {0x08, "ADDMOD"},       {0x09, "MULMOD"},       {0x0a, "EXP"},           {0x0b, "SIGNEXTEND"},
        {0x10, "LT"},           {0x11, "GT"},           {0x12, "SLT"},           {0x13, "SGT"},
        {0x14, "EQ"},           {0x15, "ISZERO"},       {0x16, "AND"},           {0x17, "OR"},
        {0x18, "XOR"},          {0x19, "NOT"},          {0x1a, "BYTE"},          {0x1b, "SHL"},
        {0x1c, "SHR"},          {0x1d, "SAR"},          {0x20, "KECCAK256"},     {0x30, "ADDRESS"},
        {0x31, "BALANCE"},      {0x32, "ORIGIN"},       {0x33, "CALLER"},        {0x34, "CALLVALUE"},
        {0x35, "CALLDATALOAD"}, {0x36, "CALLDATASIZE"}, {0x37, "CALLDATACOPY"},  {0x38, "CODESIZE"},
        {0x39, "CODECOPY"},     {0x3a, "GASPRICE"},     {0x3b, "EXTCODESIZE"},   {0x3c, "EXTCODECOPY"},
        {0x3d, "RETURNDATASIZE"}, {0x3e, "RETURNDATACOPY"}, {0x3f, "EXTCODEHASH"}, {0x40, "BLOCKHASH"},
        {0x41, "COINBASE"},     {0x42, "TIMESTAMP"},    {0x43, "NUMBER"},        {0x44, "PREVRANDAO"},
        {0x45, "GASLIMIT"},     {0x46, "CHAINID"},      {0x47, "SELFBALANCE"},   {0x48, "BASEFEE"},
        {0x50, "POP"},          {0x51, "MLOAD"},        {0x52, "MSTORE"},        {0x53, "MSTORE8"},
        {0x54, "SLOAD"},        {0x55, "SSTORE"},       {0x56, "JUMP"},          {0x57, "JUMPI"},
        {0x58, "PC"},           {0x59, "MSIZE"},        {0x5a, "GAS"},           {0x5b, "JUMPDEST"},
        {0x5f, "PUSH0"},        {0xf0, "CREATE"},       {0xf1, "CALL"},          {0xf2, "CALLCODE"},
        {0xf3, "RETURN"},       {0xf4, "DELEGATECALL"}, {0xf5, "CREATE2"},       {0xfa, "STATICCALL"},
        {0xfd, "REVERT"},       {0xfe, "INVALID"},      {0xff, "SELFDESTRUCT"},
    };

    struct Table {
        std::array<std::string, 256> names;
        std::array<Opcode, 256> ops;

        Table() {
            char buf[16];
            for (int b = 0; b < 256; ++b) {
                std::snprintf(buf, sizeof(buf), "UNKNOWN_0x%02X", b);
                names[b] = buf;
            }
            for (const auto& nb : kNamed) names[nb.value] = nb.name;
            for (int n = 1; n <= 32; ++n) names[0x5f + n] = "PUSH" + std::to_string(n);
            for (int n = 1; n <= 16; ++n) {
                names[0x7f + n] = "DUP" + std::to_string(n);
                names[0x8f + n] = "SWAP" + std::to_string(n);
            }
            for (int n = 0; n <= 4; ++n) names[0xa0 + n] = "LOG" + std::to_string(n);
            for (int b = 0; b < 256; ++b) {
                const auto imm = (b >= 0x60 && b <= 0x7f) ? b - 0x5f : 0;
                ops[b] = Opcode{static_cast<std::uint8_t>(b), names[b], static_cast<std::uint8_t>(imm)};
            }
        }
    };

    const Table& table() {
        static const Table t;
        return t;
    }

}  // namespace

const Opcode& opcode(std::uint8_t byte_value) noexcept { return table().ops[byte_value]; }

std::string opcode_table_csv() {
    std::string out = "byte_value,mnemonic,immediate_len\n";
    for (const auto& op : table().ops) {
        out += std::to_string(op.byte_value);
        out += ',';
        out += op.mnemonic;
        out += ',';
        out += std::to_string(op.immediate_len);
        out += '\n';
    }
    return out;
}

OpcodeSequence disassemble(ByteView bytecode, std::string source_id) {
    OpcodeSequence seq;
    seq.source_id = std::move(source_id);
    std::size_t pc = 0;
    while (pc < bytecode.size()) {
        const Opcode& op = opcode(bytecode[pc]);
        const std::size_t available = bytecode.size() - pc - 1;
        const std::size_t take = std::min<std::size_t>(op.immediate_len, available);
        Instruction ins{pc, op, Bytes(bytecode.begin() + static_cast<std::ptrdiff_t>(pc + 1),
                                      bytecode.begin() + static_cast<std::ptrdiff_t>(pc + 1 + take)),
                        take < op.immediate_len};
        seq.instructions.push_back(std::move(ins));
        pc += 1 + take;
    }
    return seq;
}

Bytes reserialize(const OpcodeSequence& seq) {
    Bytes out;
    for (const auto& ins : seq.instructions) {
        out.push_back(ins.opcode.byte_value);
        out.insert(out.end(), ins.immediate.begin(), ins.immediate.end());
    }
    return out;
}

std::string format_listing(const OpcodeSequence& seq) {
    std::string out;
    char offset[24];
    for (const auto& ins : seq.instructions) {
        std::snprintf(offset, sizeof(offset), "%04zx", ins.offset);
        out += offset;
        out += ' ';
        out += ins.opcode.mnemonic;
        if (ins.opcode.immediate_len > 0) {
            out += " 0x";
            out += to_hex(ins.immediate);
        }
        if (ins.truncated) out += " (truncated)";
        out += '\n';
    }
    return out;
}

std::vector<std::string> normalize_sequence(const OpcodeSequence& seq, const NormalizeConfig& cfg) {
    if (cfg.max_len < 1) {
        throw ConfigError("normalize max_len must be >= 1");
    }
    const auto& ins = seq.instructions;
    const std::size_t skip = ins.size() > cfg.max_len ? ins.size() - cfg.max_len : 0;
    std::vector<std::string> tokens;
    tokens.reserve(cfg.max_len);
    for (std::size_t i = skip; i < ins.size(); ++i) tokens.emplace_back(ins[i].opcode.mnemonic);
    tokens.resize(cfg.max_len, cfg.pad_token);
    return tokens;
}

FeatureVector ngram_features(const std::vector<std::string>& tokens, int n_max, std::string_view pad_token) {
    if (n_max != 1 && n_max != 2) {
        throw ConfigError("ngram n_max must be 1 or 2");
    }
    std::map<std::string, double> counts;
    const std::string* prev = nullptr;
    for (const auto& tok : tokens) {
        if (tok == pad_token) {
            prev = nullptr;
            continue;
        }
        counts["uni:" + tok] += 1.0;
        if (n_max == 2 && prev != nullptr) counts["bi:" + *prev + "|" + tok] += 1.0;
        prev = &tok;
    }
    FeatureVector fv;
    fv.values.assign(counts.begin(), counts.end());
    return fv;
}

std::vector<std::uint8_t> occurrence_vector(const OpcodeSequence& seq, const std::vector<std::string>& vocabulary) {
    if (vocabulary.empty()) {
        throw ConfigError("occurrence vocabulary is empty");
    }
    if (std::set<std::string>(vocabulary.begin(), vocabulary.end()).size() != vocabulary.size()) {
        throw ConfigError("occurrence vocabulary contains duplicates");
    }
    std::unordered_set<std::string_view> present;
    for (const auto& ins : seq.instructions) present.insert(ins.opcode.mnemonic);
    std::vector<std::uint8_t> out(vocabulary.size(), 0);
    for (std::size_t i = 0; i < vocabulary.size(); ++i) out[i] = present.contains(vocabulary[i]) ? 1 : 0;
    return out;
}

}  // namespace sentinel::evm
