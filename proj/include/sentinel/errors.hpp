// Copyright 2026 The Sentinel Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace sentinel {

//! Base of every domain error raised by the library.
//! Each error carries a stable name and a one-line remedy that the CLI prints.
class Error : public std::runtime_error {
  public:
    Error(std::string name, const std::string& message, std::string remedy)
        : std::runtime_error(message), name_(std::move(name)), remedy_(std::move(remedy)) {}

    [[nodiscard]] const std::string& name() const noexcept { return name_; }
    [[nodiscard]] const std::string& remedy() const noexcept { return remedy_; }

  private:
    std::string name_;
    std::string remedy_;
};

#define SENTINEL_DEFINE_ERROR(Type, Remedy)                                   \
    class Type : public Error {                                               \
      public:                                                                 \
        explicit Type(const std::string& message) : Error(#Type, message, Remedy) {} \
    };

SENTINEL_DEFINE_ERROR(InvalidCalldata, "calldata must be \"0x\" followed by hex digits")
SENTINEL_DEFINE_ERROR(DirectoryParseError, "fix the row: selector,function_signature,class with an 8-hex-digit selector")
SENTINEL_DEFINE_ERROR(RecordMismatch, "pair each transaction with the receipt of the same hash")
SENTINEL_DEFINE_ERROR(SchemaError, "make every row carry the same feature names as the schema manifest")
SENTINEL_DEFINE_ERROR(DegenerateLabels, "provide rows from both classes (label 0 and label 1)")
SENTINEL_DEFINE_ERROR(EmptyDataset, "provide at least one row")
SENTINEL_DEFINE_ERROR(ModelFormatError, "regenerate the model file with this version of sentinel")
SENTINEL_DEFINE_ERROR(DimensionError, "check the number of columns against the fitted model")
SENTINEL_DEFINE_ERROR(DivergenceError, "lower the learning rate or enable standardization")
SENTINEL_DEFINE_ERROR(ConfigError, "check the configuration value against its documented range")
SENTINEL_DEFINE_ERROR(NotFound, "check the hash or wait until the transaction is mined")
SENTINEL_DEFINE_ERROR(RpcError, "check --rpc-url / SENTINEL_RPC_URL and that the node is reachable")
SENTINEL_DEFINE_ERROR(RpcSchemaError, "the node returned an unexpected object; check that it speaks Ethereum JSON-RPC")
SENTINEL_DEFINE_ERROR(InvalidAddress, "addresses are 0x followed by 40 hex digits")
SENTINEL_DEFINE_ERROR(InvalidHash, "transaction hashes are 0x followed by 64 hex digits")
SENTINEL_DEFINE_ERROR(IoError, "check that the path exists and is readable/writable")

#undef SENTINEL_DEFINE_ERROR

}  // namespace sentinel
