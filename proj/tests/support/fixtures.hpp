// Copyright 2026 The Sentinel Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

namespace sentinel::test {

inline std::filesystem::path fixture_dir() { return SENTINEL_FIXTURE_DIR; }

inline std::string slurp(const std::filesystem::path& p) {
    std::ifstream in{p, std::ios::binary};
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct ContractFixture {
    std::string name;
    std::string address;
    std::string code_hex;  // eth_getCode result
    std::string listing;   // reference disassembly
};

inline std::vector<ContractFixture> contract_fixtures() {
    const auto dir = fixture_dir() / "contracts";
    const auto manifest = nlohmann::json::parse(slurp(dir / "manifest.json"));
    std::vector<ContractFixture> out;
    for (const auto& entry : manifest) {
        ContractFixture f;
        f.name = entry.at("name").get<std::string>();
        f.address = entry.at("address").get<std::string>();
        f.code_hex = nlohmann::json::parse(slurp(dir / (f.name + ".getCode.json"))).at("result").get<std::string>();
        f.listing = slurp(dir / (f.name + ".listing"));
        out.push_back(std::move(f));
    }
    return out;
}

//! Fresh, empty directory under the system temp dir.
class TempDir {
  public:
    TempDir() {
        std::random_device rd;
        path_ = std::filesystem::temp_directory_path() / ("sentinel-test-" + std::to_string(rd()) + std::to_string(rd()));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    [[nodiscard]] const std::filesystem::path& path() const { return path_; }
    [[nodiscard]] std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

  private:
    std::filesystem::path path_;
};

}  // namespace sentinel::test
