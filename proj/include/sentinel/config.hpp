// Copyright 2026 The Sentinel Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include <sentinel/anomaly.hpp>
#include <sentinel/bayesnet.hpp>
#include <sentinel/evm_disasm.hpp>
#include <sentinel/gbdt.hpp>
#include <sentinel/ingest.hpp>

namespace sentinel {

struct PipelinePaths {
    std::string labels;     // label CSV
    std::string directory;  // selector directory CSV
    std::string records;    // raw records JSON lines
    std::string dataset;    // feature dataset JSON lines
    std::string model;      // trained GBDT
    std::string reports;    // default --out
};

//! Everything a pipeline run is parameterized by. The text form is a flat TOML subset:
//! `[section]` headers, `key = value` lines, '#' comments, optional double quotes.
//!
//!   [pipeline]  seed
//!   [paths]     labels directory records dataset model reports
//!   [normalize] max_len pad_token
//!   [train]     n_trees max_depth learning_rate min_child_weight lambda_l2
//!               positive_class_weight (number or "auto") row_subsample test_fraction
//!   [structure] max_parents max_iterations (number or "auto") vocabulary_size
//!   [anomaly]   epochs batch_size learning_rate standardize hidden_dims ("8,4" or "auto")
//!               pca_components
//!   [rpc]       url timeout_ms max_retries max_concurrent_requests initial_backoff_ms
//!   [sampling]  per_block
struct PipelineConfig {
    std::uint64_t seed{0};
    PipelinePaths paths;
    evm::NormalizeConfig normalize;
    gbdt::TrainConfig train;
    double test_fraction{0.25};
    bayesnet::StructureConfig structure;
    std::size_t vocabulary_size{20};
    anomaly::FitConfig fit;
    int pca_components{2};
    ingest::RpcEndpoint rpc;
    std::size_t per_block{1};

    //! Pushes `seed` into the per-module configs.
    void apply_seed(std::uint64_t s);
    //! Range checks for every section; throws ConfigError.
    void validate() const;
};

//! Throws ConfigError with the line number on unknown sections/keys or bad values.
[[nodiscard]] PipelineConfig parse_config(std::string_view text, PipelineConfig base = {});
[[nodiscard]] std::string format_config(const PipelineConfig& cfg);

[[nodiscard]] PipelineConfig load_config(const std::filesystem::path& path, PipelineConfig base = {});
void save_config(const PipelineConfig& cfg, const std::filesystem::path& path);

}  // namespace sentinel
