// Copyright 2026 The Sentinel Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <sentinel/config.hpp>
#include <sentinel/errors.hpp>

#include "../support/fixtures.hpp"

using namespace sentinel;

TEST_CASE("defaults validate") {
    const PipelineConfig cfg;
    CHECK_NOTHROW(cfg.validate());
    CHECK(cfg.normalize.max_len == 600);
    CHECK(cfg.rpc.max_retries == 3);
}

TEST_CASE("parse overrides defaults") {
    const auto cfg = parse_config(R"(# run settings
[pipeline]
seed = 42

[paths]
labels = "data/labels.csv"

[train]
n_trees = 50
positive_class_weight = auto
learning_rate = 0.05

[structure]
max_iterations = 300

[anomaly]
hidden_dims = "8,4"
standardize = false

[rpc]
url = "http://localhost:8545"
max_retries = 5
)");
    CHECK(cfg.seed == 42);
    CHECK(cfg.paths.labels == "data/labels.csv");
    CHECK(cfg.train.n_trees == 50);
    CHECK_FALSE(cfg.train.positive_class_weight);
    CHECK(cfg.train.learning_rate == 0.05);
    CHECK(cfg.structure.max_iterations == 300u);
    CHECK(cfg.fit.hidden_dims == std::vector<int>{8, 4});
    CHECK_FALSE(cfg.fit.standardize);
    CHECK(cfg.rpc.url == "http://localhost:8545");
    CHECK(cfg.rpc.max_retries == 5);
    CHECK(cfg.train.max_depth == gbdt::TrainConfig{}.max_depth);
}

TEST_CASE("format and parse round-trip") {
    PipelineConfig cfg;
    cfg.seed = 7;
    cfg.paths.model = "out/model.json";
    cfg.train.learning_rate = 0.1 + 0.2;  // not exactly representable in short decimal
    cfg.train.positive_class_weight = 3.5;
    cfg.fit.hidden_dims = {6, 3};
    cfg.structure.max_iterations = 12;
    cfg.rpc.timeout = std::chrono::milliseconds{1234};
    cfg.per_block = 4;
    const auto back = parse_config(format_config(cfg));
    CHECK(format_config(back) == format_config(cfg));
    CHECK(back.train.learning_rate == cfg.train.learning_rate);
    CHECK(back.train.positive_class_weight == 3.5);
    CHECK(back.rpc.timeout == std::chrono::milliseconds{1234});

    test::TempDir tmp;
    save_config(cfg, tmp / "sentinel.toml");
    CHECK(format_config(load_config(tmp / "sentinel.toml")) == format_config(cfg));
}

TEST_CASE("apply_seed reaches every module") {
    PipelineConfig cfg;
    cfg.apply_seed(99);
    CHECK(cfg.seed == 99);
    CHECK(cfg.train.rng_seed == 99);
    CHECK(cfg.structure.rng_seed == 99);
    CHECK(cfg.fit.rng_seed == 99);
}

TEST_CASE("errors carry line numbers") {
    const auto line_of = [](std::string_view text) -> std::string {
        try {
            (void)parse_config(text);
        } catch (const ConfigError& e) {
            return e.what();
        }
        return "";
    };
    CHECK(line_of("[bogus]\n").find("line 1") != std::string::npos);
    CHECK(line_of("[train]\n\nn_trees = many\n").find("line 3") != std::string::npos);
    CHECK(line_of("[train]\nunknown = 1\n").find("line 2") != std::string::npos);
    CHECK(line_of("seed = 1\n") != "");
    CHECK(line_of("[train]\nn_trees 5\n").find("line 2") != std::string::npos);
    CHECK_THROWS_AS((void)parse_config("[train]\nlearning_rate = 2\n"), ConfigError);
    CHECK_THROWS_AS((void)load_config("/nonexistent/sentinel.toml"), Error);
}
