// Copyright 2026 The Sentinel Authors
// SPDX-License-Identifier: Apache-2.0

// Acceptance run: one PASS/FAIL line per criterion, nonzero exit when any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <sentinel/anomaly.hpp>
#include <sentinel/bayesnet.hpp>
#include <sentinel/calldata.hpp>
#include <sentinel/errors.hpp>
#include <sentinel/evm_disasm.hpp>
#include <sentinel/features.hpp>
#include <sentinel/gbdt.hpp>
#include <sentinel/ingest.hpp>
#include <sentinel/metrics.hpp>

#include "fixtures.hpp"
#include "golden.hpp"
#include "oracles.hpp"
#include "synthetic.hpp"
// after Eigen: <resolv.h>, pulled in by httplib, defines _res
#include "replay_server.hpp"

using namespace sentinel;

namespace {

struct Outcome {
    bool pass{true};
    std::string detail;

    void require(bool ok, const std::string& what) {
        if (ok) return;
        if (pass) detail = what;
        pass = false;
    }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

// ---------------------------------------------------------------------------- 1

Outcome disassembler() {
    Outcome out;
    const auto t0 = Clock::now();
    const auto fixtures = test::contract_fixtures();
    out.require(fixtures.size() >= 20, "only " + std::to_string(fixtures.size()) + " contract fixtures");
    for (const auto& f : fixtures) {
        const auto code = from_hex(f.code_hex);
        const auto seq = evm::disassemble(code, f.address);
        out.require(evm::format_listing(seq) == f.listing, f.name + ": listing differs from the reference");
        out.require(evm::reserialize(seq) == code, f.name + ": reserialization differs");
    }
    Rng rng{2024};
    for (int trial = 0; trial < 10'000; ++trial) {
        Bytes code(rng.uniform_index(1025));
        for (auto& b : code) b = static_cast<std::uint8_t>(rng.uniform_index(256));
        if (evm::reserialize(evm::disassemble(code)) != code) {
            out.require(false, "random round-trip " + std::to_string(trial) + " failed");
            break;
        }
    }
    const double elapsed = seconds_since(t0);
    out.require(elapsed < 10.0, "took " + std::to_string(elapsed) + " s");
    if (out.pass) out.detail = std::to_string(fixtures.size()) + " listings exact, 10000 round-trips";
    return out;
}

// ---------------------------------------------------------------------------- 2

Outcome normalization() {
    Outcome out;
    for (const std::size_t n : {0, 1, 599, 600, 601, 5000}) {
        // n single-byte instructions; each opcode byte encodes its index so the kept window is visible
        Bytes code(n);
        static const std::uint8_t kOps[] = {0x01, 0x02, 0x03, 0x04, 0x10, 0x11, 0x14, 0x16, 0x17, 0x18, 0x50, 0x5b};
        for (std::size_t i = 0; i < n; ++i) code[i] = kOps[(i * 7 + i / 13) % std::size(kOps)];
        const auto seq = evm::disassemble(code);
        const auto tokens = evm::normalize_sequence(seq);
        out.require(tokens.size() == 600, "length " + std::to_string(n) + " normalized to " + std::to_string(tokens.size()));
        const std::size_t kept = std::min<std::size_t>(n, 600);
        for (std::size_t j = 0; j < kept; ++j) {
            const auto& want = seq.instructions[n - kept + j].opcode.mnemonic;
            if (tokens[j] != want) {
                out.require(false, "length " + std::to_string(n) + ": token " + std::to_string(j) + " is not from the suffix");
                break;
            }
        }
        for (std::size_t j = kept; j < tokens.size(); ++j) {
            if (tokens[j] != "PAD") {
                out.require(false, "length " + std::to_string(n) + ": missing padding");
                break;
            }
        }
    }
    if (out.pass) out.detail = "lengths 0,1,599,600,601,5000 -> 600, suffix kept";
    return out;
}

// ---------------------------------------------------------------------------- 3

Outcome octets() {
    Outcome out;
    calldata::SignatureDirectory dir;
    using calldata::SignatureClass;
    dir.add("0xa9059cbb", "transfer(address,uint256)", SignatureClass::benign);
    dir.add("0x095ea7b3", "approve(address,uint256)", SignatureClass::benign);
    dir.add("0x23b872dd", "transferFrom(address,address,uint256)", SignatureClass::benign);
    dir.add("0x2e1a7d4d", "withdraw(uint256)", SignatureClass::malicious);
    dir.add("0x2e1a7d4d", "withdraw(uint256)", SignatureClass::benign);  // both sets
    dir.add("0x3ccfd60b", "withdraw()", SignatureClass::malicious);
    dir.add("0xdeadbeef", "sweep(address)", SignatureClass::malicious);
    dir.add("0x00000000", "zero()", SignatureClass::unknown);
    dir.add("0x70a08231", "balanceOf(address)", SignatureClass::unknown);

    const std::string zero_word(64, '0');
    const std::string addr_word = std::string(24, '0') + "17aa39cc78e299fa8f1c4986ed742f8e43ac7c05";
    const std::vector<std::string> cases{
        "0x",
        "0xa9",
        "0xa9059cb",
        "0xa9059cbb",
        "0xA9059CBB",
        "0xa9059cbb" + addr_word + zero_word,
        "0x095ea7b3" + addr_word + std::string(64, 'f'),
        "0x23b872dd" + addr_word + addr_word + zero_word,
        "0x2e1a7d4d" + zero_word,             // in both sets: malicious wins
        "0x3ccfd60b",
        "0xdeadbeef" + addr_word,
        "0xdeadbeefa9059cbb",                   // one of each
        "0xa9059cbbdeadbeef2e1a7d4d",
        "0x00000000",                           // valid, neither set
        "0x" + zero_word,                       // eight valid zero chunks
        "0x70a08231" + addr_word,
        "0x12345678",
        "0x1234567890abcdef",
        "0xa9059cbb123",                        // final short chunk
        "0xa9059cbbdeadbe",                     // short chunk resembling a selector
        "0xffffffffa9059cbb3ccfd60b00000000",
        "0xa9059cbb0",
        "0xdeadbeef" + std::string(7, '0'),
        "0x" + std::string(63, 'a'),
        "0x" + std::string("3ccfd60b") + "2e1a7d4d" + "095ea7b3" + "deadbeef" + "a9059cbb" + "00000000" + "1",
    };
    out.require(cases.size() == 25, "fixture suite has " + std::to_string(cases.size()) + " strings");
    for (const auto& hex : cases) {
        const auto f = calldata::octet_features(calldata::CalldataInput::parse(hex), dir);
        const auto o = test::octet_oracle(hex, dir.hex_dic(), dir.mal_dic(), dir.benign_dic());
        const bool same = f.n_octets == o.n_octets && f.valid_octet == o.valid && f.benign_octet == o.benign && f.mal_octet == o.mal;
        out.require(same, "mismatch on " + hex);
    }
    if (out.pass) out.detail = "25 strings equal to the listing oracle";
    return out;
}

// ---------------------------------------------------------------------------- 4

Outcome auc_oracle() {
    Outcome out;
    Rng rng{4};
    double worst = 0.0;
    for (int trial = 0; trial < 200; ++trial) {
        const auto n = 2 + rng.uniform_index(999);
        metrics::ScoredLabels sl;
        const auto levels = 1 + rng.uniform_index(trial % 2 == 0 ? 10 : 100000);  // coarse levels force ties
        for (std::uint64_t i = 0; i < n; ++i) {
            sl.scores.push_back(static_cast<double>(rng.uniform_index(levels)) / static_cast<double>(levels));
            sl.labels.push_back(rng.uniform01() < 0.3 ? 1 : 0);
        }
        sl.labels[0] = 1;
        sl.labels[1] = 0;
        worst = std::max(worst, std::abs(metrics::auc(sl) - test::pairwise_auc(sl.scores, sl.labels)));
    }
    out.require(worst <= 1e-12, "max difference " + std::to_string(worst));
    char buf[96];
    std::snprintf(buf, sizeof(buf), "200 fixtures, max |diff| = %.3g", worst);
    if (out.pass) out.detail = buf;
    return out;
}

// ---------------------------------------------------------------------------- 5

Outcome gbdt_properties() {
    Outcome out;
    const auto t0 = Clock::now();
    test::TempDir tmp;

    // (a) determinism, with row subsampling so the seed matters
    const auto corpus = test::gas_bidding_corpus(600, 0.1, 55);
    const auto rows = features::build_dataset(corpus, {});
    gbdt::TrainConfig cfg;
    cfg.n_trees = 60;
    cfg.row_subsample = 0.8;
    cfg.rng_seed = 17;
    gbdt::save_model(gbdt::train(rows, cfg), tmp / "a.json");
    gbdt::save_model(gbdt::train(rows, cfg), tmp / "b.json");
    out.require(test::slurp(tmp / "a.json") == test::slurp(tmp / "b.json"), "(a) model files differ");

    // (b) separable 1-D data
    const auto sep = test::separable_1d(500, 3);
    gbdt::TrainConfig small;
    small.n_trees = 5;
    const auto sep_model = gbdt::train(sep, small);
    metrics::ScoredLabels sl;
    for (const auto& fv : sep) {
        sl.scores.push_back(gbdt::predict_proba(sep_model, fv));
        sl.labels.push_back(*fv.label);
    }
    out.require(metrics::auc(sl) == 1.0, "(b) training AUC " + std::to_string(metrics::auc(sl)));

    // (c) weight 2 versus a duplicated positive row
    const std::vector<double> margins{0.3, -1.2, 0.0, 2.5, -0.7, 1.1, -2.0, 0.4, 0.9, -0.1};
    const std::vector<int> labels{1, 0, 0, 1, 0, 1, 0, 0, 1, 0};
    std::vector<double> w(10, 1.0);
    std::vector<double> dup_m = margins;
    std::vector<int> dup_y = labels;
    for (std::size_t i = 0; i < 10; ++i) {
        if (labels[i] == 1) {
            w[i] = 2.0;
            dup_m.push_back(margins[i]);
            dup_y.push_back(1);
        }
    }
    const auto weighted = gbdt::gradient_sums(margins, labels, w);
    const auto duplicated = gbdt::gradient_sums(dup_m, dup_y, std::vector<double>(dup_m.size(), 1.0));
    out.require(std::abs(weighted.grad - duplicated.grad) <= 1e-12 && std::abs(weighted.hess - duplicated.hess) <= 1e-12,
                "(c) gradient sums differ");

    // (d) save/load
    const auto model = gbdt::load_model(tmp / "a.json");
    const auto original = gbdt::train(rows, cfg);
    bool exact = true;
    for (const auto& fv : rows) exact = exact && gbdt::predict_proba(model, fv) == gbdt::predict_proba(original, fv);
    out.require(exact, "(d) reloaded predictions differ");

    const double elapsed = seconds_since(t0);
    out.require(elapsed < 30.0, "took " + std::to_string(elapsed) + " s");
    if (out.pass) out.detail = "deterministic, separable AUC 1 in 5 trees, weights = duplicates, exact reload";
    return out;
}

// ---------------------------------------------------------------------------- 6

Outcome end_to_end() {
    Outcome out;
    const auto t0 = Clock::now();
    const auto corpus = test::gas_bidding_corpus(2000, 0.05, 2026);
    const auto rows = features::build_dataset(corpus, {});

    // stratified 75/25 split
    Rng rng{7};
    std::vector<std::size_t> pos;
    std::vector<std::size_t> neg;
    for (std::size_t i = 0; i < rows.size(); ++i) (*rows[i].label == 1 ? pos : neg).push_back(i);
    rng.shuffle(std::span{pos});
    rng.shuffle(std::span{neg});
    std::vector<FeatureVector> train_rows;
    std::vector<FeatureVector> test_rows;
    for (const auto* cls : {&pos, &neg}) {
        const auto n_test = static_cast<std::size_t>(std::llround(0.25 * static_cast<double>(cls->size())));
        for (std::size_t k = 0; k < cls->size(); ++k) ((k < n_test) ? test_rows : train_rows).push_back(rows[(*cls)[k]]);
    }

    gbdt::TrainConfig cfg;
    cfg.rng_seed = 7;
    const auto model = gbdt::train(train_rows, cfg);
    metrics::ScoredLabels sl;
    for (const auto& fv : test_rows) {
        sl.scores.push_back(gbdt::predict_proba(model, fv));
        sl.labels.push_back(*fv.label);
    }
    const double test_auc = metrics::auc(sl);
    double gas_share = 0.0;
    for (const auto& [name, v] : gbdt::feature_importance(model)) {
        if (features::is_gas_feature(name)) gas_share += v;
    }
    const double elapsed = seconds_since(t0);
    out.require(test_auc >= 0.90, "test AUC " + std::to_string(test_auc));
    out.require(gas_share >= 0.5, "gas importance share " + std::to_string(gas_share));
    out.require(elapsed < 60.0, "took " + std::to_string(elapsed) + " s");
    char buf[128];
    std::snprintf(buf, sizeof(buf), "test AUC %.4f, gas importance %.3f, %zu test rows", test_auc, gas_share, test_rows.size());
    if (out.pass) out.detail = buf;
    return out;
}

// ---------------------------------------------------------------------------- 7

test::ArcList arc_list(const bayesnet::Dag& dag) {
    test::ArcList out;
    for (const auto& [p, c] : dag.arcs()) out.emplace_back(static_cast<int>(dag.index_of(p)), static_cast<int>(dag.index_of(c)));
    return out;
}

// Learns a structure and checks it scores as well as the best enumerated DAG.
bayesnet::Dag learn_and_compare(const std::vector<std::vector<int>>& rows, const std::vector<std::string>& names, Outcome& out,
                                const std::string& what) {
    const auto data = test::binary_dataset(rows, names);
    const auto dag = bayesnet::learn_structure(data);
    const int n = static_cast<int>(names.size());
    const auto dags = test::all_dags(n);
    double best = -INFINITY;
    test::ArcList best_arcs;
    for (const auto& arcs : dags) {
        const double s = test::bic_oracle(rows, n, arcs);
        if (s > best) {
            best = s;
            best_arcs = arcs;
        }
    }
    const double learned = test::bic_oracle(rows, n, arc_list(dag));
    out.require(std::abs(learned - best) <= 1e-9 * std::abs(best), what + ": learned score below the enumerated optimum");
    out.require(test::skeleton(arc_list(dag)) == test::skeleton(best_arcs), what + ": skeleton differs from the enumerated optimum");
    return dag;
}

Outcome bayesnet_structures() {
    Outcome out;
    out.require(test::all_dags(3).size() == 25, "enumeration does not yield 25 DAGs");

    const auto empty = learn_and_compare(test::independent_coins(2000, 3, 1), {"A", "B", "C"}, out, "coins");
    out.require(empty.arc_count() == 0, "coins: learned " + std::to_string(empty.arc_count()) + " arcs");

    const auto pair = learn_and_compare(test::copy_pair(1000, 2), {"A", "B"}, out, "copy pair");
    out.require(pair.arc_count() == 1, "copy pair: learned " + std::to_string(pair.arc_count()) + " arcs");

    const auto chain = learn_and_compare(test::noisy_chain(3000, 0.1, 3), {"X", "Y", "Z"}, out, "chain");
    out.require(test::skeleton(arc_list(chain)) == std::set<std::pair<int, int>>{{0, 1}, {1, 2}}, "chain: wrong skeleton");

    Rng rng{500};
    int cyclic = 0;
    for (int run = 0; run < 500; ++run) {
        const int cols = 2 + static_cast<int>(rng.uniform_index(7));
        std::vector<std::vector<int>> rows(20 + rng.uniform_index(200), std::vector<int>(static_cast<std::size_t>(cols)));
        const double p = rng.uniform(0.1, 0.9);
        for (auto& row : rows) {
            for (auto& v : row) v = rng.uniform01() < p ? 1 : 0;
        }
        // correlate some columns so arcs actually appear
        for (auto& row : rows) {
            for (std::size_t c = 1; c < row.size(); ++c) {
                if (rng.uniform01() < 0.5) row[c] = row[c - 1];
            }
        }
        std::vector<std::string> names;
        for (int c = 0; c < cols; ++c) names.push_back("v" + std::to_string(c));
        bayesnet::StructureConfig cfg;
        cfg.max_parents = 1 + static_cast<int>(rng.uniform_index(3));
        cfg.rng_seed = static_cast<std::uint64_t>(run);
        const auto dag = bayesnet::learn_structure(test::binary_dataset(rows, names), cfg);
        if (!test::acyclic(cols, arc_list(dag))) ++cyclic;
    }
    out.require(cyclic == 0, std::to_string(cyclic) + " of 500 fuzz runs produced a cycle");
    if (out.pass) out.detail = "empty / 1 arc / chain skeleton match enumeration of 25 DAGs; 500 fuzz runs acyclic";
    return out;
}

// ---------------------------------------------------------------------------- 8

Outcome anomaly_checks() {
    Outcome out;
    Rng rng{8};
    Eigen::MatrixXd x(8, 5);
    for (Eigen::Index r = 0; r < x.rows(); ++r) {
        for (Eigen::Index c = 0; c < x.cols(); ++c) x(r, c) = rng.normal();
    }
    auto model = anomaly::make_autoencoder({5, 4, 2, 4, 5}, 8);
    const auto lg = anomaly::ae_loss_and_gradient(model, x);
    const Eigen::VectorXd theta = anomaly::flatten_parameters(model);
    constexpr double eps = 1e-5;
    double worst = 0.0;
    for (Eigen::Index i = 0; i < theta.size(); ++i) {
        Eigen::VectorXd t = theta;
        t(i) += eps;
        anomaly::set_parameters(model, t);
        const double up = anomaly::ae_loss(model, x);
        t(i) -= 2 * eps;
        anomaly::set_parameters(model, t);
        const double down = anomaly::ae_loss(model, x);
        const double numeric = (up - down) / (2 * eps);
        const double denom = std::max({std::abs(numeric), std::abs(lg.gradient(i)), 1e-8});
        worst = std::max(worst, std::abs(numeric - lg.gradient(i)) / denom);
    }
    anomaly::set_parameters(model, theta);
    out.require(worst < 1e-4, "gradient relative error " + std::to_string(worst));

    Eigen::MatrixXd data(200, 6);
    for (Eigen::Index r = 0; r < data.rows(); ++r) {
        for (Eigen::Index c = 0; c < data.cols(); ++c) data(r, c) = rng.normal() * static_cast<double>(c + 1);
    }
    const auto pca = anomaly::pca_fit(data, 4);
    const double ortho = (pca.components * pca.components.transpose() - Eigen::MatrixXd::Identity(4, 4)).cwiseAbs().maxCoeff();
    out.require(ortho <= 1e-8, "PCA orthonormality error " + std::to_string(ortho));
    const auto full = anomaly::pca_fit(data, 6);
    double recon = 0.0;
    for (Eigen::Index r = 0; r < data.rows(); ++r) {
        const Eigen::VectorXd row = data.row(r).transpose();
        recon = std::max(recon, (anomaly::pca_inverse(full, anomaly::pca_project(full, row)) - row).cwiseAbs().maxCoeff());
    }
    out.require(recon <= 1e-8, "k=d reconstruction error " + std::to_string(recon));

    // benign rows near a 3-dimensional subspace, outliers off it
    const Eigen::VectorXd center = Eigen::VectorXd::Zero(6);
    Eigen::MatrixXd benign = test::gaussian_cluster(400, center, 1.0, 81);
    benign.col(3) = benign.col(0) + 0.05 * benign.col(3);
    benign.col(4) = benign.col(1) - benign.col(0) + 0.05 * benign.col(4);
    benign.col(5) = benign.col(2) + 0.05 * benign.col(5);
    anomaly::FitConfig cfg;
    cfg.epochs = 150;
    cfg.learning_rate = 5e-3;
    cfg.hidden_dims = {4, 3};
    cfg.rng_seed = 8;
    const auto ae = anomaly::ae_fit(benign, cfg);
    Eigen::VectorXd far(6);
    far << 0.0, 0.0, 0.0, 4.0, -4.0, 4.0;
    const Eigen::MatrixXd outliers = test::gaussian_cluster(100, far, 1.0, 82);
    const double ratio = anomaly::ae_score(ae, outliers).mean() / anomaly::ae_score(ae, benign).mean();
    out.require(ratio > 5.0, "cluster score ratio " + std::to_string(ratio));

    char buf[160];
    std::snprintf(buf, sizeof(buf), "grad rel err %.2g, ortho %.2g, recon %.2g, score ratio %.1f", worst, ortho, recon, ratio);
    if (out.pass) out.detail = buf;
    return out;
}

// ---------------------------------------------------------------------------- 9

Outcome signature_statistics() {
    Outcome out;
    Rng rng{9};
    const auto selector = [](std::uint64_t v) {
        char buf[11];
        std::snprintf(buf, sizeof(buf), "%08llx", static_cast<unsigned long long>(v & 0xffffffffULL));
        return std::string{buf};
    };
    std::vector<std::string> shared;
    for (int i = 0; i < 30; ++i) shared.push_back(selector(0x10000000ULL + 7919ULL * static_cast<std::uint64_t>(i)));
    std::vector<std::string> benign_only;
    for (int i = 0; i < 40; ++i) benign_only.push_back(selector(0x20000000ULL + 104729ULL * static_cast<std::uint64_t>(i)));
    std::set<std::string> planted;
    for (int i = 0; i < 7; ++i) planted.insert("0x" + selector(0xc0000000ULL + 15485863ULL * static_cast<std::uint64_t>(i)));

    std::vector<calldata::LabeledCalldata> rows;
    const auto args = [&rng] {
        std::string s;
        for (int w = 0; w < static_cast<int>(rng.uniform_index(3)); ++w) {
            char word[65];
            std::snprintf(word, sizeof(word), "%064llx", static_cast<unsigned long long>(rng.next()));
            s += word;
        }
        return s;
    };
    for (int i = 0; i < 3000; ++i) {
        const bool pick_shared = rng.uniform01() < 0.5;
        const auto& pool = pick_shared ? shared : benign_only;
        rows.push_back({calldata::CalldataInput::parse("0x" + pool[rng.uniform_index(pool.size())] + args()), 0});
    }
    for (int i = 0; i < 3000; ++i) rows.push_back({calldata::CalldataInput::parse("0x" + std::string(rng.uniform_index(8), 'a')), 0});
    for (int i = 0; i < 400; ++i) {
        std::string body;
        if (rng.uniform01() < 0.6) {
            body = shared[rng.uniform_index(shared.size())];
        } else {
            auto it = planted.begin();
            std::advance(it, static_cast<std::ptrdiff_t>(rng.uniform_index(planted.size())));
            body = it->substr(2);
        }
        rows.push_back({calldata::CalldataInput::parse("0x" + body + args()), 1});
    }
    // every planted selector appears at least once
    for (const auto& s : planted) rows.push_back({calldata::CalldataInput::parse(s), 1});
    rng.shuffle(std::span{rows});

    const auto stats = calldata::signature_stats(rows, calldata::SignatureDirectory{});
    out.require(stats.malicious_only_selectors == planted,
                "found " + std::to_string(stats.malicious_only_selectors.size()) + " malicious-only selectors, planted 7");
    if (out.pass) out.detail = "malicious-only set equals the 7 planted selectors";
    return out;
}

// ---------------------------------------------------------------------------- 10

Outcome ingest_replay() {
    Outcome out;
    {
        test::ReplayServer server;
        server.load(test::fixture_dir() / "rpc" / "responses.json");
        ingest::RpcEndpoint ep;
        ep.url = server.url();
        const ingest::RpcClient client{ep};
        const auto golden = nlohmann::json::parse(test::slurp(test::fixture_dir() / "rpc" / "golden.json"));
        const auto bad = test::golden_mismatches(client, golden);
        out.require(bad.empty(), bad.empty() ? "" : "golden mismatch: " + bad.front());
        const auto counts = server.method_counts();
        for (const char* m : {"eth_getTransactionByHash", "eth_getTransactionReceipt", "eth_getCode", "eth_getBlockByNumber"}) {
            out.require(counts.contains(m), std::string{m} + " never exercised");
        }
    }
    {
        test::ReplayServer server;
        server.add("eth_blockNumber", nlohmann::json::array(), "0x112a880");
        server.script({503, 429, 502});
        ingest::RpcEndpoint ep;
        ep.url = server.url();
        ep.initial_backoff = std::chrono::milliseconds{25};
        const ingest::RpcClient client{ep};
        const auto result = client.call("eth_blockNumber", nlohmann::json::array());
        out.require(result == "0x112a880", "flaky endpoint: wrong result");
        const auto t = server.arrivals();
        out.require(t.size() == 4, "flaky endpoint: " + std::to_string(t.size()) + " requests, expected 4");
        if (t.size() == 4) {
            using std::chrono::milliseconds;
            out.require(t[1] - t[0] >= milliseconds{25} && t[2] - t[1] >= milliseconds{50} && t[3] - t[2] >= milliseconds{100},
                        "flaky endpoint: backoff gaps too short");
        }
        server.script({503, 503, 503, 503});
        const ingest::RpcClient exhausted{ep};
        bool threw = false;
        try {
            (void)exhausted.call("eth_blockNumber", nlohmann::json::array());
        } catch (const RpcError&) {
            threw = true;
        }
        out.require(threw && exhausted.attempts() == 4, "exhausted retries did not raise RpcError after 4 attempts");
    }
    {
        ingest::LabelStore store;
        const std::string a = "0x" + std::string(40, 'a');
        const std::string b = "0x" + std::string(40, 'b');
        (void)ingest::import_labels_text(store, "address," + a + ",malicious,feed-1\naddress," + b + ",malicious,feed-1\n", "x", 1);
        const auto second = ingest::import_labels_text(store, "address," + a + ",benign,feed-2\n", "y", 2);
        (void)ingest::import_labels_text(store, "address," + a + ",malicious,feed-3\n", "z", 3);
        out.require(second.conflicts.size() == 1, "conflict not reported");
        out.require(!store.find(ingest::LabelKind::address, a), "conflicting id still labeled");
        out.require(store.is_malicious(ingest::LabelKind::address, b), "unrelated id lost");
        out.require(store.quarantined().size() == 1, "quarantine size wrong");
    }
    if (out.pass) out.detail = "golden replay equal, backoff 25/50/100 ms honored, conflicting id quarantined";
    return out;
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"disassembler listings and round-trip", disassembler},
        {"normalization to 600 tokens", normalization},
        {"octet features vs listing oracle", octets},
        {"AUC vs pairwise statistic", auc_oracle},
        {"GBDT determinism, separability, weights, reload", gbdt_properties},
        {"end-to-end synthetic detection", end_to_end},
        {"Bayesian network structures", bayesnet_structures},
        {"autoencoder gradient, PCA, cluster scores", anomaly_checks},
        {"malicious-only selectors", signature_statistics},
        {"ingest replay, retry, quarantine", ingest_replay},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto t0 = Clock::now();
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string{"exception: "} + e.what()};
        }
        const double elapsed = seconds_since(t0);
        std::printf("%s %2zu %-48s %7.2fs  %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), elapsed, o.detail.c_str());
        std::fflush(stdout);
        if (!o.pass) ++failures;
    }
    return failures == 0 ? 0 : 1;
}
