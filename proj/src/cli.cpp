// Copyright 2026 The Sentinel Authors
// SPDX-License-Identifier: Apache-2.0

#include <sentinel/cli.hpp>

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include <CLI11.hpp>
#include <Eigen/Dense>

#include <sentinel/anomaly.hpp>
#include <sentinel/bayesnet.hpp>
#include <sentinel/calldata.hpp>
#include <sentinel/config.hpp>
#include <sentinel/errors.hpp>
#include <sentinel/evm_disasm.hpp>
#include <sentinel/features.hpp>
#include <sentinel/gbdt.hpp>
#include <sentinel/ingest.hpp>
#include <sentinel/metrics.hpp>
#include <sentinel/random.hpp>
#include <sentinel/report.hpp>

namespace sentinel::cli {

namespace fs = std::filesystem;

namespace {

    //! Raised for argument combinations CLI11 cannot express; mapped to exit code 2.
    struct UsageError : std::runtime_error {
        using std::runtime_error::runtime_error;
    };

    struct GlobalOptions {
        std::string config;
        std::string rpc_url;
        std::optional<std::uint64_t> seed;
        bool debug{false};
        std::string out;
    };

    struct Context {
        GlobalOptions global;
        PipelineConfig cfg;
        std::ostream& out;
        std::ostream& err;

        [[nodiscard]] fs::path out_dir() const {
            const fs::path dir = !global.out.empty() ? fs::path{global.out} : fs::path{cfg.paths.reports};
            if (dir.empty()) throw UsageError("this subcommand writes files; pass --out DIR");
            std::error_code ec;
            fs::create_directories(dir, ec);
            if (ec) throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());
            return dir;
        }
    };

    std::string pick(const std::string& flag, const std::string& from_config, std::string_view what) {
        const auto& v = flag.empty() ? from_config : flag;
        if (v.empty()) throw UsageError(std::string{"missing "} + std::string{what});
        return v;
    }

    fs::path require_input(const std::string& path) {
        if (!fs::exists(path)) throw IoError("input path does not exist: " + path);
        return path;
    }

    std::string fmt(double v) {
        char buf[32];
        const auto res = std::to_chars(buf, buf + sizeof(buf), v);
        return {buf, res.ptr};
    }

    Eigen::MatrixXd to_matrix(const DenseDataset& d) {
        Eigen::MatrixXd m(static_cast<Eigen::Index>(d.rows()), static_cast<Eigen::Index>(d.cols()));
        for (std::size_t r = 0; r < d.rows(); ++r) {
            for (std::size_t c = 0; c < d.cols(); ++c) m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = d.at(r, c);
        }
        return m;
    }

    std::vector<int> labels_or_empty(std::span<const FeatureVector> rows) {
        std::vector<int> labels;
        for (const auto& r : rows) {
            if (!r.label) return {};
            labels.push_back(*r.label);
        }
        return labels;
    }

    void require_schema(const std::vector<std::string>& model_schema, const std::vector<std::string>& data_schema) {
        if (!model_schema.empty() && model_schema != data_schema) {
            throw SchemaError("dataset columns differ from the columns the model was fitted on");
        }
    }

    // ------------------------------------------------------------------ ingest

    struct IngestOptions {
        std::string labels;
        std::string directory;
        std::string source;
        std::size_t per_block{0};
        std::size_t recent_blocks{0};
        std::optional<std::int64_t> observed_at;
    };

    int cmd_ingest(Context& ctx, const IngestOptions& opt) {
        const auto labels_path = require_input(pick(opt.labels, ctx.cfg.paths.labels, "--labels"));
        const std::string directory_path = opt.directory.empty() ? ctx.cfg.paths.directory : opt.directory;
        if (!directory_path.empty()) require_input(directory_path);
        const auto out_dir = ctx.out_dir();

        auto endpoint = ctx.cfg.rpc;
        auto url = ingest::resolve_rpc_url(ctx.global.rpc_url.empty()
                                               ? (endpoint.url.empty() ? std::nullopt : std::optional{endpoint.url})
                                               : std::optional{ctx.global.rpc_url});
        if (!url) throw ConfigError("no RPC endpoint: pass --rpc-url, set [rpc] url, or export SENTINEL_RPC_URL");
        endpoint.url = *url;
        const ingest::RpcClient client{endpoint};

        const auto observed_at = opt.observed_at.value_or(
            std::chrono::duration_cast<std::chrono::seconds>(std::chrono::system_clock::now().time_since_epoch()).count());
        const std::string source = opt.source.empty() ? labels_path.stem().string() : opt.source;

        ingest::LabelStore store;
        const auto summary = ingest::import_labels(store, labels_path, source, observed_at);
        std::string import_report = "kind,id,status\n";
        for (const auto& [kind, id] : summary.conflicts) {
            import_report += std::string{ingest::to_string(kind)} + "," + id + ",quarantined\n";
        }
        for (const auto& s : summary.skipped) ctx.err << "skipped " << s << "\n";
        report::write_text(out_dir / "label_conflicts.csv", import_report);
        ctx.out << "labels: " << summary.added << " added, " << summary.duplicates << " duplicate, "
                << summary.conflicts.size() << " quarantined, " << summary.skipped.size() << " skipped\n";

        std::vector<std::string> malicious_hashes;
        std::vector<std::string> benign_hashes;
        std::set<std::string> malicious_addresses;
        for (const auto& [key, entry] : store.snapshot()) {
            if (key.first == ingest::LabelKind::tx_hash) {
                (entry.label == ingest::Label::malicious ? malicious_hashes : benign_hashes).push_back(key.second);
            } else if (entry.label == ingest::Label::malicious) {
                malicious_addresses.insert(key.second);
            }
        }

        std::vector<features::LabeledRecord> records;
        std::set<std::string> seen;
        const auto add_records = [&](std::span<const std::string> hashes, int label) {
            for (auto& [tx, rc] : ingest::fetch_many(client, hashes)) {
                if (!seen.insert(tx.hash).second) continue;
                records.push_back({std::move(tx), std::move(rc), label});
            }
        };
        add_records(malicious_hashes, 1);

        std::vector<std::uint64_t> blocks;
        for (const auto& r : records) blocks.push_back(r.tx.block_number);
        const std::size_t per_block = opt.per_block ? opt.per_block : ctx.cfg.per_block;
        std::vector<std::string> notes;
        auto sampled = ingest::sample_benign(client, blocks, per_block, ctx.cfg.seed, store, &notes);

        if (opt.recent_blocks > 0) {
            const auto head = static_cast<std::uint64_t>(parse_quantity(client.call("eth_blockNumber", nlohmann::json::array()).get<std::string>()));
            std::vector<std::uint64_t> recent;
            for (std::uint64_t i = 0; i < opt.recent_blocks && i <= head; ++i) recent.push_back(head - i);
            auto more = ingest::sample_benign(client, recent, per_block, ctx.cfg.seed + 1, store, &notes);
            sampled.insert(sampled.end(), more.begin(), more.end());
        }
        sampled.insert(sampled.end(), benign_hashes.begin(), benign_hashes.end());

        const auto before = records.size();
        add_records(sampled, 0);
        // benign draws touching a flagged address are dropped
        const auto flagged = [&](const features::LabeledRecord& r) {
            return r.label == 0 && (malicious_addresses.contains(r.tx.from_addr) ||
                                    (r.tx.to_addr && malicious_addresses.contains(*r.tx.to_addr)));
        };
        const auto dropped = std::count_if(records.begin() + static_cast<std::ptrdiff_t>(before), records.end(), flagged);
        records.erase(std::remove_if(records.begin(), records.end(), flagged), records.end());
        if (dropped > 0) notes.push_back(std::to_string(dropped) + " sampled transactions touch a malicious address; dropped");
        // any transaction touching a flagged address counts as malicious
        for (auto& r : records) {
            if (malicious_addresses.contains(r.tx.from_addr) || (r.tx.to_addr && malicious_addresses.contains(*r.tx.to_addr))) {
                r.label = 1;
            }
        }

        ingest::save_records(records, out_dir / "records.jsonl");

        // contract code per class, for the opcode networks
        std::set<std::pair<int, std::string>> code_targets;
        for (const auto& r : records) {
            if (r.receipt.to_is_contract && r.tx.to_addr) code_targets.emplace(r.label, *r.tx.to_addr);
        }
        for (const auto& a : malicious_addresses) code_targets.emplace(1, a);
        std::string codes = "label,address,bytecode\n";
        for (const auto& [label, address] : code_targets) {
            const auto code = ingest::fetch_code(client, address);
            if (code.empty()) continue;
            codes += std::to_string(label) + "," + address + ",0x" + to_hex(code) + "\n";
        }
        report::write_text(out_dir / "codes.csv", codes);

        if (!directory_path.empty()) {
            const auto dir = calldata::load_directory(directory_path);
            const auto rows = features::build_dataset(records, dir, &notes);
            ingest::persist_dataset(rows, out_dir / "dataset.jsonl");
        }
        std::string notes_text;
        for (const auto& n : notes) notes_text += n + "\n";
        report::write_text(out_dir / "ingest_notes.txt", notes_text);

        const auto n_mal = std::count_if(records.begin(), records.end(), [](const auto& r) { return r.label == 1; });
        ctx.out << "records: " << records.size() << " (" << n_mal << " malicious, " << records.size() - static_cast<std::size_t>(n_mal)
                << " benign)\n";
        return kExitOk;
    }

    // ------------------------------------------------------------------ disasm

    struct DisasmOptions {
        std::string hex;
        std::string address;
        std::string file;
        bool normalize{false};
        std::optional<std::size_t> max_len;
        bool opcode_table{false};
    };

    int cmd_disasm(Context& ctx, const DisasmOptions& opt) {
        std::string text;
        if (opt.opcode_table) {
            text = evm::opcode_table_csv();
        } else {
            const int sources = !opt.hex.empty() + !opt.address.empty() + !opt.file.empty();
            if (sources != 1) throw UsageError("give exactly one of --hex, --address, --file");
            Bytes code;
            std::string source_id;
            if (!opt.hex.empty()) {
                try {
                    code = from_hex(opt.hex);
                } catch (const std::invalid_argument&) {
                    throw InvalidCalldata("--hex is not valid hex: " + opt.hex);
                }
                source_id = "hex";
            } else if (!opt.file.empty()) {
                auto content = report::read_text(require_input(opt.file));
                std::string compact;
                for (const char c : content) {
                    if (!std::isspace(static_cast<unsigned char>(c))) compact += c;
                }
                try {
                    code = from_hex(compact);
                } catch (const std::invalid_argument&) {
                    throw InvalidCalldata("file does not hold hex bytecode: " + opt.file);
                }
                source_id = opt.file;
            } else {
                auto endpoint = ctx.cfg.rpc;
                auto url = ingest::resolve_rpc_url(ctx.global.rpc_url.empty()
                                                       ? (endpoint.url.empty() ? std::nullopt : std::optional{endpoint.url})
                                                       : std::optional{ctx.global.rpc_url});
                if (!url) throw ConfigError("no RPC endpoint: pass --rpc-url, set [rpc] url, or export SENTINEL_RPC_URL");
                endpoint.url = *url;
                const ingest::RpcClient client{endpoint};
                code = ingest::fetch_code(client, opt.address);
                source_id = ingest::normalize_address(opt.address);
            }
            const auto seq = evm::disassemble(code, source_id);
            if (opt.normalize) {
                auto ncfg = ctx.cfg.normalize;
                if (opt.max_len) ncfg.max_len = *opt.max_len;
                for (const auto& token : evm::normalize_sequence(seq, ncfg)) text += token + "\n";
            } else {
                text = evm::format_listing(seq);
            }
        }
        ctx.out << text;
        if (!ctx.global.out.empty()) {
            report::write_text(fs::path{ctx.global.out} / (opt.opcode_table ? "opcode_table.csv" : "disasm.txt"), text);
        }
        return kExitOk;
    }

    // ------------------------------------------------------------------ features

    int cmd_features(Context& ctx, const std::string& records_flag, const std::string& directory_flag) {
        const auto records_path = require_input(pick(records_flag, ctx.cfg.paths.records, "--records"));
        const std::string directory_path = directory_flag.empty() ? ctx.cfg.paths.directory : directory_flag;
        const auto out_dir = ctx.out_dir();

        calldata::SignatureDirectory dir;
        if (!directory_path.empty()) {
            dir = calldata::load_directory(require_input(directory_path));
        } else {
            ctx.err << "note: no selector directory; octet features will count nothing\n";
        }
        const auto records = ingest::load_records(records_path);
        if (records.empty()) throw EmptyDataset("no records in " + records_path.string());

        std::vector<std::string> warnings;
        const auto rows = features::build_dataset(records, dir, &warnings);
        for (const auto& w : warnings) ctx.err << "warning: " << w << "\n";
        ingest::persist_dataset(rows, out_dir / "dataset.jsonl");

        std::vector<calldata::LabeledCalldata> calls;
        for (const auto& r : records) calls.push_back({r.tx.input, r.label});
        const auto stats = calldata::signature_stats(calls, dir);

        std::string hist = "class,selector,rows\n";
        std::string lengths = "class,input_length,rows\n";
        std::string proportions = "class,bin,rows\n";
        for (const auto& [name, cls] : {std::pair{"benign", &stats.benign}, std::pair{"malicious", &stats.malicious}}) {
            for (const auto& [sel, n] : cls->selector_histogram) hist += std::string{name} + "," + sel + "," + std::to_string(n) + "\n";
            for (const auto& [len, n] : cls->length_histogram) lengths += std::string{name} + "," + std::to_string(len) + "," + std::to_string(n) + "\n";
            for (std::size_t b = 0; b < calldata::kProportionBins; ++b) {
                proportions += std::string{name} + "," + std::to_string(b) + "," + std::to_string(cls->valid_proportion_histogram[b]) + "\n";
            }
        }
        std::string only = "selector,signature\n";
        for (const auto& sel : stats.malicious_only_selectors) {
            const auto* sig = dir.lookup(sel);
            only += sel + "," + (sig ? *sig : std::string{}) + "\n";
        }
        report::write_text(out_dir / "selector_histogram.csv", hist);
        report::write_text(out_dir / "input_length_histogram.csv", lengths);
        report::write_text(out_dir / "valid_proportion_histogram.csv", proportions);
        report::write_text(out_dir / "malicious_only_selectors.csv", only);

        std::vector<std::pair<std::string, double>> bars;
        for (const auto& [sel, n] : stats.malicious.selector_histogram) bars.emplace_back(sel, static_cast<double>(n));
        std::stable_sort(bars.begin(), bars.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
        if (bars.size() > 20) bars.resize(20);
        report::write_text(out_dir / "selector_histogram.svg",
                           report::svg_bar_chart({"Selectors in malicious transactions", "Transactions", "", {}, {}}, bars));

        ctx.out << "rows: " << rows.size() << ", features: " << (rows.empty() ? 0 : rows.front().size())
                << ", malicious-only selectors: " << stats.malicious_only_selectors.size() << "\n";
        return kExitOk;
    }

    // ------------------------------------------------------------------ train / eval

    struct TrainOptions {
        std::string dataset;
        std::optional<double> test_fraction;
        std::optional<int> n_trees;
        std::optional<int> max_depth;
        std::optional<double> learning_rate;
    };

    //! Stratified split: each class contributes round(fraction * n) rows to the test side,
    //! keeping at least one row of each class for training.
    std::pair<std::vector<FeatureVector>, std::vector<FeatureVector>> split(std::vector<FeatureVector> rows, double fraction,
                                                                            std::uint64_t seed) {
        Rng rng{seed};
        std::vector<FeatureVector> train;
        std::vector<FeatureVector> test;
        for (const int cls : {0, 1}) {
            std::vector<std::size_t> idx;
            for (std::size_t i = 0; i < rows.size(); ++i) {
                if (rows[i].label == cls) idx.push_back(i);
            }
            rng.shuffle(std::span{idx});
            auto n_test = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(idx.size())));
            if (n_test >= idx.size()) n_test = idx.empty() ? 0 : idx.size() - 1;
            std::sort(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(n_test));
            std::sort(idx.begin() + static_cast<std::ptrdiff_t>(n_test), idx.end());
            for (std::size_t k = 0; k < idx.size(); ++k) (k < n_test ? test : train).push_back(rows[idx[k]]);
        }
        return {std::move(train), std::move(test)};
    }

    int cmd_train(Context& ctx, const TrainOptions& opt) {
        const auto dataset_path = require_input(pick(opt.dataset, ctx.cfg.paths.dataset, "--dataset"));
        const auto out_dir = ctx.out_dir();
        auto tcfg = ctx.cfg.train;
        if (opt.n_trees) tcfg.n_trees = *opt.n_trees;
        if (opt.max_depth) tcfg.max_depth = *opt.max_depth;
        if (opt.learning_rate) tcfg.learning_rate = *opt.learning_rate;
        const double fraction = opt.test_fraction.value_or(ctx.cfg.test_fraction);
        if (!(fraction >= 0.0 && fraction < 1.0)) throw ConfigError("--test-fraction must lie in [0, 1)");
        tcfg.validate();

        auto rows = ingest::load_dataset(dataset_path);
        if (rows.empty()) throw EmptyDataset("no rows in " + dataset_path.string());
        for (const auto& r : rows) {
            if (!r.label) throw SchemaError("training rows need a label");
        }
        auto [train_rows, test_rows] = split(std::move(rows), fraction, ctx.cfg.seed);

        gbdt::TrainLog log;
        const auto model = gbdt::train(train_rows, tcfg, &log);
        gbdt::save_model(model, out_dir / "model.json");
        ingest::persist_dataset(train_rows, out_dir / "train.jsonl");
        ingest::persist_dataset(test_rows, out_dir / "test.jsonl");

        std::string log_csv = "round,loss,shrink_steps\n";
        for (std::size_t k = 0; k < log.loss.size(); ++k) {
            const int shrinks = k == 0 || k - 1 >= log.shrink_steps.size() ? 0 : log.shrink_steps[k - 1];
            log_csv += std::to_string(k) + "," + fmt(log.loss[k]) + "," + std::to_string(shrinks) + "\n";
        }
        report::write_text(out_dir / "train_log.csv", log_csv);
        ctx.out << "trained " << model.trees.size() << " trees on " << train_rows.size() << " rows (" << test_rows.size()
                << " held out), positive weight " << fmt(log.positive_class_weight) << "\n";
        return kExitOk;
    }

    int cmd_eval(Context& ctx, const std::string& model_flag, const std::string& dataset_flag) {
        const auto model_path = require_input(pick(model_flag, ctx.cfg.paths.model, "--model"));
        const auto dataset_path = require_input(pick(dataset_flag, ctx.cfg.paths.dataset, "--dataset"));
        const auto out_dir = ctx.out_dir();

        const auto model = gbdt::load_model(model_path);
        const auto rows = ingest::load_dataset(dataset_path);
        if (rows.empty()) throw EmptyDataset("no rows in " + dataset_path.string());

        metrics::ScoredLabels sl;
        std::string scores_csv = "tx_hash,score,label\n";
        for (const auto& r : rows) {
            if (!r.label) throw SchemaError("evaluation rows need a label");
            const double p = gbdt::predict_proba(model, r);
            sl.scores.push_back(p);
            sl.labels.push_back(*r.label);
            scores_csv += r.tx_hash + "," + fmt(p) + "," + std::to_string(*r.label) + "\n";
        }
        report::ReportInputs in;
        in.roc = metrics::roc_curve(sl);
        in.auc = metrics::auc(sl);
        std::vector<double> thresholds;
        for (int i = 0; i <= 100; ++i) thresholds.push_back(i / 100.0);
        in.pr = metrics::precision_recall(sl, thresholds);
        in.importance = gbdt::feature_importance(model);
        report::emit_report(in, out_dir);
        report::write_text(out_dir / "scores.csv", scores_csv);

        const auto cm = metrics::confusion_matrix(sl, 0.5);
        std::string summary = "metric,value\n";
        summary += "auc," + fmt(*in.auc) + "\n";
        summary += "rows," + std::to_string(rows.size()) + "\n";
        summary += "tp," + std::to_string(cm.tp) + "\nfp," + std::to_string(cm.fp) + "\ntn," + std::to_string(cm.tn) +
                   "\nfn," + std::to_string(cm.fn) + "\n";
        report::write_text(out_dir / "metrics.csv", summary);
        ctx.out << "AUC " << fmt(*in.auc) << " on " << rows.size() << " rows\n";
        return kExitOk;
    }

    // ------------------------------------------------------------------ bayesnet

    int cmd_bayesnet(Context& ctx, const std::string& codes_flag, std::optional<std::size_t> vocab_flag,
                     std::optional<int> max_parents_flag) {
        const auto codes_path = require_input(pick(codes_flag, "", "--codes"));
        const auto out_dir = ctx.out_dir();
        const auto vocab_size = vocab_flag.value_or(ctx.cfg.vocabulary_size);
        auto scfg = ctx.cfg.structure;
        if (max_parents_flag) scfg.max_parents = *max_parents_flag;

        std::array<std::vector<evm::OpcodeSequence>, 2> by_class;
        std::istringstream in{report::read_text(codes_path)};
        std::size_t line_no = 0;
        for (std::string line; std::getline(in, line);) {
            ++line_no;
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (line.empty() || line.front() == '#' || line.rfind("label,", 0) == 0) continue;
            const auto c1 = line.find(',');
            const auto c2 = line.find(',', c1 == std::string::npos ? c1 : c1 + 1);
            if (c1 == std::string::npos || c2 == std::string::npos) {
                throw SchemaError("codes line " + std::to_string(line_no) + ": expected label,address,bytecode");
            }
            const auto label = line.substr(0, c1);
            if (label != "0" && label != "1") throw SchemaError("codes line " + std::to_string(line_no) + ": label must be 0 or 1");
            Bytes code;
            try {
                code = from_hex(line.substr(c2 + 1));
            } catch (const std::invalid_argument&) {
                throw SchemaError("codes line " + std::to_string(line_no) + ": bytecode is not hex");
            }
            by_class[label == "1"].push_back(evm::disassemble(code, line.substr(c1 + 1, c2 - c1 - 1)));
        }
        if (by_class[0].empty() || by_class[1].empty()) {
            throw DegenerateLabels("opcode networks need contracts from both classes");
        }

        std::vector<evm::OpcodeSequence> all = by_class[0];
        all.insert(all.end(), by_class[1].begin(), by_class[1].end());
        const auto vocabulary = bayesnet::top_k_vocabulary(all, vocab_size);
        std::string vocab_text;
        for (const auto& v : vocabulary) vocab_text += v + "\n";
        report::write_text(out_dir / "vocabulary.txt", vocab_text);

        std::array<std::optional<bayesnet::Dag>, 2> dags;
        for (const int cls : {0, 1}) {
            const auto data = bayesnet::occurrence_dataset(by_class[cls], vocabulary);
            dags[cls] = bayesnet::learn_structure(data, scfg);
            const std::string name = cls ? "malicious" : "benign";
            report::write_text(out_dir / ("dag_" + name + ".csv"), bayesnet::arcs_csv(*dags[cls]));
            report::write_text(out_dir / ("dag_" + name + ".dot"), bayesnet::to_dot(*dags[cls], name));
        }
        const auto diff = bayesnet::dag_diff(*dags[0], *dags[1]);
        report::write_text(out_dir / "dag_diff.csv", bayesnet::diff_csv(diff));
        ctx.out << "benign arcs: " << dags[0]->arc_count() << ", malicious arcs: " << dags[1]->arc_count()
                << ", added " << diff.added.size() << ", removed " << diff.removed.size() << ", reversed "
                << diff.reversed.size() << "\n";
        return kExitOk;
    }

    // ------------------------------------------------------------------ anomaly

    struct AnomalyOptions {
        std::string dataset;
        std::string model;
        std::string pca;
        std::string space{"latent"};
        std::optional<int> components;
        std::optional<int> epochs;
    };

    int cmd_anomaly_fit(Context& ctx, const AnomalyOptions& opt) {
        const auto dataset_path = require_input(pick(opt.dataset, ctx.cfg.paths.dataset, "--dataset"));
        const auto out_dir = ctx.out_dir();
        const auto rows = ingest::load_dataset(dataset_path);
        if (rows.empty()) throw EmptyDataset("no rows in " + dataset_path.string());

        std::vector<FeatureVector> benign;
        for (const auto& r : rows) {
            if (!r.label || *r.label == 0) benign.push_back(r);
        }
        if (benign.size() < 2) throw EmptyDataset("need at least two benign (or unlabeled) rows to fit");
        const auto dense = to_dense(benign, false);
        const Eigen::MatrixXd x = to_matrix(dense);

        auto fcfg = ctx.cfg.fit;
        if (opt.epochs) fcfg.epochs = *opt.epochs;
        anomaly::FitLog log;
        auto ae = anomaly::ae_fit(x, fcfg, &log);
        ae.feature_schema = dense.schema;
        anomaly::save_autoencoder(ae, out_dir / "autoencoder.json");

        const int k = opt.components.value_or(ctx.cfg.pca_components);
        auto pca = anomaly::pca_fit(x, std::min<Eigen::Index>(k, x.cols()));
        pca.feature_schema = dense.schema;
        anomaly::save_pca(pca, out_dir / "pca.json");

        std::string log_csv = "epoch,loss\n";
        for (std::size_t e = 0; e < log.epoch_loss.size(); ++e) log_csv += std::to_string(e) + "," + fmt(log.epoch_loss[e]) + "\n";
        report::write_text(out_dir / "fit_log.csv", log_csv);
        ctx.out << "fitted on " << benign.size() << " rows; final loss "
                << (log.epoch_loss.empty() ? std::string{"n/a"} : fmt(log.epoch_loss.back())) << "\n";
        return kExitOk;
    }

    int cmd_anomaly_score(Context& ctx, const AnomalyOptions& opt) {
        const auto dataset_path = require_input(pick(opt.dataset, ctx.cfg.paths.dataset, "--dataset"));
        const auto model_path = require_input(pick(opt.model, "", "--model"));
        const auto out_dir = ctx.out_dir();
        const auto ae = anomaly::load_autoencoder(model_path);
        const auto rows = ingest::load_dataset(dataset_path);
        if (rows.empty()) throw EmptyDataset("no rows in " + dataset_path.string());
        const auto dense = to_dense(rows, false);
        require_schema(ae.feature_schema, dense.schema);
        const Eigen::VectorXd scores = anomaly::ae_score(ae, to_matrix(dense));

        std::string csv = "tx_hash,score,label\n";
        std::array<double, 2> sum{};
        std::array<std::size_t, 2> count{};
        for (std::size_t i = 0; i < rows.size(); ++i) {
            const double s = scores(static_cast<Eigen::Index>(i));
            csv += rows[i].tx_hash + "," + fmt(s) + "," + (rows[i].label ? std::to_string(*rows[i].label) : "") + "\n";
            if (rows[i].label) {
                sum[*rows[i].label] += s;
                ++count[*rows[i].label];
            }
        }
        report::write_text(out_dir / "anomaly_scores.csv", csv);
        ctx.out << "scored " << rows.size() << " rows";
        for (const int c : {0, 1}) {
            if (count[c]) ctx.out << "; mean " << (c ? "malicious" : "benign") << " score " << fmt(sum[c] / static_cast<double>(count[c]));
        }
        ctx.out << "\n";
        return kExitOk;
    }

    int cmd_anomaly_project(Context& ctx, const AnomalyOptions& opt) {
        const auto dataset_path = require_input(pick(opt.dataset, ctx.cfg.paths.dataset, "--dataset"));
        const auto out_dir = ctx.out_dir();
        const auto rows = ingest::load_dataset(dataset_path);
        if (rows.empty()) throw EmptyDataset("no rows in " + dataset_path.string());
        const auto dense = to_dense(rows, false);
        const Eigen::MatrixXd x = to_matrix(dense);

        Eigen::MatrixXd coords;
        std::string title;
        if (opt.space == "raw") {
            const auto pca = anomaly::load_pca(require_input(pick(opt.pca, "", "--pca")));
            require_schema(pca.feature_schema, dense.schema);
            coords = anomaly::pca_project(pca, x);
            title = "Transactions projected on PCA";
        } else {
            const auto ae = anomaly::load_autoencoder(require_input(pick(opt.model, "", "--model")));
            require_schema(ae.feature_schema, dense.schema);
            coords = anomaly::ae_encode(ae, x);
            title = "Transactions in the autoencoder latent space";
        }
        report::Projection p;
        for (Eigen::Index r = 0; r < coords.rows(); ++r) {
            std::vector<double> row(static_cast<std::size_t>(coords.cols()));
            for (Eigen::Index c = 0; c < coords.cols(); ++c) row[static_cast<std::size_t>(c)] = coords(r, c);
            p.coords.push_back(std::move(row));
        }
        p.labels = labels_or_empty(rows);
        report::ReportInputs in;
        in.projection = std::move(p);
        in.projection_title = title;
        report::emit_report(in, out_dir);
        ctx.out << "projected " << rows.size() << " rows onto " << coords.cols() << " dimensions\n";
        return kExitOk;
    }

    // ------------------------------------------------------------------ report

    struct ReportOptions {
        std::string roc;
        std::string pr;
        std::string importance;
        std::string projection;
        std::optional<double> auc;
    };

    int cmd_report(Context& ctx, const ReportOptions& opt) {
        if (opt.roc.empty() && opt.pr.empty() && opt.importance.empty() && opt.projection.empty()) {
            throw UsageError("give at least one of --roc, --pr, --importance, --projection");
        }
        const auto out_dir = ctx.out_dir();
        report::ReportInputs in;
        if (!opt.roc.empty()) {
            in.roc = metrics::parse_roc_csv(report::read_text(require_input(opt.roc)));
            in.auc = opt.auc;
        }
        if (!opt.pr.empty()) in.pr = metrics::parse_pr_csv(report::read_text(require_input(opt.pr)));
        if (!opt.importance.empty()) in.importance = report::parse_importance_csv(report::read_text(require_input(opt.importance)));
        if (!opt.projection.empty()) in.projection = report::parse_projection_csv(report::read_text(require_input(opt.projection)));
        for (const auto& p : report::render_svgs(in, out_dir)) ctx.out << p.string() << "\n";
        return kExitOk;
    }

    void print_error(std::ostream& err, const Error& e, bool debug) {
        err << "error: " << e.name() << ": " << e.what() << "\n";
        err << "  remedy: " << e.remedy() << "\n";
        if (debug) {
            try {
                std::rethrow_if_nested(e);
            } catch (const std::exception& inner) {
                err << "  caused by: " << inner.what() << "\n";
            }
        }
    }

}  // namespace

int run_command(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Malicious Ethereum transaction detection toolkit", "sentinel"};
    app.set_help_all_flag("--help-all", "Show help for every subcommand");
    app.require_subcommand(1);
    app.fallthrough();
    app.footer(
        "Settings precedence: built-in defaults < --config file < command-line flags.\n"
        "RPC endpoint: --rpc-url, then [rpc] url in the config, then SENTINEL_RPC_URL.\n"
        "Exit codes: 0 success, 1 domain error, 2 usage error.");

    GlobalOptions global;
    app.add_option("--config", global.config, "Pipeline configuration file (TOML-like)");
    app.add_option("--rpc-url", global.rpc_url, "JSON-RPC endpoint (overrides config and SENTINEL_RPC_URL)");
    app.add_option("--seed", global.seed, "Seed for every randomized step");
    app.add_flag("--debug", global.debug, "Print extra diagnostics on failure");
    app.add_option("--out", global.out, "Output directory");

    std::function<int(Context&)> action;

    IngestOptions ing;
    auto* ingest_cmd = app.add_subcommand("ingest", "Fetch labeled transactions and block-matched benign samples");
    ingest_cmd->add_option("--labels", ing.labels, "Label CSV (kind,id,label,source)");
    ingest_cmd->add_option("--directory", ing.directory, "Selector directory CSV; also writes dataset.jsonl");
    ingest_cmd->add_option("--source", ing.source, "Source name for rows with an empty source column");
    ingest_cmd->add_option("--per-block", ing.per_block, "Benign transactions drawn per malicious-bearing block")->check(CLI::PositiveNumber);
    ingest_cmd->add_option("--recent-blocks", ing.recent_blocks, "Also sample from the latest N blocks");
    ingest_cmd->add_option("--observed-at", ing.observed_at, "Label timestamp in unix seconds (default: now)");
    ingest_cmd->callback([&] { action = [&](Context& c) { return cmd_ingest(c, ing); }; });

    DisasmOptions dis;
    auto* disasm_cmd = app.add_subcommand("disasm", "Disassemble EVM bytecode");
    disasm_cmd->add_option("--hex", dis.hex, "Bytecode as hex");
    disasm_cmd->add_option("--address", dis.address, "Fetch the code of a contract over RPC");
    disasm_cmd->add_option("--file", dis.file, "File holding hex bytecode");
    disasm_cmd->add_flag("--normalize", dis.normalize, "Print the padded/truncated token sequence");
    disasm_cmd->add_option("--max-len", dis.max_len, "Normalized length")->check(CLI::PositiveNumber);
    disasm_cmd->add_flag("--opcode-table", dis.opcode_table, "Print the opcode table as CSV");
    disasm_cmd->callback([&] { action = [&](Context& c) { return cmd_disasm(c, dis); }; });

    std::string feat_records;
    std::string feat_directory;
    auto* features_cmd = app.add_subcommand("features", "Build the feature dataset and signature statistics");
    features_cmd->add_option("--records", feat_records, "records.jsonl written by ingest");
    features_cmd->add_option("--directory", feat_directory, "Selector directory CSV");
    features_cmd->callback([&] { action = [&](Context& c) { return cmd_features(c, feat_records, feat_directory); }; });

    TrainOptions tr;
    auto* train_cmd = app.add_subcommand("train", "Train the boosted-tree classifier");
    train_cmd->add_option("--dataset", tr.dataset, "Feature dataset (JSON lines)");
    train_cmd->add_option("--test-fraction", tr.test_fraction, "Held-out fraction per class");
    train_cmd->add_option("--n-trees", tr.n_trees, "Boosting rounds");
    train_cmd->add_option("--max-depth", tr.max_depth, "Tree depth");
    train_cmd->add_option("--learning-rate", tr.learning_rate, "Shrinkage");
    train_cmd->callback([&] { action = [&](Context& c) { return cmd_train(c, tr); }; });

    std::string eval_model;
    std::string eval_dataset;
    auto* eval_cmd = app.add_subcommand("eval", "ROC, precision/recall and feature importance for a model");
    eval_cmd->add_option("--model", eval_model, "model.json written by train");
    eval_cmd->add_option("--dataset", eval_dataset, "Labeled dataset, e.g. test.jsonl from train");
    eval_cmd->callback([&] { action = [&](Context& c) { return cmd_eval(c, eval_model, eval_dataset); }; });

    std::string bn_codes;
    std::optional<std::size_t> bn_vocab;
    std::optional<int> bn_parents;
    auto* bn_cmd = app.add_subcommand("bayesnet", "Learn per-class opcode networks and their difference");
    bn_cmd->add_option("--codes", bn_codes, "codes.csv (label,address,bytecode) written by ingest");
    bn_cmd->add_option("--vocabulary-size", bn_vocab, "Number of opcodes modeled");
    bn_cmd->add_option("--max-parents", bn_parents, "Parent limit per node");
    bn_cmd->callback([&] { action = [&](Context& c) { return cmd_bayesnet(c, bn_codes, bn_vocab, bn_parents); }; });

    AnomalyOptions an;
    auto* anomaly_cmd = app.add_subcommand("anomaly", "Autoencoder and PCA anomaly scoring");
    anomaly_cmd->require_subcommand(1);
    auto* fit_cmd = anomaly_cmd->add_subcommand("fit", "Fit the autoencoder and PCA on benign rows");
    fit_cmd->add_option("--dataset", an.dataset, "Feature dataset");
    fit_cmd->add_option("--components", an.components, "PCA components")->check(CLI::PositiveNumber);
    fit_cmd->add_option("--epochs", an.epochs, "Training epochs")->check(CLI::PositiveNumber);
    fit_cmd->callback([&] { action = [&](Context& c) { return cmd_anomaly_fit(c, an); }; });
    auto* score_cmd = anomaly_cmd->add_subcommand("score", "Reconstruction error per row");
    score_cmd->add_option("--dataset", an.dataset, "Feature dataset");
    score_cmd->add_option("--model", an.model, "autoencoder.json");
    score_cmd->callback([&] { action = [&](Context& c) { return cmd_anomaly_score(c, an); }; });
    auto* project_cmd = anomaly_cmd->add_subcommand("project", "Two-dimensional projection for plotting");
    project_cmd->add_option("--dataset", an.dataset, "Feature dataset");
    project_cmd->add_option("--model", an.model, "autoencoder.json (latent space)");
    project_cmd->add_option("--pca", an.pca, "pca.json (raw feature space)");
    project_cmd->add_option("--space", an.space, "latent or raw")->check(CLI::IsMember({"latent", "raw"}));
    project_cmd->callback([&] { action = [&](Context& c) { return cmd_anomaly_project(c, an); }; });

    ReportOptions rep;
    auto* report_cmd = app.add_subcommand("report", "Render stored CSV curves to SVG");
    report_cmd->add_option("--roc", rep.roc, "roc.csv");
    report_cmd->add_option("--pr", rep.pr, "pr.csv");
    report_cmd->add_option("--importance", rep.importance, "feature_importance.csv");
    report_cmd->add_option("--projection", rep.projection, "projection.csv");
    report_cmd->add_option("--auc", rep.auc, "AUC shown in the ROC title");
    report_cmd->callback([&] { action = [&](Context& c) { return cmd_report(c, rep); }; });

    try {
        std::vector<std::string> reversed{args.rbegin(), args.rend()};
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return kExitUsage;
    }

    Context ctx{global, PipelineConfig{}, out, err};
    try {
        if (!global.config.empty()) {
            ctx.cfg = load_config(require_input(global.config));
        }
        if (global.seed) ctx.cfg.apply_seed(*global.seed);
        ctx.cfg.validate();
        if (!action) throw UsageError("missing subcommand");
        return action(ctx);
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\n\n" << app.help();
        return kExitUsage;
    } catch (const Error& e) {
        print_error(err, e, global.debug);
        return kExitDomainError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        if (global.debug) err << "  (unexpected " << typeid(e).name() << ")\n";
        return kExitDomainError;
    }
}

}  // namespace sentinel::cli
