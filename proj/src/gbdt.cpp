// Copyright 2026 The Sentinel Authors
// SPDX-License-Identifier: Apache-2.0

#include <sentinel/gbdt.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include <sentinel/errors.hpp>
#include <sentinel/random.hpp>

namespace sentinel::gbdt {

using nlohmann::json;

namespace {

    constexpr int kMaxShrinkSteps = 40;

    // log(1 + e^x) without overflow.
    double softplus(double x) noexcept {
        return x > 0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
    }

    double split_threshold(double lo, double hi) noexcept {
        const double mid = lo + (hi - lo) / 2.0;
        return mid > lo ? mid : hi;
    }

    struct SplitCandidate {
        int feature{-1};
        double threshold{0.0};
        double gain{0.0};
    };

    struct NodeStats {
        double grad{0.0};
        double hess{0.0};
    };

    // Column-major view with per-feature row orderings, built once per training run.
    struct Columns {
        std::size_t n{0};
        std::size_t d{0};
        std::vector<double> values;              // d x n
        std::vector<std::vector<std::uint32_t>> order;  // per feature, rows by ascending value

        explicit Columns(const DenseDataset& data) : n(data.rows()), d(data.cols()), values(n * d), order(d) {
            for (std::size_t r = 0; r < n; ++r) {
                for (std::size_t c = 0; c < d; ++c) values[c * n + r] = data.at(r, c);
            }
            for (std::size_t c = 0; c < d; ++c) {
                auto& idx = order[c];
                idx.resize(n);
                std::iota(idx.begin(), idx.end(), 0U);
                const double* col = &values[c * n];
                std::stable_sort(idx.begin(), idx.end(), [col](auto a, auto b) { return col[a] < col[b]; });
            }
        }

        [[nodiscard]] double at(std::size_t r, std::size_t c) const { return values[c * n + r]; }
    };

    class TreeBuilder {
      public:
        TreeBuilder(const Columns& cols, const TrainConfig& cfg) : cols_(cols), cfg_(cfg) {}

        // node_of[i] < 0 excludes row i (not sampled this round).
        Tree build(std::span<const double> grad, std::span<const double> hess, std::vector<int> node_of) {
            Tree tree;
            tree.nodes.emplace_back();
            std::vector<NodeStats> stats(1);
            for (std::size_t i = 0; i < cols_.n; ++i) {
                if (node_of[i] < 0) continue;
                stats[0].grad += grad[i];
                stats[0].hess += hess[i];
            }

            std::vector<int> level{0};
            for (int depth = 0; depth < cfg_.max_depth && !level.empty(); ++depth) {
                const auto best = find_splits(grad, hess, node_of, level, stats, tree.nodes.size());
                std::vector<int> next;
                for (std::size_t k = 0; k < level.size(); ++k) {
                    const int id = level[k];
                    const auto& cand = best[k];
                    if (cand.feature < 0 || !(cand.gain > 0.0)) continue;
                    const int left = static_cast<int>(tree.nodes.size());
                    tree.nodes.emplace_back();
                    tree.nodes.emplace_back();
                    stats.resize(tree.nodes.size());
                    auto& node = tree.nodes[static_cast<std::size_t>(id)];
                    node.feature = cand.feature;
                    node.threshold = cand.threshold;
                    node.gain = cand.gain;
                    node.default_left = true;
                    node.left = left;
                    node.right = left + 1;
                    next.push_back(left);
                    next.push_back(left + 1);
                }
                if (next.empty()) break;
                // Route rows of the nodes that split and accumulate child statistics.
                for (std::size_t i = 0; i < cols_.n; ++i) {
                    const int id = node_of[i];
                    if (id < 0) continue;
                    const auto& node = tree.nodes[static_cast<std::size_t>(id)];
                    if (node.is_leaf()) continue;
                    const double v = cols_.at(i, static_cast<std::size_t>(node.feature));
                    const int child = v < node.threshold ? node.left : node.right;
                    node_of[i] = child;
                    stats[static_cast<std::size_t>(child)].grad += grad[i];
                    stats[static_cast<std::size_t>(child)].hess += hess[i];
                }
                level = std::move(next);
            }

            for (std::size_t id = 0; id < tree.nodes.size(); ++id) {
                auto& node = tree.nodes[id];
                if (node.is_leaf()) node.weight = -stats[id].grad / (stats[id].hess + cfg_.lambda_l2);
            }
            return tree;
        }

      private:
        std::vector<SplitCandidate> find_splits(std::span<const double> grad, std::span<const double> hess,
                                                const std::vector<int>& node_of, const std::vector<int>& level,
                                                const std::vector<NodeStats>& stats, std::size_t node_count) const {
            std::vector<int> slot(node_count, -1);
            for (std::size_t k = 0; k < level.size(); ++k) slot[static_cast<std::size_t>(level[k])] = static_cast<int>(k);

            std::vector<SplitCandidate> best(level.size());
            std::vector<double> parent_score(level.size());
            for (std::size_t k = 0; k < level.size(); ++k) {
                const auto& s = stats[static_cast<std::size_t>(level[k])];
                parent_score[k] = s.grad * s.grad / (s.hess + cfg_.lambda_l2);
            }

            std::vector<NodeStats> running(level.size());
            std::vector<double> last(level.size());
            std::vector<char> has_last(level.size());
            const double lambda = cfg_.lambda_l2;
            const double mcw = cfg_.min_child_weight;

            for (std::size_t f = 0; f < cols_.d; ++f) {
                std::fill(running.begin(), running.end(), NodeStats{});
                std::fill(has_last.begin(), has_last.end(), 0);
                const double* col = &cols_.values[f * cols_.n];
                for (const auto i : cols_.order[f]) {
                    const int id = node_of[i];
                    if (id < 0) continue;
                    const int k = slot[static_cast<std::size_t>(id)];
                    if (k < 0) continue;
                    const double v = col[i];
                    auto& run = running[static_cast<std::size_t>(k)];
                    if (has_last[static_cast<std::size_t>(k)] && v != last[static_cast<std::size_t>(k)]) {
                        const auto& total = stats[static_cast<std::size_t>(id)];
                        const double gl = run.grad;
                        const double hl = run.hess;
                        const double gr = total.grad - gl;
                        const double hr = total.hess - hl;
                        if (hl >= mcw && hr >= mcw) {
                            const double gain = 0.5 * (gl * gl / (hl + lambda) + gr * gr / (hr + lambda) -
                                                       parent_score[static_cast<std::size_t>(k)]);
                            auto& b = best[static_cast<std::size_t>(k)];
                            if (gain > b.gain) {
                                b.feature = static_cast<int>(f);
                                b.threshold = split_threshold(last[static_cast<std::size_t>(k)], v);
                                b.gain = gain;
                            }
                        }
                    }
                    run.grad += grad[i];
                    run.hess += hess[i];
                    last[static_cast<std::size_t>(k)] = v;
                    has_last[static_cast<std::size_t>(k)] = 1;
                }
            }
            return best;
        }

        const Columns& cols_;
        const TrainConfig& cfg_;
    };

    std::vector<int> sample_rows(std::size_t n, double ratio, Rng& rng) {
        std::vector<int> node_of(n, 0);
        if (ratio >= 1.0) return node_of;
        const auto keep = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(ratio * static_cast<double>(n))));
        std::vector<std::uint32_t> idx(n);
        std::iota(idx.begin(), idx.end(), 0U);
        for (std::size_t i = 0; i < keep; ++i) {
            const auto j = i + static_cast<std::size_t>(rng.uniform_index(n - i));
            std::swap(idx[i], idx[j]);
        }
        std::fill(node_of.begin(), node_of.end(), -1);
        for (std::size_t i = 0; i < keep; ++i) node_of[idx[i]] = 0;
        return node_of;
    }

    json tree_to_json(const GbdtModel& model, const Tree& tree, int id) {
        const auto& node = tree.nodes[static_cast<std::size_t>(id)];
        if (node.is_leaf()) return json{{"leaf", node.weight}};
        return json{{"feature", model.feature_schema[static_cast<std::size_t>(node.feature)]},
                    {"threshold", node.threshold},
                    {"default", node.default_left ? "left" : "right"},
                    {"gain", node.gain},
                    {"left", tree_to_json(model, tree, node.left)},
                    {"right", tree_to_json(model, tree, node.right)}};
    }

    int tree_from_json(const json& j, const std::vector<std::string>& schema, Tree& tree, int depth) {
        if (depth > 64) throw ModelFormatError("tree nesting too deep");
        const int id = static_cast<int>(tree.nodes.size());
        tree.nodes.emplace_back();
        if (j.contains("leaf")) {
            tree.nodes[static_cast<std::size_t>(id)].weight = j.at("leaf").get<double>();
            return id;
        }
        const auto name = j.at("feature").get<std::string>();
        const auto it = std::find(schema.begin(), schema.end(), name);
        if (it == schema.end()) throw ModelFormatError("tree splits on '" + name + "', which is not in the schema");
        const auto def = j.at("default").get<std::string>();
        if (def != "left" && def != "right") throw ModelFormatError("default branch must be left or right");
        TreeNode node;
        node.feature = static_cast<int>(it - schema.begin());
        node.threshold = j.at("threshold").get<double>();
        node.default_left = def == "left";
        node.gain = j.value("gain", 0.0);
        node.left = tree_from_json(j.at("left"), schema, tree, depth + 1);
        node.right = tree_from_json(j.at("right"), schema, tree, depth + 1);
        tree.nodes[static_cast<std::size_t>(id)] = node;
        return id;
    }

}  // namespace

void TrainConfig::validate() const {
    if (n_trees < 1) throw ConfigError("n_trees must be >= 1");
    if (max_depth < 0) throw ConfigError("max_depth must be >= 0");
    if (!(learning_rate > 0.0 && learning_rate <= 1.0)) throw ConfigError("learning_rate must be in (0, 1]");
    if (!(min_child_weight >= 0.0)) throw ConfigError("min_child_weight must be >= 0");
    if (!(lambda_l2 >= 0.0)) throw ConfigError("lambda_l2 must be >= 0");
    if (positive_class_weight && !(*positive_class_weight > 0.0)) throw ConfigError("positive_class_weight must be > 0");
    if (!(row_subsample > 0.0 && row_subsample <= 1.0)) throw ConfigError("row_subsample must be in (0, 1]");
}

double Tree::leaf_value(std::span<const double> row) const {
    int id = 0;
    while (true) {
        const auto& node = nodes[static_cast<std::size_t>(id)];
        if (node.is_leaf()) return node.weight;
        const double v = row[static_cast<std::size_t>(node.feature)];
        if (std::isnan(v)) {
            id = node.default_left ? node.left : node.right;
        } else {
            id = v < node.threshold ? node.left : node.right;
        }
    }
}

int Tree::depth() const {
    std::vector<std::pair<int, int>> stack{{0, 0}};
    int deepest = 0;
    while (!stack.empty()) {
        const auto [id, d] = stack.back();
        stack.pop_back();
        deepest = std::max(deepest, d);
        const auto& node = nodes[static_cast<std::size_t>(id)];
        if (!node.is_leaf()) {
            stack.emplace_back(node.left, d + 1);
            stack.emplace_back(node.right, d + 1);
        }
    }
    return deepest;
}

double sigmoid(double margin) noexcept {
    const double p = margin >= 0 ? 1.0 / (1.0 + std::exp(-margin)) : std::exp(margin) / (1.0 + std::exp(margin));
    return std::clamp(p, std::numeric_limits<double>::min(), std::nextafter(1.0, 0.0));
}

GradientSums gradient_sums(std::span<const double> margins, std::span<const int> labels, std::span<const double> weights) {
    GradientSums s;
    for (std::size_t i = 0; i < margins.size(); ++i) {
        const double p = sigmoid(margins[i]);
        s.grad += weights[i] * (p - static_cast<double>(labels[i]));
        s.hess += weights[i] * p * (1.0 - p);
    }
    return s;
}

double weighted_log_loss(std::span<const double> margins, std::span<const int> labels, std::span<const double> weights) {
    double total = 0.0;
    double wsum = 0.0;
    for (std::size_t i = 0; i < margins.size(); ++i) {
        total += weights[i] * (labels[i] == 1 ? softplus(-margins[i]) : softplus(margins[i]));
        wsum += weights[i];
    }
    return wsum > 0.0 ? total / wsum : 0.0;
}

GbdtModel train(const DenseDataset& data, const TrainConfig& cfg, TrainLog* log) {
    cfg.validate();
    const std::size_t n = data.rows();
    if (data.labels.size() != n) throw SchemaError("training rows must all carry labels");
    if (n < 2) throw DegenerateLabels("training needs at least 2 rows, got " + std::to_string(n));
    for (const double v : data.data) {
        if (!std::isfinite(v)) throw SchemaError("training data contains a non-finite value");
    }
    const auto n_pos = static_cast<std::size_t>(std::count(data.labels.begin(), data.labels.end(), 1));
    const auto n_neg = static_cast<std::size_t>(std::count(data.labels.begin(), data.labels.end(), 0));
    if (n_pos + n_neg != n) throw SchemaError("labels must be 0 or 1");
    if (n_pos == 0 || n_neg == 0) {
        throw DegenerateLabels("training labels are all " + std::to_string(n_pos == 0 ? 0 : 1));
    }

    const double pos_weight = cfg.positive_class_weight.value_or(static_cast<double>(n_neg) / static_cast<double>(n_pos));
    std::vector<double> weights(n);
    for (std::size_t i = 0; i < n; ++i) weights[i] = data.labels[i] == 1 ? pos_weight : 1.0;

    GbdtModel model;
    model.feature_schema = data.schema;
    model.learning_rate = cfg.learning_rate;
    model.base_score = std::log(pos_weight * static_cast<double>(n_pos) / static_cast<double>(n_neg));

    const Columns cols(data);
    TreeBuilder builder(cols, cfg);
    Rng rng(cfg.rng_seed);

    std::vector<double> margins(n, model.base_score);
    std::vector<double> trial(n);
    std::vector<double> grad(n);
    std::vector<double> hess(n);
    double loss = weighted_log_loss(margins, data.labels, weights);
    if (log != nullptr) {
        *log = TrainLog{};
        log->positive_class_weight = pos_weight;
        log->loss.push_back(loss);
    }

    std::vector<double> leaf_of_row(n);
    for (int round = 0; round < cfg.n_trees; ++round) {
        for (std::size_t i = 0; i < n; ++i) {
            const double p = sigmoid(margins[i]);
            grad[i] = weights[i] * (p - static_cast<double>(data.labels[i]));
            hess[i] = weights[i] * p * (1.0 - p);
        }
        Tree tree = builder.build(grad, hess, sample_rows(n, cfg.row_subsample, rng));
        for (std::size_t i = 0; i < n; ++i) leaf_of_row[i] = tree.leaf_value(data.row(i));

        // A Newton step can overshoot on the logistic loss; halve the tree until the
        // training loss does not rise.
        int shrinks = 0;
        double scale = 1.0;
        double next_loss = 0.0;
        while (true) {
            for (std::size_t i = 0; i < n; ++i) trial[i] = margins[i] + cfg.learning_rate * scale * leaf_of_row[i];
            next_loss = weighted_log_loss(trial, data.labels, weights);
            if (next_loss <= loss || shrinks == kMaxShrinkSteps) break;
            scale *= 0.5;
            ++shrinks;
        }
        if (next_loss > loss) {
            scale = 0.0;
            next_loss = loss;
            trial = margins;
        }
        if (scale != 1.0) {
            for (auto& node : tree.nodes) {
                if (node.is_leaf()) node.weight *= scale;
            }
        }
        margins.swap(trial);
        loss = next_loss;
        model.trees.push_back(std::move(tree));
        if (log != nullptr) {
            log->loss.push_back(loss);
            log->shrink_steps.push_back(shrinks);
        }
    }
    return model;
}

GbdtModel train(std::span<const FeatureVector> rows, const TrainConfig& cfg, TrainLog* log) {
    return train(to_dense(rows, true), cfg, log);
}

double predict_margin(const GbdtModel& model, std::span<const double> row) {
    double sum = 0.0;
    for (const auto& tree : model.trees) sum += tree.leaf_value(row);
    return model.base_score + model.learning_rate * sum;
}

double predict_proba(const GbdtModel& model, std::span<const double> row) { return sigmoid(predict_margin(model, row)); }

double predict_proba(const GbdtModel& model, const FeatureVector& fv) {
    const auto row = project_onto(fv, model.feature_schema);
    return predict_proba(model, row);
}

std::vector<double> predict_proba(const GbdtModel& model, const DenseDataset& data) {
    std::vector<int> source(model.feature_schema.size(), -1);
    for (std::size_t c = 0; c < model.feature_schema.size(); ++c) {
        const auto it = std::find(data.schema.begin(), data.schema.end(), model.feature_schema[c]);
        if (it != data.schema.end()) source[c] = static_cast<int>(it - data.schema.begin());
    }
    std::vector<double> row(model.feature_schema.size());
    std::vector<double> out;
    out.reserve(data.rows());
    for (std::size_t r = 0; r < data.rows(); ++r) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            row[c] = source[c] < 0 ? std::numeric_limits<double>::quiet_NaN() : data.at(r, static_cast<std::size_t>(source[c]));
        }
        out.push_back(predict_proba(model, row));
    }
    return out;
}

std::vector<std::pair<std::string, double>> feature_importance(const GbdtModel& model) {
    std::vector<double> gain(model.feature_schema.size(), 0.0);
    double total = 0.0;
    for (const auto& tree : model.trees) {
        for (const auto& node : tree.nodes) {
            if (node.is_leaf()) continue;
            gain[static_cast<std::size_t>(node.feature)] += node.gain;
            total += node.gain;
        }
    }
    std::vector<std::pair<std::string, double>> out;
    out.reserve(gain.size());
    for (std::size_t c = 0; c < gain.size(); ++c) {
        out.emplace_back(model.feature_schema[c], total > 0.0 ? gain[c] / total : 0.0);
    }
    return out;
}

std::string to_json(const GbdtModel& model) {
    json trees = json::array();
    for (const auto& tree : model.trees) trees.push_back(tree_to_json(model, tree, 0));
    const json j{{"format", "sentinel-gbdt"},
                 {"version", kModelFormatVersion},
                 {"base_score", model.base_score},
                 {"learning_rate", model.learning_rate},
                 {"feature_schema", model.feature_schema},
                 {"trees", trees}};
    return j.dump(1) + "\n";
}

GbdtModel from_json(std::string_view text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ModelFormatError(std::string{"model file is not valid JSON: "} + e.what());
    }
    try {
        if (j.value("format", "") != "sentinel-gbdt") throw ModelFormatError("not a sentinel gbdt model file");
        const int version = j.at("version").get<int>();
        if (version != kModelFormatVersion) {
            throw ModelFormatError("model format version " + std::to_string(version) + ", expected " +
                                   std::to_string(kModelFormatVersion));
        }
        GbdtModel model;
        model.base_score = j.at("base_score").get<double>();
        model.learning_rate = j.at("learning_rate").get<double>();
        model.feature_schema = j.at("feature_schema").get<std::vector<std::string>>();
        for (const auto& jt : j.at("trees")) {
            Tree tree;
            tree_from_json(jt, model.feature_schema, tree, 0);
            model.trees.push_back(std::move(tree));
        }
        return model;
    } catch (const json::exception& e) {
        throw ModelFormatError(std::string{"malformed model file: "} + e.what());
    }
}

void save_model(const GbdtModel& model, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write model file " + path.string());
    out << to_json(model);
}

GbdtModel load_model(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open model file " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return from_json(buf.str());
}

}  // namespace sentinel::gbdt
