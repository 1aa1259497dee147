// Copyright 2026 The Sentinel Authors
// SPDX-License-Identifier: Apache-2.0

#include <sentinel/bayesnet.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <tuple>
#include <unordered_map>

#include <sentinel/errors.hpp>

namespace sentinel::bayesnet {

void BinaryDataset::validate() const {
    if (variable_names.empty()) throw SchemaError("binary dataset has no variables");
    if (cells.size() % variable_names.size() != 0) throw SchemaError("binary dataset is ragged");
    if (rows() == 0) throw SchemaError("binary dataset has no rows");
    if (std::set<std::string>(variable_names.begin(), variable_names.end()).size() != variable_names.size()) {
        throw SchemaError("binary dataset has duplicate variable names");
    }
    for (const auto v : cells) {
        if (v > 1) throw SchemaError("binary dataset cell is not 0 or 1");
    }
}

Dag::Dag(std::vector<std::string> nodes) : nodes_(std::move(nodes)), parents_(nodes_.size()) {}

std::size_t Dag::index_of(std::string_view name) const {
    const auto it = std::find(nodes_.begin(), nodes_.end(), name);
    if (it == nodes_.end()) throw std::invalid_argument("unknown node '" + std::string{name} + "'");
    return static_cast<std::size_t>(it - nodes_.begin());
}

bool Dag::has_arc(std::size_t parent, std::size_t child) const {
    const auto& p = parents_[child];
    return std::binary_search(p.begin(), p.end(), parent);
}

std::size_t Dag::arc_count() const noexcept {
    std::size_t n = 0;
    for (const auto& p : parents_) n += p.size();
    return n;
}

bool Dag::reachable(std::size_t from, std::size_t to) const {
    // Walk parent links backwards from `to`.
    std::vector<char> seen(nodes_.size(), 0);
    std::vector<std::size_t> stack{to};
    while (!stack.empty()) {
        const auto v = stack.back();
        stack.pop_back();
        if (v == from) return true;
        if (seen[v]) continue;
        seen[v] = 1;
        for (const auto p : parents_[v]) stack.push_back(p);
    }
    return false;
}

void Dag::add_arc(std::size_t parent, std::size_t child) {
    if (parent == child) throw std::invalid_argument("self-loop on '" + nodes_[parent] + "'");
    if (has_arc(parent, child)) throw std::invalid_argument("duplicate arc " + nodes_[parent] + "->" + nodes_[child]);
    if (reachable(child, parent)) throw std::invalid_argument("arc " + nodes_[parent] + "->" + nodes_[child] + " closes a cycle");
    auto& p = parents_[child];
    p.insert(std::upper_bound(p.begin(), p.end(), parent), parent);
}

void Dag::add_arc(std::string_view parent, std::string_view child) { add_arc(index_of(parent), index_of(child)); }

void Dag::remove_arc(std::size_t parent, std::size_t child) {
    auto& p = parents_[child];
    const auto it = std::lower_bound(p.begin(), p.end(), parent);
    if (it == p.end() || *it != parent) throw std::invalid_argument("no arc " + nodes_[parent] + "->" + nodes_[child]);
    p.erase(it);
}

void Dag::reverse_arc(std::size_t parent, std::size_t child) {
    remove_arc(parent, child);
    try {
        add_arc(child, parent);
    } catch (...) {
        add_arc(parent, child);
        throw;
    }
}

bool Dag::is_acyclic() const {
    // Kahn's algorithm over child lists.
    const auto n = nodes_.size();
    std::vector<std::size_t> indegree(n);
    std::vector<std::vector<std::size_t>> children(n);
    for (std::size_t c = 0; c < n; ++c) {
        indegree[c] = parents_[c].size();
        for (const auto p : parents_[c]) children[p].push_back(c);
    }
    std::vector<std::size_t> ready;
    for (std::size_t v = 0; v < n; ++v) {
        if (indegree[v] == 0) ready.push_back(v);
    }
    std::size_t visited = 0;
    while (!ready.empty()) {
        const auto v = ready.back();
        ready.pop_back();
        ++visited;
        for (const auto c : children[v]) {
            if (--indegree[c] == 0) ready.push_back(c);
        }
    }
    return visited == n;
}

std::vector<Arc> Dag::arcs() const {
    std::vector<Arc> out;
    for (std::size_t c = 0; c < nodes_.size(); ++c) {
        for (const auto p : parents_[c]) out.emplace_back(nodes_[p], nodes_[c]);
    }
    std::sort(out.begin(), out.end());
    return out;
}

double family_score(const BinaryDataset& data, std::size_t child, std::span<const std::size_t> parents) {
    std::vector<std::size_t> ordered(parents.begin(), parents.end());
    std::sort(ordered.begin(), ordered.end(),
              [&](auto a, auto b) { return data.variable_names[a] < data.variable_names[b]; });
    const std::size_t configs = std::size_t{1} << ordered.size();
    std::vector<double> counts(configs * 2, 0.0);
    const std::size_t n = data.rows();
    for (std::size_t r = 0; r < n; ++r) {
        std::size_t cfg = 0;
        for (std::size_t j = 0; j < ordered.size(); ++j) cfg |= std::size_t{data.at(r, ordered[j])} << j;
        counts[cfg * 2 + data.at(r, child)] += 1.0;
    }
    double ll = 0.0;
    for (std::size_t cfg = 0; cfg < configs; ++cfg) {
        const double n0 = counts[cfg * 2];
        const double n1 = counts[cfg * 2 + 1];
        const double total = n0 + n1 + 2.0;
        if (n0 > 0) ll += n0 * std::log((n0 + 1.0) / total);
        if (n1 > 0) ll += n1 * std::log((n1 + 1.0) / total);
    }
    return ll - 0.5 * std::log(static_cast<double>(n)) * static_cast<double>(configs);
}

double bic_score(const BinaryDataset& data, const Dag& dag) {
    if (dag.nodes() != data.variable_names) {
        throw SchemaError("DAG nodes do not match the dataset variables");
    }
    double score = 0.0;
    for (std::size_t c = 0; c < dag.nodes().size(); ++c) score += family_score(data, c, dag.parents(c));
    return score;
}

namespace {

    class FamilyCache {
      public:
        explicit FamilyCache(const BinaryDataset& data) : data_(data) {}

        double operator()(std::size_t child, std::vector<std::size_t> parents) {
            std::sort(parents.begin(), parents.end());
            auto key = std::make_pair(child, std::move(parents));
            if (const auto it = cache_.find(key); it != cache_.end()) return it->second;
            const double s = family_score(data_, child, key.second);
            cache_.emplace(std::move(key), s);
            return s;
        }

      private:
        const BinaryDataset& data_;
        std::map<std::pair<std::size_t, std::vector<std::size_t>>, double> cache_;
    };

    struct Candidate {
        MoveKind kind;
        std::size_t parent;
        std::size_t child;
        double delta;
    };

    std::vector<std::size_t> with(const std::vector<std::size_t>& v, std::size_t x) {
        auto out = v;
        out.push_back(x);
        return out;
    }

    std::vector<std::size_t> without(const std::vector<std::size_t>& v, std::size_t x) {
        std::vector<std::size_t> out;
        for (const auto e : v) {
            if (e != x) out.push_back(e);
        }
        return out;
    }

}  // namespace

Dag learn_structure(const BinaryDataset& data, const StructureConfig& cfg, LearnTrace* trace) {
    data.validate();
    if (cfg.max_parents < 0) throw ConfigError("max_parents must be >= 0");
    const auto n = data.cols();
    const auto max_parents = static_cast<std::size_t>(cfg.max_parents);
    const std::size_t max_iterations = cfg.max_iterations.value_or(10 * n * n);
    const auto& names = data.variable_names;

    Dag dag(names);
    FamilyCache family(data);
    std::vector<double> current(n);
    double score = 0.0;
    for (std::size_t c = 0; c < n; ++c) {
        current[c] = family(c, {});
        score += current[c];
    }
    if (trace != nullptr) {
        *trace = LearnTrace{};
        trace->scores.push_back(score);
    }

    const auto key = [&](const Candidate& c) {
        return std::make_tuple(std::cref(names[c.parent]), std::cref(names[c.child]), static_cast<int>(c.kind));
    };
    // Improvements below this are treated as rounding noise.
    constexpr double kMinDelta = 1e-9;

    for (std::size_t iter = 0; iter < max_iterations; ++iter) {
        std::optional<Candidate> best;
        const auto consider = [&](const Candidate& c) {
            if (!(c.delta > kMinDelta)) return;
            if (!best || c.delta > best->delta || (c.delta == best->delta && key(c) < key(*best))) best = c;
        };
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t c = 0; c < n; ++c) {
                if (p == c) continue;
                if (dag.has_arc(p, c)) {
                    const auto& pc = dag.parents(c);
                    const double drop = family(c, without(pc, p)) - current[c];
                    consider({MoveKind::remove, p, c, drop});
                    if (dag.parents(p).size() < max_parents) {
                        // Reversal is legal unless another path p ~> c exists.
                        Dag probe = dag;
                        probe.remove_arc(p, c);
                        if (!probe.reachable(p, c)) {
                            const double gain = family(p, with(dag.parents(p), c)) - current[p];
                            consider({MoveKind::reverse, p, c, drop + gain});
                        }
                    }
                } else if (!dag.has_arc(c, p) && dag.parents(c).size() < max_parents && !dag.reachable(c, p)) {
                    consider({MoveKind::add, p, c, family(c, with(dag.parents(c), p)) - current[c]});
                }
            }
        }
        if (!best) break;

        const auto& m = *best;
        switch (m.kind) {
            case MoveKind::add:
                dag.add_arc(m.parent, m.child);
                break;
            case MoveKind::remove:
                dag.remove_arc(m.parent, m.child);
                break;
            case MoveKind::reverse:
                dag.reverse_arc(m.parent, m.child);
                current[m.parent] = family(m.parent, dag.parents(m.parent));
                break;
        }
        current[m.child] = family(m.child, dag.parents(m.child));
        score = 0.0;
        for (const double s : current) score += s;
        if (trace != nullptr) {
            trace->scores.push_back(score);
            trace->moves.push_back({m.kind, names[m.parent], names[m.child], m.delta});
        }
    }
    return dag;
}

DagDiff dag_diff(const Dag& a, const Dag& b) {
    if (std::set<std::string>(a.nodes().begin(), a.nodes().end()) != std::set<std::string>(b.nodes().begin(), b.nodes().end())) {
        throw SchemaError("DAGs to compare have different node sets");
    }
    const auto arcs_a = a.arcs();
    const auto arcs_b = b.arcs();
    const std::set<Arc> set_a(arcs_a.begin(), arcs_a.end());
    const std::set<Arc> set_b(arcs_b.begin(), arcs_b.end());
    DagDiff diff;
    for (const auto& arc : set_a) {
        if (set_b.contains(arc)) continue;
        if (set_b.contains({arc.second, arc.first})) {
            diff.reversed.insert(arc);
        } else {
            diff.removed.insert(arc);
        }
    }
    for (const auto& arc : set_b) {
        if (!set_a.contains(arc) && !set_a.contains({arc.second, arc.first})) diff.added.insert(arc);
    }
    return diff;
}

std::string to_dot(const Dag& dag, std::string_view graph_name) {
    std::string out = "digraph \"" + std::string{graph_name} + "\" {\n";
    for (std::size_t v = 0; v < dag.nodes().size(); ++v) {
        out += "  n" + std::to_string(v) + " [label=\"" + dag.nodes()[v] + "\"];\n";
    }
    for (const auto& [p, c] : dag.arcs()) {
        out += "  n" + std::to_string(dag.index_of(p)) + " -> n" + std::to_string(dag.index_of(c)) + ";\n";
    }
    out += "}\n";
    return out;
}

std::string arcs_csv(const Dag& dag) {
    std::string out = "parent,child\n";
    for (const auto& [p, c] : dag.arcs()) out += p + "," + c + "\n";
    return out;
}

std::string diff_csv(const DagDiff& diff) {
    std::string out = "arc,status\n";
    const auto emit = [&](const std::set<Arc>& arcs, std::string_view status) {
        for (const auto& [p, c] : arcs) out += p + "->" + c + "," + std::string{status} + "\n";
    };
    emit(diff.added, "added");
    emit(diff.removed, "removed");
    emit(diff.reversed, "reversed");
    return out;
}

std::vector<std::string> top_k_vocabulary(std::span<const evm::OpcodeSequence> sequences, std::size_t k) {
    std::map<std::string, std::size_t> df;
    for (const auto& seq : sequences) {
        std::set<std::string_view> seen;
        for (const auto& ins : seq.instructions) {
            if (ins.opcode.is_known()) seen.insert(ins.opcode.mnemonic);
        }
        for (const auto m : seen) ++df[std::string{m}];
    }
    std::vector<std::pair<std::string, std::size_t>> ranked(df.begin(), df.end());
    std::stable_sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
    std::vector<std::string> out;
    for (std::size_t i = 0; i < std::min(k, ranked.size()); ++i) out.push_back(ranked[i].first);
    return out;
}

BinaryDataset occurrence_dataset(std::span<const evm::OpcodeSequence> sequences, const std::vector<std::string>& vocabulary) {
    BinaryDataset data;
    data.variable_names = vocabulary;
    data.cells.reserve(sequences.size() * vocabulary.size());
    for (const auto& seq : sequences) {
        const auto row = evm::occurrence_vector(seq, vocabulary);
        data.cells.insert(data.cells.end(), row.begin(), row.end());
    }
    return data;
}

}  // namespace sentinel::bayesnet
