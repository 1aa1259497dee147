// Copyright 2026 The Sentinel Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <sentinel/evm_disasm.hpp>

namespace sentinel::bayesnet {

//! Row-major 0/1 matrix; one column per variable.
struct BinaryDataset {
    std::vector<std::string> variable_names;
    std::vector<std::uint8_t> cells;

    [[nodiscard]] std::size_t cols() const noexcept { return variable_names.size(); }
    [[nodiscard]] std::size_t rows() const noexcept { return variable_names.empty() ? 0 : cells.size() / variable_names.size(); }
    [[nodiscard]] std::uint8_t at(std::size_t r, std::size_t c) const { return cells[r * cols() + c]; }

    //! Throws SchemaError for non-binary cells, a ragged matrix, duplicate names or zero rows.
    void validate() const;
};

using Arc = std::pair<std::string, std::string>;  // (parent, child)

class Dag {
  public:
    explicit Dag(std::vector<std::string> nodes);

    [[nodiscard]] const std::vector<std::string>& nodes() const noexcept { return nodes_; }
    [[nodiscard]] std::size_t index_of(std::string_view name) const;

    [[nodiscard]] bool has_arc(std::size_t parent, std::size_t child) const;
    //! Parent indices of a node in ascending index order.
    [[nodiscard]] const std::vector<std::size_t>& parents(std::size_t child) const { return parents_[child]; }
    [[nodiscard]] std::size_t arc_count() const noexcept;

    //! True when a directed path from `from` to `to` exists.
    [[nodiscard]] bool reachable(std::size_t from, std::size_t to) const;

    //! Throws std::invalid_argument for self-loops, duplicates, or an arc that closes a cycle.
    void add_arc(std::size_t parent, std::size_t child);
    void add_arc(std::string_view parent, std::string_view child);
    void remove_arc(std::size_t parent, std::size_t child);
    void reverse_arc(std::size_t parent, std::size_t child);

    [[nodiscard]] bool is_acyclic() const;

    //! Arcs as name pairs in (parent, child) lexicographic order.
    [[nodiscard]] std::vector<Arc> arcs() const;

    bool operator==(const Dag& other) const { return nodes_ == other.nodes_ && parents_ == other.parents_; }

  private:
    std::vector<std::string> nodes_;
    std::vector<std::vector<std::size_t>> parents_;
};

struct StructureConfig {
    int max_parents{3};
    std::uint64_t rng_seed{0};
    std::optional<std::size_t> max_iterations;  // defaults to 10 * |nodes|^2
    double equivalent_sample_size{0.0};         // unused; BIC has no prior strength
};

//! Log-likelihood of a binary node given its parents (Laplace-smoothed MLE, alpha = 1)
//! minus 0.5 * log(N) * 2^|parents|. Parents are indexed in name order so the value does
//! not depend on column order.
[[nodiscard]] double family_score(const BinaryDataset& data, std::size_t child, std::span<const std::size_t> parents);

//! Sum of family scores. Throws SchemaError when the DAG nodes differ from the data columns.
[[nodiscard]] double bic_score(const BinaryDataset& data, const Dag& dag);

enum class MoveKind { add, remove, reverse };

struct Move {
    MoveKind kind{MoveKind::add};
    std::string parent;  // for remove/reverse: the arc as it was before the move
    std::string child;
    double delta{0.0};
};

struct LearnTrace {
    std::vector<double> scores;  // score of the empty graph, then after every accepted move
    std::vector<Move> moves;
};

//! Greedy hill-climbing from the empty graph over add / remove / reverse moves. Takes the
//! best strictly improving move each step; equal deltas go to the smallest (parent, child)
//! name pair, then add < remove < reverse.
[[nodiscard]] Dag learn_structure(const BinaryDataset& data, const StructureConfig& cfg = {}, LearnTrace* trace = nullptr);

struct DagDiff {
    std::set<Arc> added;     // in b only
    std::set<Arc> removed;   // in a only
    std::set<Arc> reversed;  // (parent, child) as oriented in a
};

//! Throws SchemaError when the node sets differ.
[[nodiscard]] DagDiff dag_diff(const Dag& a, const Dag& b);

[[nodiscard]] std::string to_dot(const Dag& dag, std::string_view graph_name = "opcodes");
[[nodiscard]] std::string arcs_csv(const Dag& dag);       // parent,child
[[nodiscard]] std::string diff_csv(const DagDiff& diff);  // arc,status

//! The k mnemonics present in the most sequences (ties by name); UNKNOWN_* bytes are skipped.
[[nodiscard]] std::vector<std::string> top_k_vocabulary(std::span<const evm::OpcodeSequence> sequences, std::size_t k);

//! One occurrence row per sequence.
[[nodiscard]] BinaryDataset occurrence_dataset(std::span<const evm::OpcodeSequence> sequences,
                                               const std::vector<std::string>& vocabulary);

}  // namespace sentinel::bayesnet
