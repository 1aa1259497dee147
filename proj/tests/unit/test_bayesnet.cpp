// Copyright 2026 The Sentinel Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include <sentinel/bayesnet.hpp>
#include <sentinel/errors.hpp>

#include "../support/oracles.hpp"
#include "../support/synthetic.hpp"

using namespace sentinel;
using namespace sentinel::bayesnet;

namespace {

Dag dag_from(const std::vector<std::string>& names, const test::ArcList& arcs) {
    Dag dag{names};
    for (const auto& [p, c] : arcs) dag.add_arc(static_cast<std::size_t>(p), static_cast<std::size_t>(c));
    return dag;
}

test::ArcList arc_list(const Dag& dag) {
    test::ArcList out;
    for (const auto& [p, c] : dag.arcs()) out.emplace_back(static_cast<int>(dag.index_of(p)), static_cast<int>(dag.index_of(c)));
    return out;
}

}  // namespace

TEST_CASE("dag bookkeeping") {
    Dag dag{{"A", "B", "C"}};
    dag.add_arc("A", "B");
    dag.add_arc("B", "C");
    CHECK(dag.reachable(0, 2));
    CHECK_FALSE(dag.reachable(2, 0));
    CHECK_THROWS_AS(dag.add_arc("C", "A"), std::invalid_argument);
    CHECK_THROWS_AS(dag.add_arc("A", "A"), std::invalid_argument);
    CHECK_THROWS_AS(dag.add_arc("A", "B"), std::invalid_argument);
    CHECK_THROWS_AS(dag.reverse_arc(0, 2), std::invalid_argument);
    dag.reverse_arc(1, 2);
    CHECK(dag.has_arc(2, 1));
    CHECK(dag.is_acyclic());
    CHECK(dag.arcs() == std::vector<Arc>{{"A", "B"}, {"C", "B"}});
    CHECK(arcs_csv(dag) == "parent,child\nA,B\nC,B\n");
    CHECK(to_dot(dag).find("n0 -> n1;") != std::string::npos);
}

TEST_CASE("family scores match the independent BIC") {
    const auto rows = test::noisy_chain(150, 0.2, 8);
    const auto data = test::binary_dataset(rows, {"X", "Y", "Z"});
    for (const auto& arcs : test::all_dags(3)) {
        const auto dag = dag_from(data.variable_names, arcs);
        CHECK(bic_score(data, dag) == doctest::Approx(test::bic_oracle(rows, 3, arcs)).epsilon(1e-12));
    }
    CHECK(test::all_dags(3).size() == 25);
}

TEST_CASE("hill climbing on small structures") {
    SUBCASE("independent columns stay unconnected") {
        const auto data = test::binary_dataset(test::independent_coins(2000, 3, 1), {"A", "B", "C"});
        CHECK(learn_structure(data).arc_count() == 0);
    }
    SUBCASE("search reaches the enumerated optimum") {
        // seed 4 carries a chance correlation that the exact optimum also keeps
        for (std::uint64_t seed = 1; seed <= 8; ++seed) {
            const auto rows = test::independent_coins(2000, 3, seed);
            const auto data = test::binary_dataset(rows, {"A", "B", "C"});
            double best = -INFINITY;
            for (const auto& arcs : test::all_dags(3)) best = std::max(best, test::bic_oracle(rows, 3, arcs));
            CHECK(bic_score(data, learn_structure(data)) == doctest::Approx(best).epsilon(1e-12));
        }
    }
    SUBCASE("a copied column gets one arc") {
        const auto data = test::binary_dataset(test::copy_pair(500, 6), {"A", "B"});
        const auto dag = learn_structure(data);
        REQUIRE(dag.arc_count() == 1);
        CHECK(test::skeleton(arc_list(dag)) == std::set<std::pair<int, int>>{{0, 1}});
    }
    SUBCASE("a chain is recovered up to orientation") {
        const auto rows = test::noisy_chain(3000, 0.1, 12);
        const auto data = test::binary_dataset(rows, {"X", "Y", "Z"});
        LearnTrace trace;
        const auto dag = learn_structure(data, {}, &trace);
        CHECK(test::skeleton(arc_list(dag)) == std::set<std::pair<int, int>>{{0, 1}, {1, 2}});

        double best = -INFINITY;
        for (const auto& arcs : test::all_dags(3)) best = std::max(best, test::bic_oracle(rows, 3, arcs));
        CHECK(bic_score(data, dag) == doctest::Approx(best).epsilon(1e-12));
        for (std::size_t k = 1; k < trace.scores.size(); ++k) CHECK(trace.scores[k] > trace.scores[k - 1]);
        CHECK(trace.scores.back() == doctest::Approx(bic_score(data, dag)));
    }
}

TEST_CASE("learned graphs are acyclic and respect the parent cap") {
    Rng rng{99};
    for (int run = 0; run < 60; ++run) {
        const int cols = 2 + static_cast<int>(rng.uniform_index(5));
        std::vector<std::vector<int>> rows(40 + rng.uniform_index(80), std::vector<int>(static_cast<std::size_t>(cols)));
        for (auto& row : rows) {
            for (std::size_t c = 0; c < row.size(); ++c) {
                row[c] = c > 0 && rng.uniform01() < 0.6 ? row[c - 1] : static_cast<int>(rng.uniform_index(2));
            }
        }
        std::vector<std::string> names;
        for (int c = 0; c < cols; ++c) names.push_back("v" + std::to_string(c));
        StructureConfig cfg;
        cfg.max_parents = 1 + static_cast<int>(rng.uniform_index(3));
        cfg.rng_seed = rng.next();
        const auto dag = learn_structure(test::binary_dataset(rows, names), cfg);
        CHECK(dag.is_acyclic());
        CHECK(test::acyclic(cols, arc_list(dag)));
        for (std::size_t v = 0; v < dag.nodes().size(); ++v) CHECK(dag.parents(v).size() <= static_cast<std::size_t>(cfg.max_parents));
    }
}

TEST_CASE("diff of two graphs") {
    Dag a{{"A", "B", "C"}};
    a.add_arc("A", "B");
    a.add_arc("B", "C");
    Dag b{{"C", "B", "A"}};
    b.add_arc("B", "A");
    b.add_arc("A", "C");
    const auto diff = dag_diff(a, b);
    CHECK(diff.reversed == std::set<Arc>{{"A", "B"}});
    CHECK(diff.removed == std::set<Arc>{{"B", "C"}});
    CHECK(diff.added == std::set<Arc>{{"A", "C"}});
    CHECK(diff_csv(diff) == "arc,status\nA->C,added\nB->C,removed\nA->B,reversed\n");
    CHECK_THROWS_AS((void)dag_diff(a, Dag{{"A", "B"}}), SchemaError);
}

TEST_CASE("vocabulary and occurrence rows") {
    std::vector<evm::OpcodeSequence> seqs{
        evm::disassemble(Bytes{0x60, 0x01, 0x01, 0x0c}),  // PUSH1 ADD UNKNOWN
        evm::disassemble(Bytes{0x01, 0x02}),              // ADD MUL
        evm::disassemble(Bytes{0x02, 0x0c}),              // MUL UNKNOWN
    };
    const auto vocab = top_k_vocabulary(seqs, 2);
    CHECK(vocab == std::vector<std::string>{"ADD", "MUL"});
    const auto data = occurrence_dataset(seqs, vocab);
    CHECK(data.cells == std::vector<std::uint8_t>{1, 0, 1, 1, 0, 1});
    CHECK(top_k_vocabulary(seqs, 10).size() == 3);
}

TEST_CASE("dataset validation") {
    BinaryDataset bad;
    bad.variable_names = {"A", "B"};
    bad.cells = {0, 1, 2, 0};
    CHECK_THROWS_AS(bad.validate(), SchemaError);
    bad.cells = {0, 1, 1};
    CHECK_THROWS_AS(bad.validate(), SchemaError);
    bad.cells.clear();
    CHECK_THROWS_AS(bad.validate(), SchemaError);
    bad.variable_names = {"A", "A"};
    bad.cells = {0, 1};
    CHECK_THROWS_AS(bad.validate(), SchemaError);
}
