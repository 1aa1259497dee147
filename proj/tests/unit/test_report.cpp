// Copyright 2026 The Sentinel Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <sentinel/errors.hpp>
#include <sentinel/report.hpp>

#include "../support/fixtures.hpp"

using namespace sentinel;
using namespace sentinel::report;

TEST_CASE("frame mapping") {
    const PlotFrame f;
    CHECK(f.px(0.0) == 70.0);
    CHECK(f.px(1.0) == 620.0);
    CHECK(f.py(0.0) == 420.0);
    CHECK(f.py(1.0) == 40.0);
    CHECK(format_coord(1.0 / 3.0) == "0.33");
}

TEST_CASE("roc polyline goes through the plotted points") {
    const std::vector<metrics::RocPoint> roc{{0, 0, 1}, {0, 1, 0.5}, {1, 1, 0}};
    test::TempDir tmp;
    ReportInputs in;
    in.roc = roc;
    in.auc = 1.0;
    const auto paths = emit_report(in, tmp.path());
    REQUIRE(paths.size() == 2);
    CHECK(paths[0].filename() == "roc.csv");
    CHECK(paths[1].filename() == "roc.svg");
    const auto svg = read_text(paths[1]);
    const PlotFrame f;
    const std::string corner = format_coord(f.px(0)) + "," + format_coord(f.py(1));
    CHECK(svg.find(corner) != std::string::npos);
    CHECK(svg.find("<polyline") != std::string::npos);
    CHECK(svg.rfind("<svg", 0) == 0);
    CHECK(read_text(paths[0]) == metrics::roc_csv(roc));
}

TEST_CASE("importance csv round-trip and empty input") {
    const std::vector<std::pair<std::string, double>> imp{{"gas", 0.75}, {"value", 0.25}};
    CHECK(parse_importance_csv(importance_csv(imp)) == imp);
    CHECK(importance_csv({}) == "feature,importance\n");
    CHECK(parse_importance_csv("feature,importance\n").empty());
    const auto svg = svg_bar_chart({"Importance", "gain", ""}, imp);
    CHECK(svg.find(">gas<") != std::string::npos);
}

TEST_CASE("projection csv round-trip") {
    Projection p;
    p.coords = {{0.5, -1.0}, {2.0, 3.25}};
    p.labels = {0, 1};
    const auto back = parse_projection_csv(projection_csv(p));
    CHECK(back.coords == p.coords);
    CHECK(back.labels == p.labels);

    test::TempDir tmp;
    ReportInputs in;
    in.projection = p;
    const auto paths = emit_report(in, tmp / "nested" / "dir");
    REQUIRE(paths.size() == 2);
    const auto svg = read_text(paths[1]);
    CHECK(svg.find("malicious") != std::string::npos);
    CHECK(svg.find("<circle") != std::string::npos);
}

TEST_CASE("every input yields a csv and an svg") {
    ReportInputs in;
    in.roc = std::vector<metrics::RocPoint>{{0, 0, 1}, {1, 1, 0}};
    in.pr = std::vector<metrics::PrPoint>{{1, 0, 1}, {0.5, 1, 0}};
    in.importance = std::vector<std::pair<std::string, double>>{};
    in.projection = Projection{{{0, 0}, {1, 1}}, {}};
    test::TempDir tmp;
    const auto paths = emit_report(in, tmp.path());
    CHECK(paths.size() == 8);
    for (const auto& p : paths) CHECK(std::filesystem::exists(p));
    CHECK_THROWS_AS(write_text("/proc/definitely/not/here.txt", "x"), IoError);
}
