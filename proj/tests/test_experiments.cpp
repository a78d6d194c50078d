#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "cfqsim/experiments.hpp"
#include "cfqsim/protocols.hpp"
#include "doctest.h"

namespace {

using namespace cfqsim;

std::vector<SweepRow> sample_rows() {
    std::vector<SweepRow> rows;
    rows.push_back(SweepRow{"slaz", 25, 320, std::nullopt, 0.5, std::nullopt, 100,
                            7, 0.25, 0.01});
    rows.push_back(SweepRow{"improved", 50, std::nullopt, 0.001, std::nullopt,
                            std::nullopt, std::nullopt, std::nullopt, 0.9975,
                            std::nullopt});
    rows.push_back(SweepRow{"improved", 25, std::nullopt, std::nullopt, std::nullopt,
                            std::nullopt, std::nullopt, std::nullopt, 1.0,
                            std::nullopt});
    return rows;
}

}  // namespace

TEST_CASE("csv output is sorted with empty cells for absent fields") {
    std::ostringstream out;
    emit(sample_rows(), EmitFormat::Csv, out);
    const std::string expected =
        "protocol,M,N,t,B,c,trials,seed,value,stderr\n"
        "improved,25,,,,,,,1,\n"
        "improved,50,,0.001,,,,,0.9975,\n"
        "slaz,25,320,,0.5,,100,7,0.25,0.01\n";
    CHECK(out.str() == expected);
}

TEST_CASE("json output omits absent fields") {
    std::ostringstream out;
    emit(sample_rows(), EmitFormat::Json, out);
    const std::string expected =
        "[\n"
        "{\"protocol\":\"improved\",\"M\":25,\"value\":1},\n"
        "{\"protocol\":\"improved\",\"M\":50,\"t\":0.001,\"value\":0.9975},\n"
        "{\"protocol\":\"slaz\",\"M\":25,\"N\":320,\"B\":0.5,\"trials\":100,"
        "\"seed\":7,\"value\":0.25,\"stderr\":0.01}\n"
        "]\n";
    CHECK(out.str() == expected);
}

TEST_CASE("equal keys keep emission order") {
    std::vector<SweepRow> rows;
    rows.push_back(SweepRow{"improved", 25, std::nullopt, std::nullopt, 0.1, 0.0,
                            2000, 42, 0.5, 0.02});
    rows.push_back(SweepRow{"improved", 25, std::nullopt, std::nullopt, 0.1, 0.0,
                            std::nullopt, std::nullopt, 0.51, std::nullopt});
    std::ostringstream out;
    emit(rows, EmitFormat::Csv, out);
    const std::string text = out.str();
    const auto sampled = text.find("2000,42,0.5,0.02");
    const auto oracle = text.find(",,0.51,");
    REQUIRE(sampled != std::string::npos);
    REQUIRE(oracle != std::string::npos);
    CHECK(sampled < oracle);
}

TEST_CASE("file emission round-trips the stream emission") {
    const std::string path = "emit_roundtrip_tmp.csv";
    emit_file(sample_rows(), EmitFormat::Csv, path);
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream file_content;
    file_content << in.rdbuf();
    in.close();
    std::remove(path.c_str());

    std::ostringstream direct;
    emit(sample_rows(), EmitFormat::Csv, direct);
    CHECK(file_content.str() == direct.str());
}

TEST_CASE("reference table stays inside its tolerances") {
    const Table1Result result = gen_table1();
    REQUIRE(result.rows.size() == 40);
    REQUIRE(result.cells.size() == 40);
    CHECK(result.violations.empty());
    for (const auto& cell : result.cells) {
        CHECK(!cell.flagged);
        CHECK(cell.deviation <= cell.tolerance);
    }
    CHECK(!result.audit.empty());
}

TEST_CASE("reference table pins the known convention gap") {
    const Table1Result result = gen_table1();
    bool found_c0 = false;
    bool found_p2 = false;
    for (const auto& cell : result.cells) {
        if (cell.cell == "I(t=0.001,M=25)") {
            found_c0 = true;
            CHECK(cell.computed == doctest::Approx(improved_c0(25, 0.001)));
            CHECK(cell.deviation < 5e-4);
            CHECK(!cell.audit);
        }
        if (cell.cell == "II(N=320,M=25)") {
            found_p2 = true;
            CHECK(cell.computed == doctest::Approx(slaz_p2(25, 320)));
            CHECK(cell.deviation > 2e-3);
            CHECK(cell.deviation < 1e-2);
            CHECK(cell.audit);
            CHECK(!cell.flagged);
        }
    }
    CHECK(found_c0);
    CHECK(found_p2);
}

TEST_CASE("counterfactuality sweep covers the default grid cleanly") {
    const Fig3Result result = fig3_default();
    CHECK(result.rows.size() == 4u * 126u);
    CHECK(result.violations.empty());
    for (const auto& row : result.rows) {
        CHECK(row.protocol == "improved");
        CHECK(row.t.has_value());
        CHECK(row.value > 0.9);
        CHECK(row.value <= 1.0);
    }
    CHECK_THROWS_AS(sweep_c0({}, 25, 150), std::invalid_argument);
    CHECK_THROWS_AS(sweep_c0({0.001}, 0, 10), std::invalid_argument);
    CHECK_THROWS_AS(sweep_c0({0.001}, 10, 5), std::invalid_argument);
}

TEST_CASE("default block-rate grid spans the unit interval") {
    const std::vector<double> grid = default_b_grid();
    REQUIRE(grid.size() == 21);
    CHECK(grid.front() == 0.0);
    CHECK(grid.back() == 1.0);
    for (std::size_t i = 1; i < grid.size(); ++i) {
        CHECK(grid[i] - grid[i - 1] == doctest::Approx(0.05).epsilon(1e-12));
    }
}

TEST_CASE("noise sweep emits paired sampled and oracle rows") {
    Fig4Config config;
    config.b_grid = {0.0, 0.3};
    config.trials = 40;
    config.seed = Seed{42};
    const Fig4Result result = sweep_noise(config);
    REQUIRE(result.rows.size() == 16);
    CHECK(result.violations.empty());

    for (std::size_t i = 0; i < result.rows.size(); i += 2) {
        const SweepRow& sampled = result.rows[i];
        const SweepRow& oracle = result.rows[i + 1];
        CHECK(sampled.trials == 40);
        CHECK(sampled.seed == 42);
        CHECK(sampled.stderr_mean.has_value());
        CHECK(!oracle.trials.has_value());
        CHECK(!oracle.seed.has_value());
        CHECK(!oracle.stderr_mean.has_value());
        CHECK(sampled.protocol == oracle.protocol);
        CHECK(sampled.b == oracle.b);
        CHECK(!sampled.t.has_value());
        if (sampled.protocol == "improved") {
            CHECK(sampled.c == 0.0);
            CHECK(!sampled.n.has_value());
        } else {
            CHECK(sampled.protocol == "slaz");
            CHECK(!sampled.c.has_value());
            CHECK(sampled.n.has_value());
        }
        CHECK(std::fabs(sampled.value - oracle.value) <=
              4.0 * *sampled.stderr_mean + 1e-9);
    }
}

TEST_CASE("noise sweep honours the per-cycle granularity switch") {
    Fig4Config config;
    config.b_grid = {0.2};
    config.trials = 30;
    config.seed = Seed{5};
    config.slaz_noise = SlazNoise::PerOuterCycle;
    const Fig4Result result = sweep_noise(config);
    REQUIRE(result.rows.size() == 8);
    CHECK(result.violations.empty());

    Fig4Config segment_config = config;
    segment_config.slaz_noise = SlazNoise::PerSegment;
    const Fig4Result segment = sweep_noise(segment_config);
    double outer_oracle = -1.0;
    double segment_oracle = -1.0;
    for (std::size_t i = 0; i < result.rows.size(); i += 2) {
        if (result.rows[i].protocol == "slaz" && result.rows[i].m == 25) {
            outer_oracle = result.rows[i + 1].value;
            segment_oracle = segment.rows[i + 1].value;
        }
    }
    REQUIRE(outer_oracle >= 0.0);
    CHECK(outer_oracle > segment_oracle);
}

TEST_CASE("noise sweep validates its inputs") {
    Fig4Config config;
    config.trials = 0;
    CHECK_THROWS_AS(sweep_noise(config), std::invalid_argument);
    config.trials = 10;
    config.b_grid = {0.5, 1.5};
    CHECK_THROWS_AS(sweep_noise(config), std::domain_error);
}
