#include "doctest.h"

#include <stdexcept>

#include "suitkit/bench.hpp"

using namespace suitkit;

TEST_CASE("bench rows are seeded deterministically") {
    const auto a = run_bench(BenchSuite::nn, {64, 128}, 5);
    const auto b = run_bench(BenchSuite::nn, {64, 128}, 5);
    const auto c = run_bench(BenchSuite::nn, {64, 128}, 6);
    REQUIRE(a.size() == 2);
    // Same seed reproduces the synthetic datasets; times may differ.
    CHECK(a[0].data_checksum == b[0].data_checksum);
    CHECK(a[1].data_checksum == b[1].data_checksum);
    CHECK(a[0].data_checksum != c[0].data_checksum);
    // A shared prefix of sizes sees identical data regardless of the tail.
    const auto prefix = run_bench(BenchSuite::nn, {64}, 5);
    CHECK(prefix[0].data_checksum == a[0].data_checksum);
}

TEST_CASE("bench validates size lists") {
    CHECK_THROWS_AS(run_bench(BenchSuite::nn, {}, 1), std::invalid_argument);
    CHECK_THROWS_AS(run_bench(BenchSuite::nn, {100, 100}, 1), std::invalid_argument);
    CHECK_THROWS_AS(run_bench(BenchSuite::nn, {200, 100}, 1), std::invalid_argument);
    CHECK_THROWS_AS(bench_suite_from_name("warp"), std::invalid_argument);
}

TEST_CASE("assertion floor: tiny sizes are reported but never asserted") {
    const auto rows = run_bench(BenchSuite::nn, {10}, 1);
    CHECK(bench_assertion_holds(rows));  // below the floor, always true
    const std::string table = bench_table_json(BenchSuite::nn, rows, 1);
    CHECK(table.find("\"assertion_applies\": false") != std::string::npos);
    CHECK(table.find("\"n\": 10") != std::string::npos);
}

TEST_CASE("all three suites produce timing rows") {
    for (const BenchSuite suite :
         {BenchSuite::nn, BenchSuite::idw, BenchSuite::density}) {
        const auto rows = run_bench(suite, {32}, 2);
        REQUIRE(rows.size() == 1);
        CHECK(rows[0].indexed_seconds > 0.0);
        CHECK(rows[0].brute_seconds > 0.0);
    }
}
