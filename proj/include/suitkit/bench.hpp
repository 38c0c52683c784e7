#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace suitkit {

enum class BenchSuite { nn, idw, density };

BenchSuite bench_suite_from_name(const std::string& name);

struct BenchRow {
    std::size_t n = 0;
    double indexed_seconds = 0.0;
    double brute_seconds = 0.0;
    /// Hash of the synthetic dataset; equal seeds give equal checksums.
    std::uint64_t data_checksum = 0;
    double ratio() const { return indexed_seconds / brute_seconds; }
};

/// Times the indexed implementation against the O(mn) brute-force baseline on
/// seeded uniform synthetic data of each size. Small sizes are repeated until
/// the measured wall time is meaningful.
std::vector<BenchRow> run_bench(BenchSuite suite, const std::vector<std::size_t>& sizes,
                                std::uint64_t seed);

/// Least-squares slope of log(time) vs log(n).
double loglog_slope(const std::vector<BenchRow>& rows, bool indexed);

/// Machine-readable table of the results.
std::string bench_table_json(BenchSuite suite, const std::vector<BenchRow>& rows,
                             std::uint64_t seed);

/// The indexed path must beat brute force at the largest size; sizes below
/// this floor are reported but not asserted.
inline constexpr std::size_t kBenchAssertFloor = 10000;

bool bench_assertion_holds(const std::vector<BenchRow>& rows);

}  // namespace suitkit
