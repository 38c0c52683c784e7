#pragma once

#include <array>
#include <cstdint>
#include <vector>

namespace suitkit {

/// out[i] = sum_k weights[k] * columns[k][i]. Weights must be non-negative
/// and sum to 1 within 1e-9 unless normalize is set, in which case they are
/// rescaled to unit sum first.
std::vector<double> weighted_sum(const std::vector<std::vector<double>>& columns,
                                 std::vector<double> weights, bool normalize = false);

/// Positive reciprocal matrix of pairwise comparison judgments, 2 <= n <= 15.
class ComparisonMatrix {
public:
    explicit ComparisonMatrix(std::vector<std::vector<double>> entries);

    std::size_t size() const { return n_; }
    double at(std::size_t i, std::size_t j) const { return entries_[i * n_ + j]; }
    const std::vector<double>& entries() const { return entries_; }

private:
    std::size_t n_ = 0;
    std::vector<double> entries_;  // row-major
};

struct PriorityVector {
    std::vector<double> weights;      // positive, unit sum
    double lambda_max = 0.0;          // principal eigenvalue estimate
    double consistency_ratio = 0.0;
};

/// Saaty's random index for matrices of size n (n <= 15).
double random_index(std::size_t n);

/// The 17 admissible pairwise judgment values {1/9..1/2, 1, 2..9}.
extern const std::array<double, 17> kSaatyScale;

/// Principal eigenvector of the comparison matrix by power iteration,
/// normalized to unit sum; lambda_max is the Rayleigh-style mean of
/// (A*w)_i / w_i at convergence.
PriorityVector ahp_weights(const ComparisonMatrix& matrix);

/// CI / RI with CI = (lambda_max - n)/(n - 1); zero for n <= 2.
double consistency_ratio(const ComparisonMatrix& matrix);

struct RandomAhpResult {
    ComparisonMatrix matrix;
    PriorityVector priorities;
};

/// Draws Saaty-scale judgments uniformly for the upper triangle, mirrors the
/// reciprocals, and rejects until the consistency ratio is below 0.1.
/// Deterministic for a fixed seed.
RandomAhpResult random_ahp(std::size_t n, std::uint64_t seed);

}  // namespace suitkit
