#include "suitkit/aggregate.hpp"

#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

namespace suitkit {

std::vector<double> weighted_sum(const std::vector<std::vector<double>>& columns,
                                 std::vector<double> weights, bool normalize) {
    if (columns.empty() || columns.size() != weights.size()) {
        throw std::invalid_argument("weighted_sum needs one weight per column");
    }
    const std::size_t rows = columns[0].size();
    for (const auto& col : columns) {
        if (col.size() != rows) {
            throw std::invalid_argument("weighted_sum columns differ in length");
        }
    }
    double total = 0.0;
    for (double w : weights) {
        if (!(w >= 0.0) || !std::isfinite(w)) {
            throw std::invalid_argument("weights must be non-negative");
        }
        total += w;
    }
    if (normalize) {
        if (total <= 0.0) {
            throw std::invalid_argument("cannot normalize zero weights");
        }
        for (double& w : weights) w /= total;
    } else if (std::abs(total - 1.0) > 1e-9) {
        throw std::invalid_argument("weights sum to " + std::to_string(total) +
                                    ", expected 1 (pass normalize to rescale)");
    }

    std::vector<double> out(rows, 0.0);
    for (std::size_t k = 0; k < columns.size(); ++k) {
        const double w = weights[k];
        const auto& col = columns[k];
        for (std::size_t i = 0; i < rows; ++i) out[i] += w * col[i];
    }
    return out;
}

ComparisonMatrix::ComparisonMatrix(std::vector<std::vector<double>> entries) {
    n_ = entries.size();
    if (n_ < 2 || n_ > 15) {
        throw std::invalid_argument("comparison matrix must be 2x2 .. 15x15");
    }
    entries_.resize(n_ * n_);
    for (std::size_t i = 0; i < n_; ++i) {
        if (entries[i].size() != n_) {
            throw std::invalid_argument("comparison matrix must be square");
        }
        for (std::size_t j = 0; j < n_; ++j) {
            const double v = entries[i][j];
            if (!(v > 0.0) || !std::isfinite(v)) {
                throw std::invalid_argument("comparison matrix entries must be positive");
            }
            entries_[i * n_ + j] = v;
        }
    }
    for (std::size_t i = 0; i < n_; ++i) {
        if (std::abs(at(i, i) - 1.0) > 1e-9) {
            throw std::invalid_argument("comparison matrix diagonal must be 1");
        }
        for (std::size_t j = i + 1; j < n_; ++j) {
            if (std::abs(at(i, j) * at(j, i) - 1.0) > 1e-9) {
                throw std::invalid_argument("comparison matrix is not reciprocal at (" +
                                            std::to_string(i) + "," + std::to_string(j) +
                                            ")");
            }
        }
    }
}

double random_index(std::size_t n) {
    // Saaty's random-index constants; values past n=10 follow the common
    // extension of the table.
    static constexpr std::array<double, 15> kRandomIndex = {
        0.0, 0.0, 0.58, 0.90, 1.12, 1.24, 1.32, 1.41,
        1.45, 1.49, 1.51, 1.54, 1.56, 1.57, 1.58};
    if (n < 1 || n > kRandomIndex.size()) {
        throw std::invalid_argument("random index undefined for n=" + std::to_string(n));
    }
    return kRandomIndex[n - 1];
}

const std::array<double, 17> kSaatyScale = {
    1.0 / 9.0, 1.0 / 8.0, 1.0 / 7.0, 1.0 / 6.0, 1.0 / 5.0, 1.0 / 4.0,
    1.0 / 3.0, 1.0 / 2.0, 1.0,       2.0,       3.0,       4.0,
    5.0,       6.0,       7.0,       8.0,       9.0};

PriorityVector ahp_weights(const ComparisonMatrix& matrix) {
    const std::size_t n = matrix.size();
    constexpr int kMaxIterations = 10000;
    constexpr double kTolerance = 1e-12;

    std::vector<double> w(n, 1.0 / static_cast<double>(n));
    std::vector<double> product(n, 0.0);
    double residual = 0.0;
    for (int iter = 0; iter < kMaxIterations; ++iter) {
        double sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double acc = 0.0;
            for (std::size_t j = 0; j < n; ++j) acc += matrix.at(i, j) * w[j];
            product[i] = acc;
            sum += acc;
        }
        residual = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double next = product[i] / sum;
            residual = std::max(residual, std::abs(next - w[i]));
            w[i] = next;
        }
        if (residual < kTolerance) break;
    }
    if (residual >= kTolerance) {
        throw std::runtime_error("AHP power iteration did not converge (residual " +
                                 std::to_string(residual) + ")");
    }

    PriorityVector result;
    result.weights = w;
    double lambda = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < n; ++j) acc += matrix.at(i, j) * w[j];
        lambda += acc / w[i];
    }
    result.lambda_max = lambda / static_cast<double>(n);
    if (n <= 2) {
        result.consistency_ratio = 0.0;
    } else {
        const double ci =
            (result.lambda_max - static_cast<double>(n)) / (static_cast<double>(n) - 1.0);
        result.consistency_ratio = ci / random_index(n);
    }
    return result;
}

double consistency_ratio(const ComparisonMatrix& matrix) {
    return ahp_weights(matrix).consistency_ratio;
}

RandomAhpResult random_ahp(std::size_t n, std::uint64_t seed) {
    if (n < 2 || n > 15) {
        throw std::invalid_argument("random_ahp requires 2 <= n <= 15");
    }
    constexpr int kMaxDraws = 100000;
    std::mt19937_64 rng(seed);
    for (int attempt = 0; attempt < kMaxDraws; ++attempt) {
        std::vector<std::vector<double>> entries(n, std::vector<double>(n, 1.0));
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                // Modulo keeps the draw reproducible across standard libraries.
                const double v = kSaatyScale[rng() % kSaatyScale.size()];
                entries[i][j] = v;
                entries[j][i] = 1.0 / v;
            }
        }
        ComparisonMatrix matrix(std::move(entries));
        PriorityVector priorities = ahp_weights(matrix);
        if (priorities.consistency_ratio < 0.1) {
            return RandomAhpResult{std::move(matrix), std::move(priorities)};
        }
    }
    throw std::runtime_error("random_ahp rejection cap exceeded for n=" +
                             std::to_string(n) + "; try a smaller matrix");
}

}  // namespace suitkit
