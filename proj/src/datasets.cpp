#include "ganlab/datasets.hpp"

#include <cmath>
#include <numbers>

#include "ganlab/errors.hpp"

namespace ganlab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

}  // namespace

Matrix gen_sine(Index n, Rng& rng) {
    if (n < 1) throw ConfigError("gen_sine: need at least 1 point");
    Matrix points(n, 2);
    for (Index i = 0; i < n; ++i) {
        const double x = rng.uniform(0.0, kTwoPi);
        points(i, 0) = x;
        points(i, 1) = std::sin(x);
    }
    return points;
}

Matrix gen_ellipses(Index n, Rng& rng) {
    if (n < 2) throw ConfigError("gen_ellipses: need at least 2 points");
    const Index n_a = (n + 1) / 2;  // odd n: extra point to ellipse A
    Matrix points(n, 2);
    for (Index i = 0; i < n; ++i) {
        const double theta = rng.uniform(0.0, kTwoPi);
        if (i < n_a) {
            points(i, 0) = 2.0 * std::cos(theta);
            points(i, 1) = std::sin(theta);
        } else {
            points(i, 0) = 1.0 + std::cos(theta);
            points(i, 1) = 2.0 * std::sin(theta);
        }
    }
    return points;
}

Matrix gen_circles(Index n, Rng& rng) {
    if (n < 3) throw ConfigError("gen_circles: need at least 3 points");
    Matrix points(n, 2);
    Index row = 0;
    for (int c = 0; c < 3; ++c) {
        // counts differ by at most one; remainders go to the inner circles
        const Index count = n / 3 + (c < n % 3 ? 1 : 0);
        const double radius = static_cast<double>(c + 1);
        for (Index i = 0; i < count; ++i, ++row) {
            const double theta = rng.uniform(0.0, kTwoPi);
            points(row, 0) = radius * std::cos(theta);
            points(row, 1) = radius * std::sin(theta);
        }
    }
    return points;
}

Matrix sample_latent(Index n, Index dim, Rng& rng) {
    if (n < 1 || dim < 1) throw ConfigError("sample_latent: n and dim must be >= 1");
    Matrix z(n, dim);
    for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < dim; ++j) z(i, j) = rng.uniform(-1.0, 1.0);
    return z;
}

std::vector<Matrix> shuffled_batches(const Matrix& points, Index batch_size, Rng& rng) {
    if (batch_size < 1) throw ConfigError("shuffled_batches: batch_size must be >= 1");
    const Index n = points.rows();

    std::vector<Index> order(static_cast<size_t>(n));
    for (Index i = 0; i < n; ++i) order[static_cast<size_t>(i)] = i;
    for (Index i = n - 1; i > 0; --i) {
        const Index j = static_cast<Index>(rng.below(static_cast<std::uint64_t>(i) + 1));
        std::swap(order[static_cast<size_t>(i)], order[static_cast<size_t>(j)]);
    }

    std::vector<Matrix> batches;
    batches.reserve(static_cast<size_t>((n + batch_size - 1) / batch_size));
    for (Index start = 0; start < n; start += batch_size) {
        const Index rows = std::min(batch_size, n - start);
        Matrix batch(rows, points.cols());
        for (Index r = 0; r < rows; ++r)
            batch.row(r) = points.row(order[static_cast<size_t>(start + r)]);
        batches.push_back(std::move(batch));
    }
    return batches;
}

}  // namespace ganlab
