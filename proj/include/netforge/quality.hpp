#pragma once

#include <cmath>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <Eigen/Core>

namespace netforge {

struct DiscrepancyValue {
    double value = 0.0;
    std::size_t n = 0;
    std::vector<int> dims;
};

/// Threads used for pairwise sums; NETFORGE_THREADS caps it.
unsigned worker_threads();

namespace detail {

/// Neumaier-compensated running sum.
template <typename Scalar>
struct CompensatedSum {
    Scalar sum{0};
    Scalar carry{0};

    void add(Scalar x) {
        const Scalar t = sum + x;
        if (std::abs(sum) >= std::abs(x))
            carry += (sum - t) + x;
        else
            carry += (x - t) + sum;
        sum = t;
    }
    Scalar value() const { return sum + carry; }
};

}  // namespace detail

/// Squared generalized L2 discrepancy (Hickernell closed form) of the rows of
/// `points` restricted to columns `dims`:
///   (4/3)^d - 2/N sum_i prod_j (3 - x_ij^2)/2 + 1/N^2 sum_{i,k} prod_j (2 - max(x_ij, x_kj)).
/// The pair sum runs over i <= k; per-row partial sums are reduced in index
/// order, so the result does not depend on the thread count.
template <typename Scalar = long double, typename Derived>
Scalar generalized_l2_squared(const Eigen::MatrixBase<Derived>& points, std::span<const int> dims) {
    const Eigen::Index n = points.rows();
    if (n == 0) throw std::invalid_argument("generalized_l2: empty point set");
    const auto d = static_cast<Eigen::Index>(dims.size());
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> x(n, d);
    for (Eigen::Index j = 0; j < d; ++j) x.col(j) = points.col(dims[static_cast<std::size_t>(j)]).template cast<Scalar>();

    std::vector<Scalar> row_pairs(static_cast<std::size_t>(n));
    std::vector<Scalar> row_single(static_cast<std::size_t>(n));
    auto work = [&](Eigen::Index begin, Eigen::Index step) {
        for (Eigen::Index i = begin; i < n; i += step) {
            Scalar single{1};
            for (Eigen::Index j = 0; j < d; ++j) single *= (Scalar(3) - x(i, j) * x(i, j)) / Scalar(2);
            row_single[static_cast<std::size_t>(i)] = single;

            detail::CompensatedSum<Scalar> acc;
            Scalar diag{1};
            for (Eigen::Index j = 0; j < d; ++j) diag *= Scalar(2) - x(i, j);
            acc.add(diag);
            for (Eigen::Index k = i + 1; k < n; ++k) {
                Scalar prod{2};  // counts (i,k) and (k,i)
                for (Eigen::Index j = 0; j < d; ++j) prod *= Scalar(2) - std::max(x(i, j), x(k, j));
                acc.add(prod);
            }
            row_pairs[static_cast<std::size_t>(i)] = acc.value();
        }
    };

    const auto threads = static_cast<Eigen::Index>(std::min<std::size_t>(worker_threads(), static_cast<std::size_t>(n)));
    if (threads <= 1 || n < 256) {
        work(0, 1);
    } else {
        std::vector<std::thread> pool;
        for (Eigen::Index t = 0; t < threads; ++t) pool.emplace_back(work, t, threads);
        for (auto& th : pool) th.join();
    }

    detail::CompensatedSum<Scalar> singles, pairs;
    for (Eigen::Index i = 0; i < n; ++i) {
        singles.add(row_single[static_cast<std::size_t>(i)]);
        pairs.add(row_pairs[static_cast<std::size_t>(i)]);
    }
    const auto N = static_cast<Scalar>(n);
    const Scalar result = std::pow(Scalar(4) / Scalar(3), static_cast<Scalar>(d)) -
                          Scalar(2) / N * singles.value() + pairs.value() / (N * N);
    return result < Scalar(0) ? Scalar(0) : result;
}

template <typename Derived>
DiscrepancyValue generalized_l2(const Eigen::MatrixBase<Derived>& points, std::span<const int> dims) {
    DiscrepancyValue v;
    v.value = static_cast<double>(std::sqrt(generalized_l2_squared<long double>(points, dims)));
    v.n = static_cast<std::size_t>(points.rows());
    v.dims.assign(dims.begin(), dims.end());
    return v;
}

/// All columns.
template <typename Derived>
DiscrepancyValue generalized_l2(const Eigen::MatrixBase<Derived>& points) {
    std::vector<int> dims(static_cast<std::size_t>(points.cols()));
    for (std::size_t j = 0; j < dims.size(); ++j) dims[j] = static_cast<int>(j);
    return generalized_l2(points, std::span<const int>(dims));
}

struct BaselineStats {
    double mean = 0.0;
    double min = 0.0;
    double max = 0.0;
    double stddev = 0.0;
    int realizations = 0;
    std::uint64_t seed = 0;
};

/// Uniform random points in [0,1)^d from a seeded mt19937_64.
Eigen::MatrixXd random_points(std::size_t n, int d, std::uint64_t seed);

/// Discrepancy statistics of `realizations` independent random sets of n
/// points in d dimensions; realization r uses seed + r.
BaselineStats random_baseline(std::size_t n, int d, int realizations, std::uint64_t seed);

struct ProjectionRow {
    std::vector<int> dims;
    std::size_t n = 0;
    double value = 0.0;
};

struct ProjectionSummary {
    std::size_t n = 0;
    double min = 0.0;
    double median = 0.0;
    double max = 0.0;
};

struct ProjectionSweep {
    std::vector<ProjectionRow> rows;
    std::vector<ProjectionSummary> summaries;
};

/// Every unordered pair of dimensions, evaluated on the first N points for
/// each N in `sizes`. Throws if the set has fewer than 2 dimensions.
ProjectionSweep projection_sweep(const Eigen::MatrixXd& points, std::span<const std::size_t> sizes);

std::vector<std::vector<int>> dimension_pairs(int s);

std::string format_dims(std::span<const int> dims);

}  // namespace netforge
