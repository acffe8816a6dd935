#include "netforge/quality.hpp"

#include <algorithm>
#include <cstdlib>
#include <random>

namespace netforge {

unsigned worker_threads() {
    unsigned n = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("NETFORGE_THREADS")) {
        const long cap = std::strtol(env, nullptr, 10);
        if (cap >= 1) n = std::min<unsigned>(n, static_cast<unsigned>(cap));
    }
    return n;
}

Eigen::MatrixXd random_points(std::size_t n, int d, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    Eigen::MatrixXd p(static_cast<Eigen::Index>(n), d);
    for (Eigen::Index i = 0; i < p.rows(); ++i)
        for (Eigen::Index j = 0; j < p.cols(); ++j) p(i, j) = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    return p;
}

BaselineStats random_baseline(std::size_t n, int d, int realizations, std::uint64_t seed) {
    BaselineStats stats;
    stats.realizations = realizations;
    stats.seed = seed;
    if (realizations <= 0) return stats;
    std::vector<double> values;
    for (int r = 0; r < realizations; ++r)
        values.push_back(generalized_l2(random_points(n, d, seed + static_cast<std::uint64_t>(r))).value);
    double sum = 0.0;
    for (double v : values) sum += v;
    stats.mean = sum / realizations;
    double var = 0.0;
    for (double v : values) var += (v - stats.mean) * (v - stats.mean);
    stats.stddev = realizations > 1 ? std::sqrt(var / (realizations - 1)) : 0.0;
    stats.min = *std::min_element(values.begin(), values.end());
    stats.max = *std::max_element(values.begin(), values.end());
    return stats;
}

std::vector<std::vector<int>> dimension_pairs(int s) {
    std::vector<std::vector<int>> out;
    for (int a = 0; a < s; ++a)
        for (int c = a + 1; c < s; ++c) out.push_back({a, c});
    return out;
}

ProjectionSweep projection_sweep(const Eigen::MatrixXd& points, std::span<const std::size_t> sizes) {
    if (points.cols() < 2) throw std::invalid_argument("projection_sweep needs at least 2 dimensions");
    ProjectionSweep sweep;
    const auto pairs = dimension_pairs(static_cast<int>(points.cols()));
    for (std::size_t n : sizes) {
        if (n == 0 || n > static_cast<std::size_t>(points.rows()))
            throw std::invalid_argument("projection_sweep: prefix size out of range");
        std::vector<double> values;
        for (const auto& pair : pairs) {
            auto v = generalized_l2(points.topRows(static_cast<Eigen::Index>(n)), std::span<const int>(pair));
            sweep.rows.push_back(ProjectionRow{pair, n, v.value});
            values.push_back(v.value);
        }
        std::sort(values.begin(), values.end());
        const std::size_t mid = values.size() / 2;
        const double median = values.size() % 2 ? values[mid] : 0.5 * (values[mid - 1] + values[mid]);
        sweep.summaries.push_back(ProjectionSummary{n, values.front(), median, values.back()});
    }
    return sweep;
}

std::string format_dims(std::span<const int> dims) {
    std::string out;
    for (std::size_t i = 0; i < dims.size(); ++i) out += (i ? "-" : "") + std::to_string(dims[i]);
    return out;
}

}  // namespace netforge
