#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <sstream>

#include "netforge/builder.hpp"
#include "netforge/sampler.hpp"

using namespace netforge;

namespace {

GFMatrix random_matrix(std::mt19937_64& rng, PrimeBase b, int m) {
    GFMatrix g(b, m, m);
    for (int r = 0; r < m; ++r)
        for (int c = 0; c < m; ++c) g.set(r, c, static_cast<Digit>(rng() % static_cast<unsigned>(b.value())));
    return g;
}

}  // namespace

TEST_CASE("digits_of_index") {
    CHECK(digits_of_index(0, PrimeBase(5), 3) == DigitVector::Zero(3));
    const DigitVector five = digits_of_index(5, PrimeBase(2), 4);
    CHECK(std::vector<int>(five.begin(), five.end()) == std::vector<int>{1, 0, 1, 0});
    const DigitVector seven = digits_of_index(7, PrimeBase(3), 3);
    CHECK(std::vector<int>(seven.begin(), seven.end()) == std::vector<int>{1, 2, 0});
    CHECK_THROWS_AS(digits_of_index(27, PrimeBase(3), 3), std::out_of_range);
}

TEST_CASE("identity matrix gives the radical inverse") {
    const auto g = make_generator_set({GFMatrix::identity(PrimeBase(2), 3)});
    const auto p = generate(g, 4);
    CHECK(p.coords(0, 0) == 0.0);
    CHECK(p.coords(1, 0) == 0.5);
    CHECK(p.coords(2, 0) == 0.25);
    CHECK(p.coords(3, 0) == 0.75);
    CHECK_THROWS_AS(generate(g, 9), std::invalid_argument);
}

TEST_CASE("digits follow the matrix-vector product") {
    std::mt19937_64 rng(4);
    for (int bv : {2, 3, 5}) {
        const PrimeBase b(bv);
        const int m = 3;
        auto g = make_generator_set({random_matrix(rng, b, m), random_matrix(rng, b, m)});
        const auto n = ipow(static_cast<std::uint64_t>(bv), m);
        const auto p = generate(g, n);
        CHECK(p.coords.row(0).isZero());
        for (std::uint64_t i = 0; i < n; ++i) {
            const auto idx = digits_of_index(i, b, m);
            for (int j = 0; j < 2; ++j) {
                // written out by hand rather than through mat_vec_mul
                double expected = 0.0, scale = 1.0;
                for (int k = 0; k < m; ++k) {
                    int e = 0;
                    for (int l = 0; l < m; ++l) e += g.matrices[static_cast<std::size_t>(j)](k, l) * idx[l];
                    e %= bv;
                    CHECK(p.digit(static_cast<Eigen::Index>(i), j, k) == e);
                    scale /= bv;
                    expected += e * scale;
                }
                CHECK(p.coords(static_cast<Eigen::Index>(i), j) == doctest::Approx(expected).epsilon(1e-15));
                CHECK(p.coords(static_cast<Eigen::Index>(i), j) < 1.0);
            }
        }
    }
}

TEST_CASE("coordinates sit on the b^-m grid") {
    std::mt19937_64 rng(8);
    const PrimeBase b(3);
    const int m = 7;
    const auto g = make_generator_set({random_matrix(rng, b, m)});
    const auto p = generate(g, ipow(3, m));
    const double scale = static_cast<double>(ipow(3, m));
    for (Eigen::Index i = 0; i < p.size(); ++i) {
        long long exact = 0;
        for (int k = 0; k < m; ++k) exact = exact * 3 + p.digit(i, 0, k);
        CHECK(std::abs(p.coords(i, 0) * scale - static_cast<double>(exact)) < 1e-9);
        CHECK(p.coords(i, 0) == static_cast<double>(exact) / scale);
    }
}

TEST_CASE("prefix consistency with leading submatrices") {
    std::mt19937_64 rng(12);
    for (int bv : {2, 3}) {
        const PrimeBase b(bv);
        const int m = 4;
        std::vector<GFMatrix> mats{random_matrix(rng, b, m), random_matrix(rng, b, m)};
        const auto full = generate(make_generator_set(mats), ipow(static_cast<std::uint64_t>(bv), m));
        for (int mp = 1; mp < m; ++mp) {
            std::vector<GFMatrix> sub;
            for (const auto& c : mats) sub.push_back(c.top_left(mp, mp));
            const auto part = generate(make_generator_set(sub), ipow(static_cast<std::uint64_t>(bv), mp));
            for (Eigen::Index i = 0; i < part.size(); ++i)
                for (int j = 0; j < 2; ++j)
                    for (int k = 0; k < mp; ++k) CHECK(part.digit(i, j, k) == full.digit(i, j, k));
        }
    }
}

TEST_CASE("point and digit output") {
    const auto g = make_generator_set({GFMatrix::identity(PrimeBase(3), 2), GFMatrix(PrimeBase(3), {{0, 1}, {1, 0}})});
    const auto p = generate(g, 4);
    CHECK(coordinate_precision(PrimeBase(3), 2) == 3);
    CHECK(coordinate_precision(PrimeBase(2), 10) == 6);
    std::ostringstream pts;
    write_points(pts, p);
    CHECK(pts.str() == "0.000 0.000\n0.333 0.111\n0.667 0.222\n0.111 0.333\n");
    std::ostringstream dig;
    write_point_digits(dig, p);
    CHECK(dig.str().substr(0, 16) == "0 0\n0 0\n1 0\n0 1\n");

    std::istringstream in(pts.str());
    const auto back = read_points(in);
    CHECK(back.rows() == 4);
    CHECK(back.cols() == 2);
    CHECK(back(3, 1) == doctest::Approx(0.333));
}
