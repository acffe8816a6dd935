#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <map>
#include <random>
#include <sstream>

#include "netforge/builder.hpp"
#include "netforge/netcons.hpp"
#include "netforge/sampler.hpp"
#include "netforge/verify.hpp"
#include "oracles.hpp"

using namespace netforge;

namespace {

GFMatrix pascal(PrimeBase b, int m) {
    GFMatrix g(b, m, m);
    for (int r = 0; r < m; ++r)
        for (int c = r; c < m; ++c) {
            long long v = 1;
            for (int i = 1; i <= r; ++i) v = v * (c - r + i) / i;  // C(c, r)
            g.set(r, c, static_cast<Digit>(v % b.value()));
        }
    return g;
}

GFMatrix random_matrix(std::mt19937_64& rng, PrimeBase b, int m) {
    GFMatrix g(b, m, m);
    for (int r = 0; r < m; ++r)
        for (int c = 0; c < m; ++c) g.set(r, c, static_cast<Digit>(rng() % static_cast<unsigned>(b.value())));
    return g;
}

/// Point set built directly from real coordinates with m exact digits.
PointSet from_coords(PrimeBase b, int m, const std::vector<std::vector<double>>& pts) {
    PointSet p;
    p.base = b;
    p.m = m;
    p.s = static_cast<int>(pts[0].size());
    p.digits = DigitMatrix::Zero(static_cast<Eigen::Index>(pts.size()), p.s * m);
    p.coords = Eigen::MatrixXd(static_cast<Eigen::Index>(pts.size()), p.s);
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (int j = 0; j < p.s; ++j) {
            double x = pts[i][static_cast<std::size_t>(j)];
            p.coords(static_cast<Eigen::Index>(i), j) = x;
            for (int k = 0; k < m; ++k) {
                x *= b.value();
                const int d = static_cast<int>(x);
                p.digits(static_cast<Eigen::Index>(i), j * m + k) = static_cast<Digit>(d);
                x -= d;
            }
        }
    return p;
}

/// Occupancy by integer arithmetic on b^m-scaled coordinates.
bool oracle_net(const PointSet& p, std::span<const int> dims, int t, int m_eff, int m) {
    const long long b = p.base.value();
    const long long scale = static_cast<long long>(ipow(static_cast<std::uint64_t>(b), m));
    const long long n = static_cast<long long>(ipow(static_cast<std::uint64_t>(b), m_eff));
    for (const auto& k : enumerate_kvectors(static_cast<int>(dims.size()), m_eff - t)) {
        std::map<std::vector<long long>, long long> cells;
        for (long long i = 0; i < n; ++i) {
            std::vector<long long> key;
            for (std::size_t j = 0; j < dims.size(); ++j)
                key.push_back(std::llround(p.coords(i, dims[j]) * static_cast<double>(scale)) /
                              static_cast<long long>(ipow(static_cast<std::uint64_t>(b), m - k[j])));
            ++cells[key];
        }
        long long cell_count = 1;
        for (std::size_t j = 0; j < dims.size(); ++j) cell_count *= static_cast<long long>(ipow(static_cast<std::uint64_t>(b), k[j]));
        if (static_cast<long long>(cells.size()) != cell_count) return false;
        for (const auto& [key, c] : cells)
            if (c != static_cast<long long>(ipow(static_cast<std::uint64_t>(b), t))) return false;
    }
    return true;
}

const std::vector<int> kPair{0, 1};

}  // namespace

TEST_CASE("interval_index") {
    const auto p = from_coords(PrimeBase(2), 2, {{0.0, 0.0}, {0.75, 0.25}});
    CHECK(interval_index(p, 0, kPair, KVector{{2, 1}}) == std::vector<std::uint64_t>{0, 0});
    const std::vector<int> d0{0};
    CHECK(interval_index(p, 1, d0, KVector{{2}}) == std::vector<std::uint64_t>{3});
    CHECK(interval_index(p, 1, kPair, KVector{{1, 2}}) == std::vector<std::uint64_t>{1, 1});

    DigitVector five_ninths(2);
    five_ninths << 1, 2;
    const std::vector<DigitVector> digits{five_ninths};
    CHECK(interval_index(digits, KVector{{1}}, PrimeBase(3)) == std::vector<std::uint64_t>{1});
    CHECK(interval_index(digits, KVector{{2}}, PrimeBase(3)) == std::vector<std::uint64_t>{5});
}

TEST_CASE("is_tms_net examples") {
    SUBCASE("duplicated y digit") {
        const auto p = from_coords(PrimeBase(2), 1, {{0.0, 0.0}, {0.5, 0.0}});
        const auto r = is_tms_net(p, kPair, 0, 1);
        CHECK_FALSE(r.pass);
        REQUIRE(r.witness);
        CHECK(r.witness->k == KVector{{0, 1}});
        CHECK(r.witness->count == 2);
        CHECK(r.witness->expected == 1);
        CHECK(minimal_t(p, kPair, 1) == 1);
        CHECK(is_tms_net(p, kPair, 1, 1).pass);
    }
    SUBCASE("(0,3,2)-net in base 3") {
        const auto g = make_generator_set({GFMatrix::identity(PrimeBase(3), 3), pascal(PrimeBase(3), 3)});
        const auto p = generate(g, 27);
        CHECK(is_tms_net(p, kPair, 0, 3).pass);
        CHECK(minimal_t(p, kPair, 3) == 0);
        CHECK(oracle_net(p, kPair, 0, 3, 3));
    }
    SUBCASE("t = m always passes") {
        std::mt19937_64 rng(1);
        const auto g = make_generator_set({random_matrix(rng, PrimeBase(2), 3), random_matrix(rng, PrimeBase(2), 3)});
        CHECK(is_tms_net(generate(g, 8), kPair, 3, 3).pass);
    }
}

TEST_CASE("Sobol pair in base 2 is a (0,4,2)-net") {
    const auto g = make_generator_set({GFMatrix::identity(PrimeBase(2), 4), pascal(PrimeBase(2), 4)});
    const auto p = generate(g, 16);
    CHECK(oracle_net(p, kPair, 0, 4, 4));
    CHECK(minimal_t(p, kPair, 4) == 0);
}

TEST_CASE("net check agrees with the integer counting oracle") {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 120; ++trial) {
        const PrimeBase b(trial % 2 ? 3 : 2);
        const int m = trial % 2 ? 3 : 4;
        const auto g = make_generator_set({random_matrix(rng, b, m), random_matrix(rng, b, m)});
        const auto p = generate(g, ipow(static_cast<std::uint64_t>(b.value()), m));
        for (int t = 0; t <= m; ++t) CHECK(is_tms_net(p, kPair, t, m).pass == oracle_net(p, kPair, t, m, m));
    }
}

TEST_CASE("counts sum to the number of points") {
    std::mt19937_64 rng(2);
    const PrimeBase b(3);
    const auto g = make_generator_set({random_matrix(rng, b, 3), random_matrix(rng, b, 3), random_matrix(rng, b, 3)});
    const auto p = generate(g, 27);
    const std::vector<int> dims{0, 1, 2};
    for (int total = 0; total <= 3; ++total)
        for (const auto& k : enumerate_kvectors(3, total)) {
            const auto counts = interval_counts(p, dims, k, 0, 27);
            std::uint64_t sum = 0;
            for (auto c : counts) sum += c;
            CHECK(sum == 27);
        }
}

TEST_CASE("full rank iff balanced intervals") {
    std::mt19937_64 rng(99);
    int balanced = 0, unbalanced = 0;
    for (int trial = 0; trial < 400; ++trial) {
        const int bv = trial % 2 ? 3 : 2;
        const PrimeBase b(bv);
        const int m = 1 + static_cast<int>(rng() % (bv == 2 ? 4 : 3));
        const int s = 1 + static_cast<int>(rng() % 3);
        std::vector<GFMatrix> mats;
        for (int j = 0; j < s; ++j) mats.push_back(random_matrix(rng, b, m));
        const auto g = make_generator_set(mats);
        const auto p = generate(g, ipow(static_cast<std::uint64_t>(bv), m));
        std::vector<int> dims(static_cast<std::size_t>(s));
        std::iota(dims.begin(), dims.end(), 0);
        for (int t = 0; t < m; ++t)
            for (const auto& k : enumerate_kvectors(s, m - t)) {
                oracle::Grid grid;
                for (int j = 0; j < s; ++j)
                    for (int r = 0; r < k[static_cast<std::size_t>(j)]; ++r) {
                        std::vector<int> row;
                        for (int c = 0; c < m; ++c) row.push_back(mats[static_cast<std::size_t>(j)](r, c));
                        grid.push_back(row);
                    }
                const bool full = oracle::rank_by_minors(grid, bv) == static_cast<int>(grid.size());
                const bool even = family_balanced(p, dims, k, ipow(static_cast<std::uint64_t>(bv), t), 0,
                                                  static_cast<std::size_t>(p.size()));
                CHECK(full == even);
                (even ? balanced : unbalanced)++;
            }
    }
    CHECK(balanced > 0);
    CHECK(unbalanced > 0);
}

TEST_CASE("minimal_t ignores point order") {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 20; ++trial) {
        const PrimeBase b(trial % 2 ? 3 : 2);
        const int m = 3;
        const auto g = make_generator_set({random_matrix(rng, b, m), random_matrix(rng, b, m)});
        auto p = generate(g, ipow(static_cast<std::uint64_t>(b.value()), m));
        const int before = minimal_t(p, kPair, m);
        std::vector<Eigen::Index> order(static_cast<std::size_t>(p.size()));
        std::iota(order.begin(), order.end(), 0);
        std::shuffle(order.begin(), order.end(), rng);
        PointSet q = p;
        for (std::size_t i = 0; i < order.size(); ++i) {
            q.digits.row(static_cast<Eigen::Index>(i)) = p.digits.row(order[i]);
            q.coords.row(static_cast<Eigen::Index>(i)) = p.coords.row(order[i]);
        }
        CHECK(minimal_t(q, kPair, m) == before);
    }
}

TEST_CASE("is_progressive") {
    SUBCASE("van der Corput") {
        const auto g = make_generator_set({GFMatrix::identity(PrimeBase(2), 5)});
        const auto r = is_progressive(g, NetConstraint{ConstraintKind::Net, {0}, 0, std::nullopt});
        CHECK(r.pass);
        CHECK(r.prefixes.size() == 5);
        for (const auto& pr : r.prefixes) {
            CHECK(pr.pass);
            CHECK(pr.blocks_checked == pr.blocks_total);
            REQUIRE(pr.minimal_t);
            CHECK(*pr.minimal_t == 0);
        }
    }
    SUBCASE("zero first row fails at c = 1") {
        GFMatrix bad = GFMatrix::identity(PrimeBase(2), 3);
        bad.set(0, 0, 0);
        const auto g = make_generator_set({bad, GFMatrix::identity(PrimeBase(2), 3)});
        const auto r = is_progressive(g, NetConstraint{ConstraintKind::Net, {0, 1}, 0, std::nullopt});
        CHECK_FALSE(r.pass);
        REQUIRE_FALSE(r.prefixes.empty());
        CHECK(r.prefixes[0].prefix == 1);
        CHECK_FALSE(r.prefixes[0].pass);
        REQUIRE(r.prefixes[0].witness);
        CHECK(r.prefixes[0].witness->k == KVector{{1, 0}});
    }
    SUBCASE("block cap is reported") {
        const auto g = make_generator_set({GFMatrix::identity(PrimeBase(2), 6)});
        VerifyOptions opt;
        opt.block_cap = 4;
        const auto r = is_progressive(g, NetConstraint{ConstraintKind::Net, {0}, 0, std::nullopt}, opt);
        CHECK(r.prefixes[0].blocks_total == 32);
        CHECK(r.prefixes[0].blocks_checked == 4);
    }
    SUBCASE("overlapping constraints build keeps dims 0 and 1 at t = 0") {
        const Profile p = parse_profile("s=6\nm=6\nb=3\nnet t0 0 1\nnet t0 1 2\nweak 1 net t1 3 4 5\nweak 1 net t2 0 1 2 3 4 5\n");
        const auto r = build(p);
        REQUIRE(std::holds_alternative<GeneratorSet>(r));
        const auto rep = is_progressive(std::get<GeneratorSet>(r), p.constraints[0]);
        CHECK(rep.pass);
        for (const auto& pr : rep.prefixes) CHECK(*pr.minimal_t == 0);
    }
}

TEST_CASE("weak_satisfaction") {
    SUBCASE("hard-satisfied constraint has ratio 1") {
        const auto g = make_generator_set({GFMatrix::identity(PrimeBase(2), 4), pascal(PrimeBase(2), 4)});
        for (const auto& pr : weak_satisfaction(g, NetConstraint{ConstraintKind::Net, {0, 1}, 0, Weight(1)}))
            CHECK(pr.ratio() == 1.0);
    }
    SUBCASE("three pairwise weak nets in base 2 cannot all hold") {
        const Profile p = parse_profile("s=3\nm=3\nb=2\nweak 1 net 0 1\nweak 1 net 0 2\nweak 1 net 1 2\n");
        const auto r = build(p);
        REQUIRE(std::holds_alternative<GeneratorSet>(r));
        const auto& g = std::get<GeneratorSet>(r);
        double worst = 1.0;
        for (const auto& c : p.constraints)
            for (const auto& pr : weak_satisfaction(g, c)) worst = std::min(worst, pr.ratio());
        CHECK(worst < 1.0);
    }
    SUBCASE("coarser family is satisfied at least as often") {
        const Profile p = parse_profile("s=3\nm=5\nb=3\nnet 0 1\nweak 1 net t1 0 1 2\nweak 1 net 0 1 2\n");
        for (std::uint64_t seed = 1; seed <= 3; ++seed) {
            BuildOptions opt;
            opt.seed = seed;
            const auto r = build(p, opt);
            REQUIRE(std::holds_alternative<GeneratorSet>(r));
            const auto& g = std::get<GeneratorSet>(r);
            const auto t1 = weak_satisfaction(g, p.constraints[1]);
            const auto t0 = weak_satisfaction(g, p.constraints[2]);
            int sat1 = 0, tot1 = 0, sat0 = 0, tot0 = 0;
            for (const auto& pr : t1) sat1 += pr.satisfied, tot1 += pr.kvectors;
            for (const auto& pr : t0) sat0 += pr.satisfied, tot0 += pr.kvectors;
            CHECK(static_cast<double>(sat1) / tot1 >= static_cast<double>(sat0) / tot0);
        }
    }
}

TEST_CASE("verify_profile and report output") {
    const Profile p = parse_profile("s=2\nm=3\nb=2\nnet 0 1\nweak 1 net 0\n");
    const auto g = make_generator_set({GFMatrix::identity(PrimeBase(2), 3), pascal(PrimeBase(2), 3)});
    const auto report = verify_profile(g, p);
    CHECK(report.hard_pass);
    REQUIRE(report.constraints.size() == 2);
    std::ostringstream csv;
    write_report_csv(csv, report);
    std::istringstream lines(csv.str());
    std::string header, first;
    std::getline(lines, header);
    std::getline(lines, first);
    CHECK(header == "constraint,prefix,kvectors,satisfied,ratio");
    CHECK(first == "\"net t0 0 1\",1,2,2,1.000000");
    std::ostringstream text;
    write_report_text(text, report);
    CHECK(text.str().find("PASS") != std::string::npos);

    const Profile other = parse_profile("s=3\nm=3\nb=2\nnet 0 1\n");
    CHECK_THROWS_AS(verify_profile(g, other), std::invalid_argument);
}
