#pragma once
// Brute-force reference routines. None of these call into the elimination,
// solver, or digit-counting code they are used to check.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <random>
#include <vector>

#include "netforge/gfield.hpp"
#include "netforge/gfsolve.hpp"
#include "netforge/netcons.hpp"

namespace oracle {

using Grid = std::vector<std::vector<int>>;

inline Grid to_grid(const netforge::GFMatrix& m) {
    Grid g(static_cast<std::size_t>(m.rows()), std::vector<int>(static_cast<std::size_t>(m.cols())));
    for (Eigen::Index r = 0; r < m.rows(); ++r)
        for (Eigen::Index c = 0; c < m.cols(); ++c) g[r][c] = m(r, c);
    return g;
}

inline int mod(long long v, int b) {
    long long r = v % b;
    return static_cast<int>(r < 0 ? r + b : r);
}

/// Leibniz expansion over all permutations.
inline int determinant(const Grid& a, int b) {
    const std::size_t n = a.size();
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    long long total = 0;
    do {
        int inversions = 0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) inversions += perm[i] > perm[j];
        long long term = 1;
        for (std::size_t i = 0; i < n; ++i) term = term * a[i][perm[i]] % b;
        total += (inversions % 2 ? -term : term);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return mod(total, b);
}

inline std::vector<std::vector<std::size_t>> subsets(std::size_t n, std::size_t k) {
    std::vector<std::vector<std::size_t>> out;
    std::vector<bool> pick(n, false);
    std::fill(pick.begin(), pick.begin() + static_cast<std::ptrdiff_t>(k), true);
    do {
        std::vector<std::size_t> s;
        for (std::size_t i = 0; i < n; ++i)
            if (pick[i]) s.push_back(i);
        out.push_back(s);
    } while (std::prev_permutation(pick.begin(), pick.end()));
    return out;
}

/// Largest r such that some r x r submatrix has a nonzero determinant.
inline int rank_by_minors(const Grid& a, int b) {
    const std::size_t rows = a.size(), cols = rows ? a[0].size() : 0;
    for (std::size_t r = std::min(rows, cols); r > 0; --r) {
        for (const auto& rs : subsets(rows, r))
            for (const auto& cs : subsets(cols, r)) {
                Grid sub(r, std::vector<int>(r));
                for (std::size_t i = 0; i < r; ++i)
                    for (std::size_t j = 0; j < r; ++j) sub[i][j] = a[rs[i]][cs[j]];
                if (determinant(sub, b) != 0) return static_cast<int>(r);
            }
    }
    return 0;
}

/// Exhaustive maximization over all b^n assignments.
struct BruteResult {
    bool feasible = false;
    netforge::Weight best{0};
};

inline BruteResult brute_force(const netforge::ILPModel& model) {
    const int b = model.base.value();
    const std::size_t n = model.variables.size();
    std::vector<netforge::Digit> x(n, 0);
    BruteResult out;
    while (true) {
        if (auto obj = netforge::evaluate(model, x)) {
            if (!out.feasible || *obj > out.best) out.best = *obj;
            out.feasible = true;
        }
        std::size_t i = 0;
        while (i < n && ++x[i] == b) x[i++] = 0;
        if (i == n) break;
    }
    return out;
}

/// Random disequation system over `unknowns` slots of one column.
inline void random_system(std::mt19937_64& rng, int b, int unknowns, int constraints,
                          std::vector<netforge::Disequation>& hard, std::vector<netforge::Disequation>& weak,
                          double hard_fraction = 0.25) {
    const netforge::Weight weights[] = {netforge::Weight(-1), netforge::Weight(1), netforge::Weight(100)};
    for (int c = 0; c < constraints; ++c) {
        netforge::LinearForm form;
        for (int u = 0; u < unknowns; ++u) {
            if (rng() % 3 != 0) continue;
            const auto coeff = static_cast<netforge::Digit>(1 + rng() % static_cast<unsigned>(b - 1));
            form.terms.emplace_back(netforge::UnknownSlot{u % 4, u / 4 + 1, 1}, coeff);
        }
        std::sort(form.terms.begin(), form.terms.end());
        if (form.terms.empty())
            form.terms.emplace_back(netforge::UnknownSlot{0, 1, 1}, netforge::Digit{1});
        form.constant = static_cast<netforge::Digit>(rng() % static_cast<unsigned>(b));
        netforge::Disequation d{form, std::nullopt, -1, c, {}};
        if (std::uniform_real_distribution<double>(0, 1)(rng) < hard_fraction) {
            hard.push_back(d);
        } else {
            d.weight = weights[rng() % 3];
            d.weak_group = static_cast<int>(weak.size());
            weak.push_back(d);
        }
    }
}

}  // namespace oracle
