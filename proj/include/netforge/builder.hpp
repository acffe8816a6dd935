#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include "netforge/gfield.hpp"
#include "netforge/gfsolve.hpp"
#include "netforge/netcons.hpp"
#include "netforge/profile.hpp"

namespace netforge {

struct ColumnStats {
    int column = 0;
    SolveStatus status = SolveStatus::Optimal;
    Weight objective{0};
    int hard_rows = 0;
    int weak_satisfied = 0;
    int weak_total = 0;      // includes sub-constraints that were rank deficient before solving
    int forced_failures = 0;
    std::uint64_t nodes = 0;
};

/// s generator matrices of size m x m, plus how they were obtained.
struct GeneratorSet {
    PrimeBase base{2};
    int m = 0;
    int s = 0;
    std::vector<GFMatrix> matrices;

    std::uint64_t profile_hash = 0;
    std::uint64_t seed = 0;
    int attempt = 0;
    std::vector<ColumnStats> columns;
};

struct BuildFailure {
    int column = 0;
    int constraint = -1;
    std::string constraint_text;
    KVector k;
    int attempts = 0;
    std::string reason;
};

using BuildResult = std::variant<GeneratorSet, BuildFailure>;

struct BuildOptions {
    std::uint64_t seed = 1;
    int restarts = 8;
    std::uint64_t budget = 1'000'000;
    /// Called with every column model before it is solved.
    std::function<void(int column, const ILPModel&)> on_model;
};

BuildResult build(const Profile& profile, const BuildOptions& options = {});

std::string describe(const BuildFailure& failure);

/// Seed stream used by the builder: attempt a of base seed s draws from
/// mt19937_64(mix_seed(s + a)).
std::uint64_t mix_seed(std::uint64_t x);

void write_matrices(std::ostream& out, const GeneratorSet& g);
std::string format_matrices(const GeneratorSet& g);
GeneratorSet read_matrices(std::istream& in);
GeneratorSet load_matrices(const std::string& path);

/// Wraps bare matrices (all m x m over the same base).
GeneratorSet make_generator_set(std::vector<GFMatrix> matrices);

}  // namespace netforge
