#include "netforge/builder.hpp"

#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

namespace netforge {

std::uint64_t mix_seed(std::uint64_t x) {
    // splitmix64 finalizer
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

namespace {

/// Smallest prefix of the hard rows that is already unsatisfiable; its last
/// row names the culprit.
std::optional<std::size_t> first_conflicting_row(PrimeBase base, const std::vector<Disequation>& hard) {
    for (std::size_t n = 1; n <= hard.size(); ++n) {
        auto model = build_ilp(base, std::span(hard).first(n), {});
        SolveOptions opts;
        opts.budget = 5'000'000;
        if (solve(model, opts).status == SolveStatus::HardInfeasible) return n - 1;
    }
    return std::nullopt;
}

struct Attempt {
    std::optional<GeneratorSet> result;
    BuildFailure failure;
};

Attempt build_once(const Profile& profile, const BuildOptions& options, std::uint64_t seed) {
    const PrimeBase base = profile.b;
    const int m = profile.m;
    std::mt19937_64 rng(mix_seed(seed));

    GeneratorSet g;
    g.base = base;
    g.m = m;
    g.s = profile.s;
    g.matrices.assign(static_cast<std::size_t>(profile.s), GFMatrix(base, m, m));
    g.profile_hash = profile_hash(profile);
    g.seed = seed;

    auto fail = [&](int column, int constraint, KVector k, std::string reason) {
        Attempt a;
        a.failure.column = column;
        a.failure.constraint = constraint;
        if (constraint >= 0)
            a.failure.constraint_text = format_constraint(profile.constraints[static_cast<std::size_t>(constraint)]);
        a.failure.k = std::move(k);
        a.failure.reason = std::move(reason);
        return a;
    };

    for (int c = 1; c <= m; ++c) {
        ColumnSystem system = constraints_for_column(profile, g.matrices, c);
        if (system.infeasible)
            return fail(c, system.infeasible->constraint, system.infeasible->k,
                        "composite matrix is rank deficient for every choice of the new column");

        ILPModel model = build_ilp(base, system.hard, system.weak);
        if (options.on_model) options.on_model(c, model);

        SolveOptions solve_options;
        solve_options.budget = options.budget;
        solve_options.seed = rng();
        SolveResult solved = solve(model, solve_options);

        if (!solved.feasible()) {
            std::string reason = solved.status == SolveStatus::HardInfeasible
                                     ? "hard disequations admit no common solution"
                                     : "node budget exhausted before a feasible column was found";
            if (solved.status == SolveStatus::HardInfeasible) {
                if (auto row = first_conflicting_row(base, system.hard)) {
                    const Disequation& d = system.hard[*row];
                    return fail(c, d.source_constraint, d.k, reason);
                }
            }
            return fail(c, -1, {}, reason);
        }

        const SlotValues values = solved.assignment.slot_values(model);
        for (const auto& [slot, value] : values)
            g.matrices[static_cast<std::size_t>(slot.dim)].set(slot.row - 1, slot.col - 1, value);

        ColumnStats stats;
        stats.column = c;
        stats.status = solved.status;
        stats.objective = solved.assignment.objective;
        stats.hard_rows = static_cast<int>(model.hard.size());
        stats.forced_failures = static_cast<int>(system.forced_failures.size());
        stats.weak_total = static_cast<int>(model.weak.size()) + stats.forced_failures;
        for (bool sat : solved.assignment.satisfied) stats.weak_satisfied += sat ? 1 : 0;
        stats.nodes = solved.nodes;
        g.columns.push_back(stats);

        // Rows c+1..m of column c never enter a composite matrix at this prefix.
        // Entries of column c that no constraint mentions are drawn here too.
        for (int dim = 0; dim < profile.s; ++dim) {
            for (int row = 1; row <= m; ++row) {
                if (row <= c && values.contains(UnknownSlot{dim, row, c})) continue;
                g.matrices[static_cast<std::size_t>(dim)].set(row - 1, c - 1,
                                                              static_cast<Digit>(rng() % static_cast<std::uint64_t>(base.value())));
            }
        }
    }
    Attempt a;
    a.result = std::move(g);
    return a;
}

}  // namespace

BuildResult build(const Profile& profile, const BuildOptions& options) {
    BuildFailure last;
    const int attempts = std::max(1, options.restarts);
    for (int attempt = 0; attempt < attempts; ++attempt) {
        Attempt a = build_once(profile, options, options.seed + static_cast<std::uint64_t>(attempt));
        if (a.result) {
            a.result->attempt = attempt;
            return std::move(*a.result);
        }
        last = std::move(a.failure);
        last.attempts = attempt + 1;
    }
    return last;
}

std::string describe(const BuildFailure& failure) {
    std::ostringstream os;
    os << "infeasible at column " << failure.column;
    if (failure.constraint >= 0)
        os << ", constraint #" << failure.constraint << " '" << failure.constraint_text << "', k-vector "
           << format_kvector(failure.k);
    os << ": " << failure.reason << " (after " << failure.attempts << " attempt"
       << (failure.attempts == 1 ? "" : "s") << ")";
    return os.str();
}

void write_matrices(std::ostream& out, const GeneratorSet& g) {
    out << "b=" << g.base.value() << " s=" << g.s << " m=" << g.m << "\n";
    for (int j = 0; j < g.s; ++j) {
        if (j > 0) out << "\n";
        const GFMatrix& mat = g.matrices[static_cast<std::size_t>(j)];
        for (int r = 0; r < g.m; ++r) {
            for (int c = 0; c < g.m; ++c) out << (c ? " " : "") << int{mat(r, c)};
            out << "\n";
        }
    }
}

std::string format_matrices(const GeneratorSet& g) {
    std::ostringstream os;
    write_matrices(os, g);
    return os.str();
}

GeneratorSet read_matrices(std::istream& in) {
    std::string header;
    if (!std::getline(in, header)) throw std::runtime_error("matrix file: empty input");
    int b = 0, s = 0, m = 0;
    if (std::sscanf(header.c_str(), "b=%d s=%d m=%d", &b, &s, &m) != 3 || s < 1 || m < 1)
        throw std::runtime_error("matrix file: bad header '" + header + "'");
    const PrimeBase base(b);
    std::vector<GFMatrix> matrices;
    std::string line;
    for (int j = 0; j < s; ++j) {
        if (j > 0) {
            if (!std::getline(in, line) || line.find_first_not_of(" \t\r") != std::string::npos)
                throw std::runtime_error("matrix file: expected blank line before block " + std::to_string(j));
        }
        DigitMatrix entries(m, m);
        for (int r = 0; r < m; ++r) {
            if (!std::getline(in, line)) throw std::runtime_error("matrix file: truncated block " + std::to_string(j));
            std::istringstream row(line);
            for (int c = 0; c < m; ++c) {
                int v = -1;
                if (!(row >> v) || v < 0 || v >= b)
                    throw std::runtime_error("matrix file: bad digit in block " + std::to_string(j) + " row " +
                                             std::to_string(r + 1));
                entries(r, c) = static_cast<Digit>(v);
            }
            int extra;
            if (row >> extra) throw std::runtime_error("matrix file: too many digits in a row");
        }
        matrices.emplace_back(base, std::move(entries));
    }
    return make_generator_set(std::move(matrices));
}

GeneratorSet load_matrices(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open matrix file '" + path + "'");
    return read_matrices(in);
}

GeneratorSet make_generator_set(std::vector<GFMatrix> matrices) {
    if (matrices.empty()) throw std::invalid_argument("no matrices");
    GeneratorSet g;
    g.base = matrices.front().base();
    g.m = static_cast<int>(matrices.front().rows());
    g.s = static_cast<int>(matrices.size());
    for (const auto& mat : matrices)
        if (mat.base() != g.base || mat.rows() != g.m || mat.cols() != g.m)
            throw std::invalid_argument("generator matrices must share base and size");
    g.matrices = std::move(matrices);
    return g;
}

}  // namespace netforge
