#include "netforge/cli.hpp"

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>

#include "netforge/builder.hpp"
#include "netforge/profile.hpp"
#include "netforge/quality.hpp"
#include "netforge/sampler.hpp"
#include "netforge/verify.hpp"

namespace netforge::cli {

namespace {

/// Writes to `path`, or to `fallback` when path is empty.
template <typename Fn>
bool with_output(const std::string& path, std::ostream& fallback, std::ostream& err, Fn&& fn) {
    if (path.empty()) {
        fn(fallback);
        return true;
    }
    std::ofstream file(path, std::ios::binary);
    if (!file) {
        err << "error: cannot write '" << path << "'\n";
        return false;
    }
    fn(file);
    return static_cast<bool>(file);
}

bool looks_like_matrix_file(const std::string& path) {
    std::ifstream in(path);
    std::string first;
    std::getline(in, first);
    return first.rfind("b=", 0) == 0;
}

}  // namespace

int cmd_build(const BuildArgs& args, std::ostream& out, std::ostream& err) {
    Profile profile;
    try {
        profile = load_profile(args.profile);
    } catch (const ProfileError& e) {
        err << args.profile << ": " << e.what() << "\n";
        return kExitParseError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitFailure;
    }

    if (!args.emit_lp_dir.empty()) {
        std::error_code ec;
        std::filesystem::create_directories(args.emit_lp_dir, ec);
        if (ec) {
            err << "error: cannot create '" << args.emit_lp_dir << "': " << ec.message() << "\n";
            return kExitFailure;
        }
    }

    BuildOptions options;
    options.seed = args.seed;
    options.restarts = args.restarts;
    options.budget = args.budget;
    if (!args.emit_lp_dir.empty()) {
        // Each attempt rewrites the files, so the directory ends up holding the
        // models of the attempt that produced the output.
        options.on_model = [&](int column, const ILPModel& model) {
            std::ofstream lp(std::filesystem::path(args.emit_lp_dir) / ("column_" + std::to_string(column) + ".lp"));
            lp << export_lp(model);
        };
    }

    BuildResult result = build(profile, options);
    if (auto* failure = std::get_if<BuildFailure>(&result)) {
        err << describe(*failure) << "\n";
        return kExitInfeasible;
    }
    const auto& g = std::get<GeneratorSet>(result);

    out << "profile " << args.profile << " hash " << std::hex << std::setw(16) << std::setfill('0')
        << g.profile_hash << std::dec << std::setfill(' ') << " seed " << g.seed << " attempt " << g.attempt << "\n";
    for (const auto& col : g.columns) {
        out << "column " << col.column << ": hard " << col.hard_rows << ", weak " << col.weak_satisfied << "/"
            << col.weak_total << ", objective " << format_weight(col.objective) << ", " << to_string(col.status)
            << "\n";
    }
    if (!with_output(args.output, out, err, [&](std::ostream& os) { write_matrices(os, g); }))
        return kExitFailure;
    return kExitOk;
}

int cmd_sample(const SampleArgs& args, std::ostream& out, std::ostream& err) {
    GeneratorSet g;
    try {
        g = load_matrices(args.matrices);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitFailure;
    }
    std::uint64_t capacity = 0;
    try {
        capacity = ipow(static_cast<std::uint64_t>(g.base.value()), g.m);
    } catch (const std::overflow_error&) {
        capacity = UINT64_MAX;
    }
    const std::uint64_t n = args.n == 0 ? capacity : args.n;
    if (n > capacity) {
        err << "usage: -n " << n << " exceeds b^m = " << capacity << "\n";
        return kExitUsage;
    }
    const PointSet points = generate(g, n);
    if (!with_output(args.output, out, err, [&](std::ostream& os) {
            if (args.digits)
                write_point_digits(os, points);
            else
                write_points(os, points);
        }))
        return kExitFailure;
    return kExitOk;
}

int cmd_verify(const VerifyArgs& args, std::ostream& out, std::ostream& err) {
    Profile profile;
    try {
        profile = load_profile(args.profile);
    } catch (const ProfileError& e) {
        err << args.profile << ": " << e.what() << "\n";
        return kExitParseError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitFailure;
    }
    VerificationReport report;
    try {
        const GeneratorSet g = load_matrices(args.matrices);
        VerifyOptions options;
        options.block_cap = args.blocks;
        options.compute_minimal_t = args.minimal_t;
        report = verify_profile(g, profile, options);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    write_report_text(out, report);
    if (!args.csv.empty() &&
        !with_output(args.csv, out, err, [&](std::ostream& os) { write_report_csv(os, report); }))
        return kExitFailure;
    return report.hard_pass ? kExitOk : kExitFailure;
}

int cmd_discrepancy(const DiscrepancyArgs& args, std::ostream& out, std::ostream& err) {
    Eigen::MatrixXd points;
    std::vector<std::size_t> sizes;
    try {
        if (looks_like_matrix_file(args.input)) {
            const GeneratorSet g = load_matrices(args.input);
            const std::uint64_t capacity = ipow(static_cast<std::uint64_t>(g.base.value()), g.m);
            const std::uint64_t n = args.n.value_or(capacity);
            if (n == 0 || n > capacity) {
                err << "usage: -n " << n << " outside [1, b^m = " << capacity << "]\n";
                return kExitUsage;
            }
            points = generate(g, n).coords;
            if (args.prefix_sweep) {
                for (std::uint64_t size = static_cast<std::uint64_t>(g.base.value()); size <= n;
                     size *= static_cast<std::uint64_t>(g.base.value()))
                    sizes.push_back(static_cast<std::size_t>(size));
            }
        } else {
            std::ifstream in(args.input);
            if (!in) {
                err << "error: cannot open '" << args.input << "'\n";
                return kExitFailure;
            }
            points = read_points(in);
            if (args.n) {
                if (*args.n == 0 || *args.n > static_cast<std::uint64_t>(points.rows())) {
                    err << "usage: -n outside the number of points\n";
                    return kExitUsage;
                }
                points.conservativeResize(static_cast<Eigen::Index>(*args.n), points.cols());
            }
            if (args.prefix_sweep) {
                err << "usage: --prefix-sweep needs a matrix file\n";
                return kExitUsage;
            }
        }
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitFailure;
    }
    if (sizes.empty()) sizes.push_back(static_cast<std::size_t>(points.rows()));
    if (args.pairs && points.cols() < 2) {
        err << "usage: --pairs needs at least 2 dimensions\n";
        return kExitUsage;
    }

    std::vector<std::vector<int>> subsets;
    if (args.pairs) {
        subsets = dimension_pairs(static_cast<int>(points.cols()));
    } else {
        std::vector<int> all(static_cast<std::size_t>(points.cols()));
        for (std::size_t j = 0; j < all.size(); ++j) all[j] = static_cast<int>(j);
        subsets.push_back(all);
    }

    auto emit = [&](std::ostream& os) {
        os << "# generalized L2 discrepancy, Hickernell closed form: sqrt((4/3)^d - 2/N sum prod (3-x^2)/2"
              " + 1/N^2 sum sum prod (2-max))\n";
        os << "# baselines " << args.baselines << " uniform random sets, seed " << args.seed << "\n";
        os << "dims,N,value,baseline_mean,baseline_min,baseline_max\n";
        os << std::setprecision(12);
        for (std::size_t n : sizes) {
            const auto prefix = points.topRows(static_cast<Eigen::Index>(n));
            // Baselines depend only on (N, d); compute once per subset size.
            std::map<std::size_t, BaselineStats> baselines;
            for (const auto& dims : subsets) {
                const auto v = generalized_l2(prefix, std::span<const int>(dims));
                auto it = baselines.find(dims.size());
                if (it == baselines.end())
                    it = baselines
                             .emplace(dims.size(), random_baseline(n, static_cast<int>(dims.size()), args.baselines,
                                                                   args.seed))
                             .first;
                os << format_dims(dims) << "," << n << "," << v.value << ",";
                if (args.baselines > 0)
                    os << it->second.mean << "," << it->second.min << "," << it->second.max << "\n";
                else
                    os << ",,\n";
            }
        }
    };
    if (!with_output(args.output, out, err, emit)) return kExitFailure;
    return kExitOk;
}

}  // namespace netforge::cli
