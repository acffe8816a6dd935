#include <iostream>

#include <CLI11.hpp>

#include "netforge/cli.hpp"

int main(int argc, char** argv) {
    using namespace netforge::cli;

    CLI::App app{"netforge: digital net generator matrices from constraint profiles"};
    app.require_subcommand(1);

    BuildArgs build;
    auto* build_cmd = app.add_subcommand("build", "build generator matrices from a profile");
    build_cmd->add_option("profile", build.profile, "profile file")->required()->check(CLI::ExistingFile);
    build_cmd->add_option("-o,--output", build.output, "matrix file (default: stdout)");
    build_cmd->add_option("--seed", build.seed, "base seed")->capture_default_str();
    build_cmd->add_option("--restarts", build.restarts, "whole-build attempts")->capture_default_str()->check(
        CLI::PositiveNumber);
    build_cmd->add_option("--budget", build.budget, "solver node budget per column")->capture_default_str();
    build_cmd->add_option("--emit-lp", build.emit_lp_dir, "directory receiving column_<c>.lp models");

    SampleArgs sample;
    auto* sample_cmd = app.add_subcommand("sample", "generate points from a matrix file");
    sample_cmd->add_option("matrices", sample.matrices, "matrix file")->required()->check(CLI::ExistingFile);
    sample_cmd->add_option("-n", sample.n, "number of points (default: b^m)");
    sample_cmd->add_flag("--digits", sample.digits, "print digit vectors instead of coordinates");
    sample_cmd->add_option("-o,--output", sample.output, "output file (default: stdout)");

    VerifyArgs verify;
    std::size_t blocks = 0;
    auto* verify_cmd = app.add_subcommand("verify", "check a matrix file against a profile");
    verify_cmd->add_option("matrices", verify.matrices, "matrix file")->required()->check(CLI::ExistingFile);
    verify_cmd->add_option("profile", verify.profile, "profile file")->required()->check(CLI::ExistingFile);
    auto* blocks_opt = verify_cmd->add_option("--blocks", blocks, "aligned blocks checked per prefix size");
    verify_cmd->add_option("--csv", verify.csv, "write the report as CSV");
    bool no_min_t = false;
    verify_cmd->add_flag("--no-minimal-t", no_min_t, "skip the minimal t computation");

    DiscrepancyArgs disc;
    std::uint64_t disc_n = 0;
    auto* disc_cmd = app.add_subcommand("discrepancy", "generalized L2 discrepancy as CSV");
    disc_cmd->add_option("input", disc.input, "matrix file or points file")->required()->check(CLI::ExistingFile);
    disc_cmd->add_flag("--pairs", disc.pairs, "every 2D projection instead of all dimensions");
    disc_cmd->add_flag("--prefix-sweep", disc.prefix_sweep, "N = b^1 .. b^m");
    auto* disc_n_opt = disc_cmd->add_option("-n", disc_n, "number of points");
    disc_cmd->add_option("--baselines", disc.baselines, "random realizations per row")->capture_default_str();
    disc_cmd->add_option("--seed", disc.seed, "baseline seed")->capture_default_str();
    disc_cmd->add_option("-o,--output", disc.output, "CSV file (default: stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    if (*build_cmd) return cmd_build(build, std::cout, std::cerr);
    if (*sample_cmd) return cmd_sample(sample, std::cout, std::cerr);
    if (*verify_cmd) {
        if (*blocks_opt) verify.blocks = blocks;
        verify.minimal_t = !no_min_t;
        return cmd_verify(verify, std::cout, std::cerr);
    }
    if (*disc_cmd) {
        if (*disc_n_opt) disc.n = disc_n;
        return cmd_discrepancy(disc, std::cout, std::cerr);
    }
    return kExitUsage;
}
