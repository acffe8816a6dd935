#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

namespace netforge::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitInfeasible = 2;
inline constexpr int kExitParseError = 3;
inline constexpr int kExitUsage = 64;

struct BuildArgs {
    std::string profile;
    std::string output;
    std::uint64_t seed = 1;
    int restarts = 8;
    std::uint64_t budget = 1'000'000;
    std::string emit_lp_dir;
};

struct SampleArgs {
    std::string matrices;
    std::uint64_t n = 0;
    bool digits = false;
    std::string output;
};

struct VerifyArgs {
    std::string matrices;
    std::string profile;
    std::optional<std::size_t> blocks;
    std::string csv;
    bool minimal_t = true;
};

struct DiscrepancyArgs {
    std::string input;
    bool pairs = false;
    bool prefix_sweep = false;
    std::optional<std::uint64_t> n;
    int baselines = 64;
    std::uint64_t seed = 1;
    std::string output;
};

int cmd_build(const BuildArgs& args, std::ostream& out, std::ostream& err);
int cmd_sample(const SampleArgs& args, std::ostream& out, std::ostream& err);
int cmd_verify(const VerifyArgs& args, std::ostream& out, std::ostream& err);
int cmd_discrepancy(const DiscrepancyArgs& args, std::ostream& out, std::ostream& err);

}  // namespace netforge::cli
