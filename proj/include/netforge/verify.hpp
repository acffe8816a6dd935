#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "netforge/builder.hpp"
#include "netforge/netcons.hpp"
#include "netforge/profile.hpp"
#include "netforge/sampler.hpp"

namespace netforge {

/// Leading-digit prefixes a_j of one point, for an interval shape k over dims.
std::vector<std::uint64_t> interval_index(const PointSet& p, Eigen::Index point, std::span<const int> dims,
                                          const KVector& k);
/// Same, from explicit per-dimension digit strings (most significant first).
std::vector<std::uint64_t> interval_index(std::span<const DigitVector> digits, const KVector& k, PrimeBase base);

struct NetWitness {
    KVector k;
    std::vector<std::uint64_t> interval;
    std::uint64_t count = 0;
    std::uint64_t expected = 0;
};

struct NetCheck {
    bool pass = true;
    std::optional<NetWitness> witness;
};

/// Occupancy of every cell of shape k over points [first, first + count).
std::vector<std::uint64_t> interval_counts(const PointSet& p, std::span<const int> dims, const KVector& k,
                                           std::size_t first, std::size_t count);

/// True iff each cell of shape k holds exactly `expected` of the points.
bool family_balanced(const PointSet& p, std::span<const int> dims, const KVector& k, std::uint64_t expected,
                     std::size_t first, std::size_t count);

/// Checks the (t, m_eff, |dims|)-net property on points [first, first + b^m_eff).
NetCheck is_tms_net(const PointSet& p, std::span<const int> dims, int t, int m_eff, std::size_t first = 0);

/// Each cell of every generalized-stratification shape of size c holds one point.
NetCheck is_stratified(const PointSet& p, std::span<const int> dims, int c, std::size_t first = 0);

int minimal_t(const PointSet& p, std::span<const int> dims, int m_eff, std::size_t first = 0);

struct VerifyOptions {
    /// Aligned blocks checked per prefix size. Unset: all blocks when
    /// b^m <= 3^8, otherwise 64.
    std::optional<std::size_t> block_cap;
    bool compute_minimal_t = true;
};

struct PrefixResult {
    int prefix = 0;
    bool pass = true;
    std::optional<NetWitness> witness;
    std::optional<std::uint64_t> failing_block;
    std::size_t blocks_checked = 0;
    std::size_t blocks_total = 0;
    int kvectors = 0;
    int satisfied = 0;
    std::optional<int> minimal_t;

    double ratio() const { return kvectors == 0 ? 1.0 : static_cast<double>(satisfied) / kvectors; }
};

struct ConstraintReport {
    int index = -1;
    NetConstraint constraint;
    bool pass = true;
    std::vector<PrefixResult> prefixes;

    /// satisfied / total over every prefix.
    double overall_ratio() const;
};

struct VerificationReport {
    std::vector<ConstraintReport> constraints;
    bool hard_pass = true;
};

/// Prefix-by-prefix net (or stratification) check of one constraint.
ConstraintReport is_progressive(const PointSet& all_points, const NetConstraint& constraint,
                                const VerifyOptions& options = {});
ConstraintReport is_progressive(const GeneratorSet& g, const NetConstraint& constraint,
                                const VerifyOptions& options = {});

/// Fraction of satisfied interval shapes per prefix size.
std::vector<PrefixResult> weak_satisfaction(const PointSet& all_points, const NetConstraint& constraint);
std::vector<PrefixResult> weak_satisfaction(const GeneratorSet& g, const NetConstraint& constraint);

/// Throws std::invalid_argument if the matrices do not match the profile.
VerificationReport verify_profile(const GeneratorSet& g, const Profile& profile, const VerifyOptions& options = {});

void write_report_text(std::ostream& out, const VerificationReport& report);
/// Columns: constraint,prefix,kvectors,satisfied,ratio.
void write_report_csv(std::ostream& out, const VerificationReport& report);

}  // namespace netforge
