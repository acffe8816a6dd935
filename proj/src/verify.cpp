#include "netforge/verify.hpp"

#include <algorithm>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace netforge {

namespace {

std::uint64_t points_needed(PrimeBase base, int m_eff) { return ipow(static_cast<std::uint64_t>(base.value()), m_eff); }

void require_points(const PointSet& p, std::size_t first, std::uint64_t count) {
    if (first + count > static_cast<std::uint64_t>(p.size()))
        throw std::invalid_argument("point set holds " + std::to_string(p.size()) + " points, need " +
                                    std::to_string(first + count));
}

/// Row-major cell id over the shape k.
std::uint64_t flat_cell(const PointSet& p, Eigen::Index point, std::span<const int> dims, const KVector& k) {
    const auto b = static_cast<std::uint64_t>(p.base.value());
    std::uint64_t id = 0;
    for (std::size_t j = 0; j < dims.size(); ++j)
        for (int l = 0; l < k[j]; ++l) id = id * b + p.digit(point, dims[j], l);
    return id;
}

std::vector<std::uint64_t> unflatten(std::uint64_t id, const KVector& k, PrimeBase base) {
    const auto b = static_cast<std::uint64_t>(base.value());
    std::vector<std::uint64_t> a(k.size(), 0);
    for (std::size_t j = k.size(); j-- > 0;) {
        const std::uint64_t width = ipow(b, k[j]);
        a[j] = id % width;
        id /= width;
    }
    return a;
}

NetCheck check_family(const PointSet& p, std::span<const int> dims, std::span<const KVector> family,
                      std::uint64_t expected, std::size_t first, std::size_t count) {
    for (const auto& k : family) {
        if (family_balanced(p, dims, k, expected, first, count)) continue;
        const auto counts = interval_counts(p, dims, k, first, count);
        for (std::size_t cell = 0; cell < counts.size(); ++cell) {
            if (counts[cell] != expected)
                return NetCheck{false, NetWitness{k, unflatten(cell, k, p.base), counts[cell], expected}};
        }
    }
    return NetCheck{};
}

std::size_t default_block_cap(const PointSet& p) {
    const std::uint64_t total = points_needed(p.base, p.m);
    return total <= 6561 ? static_cast<std::size_t>(total) : 64;
}

}  // namespace

std::vector<std::uint64_t> interval_index(const PointSet& p, Eigen::Index point, std::span<const int> dims,
                                          const KVector& k) {
    const auto b = static_cast<std::uint64_t>(p.base.value());
    std::vector<std::uint64_t> a(dims.size(), 0);
    for (std::size_t j = 0; j < dims.size(); ++j)
        for (int l = 0; l < k[j]; ++l) a[j] = a[j] * b + p.digit(point, dims[j], l);
    return a;
}

std::vector<std::uint64_t> interval_index(std::span<const DigitVector> digits, const KVector& k, PrimeBase base) {
    if (digits.size() != k.size()) throw std::invalid_argument("interval_index: shape and digits disagree");
    const auto b = static_cast<std::uint64_t>(base.value());
    std::vector<std::uint64_t> a(k.size(), 0);
    for (std::size_t j = 0; j < k.size(); ++j) {
        if (k[j] > digits[j].size()) throw std::invalid_argument("interval_index: not enough digits");
        for (int l = 0; l < k[j]; ++l) a[j] = a[j] * b + digits[j](l);
    }
    return a;
}

std::vector<std::uint64_t> interval_counts(const PointSet& p, std::span<const int> dims, const KVector& k,
                                           std::size_t first, std::size_t count) {
    require_points(p, first, count);
    std::vector<std::uint64_t> counts(static_cast<std::size_t>(points_needed(p.base, k.total())), 0);
    for (std::size_t i = first; i < first + count; ++i) ++counts[flat_cell(p, static_cast<Eigen::Index>(i), dims, k)];
    return counts;
}

bool family_balanced(const PointSet& p, std::span<const int> dims, const KVector& k, std::uint64_t expected,
                     std::size_t first, std::size_t count) {
    require_points(p, first, count);
    const std::uint64_t cells = points_needed(p.base, k.total());
    if (cells * expected != count) return false;
    std::vector<std::uint32_t> counts(static_cast<std::size_t>(cells), 0);
    // The counts sum to cells * expected, so any imbalance overfills some cell.
    for (std::size_t i = first; i < first + count; ++i)
        if (++counts[flat_cell(p, static_cast<Eigen::Index>(i), dims, k)] > expected) return false;
    return true;
}

NetCheck is_tms_net(const PointSet& p, std::span<const int> dims, int t, int m_eff, std::size_t first) {
    if (t < 0 || t > m_eff) throw std::invalid_argument("is_tms_net: need 0 <= t <= m");
    const auto count = static_cast<std::size_t>(points_needed(p.base, m_eff));
    require_points(p, first, count);
    const auto family = enumerate_kvectors(static_cast<int>(dims.size()), m_eff - t);
    return check_family(p, dims, family, points_needed(p.base, t), first, count);
}

NetCheck is_stratified(const PointSet& p, std::span<const int> dims, int c, std::size_t first) {
    const auto count = static_cast<std::size_t>(points_needed(p.base, c));
    require_points(p, first, count);
    const auto family = stratification_kvectors(static_cast<int>(dims.size()), c);
    return check_family(p, dims, family, 1, first, count);
}

int minimal_t(const PointSet& p, std::span<const int> dims, int m_eff, std::size_t first) {
    for (int t = 0; t < m_eff; ++t)
        if (is_tms_net(p, dims, t, m_eff, first).pass) return t;
    return m_eff;
}

double ConstraintReport::overall_ratio() const {
    long long sat = 0, total = 0;
    for (const auto& r : prefixes) {
        sat += r.satisfied;
        total += r.kvectors;
    }
    return total == 0 ? 1.0 : static_cast<double>(sat) / static_cast<double>(total);
}

namespace {

int first_prefix(const NetConstraint& c) { return c.kind == ConstraintKind::Net ? c.t + 1 : 1; }

std::uint64_t expected_per_cell(const NetConstraint& c, PrimeBase base) {
    return c.kind == ConstraintKind::Net ? points_needed(base, c.t) : 1;
}

}  // namespace

std::vector<PrefixResult> weak_satisfaction(const PointSet& all_points, const NetConstraint& constraint) {
    std::vector<PrefixResult> out;
    const std::uint64_t expected = expected_per_cell(constraint, all_points.base);
    for (int c = first_prefix(constraint); c <= all_points.m; ++c) {
        PrefixResult r;
        r.prefix = c;
        const auto count = static_cast<std::size_t>(points_needed(all_points.base, c));
        for (const auto& k : constraint_kvectors(constraint, c)) {
            ++r.kvectors;
            if (family_balanced(all_points, constraint.dims, k, expected, 0, count)) ++r.satisfied;
        }
        r.pass = r.satisfied == r.kvectors;
        out.push_back(std::move(r));
    }
    return out;
}

std::vector<PrefixResult> weak_satisfaction(const GeneratorSet& g, const NetConstraint& constraint) {
    return weak_satisfaction(generate(g, ipow(static_cast<std::uint64_t>(g.base.value()), g.m)), constraint);
}

ConstraintReport is_progressive(const PointSet& all_points, const NetConstraint& constraint,
                                const VerifyOptions& options) {
    ConstraintReport report;
    report.constraint = constraint;
    const PrimeBase base = all_points.base;
    const std::uint64_t total_points = points_needed(base, all_points.m);
    require_points(all_points, 0, static_cast<std::size_t>(total_points));
    const std::size_t cap = options.block_cap.value_or(default_block_cap(all_points));
    const std::uint64_t expected = expected_per_cell(constraint, base);

    for (PrefixResult& r : weak_satisfaction(all_points, constraint)) {
        const int c = r.prefix;
        const auto block_size = static_cast<std::size_t>(points_needed(base, c));
        const auto family = constraint_kvectors(constraint, c);
        r.blocks_total = static_cast<std::size_t>(total_points / block_size);
        r.pass = r.satisfied == r.kvectors;
        if (!r.pass) {
            r.witness = check_family(all_points, constraint.dims, family, expected, 0, block_size).witness;
            r.failing_block = 0;
        }
        r.blocks_checked = 1;
        for (std::size_t blk = 1; r.pass && blk < r.blocks_total && r.blocks_checked < cap; ++blk) {
            ++r.blocks_checked;
            auto check = check_family(all_points, constraint.dims, family, expected, blk * block_size, block_size);
            if (!check.pass) {
                r.pass = false;
                r.witness = std::move(check.witness);
                r.failing_block = blk;
            }
        }
        if (options.compute_minimal_t) r.minimal_t = minimal_t(all_points, constraint.dims, c);
        report.pass = report.pass && r.pass;
        report.prefixes.push_back(std::move(r));
    }
    return report;
}

ConstraintReport is_progressive(const GeneratorSet& g, const NetConstraint& constraint, const VerifyOptions& options) {
    return is_progressive(generate(g, ipow(static_cast<std::uint64_t>(g.base.value()), g.m)), constraint, options);
}

VerificationReport verify_profile(const GeneratorSet& g, const Profile& profile, const VerifyOptions& options) {
    if (g.base != profile.b || g.s != profile.s || g.m != profile.m)
        throw std::invalid_argument("matrices (b=" + std::to_string(g.base.value()) + " s=" + std::to_string(g.s) +
                                    " m=" + std::to_string(g.m) + ") do not match the profile (b=" +
                                    std::to_string(profile.b.value()) + " s=" + std::to_string(profile.s) +
                                    " m=" + std::to_string(profile.m) + ")");
    const PointSet points = generate(g, ipow(static_cast<std::uint64_t>(g.base.value()), g.m));
    VerificationReport report;
    for (std::size_t i = 0; i < profile.constraints.size(); ++i) {
        ConstraintReport c = is_progressive(points, profile.constraints[i], options);
        c.index = static_cast<int>(i);
        if (!c.constraint.is_weak()) report.hard_pass = report.hard_pass && c.pass;
        report.constraints.push_back(std::move(c));
    }
    return report;
}

void write_report_text(std::ostream& out, const VerificationReport& report) {
    for (const auto& c : report.constraints) {
        const bool weak = c.constraint.is_weak();
        out << "constraint #" << c.index << " '" << format_constraint(c.constraint) << "': ";
        if (weak)
            out << "weak, overall ratio " << std::fixed << std::setprecision(4) << c.overall_ratio() << "\n";
        else
            out << (c.pass ? "PASS" : "FAIL") << "\n";
        for (const auto& r : c.prefixes) {
            out << "  prefix " << r.prefix << ": " << r.satisfied << "/" << r.kvectors << " shapes";
            if (weak) out << " ratio " << std::fixed << std::setprecision(4) << r.ratio();
            out << ", blocks " << r.blocks_checked << "/" << r.blocks_total;
            if (r.minimal_t) out << ", minimal t " << *r.minimal_t;
            if (!r.pass && r.witness) {
                out << ", witness k=" << format_kvector(r.witness->k) << " interval (";
                for (std::size_t j = 0; j < r.witness->interval.size(); ++j)
                    out << (j ? "," : "") << r.witness->interval[j];
                out << ") holds " << r.witness->count << " points, expected " << r.witness->expected;
                if (r.failing_block) out << " (block " << *r.failing_block << ")";
            }
            out << "\n";
        }
    }
    out << (report.hard_pass ? "all hard constraints pass" : "hard constraint violated") << "\n";
}

void write_report_csv(std::ostream& out, const VerificationReport& report) {
    out << "constraint,prefix,kvectors,satisfied,ratio\n";
    for (const auto& c : report.constraints)
        for (const auto& r : c.prefixes)
            out << "\"" << format_constraint(c.constraint) << "\"," << r.prefix << "," << r.kvectors << ","
                << r.satisfied << "," << std::fixed << std::setprecision(6) << r.ratio() << "\n";
}

}  // namespace netforge
