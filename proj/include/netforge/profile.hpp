#pragma once

#include <cstdint>
#include <istream>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <boost/rational.hpp>

#include "netforge/gfield.hpp"

namespace netforge {

/// Exact weak-constraint weight.
using Weight = boost::rational<std::int64_t>;

enum class ConstraintKind { Net, Stratified };

struct NetConstraint {
    ConstraintKind kind = ConstraintKind::Net;
    std::vector<int> dims;
    int t = 0;                      // always 0 for Stratified
    std::optional<Weight> weight;   // set iff the constraint is weak

    bool is_weak() const { return weight.has_value(); }

    friend bool operator==(const NetConstraint&, const NetConstraint&) = default;
};

struct Profile {
    int s = 0;
    int m = 0;
    PrimeBase b{2};
    std::vector<NetConstraint> constraints;

    friend bool operator==(const Profile&, const Profile&) = default;
};

class ProfileError : public std::runtime_error {
public:
    enum class Kind {
        UnknownKeyword,
        MissingParameter,
        DimensionOutOfRange,
        TOutOfRange,
        NonPrimeBase,
        DuplicateDimension,
        Malformed,
    };

    ProfileError(Kind kind, int line, const std::string& what);

    Kind kind() const { return kind_; }
    /// 1-based; 0 when the error concerns the file as a whole.
    int line() const { return line_; }

private:
    Kind kind_;
    int line_;
};

Profile parse_profile(std::istream& in);
Profile parse_profile(std::string_view text);
Profile load_profile(const std::string& path);

/// Parses a signed decimal such as "-1", "100" or "0.25" into an exact rational.
std::optional<Weight> parse_weight(std::string_view token);
std::string format_weight(const Weight& w);

/// Canonical text form; parse_profile(print_profile(p)) == p.
std::string print_profile(const Profile& p);
std::string format_constraint(const NetConstraint& c);

/// FNV-1a over the canonical text.
std::uint64_t profile_hash(const Profile& p);

}  // namespace netforge
