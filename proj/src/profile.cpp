#include "netforge/profile.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

namespace netforge {

namespace {

using Kind = ProfileError::Kind;

std::string describe(Kind kind) {
    switch (kind) {
        case Kind::UnknownKeyword: return "unknown keyword";
        case Kind::MissingParameter: return "missing parameter";
        case Kind::DimensionOutOfRange: return "dimension out of range";
        case Kind::TOutOfRange: return "t out of range";
        case Kind::NonPrimeBase: return "invalid base";
        case Kind::DuplicateDimension: return "duplicate dimension";
        case Kind::Malformed: return "malformed line";
    }
    return "error";
}

std::optional<long long> parse_int(std::string_view s) {
    long long v = 0;
    if (s.empty()) return std::nullopt;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
    return v;
}

std::vector<std::string_view> tokenize(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
        std::size_t j = i;
        while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
        if (j > i) out.push_back(line.substr(i, j - i));
        i = j;
    }
    return out;
}

}  // namespace

ProfileError::ProfileError(Kind kind, int line, const std::string& what)
    : std::runtime_error((line > 0 ? "line " + std::to_string(line) + ": " : std::string{}) +
                         describe(kind) + ": " + what),
      kind_(kind),
      line_(line) {}

std::optional<Weight> parse_weight(std::string_view token) {
    if (token.empty()) return std::nullopt;
    bool negative = false;
    if (token.front() == '+' || token.front() == '-') {
        negative = token.front() == '-';
        token.remove_prefix(1);
    }
    const auto dot = token.find('.');
    std::string_view whole = token.substr(0, dot);
    std::string_view frac = dot == std::string_view::npos ? std::string_view{} : token.substr(dot + 1);
    if (whole.empty() && frac.empty()) return std::nullopt;
    if (frac.size() > 12 || whole.size() > 15) return std::nullopt;
    auto all_digits = [](std::string_view s) {
        return std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
    };
    if (!all_digits(whole) || !all_digits(frac)) return std::nullopt;
    std::int64_t num = 0, den = 1;
    for (char c : whole) num = num * 10 + (c - '0');
    for (char c : frac) {
        num = num * 10 + (c - '0');
        den *= 10;
    }
    return Weight(negative ? -num : num, den);
}

std::string format_weight(const Weight& w) {
    std::int64_t num = w.numerator(), den = w.denominator();
    int decimals = 0;
    std::int64_t scale = 1;
    // Terminating decimals only come from denominators 2^a 5^c.
    std::int64_t rest = den;
    while (rest % 2 == 0) rest /= 2;
    while (rest % 5 == 0) rest /= 5;
    if (rest != 1) return std::to_string(num) + "/" + std::to_string(den);
    while (scale % den != 0) {
        scale *= 10;
        ++decimals;
    }
    const std::int64_t scaled = num * (scale / den);
    std::string sign = scaled < 0 ? "-" : "";
    const std::int64_t mag = scaled < 0 ? -scaled : scaled;
    std::string out = sign + std::to_string(mag / scale);
    if (decimals > 0) {
        std::string frac = std::to_string(mag % scale);
        out += "." + std::string(decimals - frac.size(), '0') + frac;
    }
    return out;
}

Profile parse_profile(std::istream& in) {
    std::optional<int> s, m, b;
    std::vector<NetConstraint> constraints;
    std::string raw;
    int line_no = 0;

    auto require_header = [&](int line) {
        if (!s) throw ProfileError(Kind::MissingParameter, line, "s is not set");
        if (!m) throw ProfileError(Kind::MissingParameter, line, "m is not set");
        if (!b) throw ProfileError(Kind::MissingParameter, line, "b is not set");
    };

    while (std::getline(in, raw)) {
        ++line_no;
        std::string_view line = raw;
        if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        auto tokens = tokenize(line);
        if (tokens.empty()) continue;

        if (const auto eq = line.find('='); eq != std::string_view::npos) {
            auto key_tokens = tokenize(line.substr(0, eq));
            auto value_tokens = tokenize(line.substr(eq + 1));
            if (key_tokens.size() != 1 || value_tokens.size() != 1)
                throw ProfileError(Kind::Malformed, line_no, "expected <key>=<integer>");
            const auto key = key_tokens[0];
            const auto value = parse_int(value_tokens[0]);
            if (!value) throw ProfileError(Kind::Malformed, line_no, "expected integer after '='");
            if (!constraints.empty())
                throw ProfileError(Kind::Malformed, line_no, "assignment after constraints");
            if (key == "s") {
                if (*value < 1) throw ProfileError(Kind::Malformed, line_no, "s must be >= 1");
                s = static_cast<int>(*value);
            } else if (key == "m") {
                if (*value < 1 || *value > 40) throw ProfileError(Kind::Malformed, line_no, "m must be in [1, 40]");
                m = static_cast<int>(*value);
            } else if (key == "b") {
                if (*value < 2 || *value > 64 || !is_prime(static_cast<int>(*value)))
                    throw ProfileError(Kind::NonPrimeBase, line_no,
                                       "b=" + std::string(value_tokens[0]) + " is not a prime in [2, 64]");
                b = static_cast<int>(*value);
            } else {
                throw ProfileError(Kind::UnknownKeyword, line_no, "'" + std::string(key) + "'");
            }
            continue;
        }

        require_header(line_no);
        NetConstraint c;
        std::size_t pos = 0;
        if (tokens[pos] == "weak") {
            if (tokens.size() < 2) throw ProfileError(Kind::Malformed, line_no, "weak requires a weight");
            auto w = parse_weight(tokens[1]);
            if (!w) throw ProfileError(Kind::Malformed, line_no, "bad weight '" + std::string(tokens[1]) + "'");
            c.weight = *w;
            pos = 2;
        }
        if (pos >= tokens.size()) throw ProfileError(Kind::Malformed, line_no, "missing constraint keyword");
        if (tokens[pos] == "net") {
            c.kind = ConstraintKind::Net;
        } else if (tokens[pos] == "stratified") {
            c.kind = ConstraintKind::Stratified;
        } else {
            throw ProfileError(Kind::UnknownKeyword, line_no, "'" + std::string(tokens[pos]) + "'");
        }
        ++pos;
        if (c.kind == ConstraintKind::Net && pos < tokens.size() && tokens[pos].starts_with('t')) {
            auto t = parse_int(tokens[pos].substr(1));
            if (!t || *t < 0) throw ProfileError(Kind::Malformed, line_no, "bad t '" + std::string(tokens[pos]) + "'");
            if (*t >= *m)
                throw ProfileError(Kind::TOutOfRange, line_no,
                                   "t=" + std::to_string(*t) + " must be below m=" + std::to_string(*m));
            c.t = static_cast<int>(*t);
            ++pos;
        }
        for (; pos < tokens.size(); ++pos) {
            auto d = parse_int(tokens[pos]);
            if (!d) throw ProfileError(Kind::Malformed, line_no, "bad dimension '" + std::string(tokens[pos]) + "'");
            if (*d < 0 || *d >= *s)
                throw ProfileError(Kind::DimensionOutOfRange, line_no,
                                   "dimension " + std::to_string(*d) + " with s=" + std::to_string(*s));
            const int dim = static_cast<int>(*d);
            if (std::find(c.dims.begin(), c.dims.end(), dim) != c.dims.end())
                throw ProfileError(Kind::DuplicateDimension, line_no, "dimension " + std::to_string(dim));
            c.dims.push_back(dim);
        }
        if (c.dims.empty()) throw ProfileError(Kind::Malformed, line_no, "constraint without dimensions");
        constraints.push_back(std::move(c));
    }
    require_header(0);
    Profile p{*s, *m, PrimeBase(*b), std::move(constraints)};
    return p;
}

Profile parse_profile(std::string_view text) {
    std::istringstream in{std::string(text)};
    return parse_profile(in);
}

Profile load_profile(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open profile '" + path + "'");
    return parse_profile(in);
}

std::string format_constraint(const NetConstraint& c) {
    std::string out;
    if (c.weight) out += "weak " + format_weight(*c.weight) + " ";
    if (c.kind == ConstraintKind::Net)
        out += "net t" + std::to_string(c.t);
    else
        out += "stratified";
    for (int d : c.dims) out += " " + std::to_string(d);
    return out;
}

std::string print_profile(const Profile& p) {
    std::string out = "s=" + std::to_string(p.s) + "\nm=" + std::to_string(p.m) +
                      "\nb=" + std::to_string(p.b.value()) + "\n";
    for (const auto& c : p.constraints) out += format_constraint(c) + "\n";
    return out;
}

std::uint64_t profile_hash(const Profile& p) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char ch : print_profile(p)) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    return h;
}

}  // namespace netforge
