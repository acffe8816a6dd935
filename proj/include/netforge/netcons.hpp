#pragma once

#include <compare>
#include <map>
#include <optional>
#include <span>
#include <utility>
#include <variant>
#include <vector>

#include "netforge/gfield.hpp"
#include "netforge/profile.hpp"

namespace netforge {

/// Row counts taken from each constrained generator matrix; one elementary
/// interval shape.
struct KVector {
    std::vector<int> counts;

    int total() const;
    std::size_t size() const { return counts.size(); }
    int operator[](std::size_t i) const { return counts[i]; }

    friend bool operator==(const KVector&, const KVector&) = default;
    friend auto operator<=>(const KVector&, const KVector&) = default;
};

std::string format_kvector(const KVector& k);

/// Entry c^{(dim)}_{row,col} of a generator matrix whose value is not yet
/// fixed. row and col are 1-based, dim is 0-based (profile numbering).
struct UnknownSlot {
    int dim = 0;
    int row = 1;
    int col = 1;

    friend bool operator==(const UnknownSlot&, const UnknownSlot&) = default;
    friend auto operator<=>(const UnknownSlot&, const UnknownSlot&) = default;
};

using SlotValues = std::map<UnknownSlot, Digit>;

/// Affine form sum(coeff * slot) + constant over F_b. Terms are kept sorted by
/// slot with nonzero coefficients.
struct LinearForm {
    std::vector<std::pair<UnknownSlot, Digit>> terms;
    Digit constant = 0;

    static LinearForm slot(const UnknownSlot& s) { return LinearForm{{{s, Digit{1}}}, 0}; }
    static LinearForm constant_form(Digit v) { return LinearForm{{}, v}; }

    /// this += factor * other.
    void add_scaled(const LinearForm& other, Digit factor, PrimeBase base);
    void scale(Digit factor, PrimeBase base);
    /// Scale so the leading coefficient is 1 (no-op for constant forms).
    void normalize(PrimeBase base);
    bool is_constant() const { return terms.empty(); }

    Digit evaluate(const SlotValues& values, PrimeBase base) const;

    friend bool operator==(const LinearForm&, const LinearForm&) = default;
    friend auto operator<=>(const LinearForm&, const LinearForm&) = default;
};

/// Form required to be nonzero mod b, hard or weak.
struct Disequation {
    LinearForm form;
    std::optional<Weight> weight;   // weak iff set
    int weak_group = -1;
    int source_constraint = -1;
    KVector k;

    bool is_weak() const { return weight.has_value(); }
    bool holds(const SlotValues& values, PrimeBase base) const { return form.evaluate(values, base) != 0; }
};

/// Composite matrix M_k whose leading columns are concrete and whose last
/// column is symbolic.
struct SymbolicMatrix {
    PrimeBase base;
    DigitMatrix concrete;
    std::vector<LinearForm> last;

    Eigen::Index rows() const { return concrete.rows(); }
};

GFMatrix instantiate(const SymbolicMatrix& m, const SlotValues& values);

namespace outcome {
struct RankDeficient {};
struct AlwaysFullRank {};
struct Conditional {
    LinearForm form;
};
}  // namespace outcome

using EliminationOutcome =
    std::variant<outcome::RankDeficient, outcome::AlwaysFullRank, outcome::Conditional>;

/// All compositions of total into dims non-negative parts, lexicographic.
std::vector<KVector> enumerate_kvectors(int dims, int total);

/// k in {floor(c/dims), ceil(c/dims)}^dims summing to c, lexicographic.
std::vector<KVector> stratification_kvectors(int dims, int c);

/// Stack the first k_j rows of each constrained matrix, restricted to the
/// first c columns; column c becomes the unknown slots (dim, row, c).
/// Throws std::invalid_argument when some k_j exceeds c or the matrix height.
SymbolicMatrix assemble_mk(std::span<const GFMatrix> matrices, std::span<const int> dims,
                           const KVector& k, int c);

EliminationOutcome symbolic_eliminate(const SymbolicMatrix& m);

struct WeakFailure {
    int constraint = -1;
    KVector k;
    Weight weight;
};

struct HardInfeasibility {
    int column = 0;
    int constraint = -1;
    KVector k;
};

struct ColumnSystem {
    std::vector<Disequation> hard;
    std::vector<Disequation> weak;
    std::vector<WeakFailure> forced_failures;
    std::optional<HardInfeasibility> infeasible;
    int always_full_rank = 0;
    int merged_hard = 0;
};

/// Shapes a constraint contributes at prefix size c (empty when c <= t).
std::vector<KVector> constraint_kvectors(const NetConstraint& constraint, int c);

/// Disequations on column c (1-based) given matrices whose columns 1..c-1 are
/// fixed.
ColumnSystem constraints_for_column(const Profile& profile, std::span<const GFMatrix> matrices, int c);

}  // namespace netforge
