#include "netforge/netcons.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>
#include <string>

namespace netforge {

int KVector::total() const {
    int sum = 0;
    for (int k : counts) sum += k;
    return sum;
}

std::string format_kvector(const KVector& k) {
    std::string out = "(";
    for (std::size_t i = 0; i < k.counts.size(); ++i) {
        if (i) out += ",";
        out += std::to_string(k.counts[i]);
    }
    return out + ")";
}

void LinearForm::add_scaled(const LinearForm& other, Digit factor, PrimeBase base) {
    if (factor == 0) return;
    std::vector<std::pair<UnknownSlot, Digit>> merged;
    merged.reserve(terms.size() + other.terms.size());
    auto a = terms.begin();
    auto b = other.terms.begin();
    while (a != terms.end() || b != other.terms.end()) {
        if (b == other.terms.end() || (a != terms.end() && a->first < b->first)) {
            merged.push_back(*a++);
        } else if (a == terms.end() || b->first < a->first) {
            merged.emplace_back(b->first, gf_mul(factor, b->second, base));
            ++b;
        } else {
            const Digit v = gf_add(a->second, gf_mul(factor, b->second, base), base);
            if (v != 0) merged.emplace_back(a->first, v);
            ++a;
            ++b;
        }
    }
    terms = std::move(merged);
    constant = gf_add(constant, gf_mul(factor, other.constant, base), base);
}

void LinearForm::scale(Digit factor, PrimeBase base) {
    if (factor == 0) {
        terms.clear();
        constant = 0;
        return;
    }
    for (auto& [slot, coeff] : terms) coeff = gf_mul(coeff, factor, base);
    constant = gf_mul(constant, factor, base);
}

void LinearForm::normalize(PrimeBase base) {
    if (terms.empty() || terms.front().second == 1) return;
    scale(gf_inv(terms.front().second, base), base);
}

Digit LinearForm::evaluate(const SlotValues& values, PrimeBase base) const {
    long long acc = constant;
    for (const auto& [slot, coeff] : terms) {
        auto it = values.find(slot);
        if (it == values.end()) throw std::out_of_range("no value for unknown slot");
        acc += static_cast<long long>(coeff) * it->second;
    }
    return gf_reduce(acc, base);
}

GFMatrix instantiate(const SymbolicMatrix& m, const SlotValues& values) {
    DigitMatrix full(m.concrete.rows(), m.concrete.cols() + 1);
    full.leftCols(m.concrete.cols()) = m.concrete;
    for (Eigen::Index r = 0; r < m.concrete.rows(); ++r)
        full(r, m.concrete.cols()) = m.last[static_cast<std::size_t>(r)].evaluate(values, m.base);
    return GFMatrix(m.base, std::move(full));
}

std::vector<KVector> enumerate_kvectors(int dims, int total) {
    std::vector<KVector> out;
    if (dims < 1 || total < 0) return out;
    std::vector<int> k(static_cast<std::size_t>(dims), 0);
    // Recursive fill in lexicographic order of (k_0, k_1, ...).
    auto fill = [&](auto&& self, std::size_t pos, int remaining) -> void {
        if (pos + 1 == k.size()) {
            k[pos] = remaining;
            out.push_back(KVector{k});
            return;
        }
        for (int v = 0; v <= remaining; ++v) {
            k[pos] = v;
            self(self, pos + 1, remaining - v);
        }
    };
    fill(fill, 0, total);
    return out;
}

std::vector<KVector> stratification_kvectors(int dims, int c) {
    std::vector<KVector> out;
    if (dims < 1 || c < 0) return out;
    const int lo = c / dims;
    const int hi = (c + dims - 1) / dims;
    for (auto& k : enumerate_kvectors(dims, c)) {
        if (std::all_of(k.counts.begin(), k.counts.end(), [&](int v) { return v == lo || v == hi; }))
            out.push_back(std::move(k));
    }
    return out;
}

SymbolicMatrix assemble_mk(std::span<const GFMatrix> matrices, std::span<const int> dims,
                           const KVector& k, int c) {
    if (k.size() != dims.size()) throw std::invalid_argument("k-vector length does not match dimensions");
    if (dims.empty()) throw std::invalid_argument("no dimensions");
    if (c < 1) throw std::invalid_argument("prefix size must be >= 1");
    const PrimeBase base = matrices[static_cast<std::size_t>(dims[0])].base();
    const int rows = k.total();
    SymbolicMatrix out{base, DigitMatrix(rows, c - 1), {}};
    out.last.reserve(static_cast<std::size_t>(rows));
    int r = 0;
    for (std::size_t i = 0; i < dims.size(); ++i) {
        const GFMatrix& gen = matrices[static_cast<std::size_t>(dims[i])];
        const int kj = k[i];
        if (kj > c || kj > gen.rows() || c > gen.cols())
            throw std::invalid_argument("k_j=" + std::to_string(kj) + " exceeds available rows of dimension " +
                                        std::to_string(dims[i]) + " at prefix " + std::to_string(c));
        for (int l = 0; l < kj; ++l, ++r) {
            out.concrete.row(r) = gen.entries().row(l).head(c - 1);
            out.last.push_back(LinearForm::slot(UnknownSlot{dims[i], l + 1, c}));
        }
    }
    return out;
}

EliminationOutcome symbolic_eliminate(const SymbolicMatrix& m) {
    const PrimeBase base = m.base;
    DigitMatrix a = m.concrete;
    std::vector<LinearForm> last = m.last;
    const Eigen::Index rows = a.rows(), cols = a.cols();

    Eigen::Index pivot_row = 0;
    for (Eigen::Index col = 0; col < cols && pivot_row < rows; ++col) {
        Eigen::Index sel = pivot_row;
        while (sel < rows && a(sel, col) == 0) ++sel;
        if (sel == rows) continue;
        if (sel != pivot_row) {
            a.row(sel).swap(a.row(pivot_row));
            std::swap(last[static_cast<std::size_t>(sel)], last[static_cast<std::size_t>(pivot_row)]);
        }
        const Digit inv = gf_inv(a(pivot_row, col), base);
        for (Eigen::Index r = pivot_row + 1; r < rows; ++r) {
            if (a(r, col) == 0) continue;
            const Digit factor = gf_mul(a(r, col), inv, base);
            for (Eigen::Index cc = col; cc < cols; ++cc)
                a(r, cc) = gf_sub(a(r, cc), gf_mul(factor, a(pivot_row, cc), base), base);
            last[static_cast<std::size_t>(r)].add_scaled(last[static_cast<std::size_t>(pivot_row)],
                                                         gf_neg(factor, base), base);
        }
        ++pivot_row;
    }

    const Eigen::Index zero_rows = rows - pivot_row;
    if (zero_rows == 0) return outcome::AlwaysFullRank{};
    if (zero_rows >= 2) return outcome::RankDeficient{};

    LinearForm form = last[static_cast<std::size_t>(pivot_row)];
    if (form.is_constant()) {
        if (form.constant != 0) return outcome::AlwaysFullRank{};
        return outcome::RankDeficient{};
    }
    form.normalize(base);
    return outcome::Conditional{std::move(form)};
}

std::vector<KVector> constraint_kvectors(const NetConstraint& constraint, int c) {
    const int d = static_cast<int>(constraint.dims.size());
    if (constraint.kind == ConstraintKind::Stratified) return stratification_kvectors(d, c);
    if (c <= constraint.t) return {};
    return enumerate_kvectors(d, c - constraint.t);
}

ColumnSystem constraints_for_column(const Profile& profile, std::span<const GFMatrix> matrices, int c) {
    ColumnSystem out;
    std::set<LinearForm> seen_hard;
    for (std::size_t ci = 0; ci < profile.constraints.size(); ++ci) {
        const NetConstraint& constraint = profile.constraints[ci];
        for (auto& k : constraint_kvectors(constraint, c)) {
            const auto mk = assemble_mk(matrices, constraint.dims, k, c);
            auto result = symbolic_eliminate(mk);
            if (std::holds_alternative<outcome::AlwaysFullRank>(result)) {
                ++out.always_full_rank;
                continue;
            }
            if (std::holds_alternative<outcome::RankDeficient>(result)) {
                if (constraint.is_weak()) {
                    out.forced_failures.push_back(WeakFailure{static_cast<int>(ci), k, *constraint.weight});
                } else if (!out.infeasible) {
                    out.infeasible = HardInfeasibility{c, static_cast<int>(ci), k};
                }
                continue;
            }
            auto& form = std::get<outcome::Conditional>(result).form;
            Disequation d{form, constraint.weight, -1, static_cast<int>(ci), k};
            if (constraint.is_weak()) {
                d.weak_group = static_cast<int>(out.weak.size());
                out.weak.push_back(std::move(d));
            } else if (seen_hard.insert(form).second) {
                out.hard.push_back(std::move(d));
            } else {
                ++out.merged_hard;
            }
        }
    }
    return out;
}

}  // namespace netforge
