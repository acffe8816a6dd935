#include "netforge/gfield.hpp"

#include <stdexcept>
#include <string>

namespace netforge {

bool is_prime(int n) {
    if (n < 2) return false;
    for (int d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

PrimeBase::PrimeBase(int b) : b_(b) {
    if (b < 2 || b > 64)
        throw std::invalid_argument("base " + std::to_string(b) + " outside [2, 64]");
    if (!is_prime(b))
        throw std::invalid_argument("base " + std::to_string(b) + " is not prime");
}

Digit gf_add(Digit a, Digit c, PrimeBase base) {
    return static_cast<Digit>((int{a} + int{c}) % base.value());
}

Digit gf_sub(Digit a, Digit c, PrimeBase base) {
    return static_cast<Digit>((int{a} - int{c} + base.value()) % base.value());
}

Digit gf_neg(Digit a, PrimeBase base) {
    return static_cast<Digit>((base.value() - int{a}) % base.value());
}

Digit gf_mul(Digit a, Digit c, PrimeBase base) {
    return static_cast<Digit>((int{a} * int{c}) % base.value());
}

Digit gf_inv(Digit a, PrimeBase base) {
    if (a % base.value() == 0) throw std::domain_error("inverse of zero in F_b");
    // Extended Euclid on (a, b).
    int r0 = base.value(), r1 = a, s0 = 0, s1 = 1;
    while (r1 != 0) {
        int q = r0 / r1;
        int tmp = r0 - q * r1;
        r0 = r1;
        r1 = tmp;
        tmp = s0 - q * s1;
        s0 = s1;
        s1 = tmp;
    }
    return gf_reduce(s0, base);
}

GFMatrix::GFMatrix(PrimeBase base, Eigen::Index rows, Eigen::Index cols)
    : base_(base), data_(DigitMatrix::Zero(rows, cols)) {}

GFMatrix::GFMatrix(PrimeBase base, DigitMatrix entries) : base_(base), data_(std::move(entries)) {
    for (Eigen::Index r = 0; r < data_.rows(); ++r)
        for (Eigen::Index c = 0; c < data_.cols(); ++c)
            if (data_(r, c) >= base_.value()) throw std::invalid_argument("matrix entry not below base");
}

GFMatrix::GFMatrix(PrimeBase base, std::initializer_list<std::initializer_list<int>> rows)
    : base_(base) {
    const auto nrows = static_cast<Eigen::Index>(rows.size());
    const auto ncols = nrows ? static_cast<Eigen::Index>(rows.begin()->size()) : 0;
    data_ = DigitMatrix::Zero(nrows, ncols);
    Eigen::Index r = 0;
    for (const auto& row : rows) {
        if (static_cast<Eigen::Index>(row.size()) != ncols) throw std::invalid_argument("ragged rows");
        Eigen::Index c = 0;
        for (int v : row) data_(r, c++) = gf_reduce(v, base_);
        ++r;
    }
}

GFMatrix GFMatrix::identity(PrimeBase base, Eigen::Index n) {
    GFMatrix m(base, n, n);
    for (Eigen::Index i = 0; i < n; ++i) m.data_(i, i) = 1;
    return m;
}

void GFMatrix::set(Eigen::Index r, Eigen::Index c, Digit v) {
    if (v >= base_.value()) throw std::invalid_argument("matrix entry not below base");
    data_(r, c) = v;
}

GFMatrix GFMatrix::transpose() const { return GFMatrix(base_, DigitMatrix(data_.transpose())); }

GFMatrix GFMatrix::top_left(Eigen::Index rows, Eigen::Index cols) const {
    return GFMatrix(base_, DigitMatrix(data_.topLeftCorner(rows, cols)));
}

int row_reduce(DigitMatrix& m, PrimeBase base) {
    const Eigen::Index rows = m.rows(), cols = m.cols();
    Eigen::Index pivot_row = 0;
    for (Eigen::Index col = 0; col < cols && pivot_row < rows; ++col) {
        Eigen::Index sel = pivot_row;
        while (sel < rows && m(sel, col) == 0) ++sel;
        if (sel == rows) continue;
        if (sel != pivot_row) m.row(sel).swap(m.row(pivot_row));
        const Digit inv = gf_inv(m(pivot_row, col), base);
        for (Eigen::Index r = pivot_row + 1; r < rows; ++r) {
            if (m(r, col) == 0) continue;
            const Digit factor = gf_mul(m(r, col), inv, base);
            for (Eigen::Index c = col; c < cols; ++c)
                m(r, c) = gf_sub(m(r, c), gf_mul(factor, m(pivot_row, c), base), base);
        }
        ++pivot_row;
    }
    return static_cast<int>(pivot_row);
}

int rank(const GFMatrix& m) {
    DigitMatrix work = m.entries();
    return row_reduce(work, m.base());
}

DigitVector mat_vec_mul(const GFMatrix& m, const DigitVector& v) {
    if (v.size() != m.cols())
        throw std::invalid_argument("mat_vec_mul: vector length " + std::to_string(v.size()) +
                                    " does not match " + std::to_string(m.cols()) + " columns");
    DigitVector out(m.rows());
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        long long acc = 0;
        for (Eigen::Index c = 0; c < m.cols(); ++c) acc += int{m(r, c)} * int{v(c)};
        out(r) = gf_reduce(acc, m.base());
    }
    return out;
}

}  // namespace netforge
