#pragma once

#include <cstdint>
#include <initializer_list>
#include <vector>

#include <Eigen/Core>

namespace netforge {

using Digit = std::uint8_t;

/// Dense digit storage. Row-major so that rows of a generator matrix are
/// contiguous; composite matrices are assembled row by row.
using DigitMatrix = Eigen::Matrix<Digit, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using DigitVector = Eigen::Matrix<Digit, Eigen::Dynamic, 1>;

bool is_prime(int n);

/// Prime radix of the digital construction, 2 <= b <= 64.
class PrimeBase {
public:
    explicit PrimeBase(int b);

    int value() const { return b_; }
    operator int() const { return b_; }

    friend bool operator==(PrimeBase, PrimeBase) = default;

private:
    int b_;
};

Digit gf_add(Digit a, Digit c, PrimeBase base);
Digit gf_sub(Digit a, Digit c, PrimeBase base);
Digit gf_neg(Digit a, PrimeBase base);
Digit gf_mul(Digit a, Digit c, PrimeBase base);
/// Multiplicative inverse; throws std::domain_error for a == 0.
Digit gf_inv(Digit a, PrimeBase base);

/// Reduce an arbitrary integer into {0, ..., b-1}.
inline Digit gf_reduce(long long v, PrimeBase base) {
    long long r = v % base.value();
    return static_cast<Digit>(r < 0 ? r + base.value() : r);
}

/// Matrix over F_b. Every entry is kept reduced below b.
class GFMatrix {
public:
    GFMatrix(PrimeBase base, Eigen::Index rows, Eigen::Index cols);
    GFMatrix(PrimeBase base, DigitMatrix entries);
    /// Row-list convenience constructor; entries are reduced mod b.
    GFMatrix(PrimeBase base, std::initializer_list<std::initializer_list<int>> rows);

    static GFMatrix identity(PrimeBase base, Eigen::Index n);

    PrimeBase base() const { return base_; }
    Eigen::Index rows() const { return data_.rows(); }
    Eigen::Index cols() const { return data_.cols(); }

    Digit operator()(Eigen::Index r, Eigen::Index c) const { return data_(r, c); }
    void set(Eigen::Index r, Eigen::Index c, Digit v);

    const DigitMatrix& entries() const { return data_; }

    GFMatrix transpose() const;
    /// Leading rows x cols block.
    GFMatrix top_left(Eigen::Index rows, Eigen::Index cols) const;

    friend bool operator==(const GFMatrix& a, const GFMatrix& b) {
        return a.base_ == b.base_ && a.data_.rows() == b.data_.rows() &&
               a.data_.cols() == b.data_.cols() && a.data_ == b.data_;
    }

private:
    PrimeBase base_;
    DigitMatrix data_;
};

/// In-place row reduction to row echelon form with first-nonzero pivoting.
/// Returns the rank.
int row_reduce(DigitMatrix& m, PrimeBase base);

int rank(const GFMatrix& m);

/// M * v over F_b. Throws std::invalid_argument on a length mismatch.
DigitVector mat_vec_mul(const GFMatrix& m, const DigitVector& v);

}  // namespace netforge
