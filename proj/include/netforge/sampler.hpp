#pragma once

#include <cstdint>
#include <iosfwd>

#include <Eigen/Core>

#include "netforge/builder.hpp"
#include "netforge/gfield.hpp"

namespace netforge {

/// Points of a digital net. digits holds, for point i, the m output digits of
/// every dimension: digit k (0-based, most significant first) of dimension j
/// sits at column j*m + k. coords holds the real embedding in [0,1).
struct PointSet {
    PrimeBase base{2};
    int m = 0;
    int s = 0;
    DigitMatrix digits;
    Eigen::MatrixXd coords;

    Eigen::Index size() const { return coords.rows(); }
    Digit digit(Eigen::Index point, int dim, int k) const { return digits(point, dim * m + k); }
};

/// b^m, or throws std::overflow_error when it does not fit in 64 bits.
std::uint64_t ipow(std::uint64_t b, int e);

/// Little-endian base-b digits of i, length m. Throws std::out_of_range if
/// i >= b^m.
DigitVector digits_of_index(std::uint64_t i, PrimeBase base, int m);

/// Value of the digit string sum e_k b^{-k}.
double digits_to_real(const Digit* e, int m, PrimeBase base);

/// First n points of the digital construction. Throws std::invalid_argument
/// if n > b^m.
PointSet generate(const GeneratorSet& g, std::uint64_t n);

/// Decimal places used by write_points: ceil(m log10 b) + 2.
int coordinate_precision(PrimeBase base, int m);

void write_points(std::ostream& out, const PointSet& p);
/// One line per point per dimension, m space-separated digits.
void write_point_digits(std::ostream& out, const PointSet& p);

/// Reads whitespace-separated coordinates, one point per line.
Eigen::MatrixXd read_points(std::istream& in);

}  // namespace netforge
