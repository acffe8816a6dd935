#include "netforge/sampler.hpp"

#include <cmath>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace netforge {

std::uint64_t ipow(std::uint64_t b, int e) {
    std::uint64_t r = 1;
    for (int i = 0; i < e; ++i) {
        if (r > UINT64_MAX / b) throw std::overflow_error("b^m does not fit in 64 bits");
        r *= b;
    }
    return r;
}

DigitVector digits_of_index(std::uint64_t i, PrimeBase base, int m) {
    const auto b = static_cast<std::uint64_t>(base.value());
    bool fits = true;
    std::uint64_t limit = 1;
    for (int k = 0; k < m && fits; ++k) {
        if (limit > UINT64_MAX / b) fits = false;
        else limit *= b;
    }
    if (fits && i >= limit) throw std::out_of_range("index " + std::to_string(i) + " needs more than m digits");
    DigitVector out(m);
    for (int k = 0; k < m; ++k) {
        out(k) = static_cast<Digit>(i % b);
        i /= b;
    }
    return out;
}

double digits_to_real(const Digit* e, int m, PrimeBase base) {
    const int b = base.value();
    if (m * std::log2(static_cast<double>(b)) <= 53.0) {
        std::uint64_t numerator = 0;
        for (int k = 0; k < m; ++k) numerator = numerator * static_cast<std::uint64_t>(b) + e[k];
        return static_cast<double>(numerator) / static_cast<double>(ipow(static_cast<std::uint64_t>(b), m));
    }
    double x = 0.0;
    for (int k = m - 1; k >= 0; --k) x = (x + e[k]) / b;
    return x;
}

PointSet generate(const GeneratorSet& g, std::uint64_t n) {
    const std::uint64_t capacity = ipow(static_cast<std::uint64_t>(g.base.value()), g.m);
    if (n > capacity)
        throw std::invalid_argument("requested " + std::to_string(n) + " points but b^m = " + std::to_string(capacity));
    PointSet p;
    p.base = g.base;
    p.m = g.m;
    p.s = g.s;
    const auto rows = static_cast<Eigen::Index>(n);
    p.digits.resize(rows, static_cast<Eigen::Index>(g.s) * g.m);
    p.coords.resize(rows, g.s);

    const int b = g.base.value();
    std::vector<Digit> out(static_cast<std::size_t>(g.m));
    for (Eigen::Index i = 0; i < rows; ++i) {
        const DigitVector index = digits_of_index(static_cast<std::uint64_t>(i), g.base, g.m);
        for (int j = 0; j < g.s; ++j) {
            const GFMatrix& c = g.matrices[static_cast<std::size_t>(j)];
            for (int r = 0; r < g.m; ++r) {
                int acc = 0;
                for (int k = 0; k < g.m; ++k) acc += int{c(r, k)} * int{index(k)};
                out[static_cast<std::size_t>(r)] = static_cast<Digit>(acc % b);
                p.digits(i, j * g.m + r) = out[static_cast<std::size_t>(r)];
            }
            p.coords(i, j) = digits_to_real(out.data(), g.m, g.base);
        }
    }
    return p;
}

int coordinate_precision(PrimeBase base, int m) {
    return static_cast<int>(std::ceil(m * std::log10(static_cast<double>(base.value())) - 1e-9)) + 2;
}

void write_points(std::ostream& out, const PointSet& p) {
    const int precision = coordinate_precision(p.base, p.m);
    std::ostringstream line;
    line << std::fixed << std::setprecision(precision);
    for (Eigen::Index i = 0; i < p.size(); ++i) {
        line.str("");
        for (int j = 0; j < p.s; ++j) line << (j ? " " : "") << p.coords(i, j);
        out << line.str() << "\n";
    }
}

void write_point_digits(std::ostream& out, const PointSet& p) {
    for (Eigen::Index i = 0; i < p.size(); ++i) {
        for (int j = 0; j < p.s; ++j) {
            for (int k = 0; k < p.m; ++k) out << (k ? " " : "") << int{p.digit(i, j, k)};
            out << "\n";
        }
    }
}

Eigen::MatrixXd read_points(std::istream& in) {
    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos || line[0] == '#') continue;
        std::istringstream ls(line);
        std::vector<double> row;
        double v;
        while (ls >> v) row.push_back(v);
        if (!ls.eof()) throw std::runtime_error("points file: bad number in '" + line + "'");
        if (!rows.empty() && row.size() != rows.front().size())
            throw std::runtime_error("points file: inconsistent dimension count");
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw std::runtime_error("points file: no points");
    Eigen::MatrixXd out(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.front().size()));
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < rows[i].size(); ++j)
            out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    return out;
}

}  // namespace netforge
