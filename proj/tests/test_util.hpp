#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>

#include "sqg/matcore.hpp"

namespace sqg::testing {

inline CMatrix random_matrix(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng) {
    std::normal_distribution<double> n(0.0, 1.0);
    CMatrix m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = Complex(n(rng), n(rng));
    return m;
}

inline CMatrix random_hermitian(Eigen::Index n, std::mt19937_64& rng) {
    const CMatrix a = random_matrix(n, n, rng);
    return (a + a.adjoint()) / 2.0;
}

inline CMatrix random_hermitian(Eigen::Index n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    return random_hermitian(n, rng);
}

inline CMatrix pauli_x() {
    CMatrix m(2, 2);
    m << 0, 1, 1, 0;
    return m;
}

inline CMatrix pauli_y() {
    CMatrix m(2, 2);
    m << 0, Complex(0, -1), Complex(0, 1), 0;
    return m;
}

inline CMatrix pauli_z() {
    CMatrix m(2, 2);
    m << 1, 0, 0, -1;
    return m;
}

inline CMatrix diag(std::initializer_list<double> v) {
    CMatrix m = CMatrix::Zero(static_cast<Eigen::Index>(v.size()), static_cast<Eigen::Index>(v.size()));
    Eigen::Index k = 0;
    for (double x : v) m(k, k) = x, ++k;
    return m;
}

// Brute-force oracle for two-outcome qubit problems: scan projective
// measurements over a Fibonacci grid on the Bloch sphere plus the trivial ones.
inline double qubit_grid_value(const CMatrix& r0, const CMatrix& r1, int n_points = 20000) {
    double best = std::max(r0.trace().real(), r1.trace().real());
    const double golden = M_PI * (3.0 - std::sqrt(5.0));
    for (int k = 0; k < n_points; ++k) {
        const double z = 1.0 - 2.0 * (k + 0.5) / n_points;
        const double r = std::sqrt(1.0 - z * z);
        const double phi = golden * k;
        const CMatrix p0 =
            0.5 * (cidentity(2) + r * std::cos(phi) * pauli_x() + r * std::sin(phi) * pauli_y() + z * pauli_z());
        const double v = hs_inner(p0, r0).real() + hs_inner(CMatrix(cidentity(2) - p0), r1).real();
        best = std::max(best, v);
    }
    return best;
}

}  // namespace sqg::testing
