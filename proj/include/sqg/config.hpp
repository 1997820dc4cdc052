#pragma once

#include <complex>
#include <cstddef>

#include <Eigen/Dense>

namespace sqg {

/// Numerical tolerances shared by every validation and predicate in the library.
struct Tolerances {
    double herm = 1e-10;  // max-abs of h - h^dagger
    double psd = 1e-9;    // allowed negative eigenvalue
    double eq = 1e-9;     // equality of traces, sums, identities
};

inline constexpr Tolerances kDefaultTolerances{};

/// Largest matrix side any operation will produce.
inline constexpr std::size_t kMaxSide = 4096;

template <typename Scalar>
using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

using Complex = std::complex<double>;
using CMatrix = Mat<Complex>;
using RMatrix = Mat<double>;
using RVector = Eigen::VectorXd;

}  // namespace sqg
