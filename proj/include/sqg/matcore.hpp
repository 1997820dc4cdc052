#pragma once

// Dense complex-matrix kernel. Everything here is a pure function templated on
// the Eigen expression type, so it works for any complex (or real) scalar.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "sqg/config.hpp"
#include "sqg/errors.hpp"

namespace sqg {

/// Ordered subsystem dimensions of a composite space.
using DimVector = std::vector<std::size_t>;

inline std::size_t dim_product(const DimVector& dims) {
    std::size_t p = 1;
    for (auto d : dims) {
        if (d == 0) throw ArgumentError("subsystem dimension must be >= 1");
        p *= d;
        if (p > kMaxSide) throw SizeError("composite dimension exceeds side cap " + std::to_string(kMaxSide));
    }
    return p;
}

template <typename Scalar>
Mat<Scalar> identity(std::size_t n) {
    return Mat<Scalar>::Identity(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
}

inline CMatrix cidentity(std::size_t n) { return identity<Complex>(n); }

template <typename Derived>
Mat<typename Derived::Scalar> dagger(const Eigen::MatrixBase<Derived>& m) {
    return m.adjoint();
}

/// Hilbert-Schmidt inner product Tr[a^dagger b].
template <typename DA, typename DB>
typename DA::Scalar hs_inner(const Eigen::MatrixBase<DA>& a, const Eigen::MatrixBase<DB>& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) throw ArgumentError("hs_inner: shape mismatch");
    return (a.adjoint() * b).trace();
}

template <typename Derived>
auto frob_norm(const Eigen::MatrixBase<Derived>& m) {
    return m.norm();
}

template <typename Derived>
auto max_abs(const Eigen::MatrixBase<Derived>& m) {
    using Real = typename Eigen::NumTraits<typename Derived::Scalar>::Real;
    if (m.size() == 0) return Real(0);
    return m.cwiseAbs().maxCoeff();
}

template <typename Derived>
bool is_hermitian(const Eigen::MatrixBase<Derived>& m, double tol = kDefaultTolerances.herm) {
    if (m.rows() != m.cols()) return false;
    return max_abs(m - m.adjoint()) <= tol;
}

template <typename Derived>
Mat<typename Derived::Scalar> hermitian_part(const Eigen::MatrixBase<Derived>& m) {
    return (m + m.adjoint()) * typename Derived::Scalar(0.5);
}

/// Kronecker product; throws SizeError past the side cap.
template <typename DA, typename DB>
Mat<typename DA::Scalar> kron(const Eigen::MatrixBase<DA>& a, const Eigen::MatrixBase<DB>& b) {
    const auto rows = static_cast<std::size_t>(a.rows() * b.rows());
    const auto cols = static_cast<std::size_t>(a.cols() * b.cols());
    if (rows > kMaxSide || cols > kMaxSide) throw SizeError("kron: result side exceeds cap " + std::to_string(kMaxSide));
    Mat<typename DA::Scalar> out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

namespace detail {

inline std::vector<std::size_t> strides(const DimVector& dims) {
    std::vector<std::size_t> st(dims.size(), 1);
    for (std::size_t k = dims.size(); k-- > 1;) st[k - 1] = st[k] * dims[k];
    return st;
}

// Flat-index offsets contributed by all multi-indices over `subset` (row-major
// over the subset, in the order given).
inline std::vector<std::size_t> subset_offsets(const DimVector& dims, const std::vector<std::size_t>& subset) {
    const auto st = strides(dims);
    std::vector<std::size_t> offsets{0};
    for (auto k : subset) {
        std::vector<std::size_t> next;
        next.reserve(offsets.size() * dims[k]);
        for (auto base : offsets)
            for (std::size_t d = 0; d < dims[k]; ++d) next.push_back(base + d * st[k]);
        offsets = std::move(next);
    }
    return offsets;
}

template <typename Derived>
void require_square_with_dims(const Eigen::MatrixBase<Derived>& m, const DimVector& dims, const char* who) {
    if (m.rows() != m.cols()) throw ArgumentError(std::string(who) + ": matrix not square");
    if (static_cast<std::size_t>(m.rows()) != dim_product(dims))
        throw ArgumentError(std::string(who) + ": side does not match product of dims");
}

}  // namespace detail

/// Trace out every subsystem not listed in `keep`. Kept subsystems stay in their original order.
template <typename Derived>
Mat<typename Derived::Scalar> partial_trace(const Eigen::MatrixBase<Derived>& m, const DimVector& dims,
                                            std::vector<std::size_t> keep) {
    detail::require_square_with_dims(m, dims, "partial_trace");
    std::sort(keep.begin(), keep.end());
    keep.erase(std::unique(keep.begin(), keep.end()), keep.end());
    for (auto k : keep)
        if (k >= dims.size()) throw ArgumentError("partial_trace: keep index out of range");
    std::vector<std::size_t> traced;
    for (std::size_t k = 0; k < dims.size(); ++k)
        if (!std::binary_search(keep.begin(), keep.end(), k)) traced.push_back(k);

    const auto kept_off = detail::subset_offsets(dims, keep);
    const auto traced_off = detail::subset_offsets(dims, traced);
    const auto n = static_cast<Eigen::Index>(kept_off.size());
    Mat<typename Derived::Scalar> out = Mat<typename Derived::Scalar>::Zero(n, n);
    for (Eigen::Index r = 0; r < n; ++r)
        for (Eigen::Index c = 0; c < n; ++c) {
            typename Derived::Scalar acc(0);
            for (auto t : traced_off)
                acc += m(static_cast<Eigen::Index>(kept_off[r] + t), static_cast<Eigen::Index>(kept_off[c] + t));
            out(r, c) = acc;
        }
    return out;
}

/// Transpose subsystem `sys` only.
template <typename Derived>
Mat<typename Derived::Scalar> partial_transpose(const Eigen::MatrixBase<Derived>& m, const DimVector& dims,
                                                std::size_t sys) {
    detail::require_square_with_dims(m, dims, "partial_transpose");
    if (sys >= dims.size()) throw ArgumentError("partial_transpose: subsystem index out of range");
    const auto st = detail::strides(dims)[sys];
    const auto d = dims[sys];
    const auto n = m.rows();
    Mat<typename Derived::Scalar> out(n, n);
    for (Eigen::Index r = 0; r < n; ++r)
        for (Eigen::Index c = 0; c < n; ++c) {
            const auto rd = (static_cast<std::size_t>(r) / st) % d;
            const auto cd = (static_cast<std::size_t>(c) / st) % d;
            const auto r2 = static_cast<Eigen::Index>(r - rd * st + cd * st);
            const auto c2 = static_cast<Eigen::Index>(c - cd * st + rd * st);
            out(r2, c2) = m(r, c);
        }
    return out;
}

/// Reorder subsystems: output subsystem k is input subsystem perm[k].
template <typename Derived>
Mat<typename Derived::Scalar> permute_subsystems(const Eigen::MatrixBase<Derived>& m, const DimVector& dims,
                                                 const std::vector<std::size_t>& perm) {
    detail::require_square_with_dims(m, dims, "permute_subsystems");
    if (perm.size() != dims.size()) throw ArgumentError("permute_subsystems: permutation size mismatch");
    std::vector<bool> seen(dims.size(), false);
    for (auto p : perm) {
        if (p >= dims.size() || seen[p]) throw ArgumentError("permute_subsystems: not a permutation");
        seen[p] = true;
    }
    // offsets over the input, enumerated in output order
    const auto off = detail::subset_offsets(dims, perm);
    const auto n = m.rows();
    Mat<typename Derived::Scalar> out(n, n);
    for (Eigen::Index r = 0; r < n; ++r)
        for (Eigen::Index c = 0; c < n; ++c)
            out(r, c) = m(static_cast<Eigen::Index>(off[r]), static_cast<Eigen::Index>(off[c]));
    return out;
}

template <typename Real>
struct EighResult {
    Eigen::Matrix<Real, Eigen::Dynamic, 1> values;                   // descending
    Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic> vectors;  // columns
};

/// Hermitian eigendecomposition by cyclic complex Jacobi rotations.
///
/// Each rotation first removes the phase of the pivot a(p,q) with a diagonal
/// unitary and then applies a real Givens rotation, so the update is
/// J = diag(1, e^{-i phi}) R(theta). Sweeps stop once the off-diagonal mass is
/// below machine precision relative to the Frobenius norm.
template <typename Derived>
EighResult<typename Eigen::NumTraits<typename Derived::Scalar>::Real> eigh(const Eigen::MatrixBase<Derived>& h,
                                                                           double tol_herm = kDefaultTolerances.herm) {
    using Real = typename Eigen::NumTraits<typename Derived::Scalar>::Real;
    using Cx = std::complex<Real>;
    using CM = Eigen::Matrix<Cx, Eigen::Dynamic, Eigen::Dynamic>;

    if (h.rows() != h.cols()) throw ArgumentError("eigh: matrix not square");
    if (!is_hermitian(h, tol_herm)) throw ContractError("eigh: input is not Hermitian within tolerance");
    const Eigen::Index n = h.rows();

    CM a = h.template cast<Cx>();
    a = (a + a.adjoint().eval()) * Cx(0.5);
    CM v = CM::Identity(n, n);

    const Real eps = std::numeric_limits<Real>::epsilon();
    const Real norm2 = a.squaredNorm();
    for (int sweep = 0; sweep < 100; ++sweep) {
        Real off = 0;
        for (Eigen::Index p = 0; p < n; ++p)
            for (Eigen::Index q = p + 1; q < n; ++q) off += std::norm(a(p, q));
        if (off <= eps * eps * norm2 * Real(1e-4) || off == Real(0)) break;

        for (Eigen::Index p = 0; p < n; ++p) {
            for (Eigen::Index q = p + 1; q < n; ++q) {
                const Cx apq = a(p, q);
                const Real mag = std::abs(apq);
                if (mag == Real(0)) continue;
                const Real alpha = std::real(a(p, p));
                const Real gamma = std::real(a(q, q));
                if (mag < eps * Real(1e-3) * (std::abs(alpha) + std::abs(gamma)) && sweep > 3) {
                    a(p, q) = a(q, p) = Cx(0);
                    continue;
                }
                const Cx phase = apq / mag;
                const Real tau = (gamma - alpha) / (Real(2) * mag);
                const Real t = (tau >= 0 ? Real(1) : Real(-1)) / (std::abs(tau) + std::sqrt(Real(1) + tau * tau));
                const Real c = Real(1) / std::sqrt(Real(1) + t * t);
                const Real s = t * c;

                const Cx jpp = c, jpq = s;
                const Cx jqp = -s * std::conj(phase);
                const Cx jqq = c * std::conj(phase);

                for (Eigen::Index k = 0; k < n; ++k) {
                    const Cx akp = a(k, p), akq = a(k, q);
                    a(k, p) = akp * jpp + akq * jqp;
                    a(k, q) = akp * jpq + akq * jqq;
                }
                for (Eigen::Index k = 0; k < n; ++k) {
                    const Cx apk = a(p, k), aqk = a(q, k);
                    a(p, k) = std::conj(jpp) * apk + std::conj(jqp) * aqk;
                    a(q, k) = std::conj(jpq) * apk + std::conj(jqq) * aqk;
                }
                a(p, q) = a(q, p) = Cx(0);
                a(p, p) = std::real(a(p, p));
                a(q, q) = std::real(a(q, q));
                for (Eigen::Index k = 0; k < n; ++k) {
                    const Cx vkp = v(k, p), vkq = v(k, q);
                    v(k, p) = vkp * jpp + vkq * jqp;
                    v(k, q) = vkp * jpq + vkq * jqq;
                }
            }
        }
    }

    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](Eigen::Index i, Eigen::Index j) { return std::real(a(i, i)) > std::real(a(j, j)); });

    EighResult<Real> out;
    out.values.resize(n);
    out.vectors.resize(n, n);
    for (Eigen::Index k = 0; k < n; ++k) {
        out.values(k) = std::real(a(order[k], order[k]));
        out.vectors.col(k) = v.col(order[k]);
    }
    return out;
}

/// True iff the smallest eigenvalue is >= -tol.
template <typename Derived>
bool is_psd(const Eigen::MatrixBase<Derived>& m, double tol = kDefaultTolerances.psd,
            double tol_herm = kDefaultTolerances.herm) {
    if (m.rows() != m.cols()) throw ArgumentError("is_psd: matrix not square");
    if (!is_hermitian(m, tol_herm)) return false;
    if (m.rows() == 0) return true;
    return eigh(m, tol_herm).values.minCoeff() >= -tol;
}

template <typename Derived>
auto min_eigenvalue(const Eigen::MatrixBase<Derived>& m, double tol_herm = kDefaultTolerances.herm) {
    return eigh(m, tol_herm).values.minCoeff();
}

template <typename Derived>
auto max_eigenvalue(const Eigen::MatrixBase<Derived>& m, double tol_herm = kDefaultTolerances.herm) {
    return eigh(m, tol_herm).values.maxCoeff();
}

/// f applied to the spectrum of a Hermitian matrix.
template <typename Derived, typename F>
Mat<std::complex<typename Eigen::NumTraits<typename Derived::Scalar>::Real>> hermitian_function(
    const Eigen::MatrixBase<Derived>& h, F&& f, double tol_herm = kDefaultTolerances.herm) {
    const auto e = eigh(h, tol_herm);
    auto vals = e.values;
    for (Eigen::Index k = 0; k < vals.size(); ++k) vals(k) = f(vals(k));
    return e.vectors * vals.asDiagonal() * e.vectors.adjoint();
}

template <typename Derived>
auto psd_sqrt(const Eigen::MatrixBase<Derived>& h, double tol_herm = kDefaultTolerances.herm) {
    return hermitian_function(h, [](auto x) { return x > 0 ? std::sqrt(x) : decltype(x)(0); }, tol_herm);
}

/// H^{-1/2} for positive definite H; eigenvalues at or below `floor` raise RankError.
template <typename Derived>
auto inverse_sqrt(const Eigen::MatrixBase<Derived>& h, double floor = 1e-14,
                  double tol_herm = kDefaultTolerances.herm) {
    return hermitian_function(
        h,
        [floor](auto x) {
            if (x <= floor) throw RankError("inverse_sqrt: matrix is singular");
            return 1 / std::sqrt(x);
        },
        tol_herm);
}

/// Coordinates of a Hermitian matrix in an orthonormal real basis of the
/// Hermitian operators: diagonal entries, then sqrt(2)Re and sqrt(2)Im of the
/// strict upper triangle. Preserves the Hilbert-Schmidt inner product.
template <typename Derived>
Eigen::Matrix<typename Eigen::NumTraits<typename Derived::Scalar>::Real, Eigen::Dynamic, 1> herm_coords(
    const Eigen::MatrixBase<Derived>& h) {
    using Real = typename Eigen::NumTraits<typename Derived::Scalar>::Real;
    const Eigen::Index n = h.rows();
    Eigen::Matrix<Real, Eigen::Dynamic, 1> v(n * n);
    const Real r2 = std::sqrt(Real(2));
    Eigen::Index k = 0;
    for (Eigen::Index i = 0; i < n; ++i) v(k++) = std::real(h(i, i));
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = i + 1; j < n; ++j) {
            v(k++) = r2 * std::real(h(i, j));
            v(k++) = r2 * std::imag(h(i, j));
        }
    return v;
}

template <typename Real>
Mat<std::complex<Real>> herm_from_coords(const Eigen::Matrix<Real, Eigen::Dynamic, 1>& v, Eigen::Index n) {
    if (v.size() != n * n) throw ArgumentError("herm_from_coords: coordinate count mismatch");
    Mat<std::complex<Real>> h(n, n);
    const Real s = Real(1) / std::sqrt(Real(2));
    Eigen::Index k = 0;
    for (Eigen::Index i = 0; i < n; ++i) h(i, i) = v(k++);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = i + 1; j < n; ++j) {
            const std::complex<Real> z(s * v(k), s * v(k + 1));
            k += 2;
            h(i, j) = z;
            h(j, i) = std::conj(z);
        }
    return h;
}

}  // namespace sqg
