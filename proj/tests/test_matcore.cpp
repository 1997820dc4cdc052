#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>

#include "sqg/matcore.hpp"
#include "test_util.hpp"

using namespace sqg;
using namespace sqg::testing;

TEST(Kron, IdentityTimesIdentity) {
    EXPECT_EQ(kron(cidentity(2), cidentity(2)), cidentity(4));
}

TEST(Kron, BasisProjectors) {
    EXPECT_EQ(kron(diag({1, 0}), diag({0, 1})), diag({0, 1, 0, 0}));
}

TEST(Kron, XXFlipsBothQubits) {
    Eigen::VectorXcd ket00 = Eigen::VectorXcd::Zero(4);
    ket00(0) = 1;
    const Eigen::VectorXcd out = kron(pauli_x(), pauli_x()) * ket00;
    Eigen::VectorXcd ket11 = Eigen::VectorXcd::Zero(4);
    ket11(3) = 1;
    EXPECT_EQ(out, ket11);
}

TEST(Kron, SideCapRaisesSizeError) {
    const CMatrix a = cidentity(128);
    EXPECT_THROW(kron(a, CMatrix::Identity(64, 64)), SizeError);
}

TEST(Kron, AssociativeAndMixedProduct) {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        const CMatrix a = random_matrix(2, 2, rng), b = random_matrix(2, 2, rng);
        const CMatrix c = random_matrix(2, 2, rng), d = random_matrix(2, 2, rng);
        EXPECT_LE((kron(kron(a, b), c) - kron(a, kron(b, c))).norm(), 1e-10);
        EXPECT_LE((kron(a, b) * kron(c, d) - kron(CMatrix(a * c), CMatrix(b * d))).norm(), 1e-10);
    }
}

TEST(PartialTrace, MaxEntangledMarginal) {
    Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(4);
    psi(0) = psi(3) = 1 / std::sqrt(2.0);
    const CMatrix proj = psi * psi.adjoint();
    EXPECT_LE((partial_trace(proj, {2, 2}, {0}) - cidentity(2) / 2.0).norm(), 1e-15);
    EXPECT_LE((partial_trace(proj, {2, 2}, {1}) - cidentity(2) / 2.0).norm(), 1e-15);
}

TEST(PartialTrace, ProductFactorization) {
    std::mt19937_64 rng(5);
    CMatrix rho = random_hermitian(3, rng);
    rho = rho * rho;
    rho /= rho.trace();
    CMatrix sigma = random_hermitian(2, rng);
    sigma = sigma * sigma;
    sigma /= sigma.trace();
    EXPECT_LE((partial_trace(kron(rho, sigma), {3, 2}, {0}) - rho).norm(), 1e-14);
    EXPECT_LE((partial_trace(kron(rho, sigma), {3, 2}, {1}) - sigma).norm(), 1e-14);
}

TEST(PartialTrace, PreservesTraceOnRandomInputs) {
    std::mt19937_64 rng(20);
    const DimVector dims{2, 3, 2};
    const std::vector<std::vector<std::size_t>> keeps{{}, {0}, {1}, {2}, {0, 2}, {1, 2}, {0, 1, 2}};
    for (int trial = 0; trial < 20; ++trial) {
        const CMatrix r = random_matrix(12, 12, rng);
        for (const auto& keep : keeps)
            EXPECT_LE(std::abs(partial_trace(r, dims, keep).trace() - r.trace()), 1e-12);
    }
}

TEST(PartialTrace, Linear) {
    std::mt19937_64 rng(21);
    const DimVector dims{2, 2, 2};
    for (int trial = 0; trial < 10; ++trial) {
        const CMatrix r = random_matrix(8, 8, rng), s = random_matrix(8, 8, rng);
        const Complex a(0.3, -1.2), b(2.0, 0.5);
        const CMatrix lhs = partial_trace(CMatrix(a * r + b * s), dims, {0, 2});
        const CMatrix rhs = a * partial_trace(r, dims, {0, 2}) + b * partial_trace(s, dims, {0, 2});
        EXPECT_LE((lhs - rhs).norm(), 1e-12);
    }
}

TEST(PartialTrace, KeepOutOfRangeIsArgumentError) {
    EXPECT_THROW(partial_trace(cidentity(4), {2, 2}, {2}), ArgumentError);
    EXPECT_THROW(partial_trace(cidentity(4), {2, 3}, {0}), ArgumentError);
}

TEST(PermuteSubsystems, SwapOfProduct) {
    std::mt19937_64 rng(4);
    const CMatrix a = random_matrix(2, 2, rng), b = random_matrix(3, 3, rng);
    EXPECT_LE((permute_subsystems(kron(a, b), {2, 3}, {1, 0}) - kron(b, a)).norm(), 1e-14);
}

TEST(Eigh, Identity) {
    const auto e = eigh(cidentity(3));
    for (int k = 0; k < 3; ++k) EXPECT_NEAR(e.values(k), 1.0, 1e-15);
}

TEST(Eigh, SortsDescending) {
    const auto e = eigh(diag({3, 1, 2}));
    EXPECT_DOUBLE_EQ(e.values(0), 3.0);
    EXPECT_DOUBLE_EQ(e.values(1), 2.0);
    EXPECT_DOUBLE_EQ(e.values(2), 1.0);
}

TEST(Eigh, WernerPartialTransposeSpectrum) {
    // PT of the singlet is (1 - 2|phi+><phi+|)/2: spectrum {1/2, 1/2, 1/2, -1/2}.
    // Werner(p) then has smallest PT eigenvalue (1 - 3p)/4.
    Eigen::VectorXcd s = Eigen::VectorXcd::Zero(4);
    s(1) = 1 / std::sqrt(2.0);
    s(2) = -1 / std::sqrt(2.0);
    const CMatrix singlet = s * s.adjoint();
    EXPECT_NEAR(eigh(partial_transpose(singlet, {2, 2}, 1)).values(3), -0.5, 1e-12);
    for (double p : {0.0, 0.3, 0.5, 0.8}) {
        const CMatrix w = p * singlet + (1 - p) * cidentity(4) / 4.0;
        EXPECT_NEAR(eigh(partial_transpose(w, {2, 2}, 1)).values(3), std::min((1 - 3 * p) / 4, (1 + p) / 4), 1e-12);
    }
}

TEST(Eigh, ReconstructsRandomHermitian) {
    std::mt19937_64 rng(99);
    for (int n : {1, 2, 3, 4, 7, 16}) {
        for (int trial = 0; trial < 5; ++trial) {
            const CMatrix h = random_hermitian(n, rng);
            const auto e = eigh(h);
            const CMatrix rec = e.vectors * e.values.cast<Complex>().asDiagonal() * e.vectors.adjoint();
            EXPECT_LE((rec - h).norm(), 1e-9);
            EXPECT_LE((e.vectors.adjoint() * e.vectors - CMatrix::Identity(n, n)).norm(), 1e-9);
            // independent oracle: Eigen's tridiagonal QR solver
            Eigen::SelfAdjointEigenSolver<CMatrix> ref(h);
            for (int k = 0; k < n; ++k) EXPECT_NEAR(e.values(k), ref.eigenvalues()(n - 1 - k), 1e-10);
        }
    }
}

TEST(Eigh, DegenerateSpectrum) {
    std::mt19937_64 rng(3);
    const CMatrix u = Eigen::HouseholderQR<CMatrix>(random_matrix(5, 5, rng)).householderQ();
    const CMatrix h = u * diag({2, 2, 2, -1, -1}) * u.adjoint();
    const auto e = eigh(h);
    EXPECT_NEAR(e.values(0), 2, 1e-12);
    EXPECT_NEAR(e.values(4), -1, 1e-12);
    EXPECT_LE((e.vectors * e.values.cast<Complex>().asDiagonal() * e.vectors.adjoint() - h).norm(), 1e-10);
}

TEST(Eigh, NonHermitianIsContractError) {
    CMatrix m(2, 2);
    m << 1, 2, 0, 1;
    EXPECT_THROW(eigh(m), ContractError);
}

TEST(Predicates, IsPsd) {
    EXPECT_TRUE(is_psd(diag({1, 0}), 1e-9));
    EXPECT_FALSE(is_psd(diag({1, -1e-3}), 1e-9));
    EXPECT_THROW(is_psd(CMatrix::Zero(2, 3)), ArgumentError);
}

TEST(Predicates, HsInnerOfPauliX) {
    EXPECT_NEAR(std::abs(hs_inner(pauli_x(), pauli_x()) - Complex(2.0)), 0.0, 1e-15);
}

TEST(Predicates, DaggerAndFrobenius) {
    CMatrix m(1, 2);
    m << Complex(1, 2), Complex(3, -4);
    const CMatrix d = dagger(m);
    EXPECT_EQ(d.rows(), 2);
    EXPECT_EQ(d(0, 0), Complex(1, -2));
    EXPECT_NEAR(frob_norm(m), std::sqrt(30.0), 1e-15);
}

TEST(HermCoords, IsometricRoundTrip) {
    std::mt19937_64 rng(8);
    const CMatrix a = random_hermitian(4, rng), b = random_hermitian(4, rng);
    EXPECT_NEAR(herm_coords(a).dot(herm_coords(b)), hs_inner(a, b).real(), 1e-12);
    EXPECT_LE((herm_from_coords<double>(herm_coords(a), 4) - a).norm(), 1e-14);
}

TEST(Templates, WorkForLongDouble) {
    using LC = std::complex<long double>;
    Mat<LC> h(2, 2);
    h << LC(2), LC(0, 1), LC(0, -1), LC(2);
    const auto e = eigh(h);
    EXPECT_NEAR(static_cast<double>(e.values(0)), 3.0, 1e-15);
    EXPECT_NEAR(static_cast<double>(e.values(1)), 1.0, 1e-15);
    EXPECT_EQ(kron(h, h).rows(), 4);
}
