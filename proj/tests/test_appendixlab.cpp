#include <gtest/gtest.h>

#include "sqg/appendixlab.hpp"
#include "test_util.hpp"

using namespace sqg;
using namespace sqg::testing;

namespace {

// Independent contraction: build the full 16x16 operator in the order
// B0 B A A0 and evaluate the Born rule there.
double mu_reversed_order(const DensityMatrix& rho, std::size_t x, std::size_t y, std::size_t s, std::size_t t) {
    const auto q = tetra_questions();
    const auto bell = bell_projectors(2);
    // reversal permutation on A0 A B B0
    const DimVector dims{2, 2, 2, 2};
    const std::vector<std::size_t> rev{3, 2, 1, 0};
    const CMatrix op = permute_subsystems(kron(bell[x], bell[y]), dims, rev);
    const CMatrix st = permute_subsystems(kron(kron(q.states[s].mat(), rho.mat()), q.states[t].mat()), dims, rev);
    return (op * st).trace().real();
}

}  // namespace

TEST(Tetra, PureAndSpanning) {
    const auto q = tetra_questions();
    ASSERT_EQ(q.states.size(), 4u);
    for (const auto& s : q.states) EXPECT_NEAR((s.mat() * s.mat()).trace().real(), 1.0, 1e-12);
    // Gram = (1 + v_s . v_t) / 2: 1 on the diagonal, 1/3 off it
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) EXPECT_NEAR(q.gram(i, j), i == j ? 1.0 : 1.0 / 3.0, 1e-12);
    const Eigen::JacobiSVD<RMatrix> svd(q.gram);
    EXPECT_GT(svd.singularValues().minCoeff(), 0.1);
}

TEST(Bell, AnswerSetComplete) {
    const auto b = bell_answers();
    CMatrix sum = CMatrix::Zero(4, 4);
    for (const auto& p : b.projectors) sum += p;
    EXPECT_LE((sum - cidentity(4)).norm(), 1e-14);
}

TEST(MuBar, ProductStateFactorizes) {
    const auto zero = pure_state(Eigen::Vector4cd(1, 0, 0, 0), {2, 2});
    const auto mu = mu_bar(zero);
    for (std::size_t s = 0; s < 4; ++s)
        for (std::size_t t = 0; t < 4; ++t)
            for (std::size_t x = 0; x < 4; ++x)
                for (std::size_t y = 0; y < 4; ++y) {
                    double mx = 0, my = 0;
                    for (std::size_t k = 0; k < 4; ++k) {
                        mx += mu(x, k, s, t);
                        my += mu(k, y, s, t);
                    }
                    EXPECT_NEAR(mu(x, y, s, t), mx * my, 1e-12);
                }
}

TEST(MuBar, Normalized) {
    const auto mu = mu_bar(random_state({2, 2}, 2, std::uint64_t{3}));
    for (std::size_t s = 0; s < 4; ++s)
        for (std::size_t t = 0; t < 4; ++t) {
            double sum = 0;
            for (std::size_t x = 0; x < 4; ++x)
                for (std::size_t y = 0; y < 4; ++y) sum += mu(x, y, s, t);
            EXPECT_NEAR(sum, 1.0, 1e-12);
        }
}

TEST(MuBar, SingletAgainstReversedContraction) {
    const auto singlet = werner_state(1.0);
    const auto mu = mu_bar(singlet);
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<std::size_t> pick(0, 3);
    for (int k = 0; k < 5; ++k) {
        const std::size_t x = pick(rng), y = pick(rng), s = pick(rng), t = pick(rng);
        EXPECT_NEAR(mu(x, y, s, t), mu_reversed_order(singlet, x, y, s, t), 1e-12);
    }
}

TEST(MuBar, WrongDims) { EXPECT_THROW(mu_bar(maximally_mixed({2, 3})), ArgumentError); }

TEST(MuBar, TomographicInversion) {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const auto rho = random_state({2, 2}, 1 + seed % 4, seed);
        EXPECT_LE((reconstruct_from_mu_bar(mu_bar(rho)) - rho.mat()).norm(), 1e-8) << "seed " << seed;
    }
}

TEST(IcEnsemble, TetrahedralPovm) {
    const auto theta = tetrahedral_povm();
    const auto e = ic_question_ensemble(theta);
    CMatrix avg = CMatrix::Zero(2, 2);
    for (std::size_t s = 0; s < 4; ++s) {
        EXPECT_NEAR(e.probs()[s], 0.25, 1e-12);
        // trace formula: Tr_{A1}[(Theta (x) 1) Psi+] = Theta^T / d
        EXPECT_LE((e.subnormalized(s) - theta[s].transpose() / 2.0).norm(), 1e-12);
        avg += e.subnormalized(s);
    }
    EXPECT_LE((avg - cidentity(2) / 2.0).norm(), 1e-12);
}

TEST(IcEnsemble, ComputationalBasisIsNotIc) {
    EXPECT_THROW(ic_question_ensemble(Povm({diag({1, 0}), diag({0, 1})}, {2})), RankError);
}

TEST(IcEnsemble, WeylPovmsAreIc) {
    for (std::size_t d : {2u, 3u, 4u}) {
        const auto e = ic_question_ensemble(hw_ic_povm(d));
        EXPECT_EQ(e.size(), d * d);
        CMatrix avg = CMatrix::Zero(d, d);
        for (std::size_t s = 0; s < e.size(); ++s) avg += e.subnormalized(s);
        EXPECT_LE((avg - cidentity(d) / double(d)).norm(), 1e-12);
    }
    EXPECT_THROW(hw_ic_povm(5), ArgumentError);
}

TEST(Teleport, ExactBellIsIdentity) {
    const auto z = exact_bell_strategy(2, 2);
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
        const auto rho = random_state({2, 2}, 1 + seed % 4, seed);
        EXPECT_LE((teleport_reconstruct(rho, z).mat() - rho.mat()).norm(), 1e-10) << "seed " << seed;
    }
    EXPECT_LE((teleport_reconstruct(maximally_mixed({2, 2}), z).mat() - cidentity(4) / 4.0).norm(), 1e-12);
}

TEST(Teleport, QutritIdentity) {
    const auto z = exact_bell_strategy(3, 2);
    const auto rho = random_state({3, 2}, 2, std::uint64_t{9});
    EXPECT_LE((teleport_reconstruct(rho, z).mat() - rho.mat()).norm(), 1e-10);
}

TEST(Teleport, DepolarizedBellMeasurements) {
    // mixing each Bell POVM with the trivial uniform POVM depolarizes each side
    const double lam = 0.7;
    std::vector<CMatrix> el;
    for (const auto& b : bell_projectors(2)) el.push_back(lam * b + (1 - lam) * cidentity(4) / 4.0);
    const Povm noisy(el, {2, 2});
    const SeparableJointPovm z({1.0}, {{noisy, noisy}});
    const auto rho = random_state({2, 2}, 2, std::uint64_t{4});
    const auto out = teleport_reconstruct(rho, z);
    EXPECT_NEAR(out.mat().trace().real(), 1.0, 1e-10);
    // oracle: local depolarizing with visibility lam on each qubit
    auto depol = [&](const CMatrix& m, std::size_t sys) {
        const CMatrix marg = partial_trace(m, {2, 2}, {1 - sys});
        const CMatrix mixed = sys == 0 ? kron(cidentity(2) / 2.0, marg) : kron(marg, cidentity(2) / 2.0);
        return CMatrix(lam * m + (1 - lam) * mixed);
    };
    EXPECT_LE((out.mat() - depol(depol(rho.mat(), 0), 1)).norm(), 1e-10);
}

TEST(BuildLosr, ExactBellActsAsIdentity) {
    const auto m = build_losr_from_strategy(exact_bell_strategy(2, 2), alice_corrections(2), bob_corrections(2));
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const auto rho = random_state({2, 2}, 1 + seed % 4, seed);
        EXPECT_LE((apply_losr(m, rho).mat() - rho.mat()).norm(), 1e-10);
    }
}

TEST(BuildLosr, TrivialPovmIsConstantMap) {
    const Povm trivial({cidentity(4)}, {2, 2});
    const SeparableJointPovm z({1.0}, {{trivial, trivial}});
    const auto m = build_losr_from_strategy(z, {cidentity(2)}, {cidentity(2)});
    const auto out = apply_losr(m, random_state({2, 2}, 1, std::uint64_t{2}));
    EXPECT_LE((out.mat() - cidentity(4) / 4.0).norm(), 1e-12);
}

TEST(BuildLosr, AgreesWithTeleportReconstruct) {
    Rng rng(77);
    for (int trial = 0; trial < 10; ++trial) {
        const std::size_t terms = 1 + trial % 3;
        const auto w = random_distribution(terms, rng);
        std::vector<std::pair<Povm, Povm>> pairs;
        for (std::size_t i = 0; i < terms; ++i) pairs.emplace_back(random_povm({2, 2}, 4, rng), random_povm({2, 2}, 4, rng));
        const SeparableJointPovm z(w, pairs);
        const auto m = build_losr_from_strategy(z, alice_corrections(2), bob_corrections(2));
        for (const auto& [e, f] : m.pairs()) {
            CMatrix sa = CMatrix::Zero(2, 2), sb = CMatrix::Zero(2, 2);
            for (const auto& k : e.kraus_ops()) sa += k.adjoint() * k;
            for (const auto& k : f.kraus_ops()) sb += k.adjoint() * k;
            EXPECT_LE(max_abs(sa - cidentity(2)), 1e-10);
            EXPECT_LE(max_abs(sb - cidentity(2)), 1e-10);
        }
        const auto rho = random_state({2, 2}, 2, rng);
        EXPECT_LE((apply_losr(m, rho).mat() - teleport_reconstruct(rho, z).mat()).norm(), 1e-10) << "trial " << trial;
    }
}

TEST(BuildLosr, CorrectionCountChecked) {
    EXPECT_THROW(build_losr_from_strategy(exact_bell_strategy(2, 2), {cidentity(2)}, bob_corrections(2)),
                 ArgumentError);
}

TEST(Demo, WernerAgainstMaximallyMixed) {
    const auto mixed = maximally_mixed({2});
    const auto bell = bell_povm(2);
    const auto rep = entanglement_nonreproducibility_demo(werner_state(0.8), {{1.0, mixed, mixed}}, bell, bell);
    EXPECT_TRUE(rep.rho_npt);
    EXPECT_GT(rep.max_deviation, 0.01);
    EXPECT_FALSE(rep.contradiction.has_value());
}

TEST(Demo, IdenticalSeparableStatesAgree) {
    const auto mixed = maximally_mixed({2});
    const auto bell = bell_povm(2);
    const auto rep = entanglement_nonreproducibility_demo(maximally_mixed({2, 2}), {{1.0, mixed, mixed}}, bell, bell);
    EXPECT_NEAR(rep.max_deviation, 0.0, 1e-15);
    EXPECT_FALSE(rep.rho_npt);
}

TEST(Demo, ContradictionPipelineReproducesTarget) {
    // with sigma = rho the Bell strategy matches exactly and the LOSR image is rho itself
    const auto rho = werner_state(0.9);
    const auto bell = bell_povm(2);
    const auto c = contradiction_pipeline(rho, rho, bell, bell);
    EXPECT_LE(c.output_distance, 1e-10);
    EXPECT_TRUE(c.output_ppt_entangled);
}
