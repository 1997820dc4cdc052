#include <gtest/gtest.h>

#include "sqg/witness.hpp"
#include "test_util.hpp"

using namespace sqg;
using namespace sqg::testing;

namespace {

SeesawOptions quick_opts(std::uint64_t seed = 0) {
    SeesawOptions o;
    o.restarts = 4;
    o.seed = seed;
    return o;
}

double bell_payoff(const WitnessGame& wg, const DensityMatrix& rho) {
    const auto s = bell_strategy(wg);
    return expected_payoff(wg.game, rho, s.p, s.q);
}

}  // namespace

TEST(WitnessFromPpt, Singlet) {
    const auto w = witness_from_ppt(werner_state(1.0));
    EXPECT_TRUE(is_hermitian(w));
    EXPECT_NEAR(hs_inner(w, werner_state(1.0).mat()).real(), -0.5, 1e-12);
}

TEST(WitnessFromPpt, Werner08) {
    EXPECT_NEAR(hs_inner(witness_from_ppt(werner_state(0.8)), werner_state(0.8).mat()).real(), -0.35, 1e-12);
}

TEST(WitnessFromPpt, NonNegativeOnProducts) {
    const auto w = witness_from_ppt(werner_state(0.8));
    Rng rng(1);
    double worst = 1;
    for (int k = 0; k < 1000; ++k) {
        const auto a = random_state({2}, 1, rng);
        const auto b = random_state({2}, 1, rng);
        worst = std::min(worst, hs_inner(w, kron(a.mat(), b.mat())).real());
    }
    EXPECT_GE(worst, -1e-9);
}

TEST(WitnessFromPpt, PptInputRejected) {
    EXPECT_THROW(witness_from_ppt(werner_state(0.2)), NotEntangledError);
}

TEST(WitnessGame, CoefficientsReassemble) {
    const auto wg = build_witness_game(witness_from_ppt(werner_state(1.0)));
    const auto& g = wg.game;
    CMatrix sum = CMatrix::Zero(4, 4);
    for (std::size_t s = 0; s < 4; ++s)
        for (std::size_t t = 0; t < 4; ++t)
            sum += wg.beta(s, t) * kron(g.tau().states()[s].mat().transpose(), g.omega().states()[t].mat().transpose());
    EXPECT_LE((sum - wg.w_matrix).norm(), 1e-9);
    EXPECT_DOUBLE_EQ(wg.scale_c, 0.25);
}

TEST(WitnessGame, BellPayoffTracksWitness) {
    const auto wg = build_witness_game(witness_from_ppt(werner_state(1.0)));
    EXPECT_NEAR(bell_payoff(wg, werner_state(1.0)), wg.scale_c / 2, 1e-12);
    EXPECT_NEAR(bell_payoff(wg, maximally_mixed({2, 2})), -wg.scale_c * wg.w_matrix.trace().real() / 4, 1e-12);
}

TEST(WitnessGame, BellPayoffAffineAcrossWerner) {
    const auto wg = build_witness_game(witness_from_ppt(werner_state(1.0)));
    // fit a line through the endpoints and check the interior points
    const double y0 = bell_payoff(wg, werner_state(0.0));
    const double y1 = bell_payoff(wg, werner_state(1.0));
    for (double p : {0.25, 0.5, 0.75}) EXPECT_NEAR(bell_payoff(wg, werner_state(p)), y0 + p * (y1 - y0), 1e-8 * wg.scale_c);
}

TEST(WitnessGame, NonIcQuestionsRejected) {
    const auto zero = pure_state(Eigen::Vector2cd(1, 0), {2});
    const auto one = pure_state(Eigen::Vector2cd(0, 1), {2});
    const Ensemble e({"0", "1"}, {0.5, 0.5}, {zero, one});
    EXPECT_THROW(build_witness_game(witness_from_ppt(werner_state(1.0)), e, e), RankError);
}

TEST(WitnessGap, DetectsWerner08) {
    const auto rho = werner_state(0.8);
    const auto r = witness_gap(rho, build_witness_game(witness_from_ppt(rho)), quick_opts());
    EXPECT_GT(r.gap, 0.01 * r.scale_c);
    EXPECT_LE(r.max_subproblem_gap, 1e-7);
}

TEST(WitnessGap, NoDetectionForSeparableStates) {
    const auto wg = build_witness_game(witness_from_ppt(werner_state(1.0)));
    for (const auto& rho : {werner_state(0.2), maximally_mixed({2, 2})}) {
        const auto r = witness_gap(rho, wg, quick_opts());
        EXPECT_LE(r.gap, 1e-3 * r.scale_c);
    }
}

TEST(WitnessGap, SeparableStatesShareOneValue) {
    const auto wg = build_witness_game(witness_from_ppt(werner_state(1.0)));
    const auto opts = quick_opts(3);
    const double sep = separable_value(wg.game, opts).value;
    Rng rng(20);
    for (int k = 0; k < 20; ++k) {
        const auto sigma = separable_state(random_separable_terms(2, 2, 2, 1, rng));
        EXPECT_NEAR(seesaw_value(wg.game, sigma, opts).value, sep, 2e-3 * wg.scale_c) << "sample " << k;
    }
}

TEST(WitnessGap, PositiveForRandomNptStates) {
    Rng rng(50);
    int found = 0;
    while (found < 10) {
        const auto rho = random_state({2, 2}, 1 + found % 3, rng);
        if (!ppt_entangled(rho).flag) continue;
        ++found;
        const auto r = witness_gap(rho, build_witness_game(witness_from_ppt(rho)), quick_opts());
        EXPECT_GT(r.gap, 0.0);
    }
}
