#pragma once

#include "sqg/appendixlab.hpp"

namespace sqg {

/// W = (|phi><phi|)^{T_B} for the eigenvector phi of the most negative
/// eigenvalue of rho^{T_B}. Throws NotEntangledError for PPT input.
CMatrix witness_from_ppt(const DensityMatrix& rho);

struct WitnessGame {
    SemiQuantumGame game;
    RMatrix beta;      // W = sum_st beta(s,t) (tau^s)^T (x) (omega^t)^T
    CMatrix w_matrix;
    double scale_c;    // Bell-strategy payoff = -scale_c * Tr[W rho]
};

/// Payoff is -beta(s,t) / (p(s) q(t)) on the first answer pair (Phi+, Phi+)
/// and zero elsewhere, so the Bell strategy earns -Tr[W rho] / (d_A0 d_B0).
/// Throws RankError when the question states do not span the operator spaces.
WitnessGame build_witness_game(const CMatrix& w, const Ensemble& tau, const Ensemble& omega);

/// Witness game on tetrahedral questions.
WitnessGame build_witness_game(const CMatrix& w);

/// Bell measurements on A0 A and B B0.
StrategyPair bell_strategy(const WitnessGame& wg);

struct WitnessGapResult {
    double entangled_value;
    double separable_value;
    double gap;
    double scale_c;
    double max_subproblem_gap;
};

/// See-saw value on rho (restart 0 seeded with the Bell strategy) minus the separable value.
WitnessGapResult witness_gap(const DensityMatrix& rho, const WitnessGame& wg, const SeesawOptions& opts);

}  // namespace sqg
