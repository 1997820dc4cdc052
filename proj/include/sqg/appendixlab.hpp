#pragma once

#include <array>
#include <vector>

#include "sqg/losr.hpp"

namespace sqg {

/// Four qubit pure states with tetrahedral Bloch vectors.
struct TetraQuestionSet {
    std::vector<DensityMatrix> states;
    RMatrix gram;  // Hilbert-Schmidt inner products
};

/// Bloch vectors (1,1,1), (1,-1,-1), (-1,1,-1), (-1,-1,1) over sqrt 3.
TetraQuestionSet tetra_questions();

/// Projectors onto Phi+, Phi-, Psi+, Psi-.
struct BellAnswerSet {
    std::vector<CMatrix> projectors;
};
BellAnswerSet bell_answers();

/// The 4-question, 4-answer game with tetrahedral questions on both sides,
/// uniform priors and zero payoff.
SemiQuantumGame tetra_game();

/// mu(x,y|s,t) = Tr[(B^x (x) B^y)(psi^s (x) rho (x) psi^t)].
ConditionalDistribution mu_bar(const DensityMatrix& rho);

/// O(x,y,s,t) on A (x) B with mu(x,y|s,t) = Tr[O rho], index ((x*ny+y)*ns+s)*nt+t.
std::vector<CMatrix> effective_operators(const SemiQuantumGame& g, const DimVector& dims_ab, const Povm& p_povm,
                                         const Povm& q_povm);

/// Least-squares inverse of the Bell/tetrahedral statistics.
CMatrix reconstruct_from_mu_bar(const ConditionalDistribution& mu);

/// Question ensemble tau^s = Tr_{A1}[(Theta^s (x) 1) Psi+]; p(s) = Tr Theta^s / d.
/// Throws RankError unless theta spans the operator space.
Ensemble ic_question_ensemble(const Povm& theta);

/// Theta^s = psi^s / 2.
Povm tetrahedral_povm();

/// W_ab |phi><phi| W_ab^dagger / d for a fixed fiducial phi; d in [2, 4].
Povm hw_ic_povm(std::size_t d);

/// U^x on A1, indexed like heisenberg_weyl(d).
std::vector<CMatrix> alice_corrections(std::size_t d);
/// V^y on B1, indexed like heisenberg_weyl(d).
std::vector<CMatrix> bob_corrections(std::size_t d);

/// Single-term joint POVM made of generalized Bell measurements on A0 A and B B0.
SeparableJointPovm exact_bell_strategy(std::size_t d_a, std::size_t d_b);

/// sum_{x,y} (U^x (x) V^y) Tr_{A0ABB0}[(1 (x) Z^{xy} (x) 1)(Psi+ (x) rho (x) Psi+)] (U^x (x) V^y)^dagger
/// with the standard corrections. Output lives on A1 (x) B1.
DensityMatrix teleport_reconstruct(const DensityMatrix& rho, const SeparableJointPovm& zbar);

/// LOSR map with E^i(z) = sum_x U^x Tr_{A0A}[(1 (x) P^x(i))(Psi+ (x) z)] U^x^dagger and
/// the mirrored F^i. Throws ConstructionError if a channel fails the 1e-10
/// trace-preservation check.
LosrMap build_losr_from_strategy(const SeparableJointPovm& zbar, const std::vector<CMatrix>& u_ops,
                                 const std::vector<CMatrix>& v_ops);

struct ContradictionCheck {
    double output_distance;  // || LOSR image of sigma - rho ||_F
    bool output_ppt_entangled;
};

/// Builds the LOSR map from (p_povm, q_povm) and applies it to sigma.
ContradictionCheck contradiction_pipeline(const DensityMatrix& rho, const DensityMatrix& sigma, const Povm& p_povm,
                                          const Povm& q_povm);

struct NonreproducibilityReport {
    ConditionalDistribution mu_rho;    // Bell answers on rho
    ConditionalDistribution mu_sigma;  // (p_povm, q_povm) on sigma
    double max_deviation;
    bool rho_npt;
    std::optional<ContradictionCheck> contradiction;  // run only when the tables agree to 1e-9
};

/// Compares mu_bar(rho) with the statistics a separable state produces under
/// the given strategy, both with tetrahedral questions.
NonreproducibilityReport entanglement_nonreproducibility_demo(const DensityMatrix& rho,
                                                              const std::vector<SeparableTerm>& sigma_sep,
                                                              const Povm& p_povm, const Povm& q_povm);

}  // namespace sqg
