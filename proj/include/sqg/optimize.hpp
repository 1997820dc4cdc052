#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "sqg/games.hpp"

namespace sqg {

struct SeesawOptions {
    int restarts = 20;
    int max_iters = 200;
    double improve_tol = 1e-9;  // relative to the payoff scale
    double gap_tol = 1e-7;      // absolute, per subproblem
    std::uint64_t seed = 0;

    void validate() const;
};

/// Certified solution of max_{POVM P} sum_x Tr[P^x R^x].
struct SubproblemResult {
    Povm povm;
    CMatrix dual_y;  // Y >= R^x for all x
    double value;    // sum_x Tr[P^x R^x]
    double gap;      // Tr[Y] - value
};

/// Solve the single-party POVM problem and return a primal-dual certificate.
///
/// Purely diagonal inputs are solved exactly (each basis vector goes to its
/// argmax outcome, lowest label on ties). Everything else goes through a
/// feasible-start primal-dual interior point method on
///   max sum_x <R^x, P^x>  s.t.  sum_x P^x = 1, P^x >= 0
///   min Tr[Y]             s.t.  Y - R^x >= 0
/// with HKM search directions and a Mehrotra corrector. The final primal is
/// renormalized to an exact POVM and the dual is lifted by the largest
/// violation of Y >= R^x, so the reported gap is an honest bound.
///
/// Throws ContractError for non-Hermitian input and ConvergenceError (with
/// the best gap) when gap_tol is not reached.
SubproblemResult povm_subproblem(const std::vector<CMatrix>& r_ops, const DimVector& dims, double gap_tol = 1e-7,
                                 std::optional<Labels> labels = std::nullopt,
                                 const Tolerances& tol = kDefaultTolerances);

struct GameValueResult {
    double value = 0;
    Povm p_opt;
    Povm q_opt;
    int iterations = 0;  // rounds used by the winning restart
    int restarts_used = 0;
    std::vector<double> per_restart_values;
    std::vector<double> subproblem_gaps;  // largest certificate gap seen in each restart

    double max_gap() const;
};

struct StrategyPair {
    Povm p;  // on A0 (x) A
    Povm q;  // on B (x) B0
};

/// One see-saw run: payoff history is nondecreasing by construction.
struct RestartTrace {
    double value;
    Povm p;
    Povm q;
    int iterations;
    std::vector<double> history;
    double max_gap;
};

RestartTrace seesaw_restart(const SemiQuantumGame& g, const DensityMatrix& rho, const StrategyPair& start,
                            const SeesawOptions& opts);

/// Alternating optimization of the expected payoff over local POVMs, best of
/// opts.restarts runs. Restart 0 starts from a measurement in the eigenbasis
/// of the question states (or from `seed_strategy` when given). Restart k >= 1
/// starts Bob from random_povm(seed + k) on B (x) B0 for even k, and from
/// 1_B (x) random_povm(seed + k) on B0 alone for odd k. The value is a lower
/// bound on the game value.
GameValueResult seesaw_value(const SemiQuantumGame& g, const DensityMatrix& rho, const SeesawOptions& opts,
                             const std::optional<StrategyPair>& seed_strategy = std::nullopt);

/// Game value with a trivial shared system: the payoff common to all separable states.
GameValueResult separable_value(const SemiQuantumGame& g, const SeesawOptions& opts);

/// Exact classical value by enumerating Alice's deterministic strategies
/// (Bob's best response is computed per question).
double brute_force_classical(const NonlocalGame& g);

/// The 1x1 state on trivial A and B.
DensityMatrix trivial_shared_state();

/// Effective operators for one party with the other's POVM held fixed.
std::vector<CMatrix> alice_operators(const SemiQuantumGame& g, const DensityMatrix& rho, const Povm& q_povm);
std::vector<CMatrix> bob_operators(const SemiQuantumGame& g, const DensityMatrix& rho, const Povm& p_povm);

}  // namespace sqg
