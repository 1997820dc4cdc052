#pragma once

#include <vector>

#include "sqg/optimize.hpp"

namespace sqg {

/// sum_i nu(i) (E^i (x) F^i)(rho).
DensityMatrix apply_losr(const LosrMap& m, const DensityMatrix& rho);

/// One term nu * gamma (x) chi of a separable decomposition.
struct SeparableTerm {
    double weight;
    DensityMatrix state_a;
    DensityMatrix state_b;
};

/// sum_i nu(i) gamma^i (x) chi^i as a state on A (x) B.
DensityMatrix separable_state(const std::vector<SeparableTerm>& terms);

/// LOSR map that discards its input and prepares sum_i nu(i) gamma^i (x) chi^i.
/// dims_in = {d_A, d_B} of the discarded input.
LosrMap discard_and_prepare(const std::vector<SeparableTerm>& terms, const DimVector& dims_in);

/// Random decomposition with `n_terms` product terms of rank-`rank` local states.
std::vector<SeparableTerm> random_separable_terms(std::size_t n_terms, std::size_t d_a, std::size_t d_b,
                                                  std::size_t rank, Rng& rng);

/// Heisenberg-picture action of a channel on an operator on `before (x) out (x) after`.
CMatrix dual_channel_on(const KrausChannel& ch, const CMatrix& op, std::size_t before, std::size_t after);

struct MonotonicityEntry {
    double value_before;  // see-saw value on rho
    double value_after;   // see-saw value on the image
    bool slack_ok;
};

struct MonotonicityReport {
    double slack;
    std::vector<MonotonicityEntry> entries;
    std::size_t violations = 0;
    double max_subproblem_gap = 0;
};

/// For each game checks value(apply_losr(m, rho)) <= value(rho) + slack.
///
/// The image is optimized first. Its optimal strategy, pulled back through
/// each product term E^i (x) F^i, is a valid strategy on rho; the best of
/// these seeds restart 0 of the see-saw on rho.
MonotonicityReport check_monotonicity(const DensityMatrix& rho, const LosrMap& m,
                                      const std::vector<SemiQuantumGame>& games, const SeesawOptions& opts,
                                      double slack = 1e-3);

}  // namespace sqg
