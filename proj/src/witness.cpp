#include "sqg/witness.hpp"

#include <algorithm>

namespace sqg {

CMatrix witness_from_ppt(const DensityMatrix& rho) {
    if (rho.dims() != DimVector{2, 2}) throw ArgumentError("witness_from_ppt: state must be on 2 (x) 2");
    const auto r = ppt_entangled(rho);
    if (!r.flag) throw NotEntangledError("witness_from_ppt: state has positive partial transpose");
    const CMatrix proj = r.witness_vector * r.witness_vector.adjoint();
    return hermitian_part(partial_transpose(proj, {2, 2}, 1));
}

WitnessGame build_witness_game(const CMatrix& w, const Ensemble& tau, const Ensemble& omega) {
    const std::size_t a0 = tau.side(), b0 = omega.side();
    if (static_cast<std::size_t>(w.rows()) != a0 * b0 || w.cols() != w.rows())
        throw ArgumentError("build_witness_game: witness must act on A0 (x) B0");
    if (!is_hermitian(w)) throw ContractError("build_witness_game: witness is not Hermitian");
    const std::size_t ns = tau.size(), nt = omega.size();
    const auto n = static_cast<Eigen::Index>(a0 * b0);

    RMatrix a(n * n, static_cast<Eigen::Index>(ns * nt));
    for (std::size_t s = 0; s < ns; ++s)
        for (std::size_t t = 0; t < nt; ++t)
            a.col(static_cast<Eigen::Index>(s * nt + t)) =
                herm_coords(kron(tau.states()[s].mat().transpose(), omega.states()[t].mat().transpose()));
    const Eigen::ColPivHouseholderQR<RMatrix> qr(a);
    if (static_cast<std::size_t>(qr.rank()) < static_cast<std::size_t>(n * n))
        throw RankError("build_witness_game: question states are not informationally complete");
    const RVector coeff = qr.solve(RVector(herm_coords(w)));
    if ((a * coeff - herm_coords(w)).norm() > 1e-9)
        throw RankError("build_witness_game: witness not in the span of the question operators");

    RMatrix beta(static_cast<Eigen::Index>(ns), static_cast<Eigen::Index>(nt));
    const Labels bell{"Phi+", "Phi-", "Psi+", "Psi-"};
    const std::size_t nx = a0 * a0, ny = b0 * b0;
    Labels x_labels = nx == 4 ? bell : index_labels(nx);
    Labels y_labels = ny == 4 ? bell : index_labels(ny);
    PayoffTensor payoff(ns, nt, nx, ny);
    for (std::size_t s = 0; s < ns; ++s)
        for (std::size_t t = 0; t < nt; ++t) {
            const double b = coeff(static_cast<Eigen::Index>(s * nt + t));
            beta(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(t)) = b;
            payoff(s, t, 0, 0) = -b / (tau.probs()[s] * omega.probs()[t]);
        }
    SemiQuantumGame game(tau.labels(), omega.labels(), std::move(x_labels), std::move(y_labels), tau, omega,
                         std::move(payoff));
    return {std::move(game), std::move(beta), w, 1.0 / double(a0 * b0)};
}

WitnessGame build_witness_game(const CMatrix& w) {
    const auto g = tetra_game();
    return build_witness_game(w, g.tau(), g.omega());
}

StrategyPair bell_strategy(const WitnessGame& wg) {
    const auto& g = wg.game;
    const Povm p = bell_povm(g.tau().side());
    const Povm q = bell_povm(g.omega().side());
    return {Povm(g.x_labels(), p.elements(), p.dims()), Povm(g.y_labels(), q.elements(), q.dims())};
}

WitnessGapResult witness_gap(const DensityMatrix& rho, const WitnessGame& wg, const SeesawOptions& opts) {
    const auto d = play_dims(wg.game, rho);
    std::optional<StrategyPair> seed;
    if (d.a == d.a0 && d.b == d.b0) seed = bell_strategy(wg);
    const auto ent = seesaw_value(wg.game, rho, opts, seed);
    const auto sep = separable_value(wg.game, opts);
    return {ent.value, sep.value, ent.value - sep.value, wg.scale_c, std::max(ent.max_gap(), sep.max_gap())};
}

}  // namespace sqg
