#include "sqg/losr.hpp"

#include <algorithm>

namespace sqg {

DensityMatrix apply_losr(const LosrMap& m, const DensityMatrix& rho) {
    if (rho.dims() != m.in_dims()) throw ArgumentError("apply_losr: state dimensions do not match the map input");
    const DimVector out_dims = m.out_dims();
    const auto n = static_cast<Eigen::Index>(dim_product(out_dims));
    CMatrix out = CMatrix::Zero(n, n);
    for (std::size_t i = 0; i < m.weights().size(); ++i) {
        const auto& [e, f] = m.pairs()[i];
        CMatrix term = CMatrix::Zero(n, n);
        for (const auto& ka : e.kraus_ops())
            for (const auto& kb : f.kraus_ops()) {
                const CMatrix k = kron(ka, kb);
                term += k * rho.mat() * k.adjoint();
            }
        out += m.weights()[i] * term;
    }
    return DensityMatrix(hermitian_part(out), out_dims);
}

DensityMatrix separable_state(const std::vector<SeparableTerm>& terms) {
    if (terms.empty()) throw ContractError("separable_state: empty decomposition");
    const auto& first = terms.front();
    const DimVector dims{first.state_a.side(), first.state_b.side()};
    const auto n = static_cast<Eigen::Index>(dims[0] * dims[1]);
    CMatrix out = CMatrix::Zero(n, n);
    double total = 0;
    for (const auto& t : terms) {
        if (t.state_a.side() != dims[0] || t.state_b.side() != dims[1])
            throw ContractError("separable_state: terms act on different dimensions");
        if (!(t.weight >= -kDefaultTolerances.eq)) throw ContractError("separable_state: negative weight");
        out += t.weight * kron(t.state_a.mat(), t.state_b.mat());
        total += t.weight;
    }
    if (std::abs(total - 1.0) > kDefaultTolerances.eq) throw ContractError("separable_state: weights do not sum to 1");
    return DensityMatrix(std::move(out), dims);
}

LosrMap discard_and_prepare(const std::vector<SeparableTerm>& terms, const DimVector& dims_in) {
    if (dims_in.size() != 2) throw ArgumentError("discard_and_prepare: input must be bipartite");
    separable_state(terms);  // validates the decomposition
    std::vector<double> weights;
    std::vector<std::pair<KrausChannel, KrausChannel>> pairs;
    for (const auto& t : terms) {
        weights.push_back(t.weight);
        pairs.emplace_back(replacement_channel(dims_in[0], t.state_a), replacement_channel(dims_in[1], t.state_b));
    }
    return LosrMap(std::move(weights), std::move(pairs));
}

std::vector<SeparableTerm> random_separable_terms(std::size_t n_terms, std::size_t d_a, std::size_t d_b,
                                                  std::size_t rank, Rng& rng) {
    if (n_terms == 0) throw ArgumentError("random_separable_terms: need at least one term");
    const auto w = random_distribution(n_terms, rng);
    std::vector<SeparableTerm> out;
    for (std::size_t i = 0; i < n_terms; ++i) {
        auto a = random_state({d_a}, std::min(rank, d_a), rng);
        auto b = random_state({d_b}, std::min(rank, d_b), rng);
        out.push_back({w[i], std::move(a), std::move(b)});
    }
    return out;
}

CMatrix dual_channel_on(const KrausChannel& ch, const CMatrix& op, std::size_t before, std::size_t after) {
    const CMatrix ib = cidentity(before), ia = cidentity(after);
    const auto n = static_cast<Eigen::Index>(before * ch.in_dim() * after);
    CMatrix out = CMatrix::Zero(n, n);
    for (const auto& k : ch.kraus_ops()) {
        const CMatrix big = kron(kron(ib, k), ia);
        out += big.adjoint() * op * big;
    }
    return hermitian_part(out);
}

namespace {

Povm pull_back(const Povm& p, const KrausChannel& ch, std::size_t before, std::size_t after) {
    std::vector<CMatrix> el;
    for (const auto& e : p.elements()) el.push_back(dual_channel_on(ch, e, before, after));
    DimVector dims;
    if (before > 1) dims.push_back(before);
    dims.push_back(ch.in_dim());
    if (after > 1) dims.push_back(after);
    return Povm(p.labels(), std::move(el), std::move(dims));
}

}  // namespace

MonotonicityReport check_monotonicity(const DensityMatrix& rho, const LosrMap& m,
                                      const std::vector<SemiQuantumGame>& games, const SeesawOptions& opts,
                                      double slack) {
    opts.validate();
    const DensityMatrix image = apply_losr(m, rho);
    MonotonicityReport rep{slack, {}, 0, 0};
    for (const auto& g : games) {
        const auto after = seesaw_value(g, image, opts);
        const auto d = play_dims(g, rho);

        std::optional<StrategyPair> seed;
        double seed_value = 0;
        for (const auto& [e, f] : m.pairs()) {
            StrategyPair cand{pull_back(after.p_opt, e, d.a0, 1), pull_back(after.q_opt, f, 1, d.b0)};
            const double v = expected_payoff(g, rho, cand.p, cand.q);
            if (!seed || v > seed_value) {
                seed_value = v;
                seed = std::move(cand);
            }
        }
        const auto before = seesaw_value(g, rho, opts, seed);
        const bool ok = after.value <= before.value + slack;
        rep.entries.push_back({before.value, after.value, ok});
        if (!ok) ++rep.violations;
        rep.max_subproblem_gap = std::max({rep.max_subproblem_gap, before.max_gap(), after.max_gap()});
    }
    return rep;
}

}  // namespace sqg
