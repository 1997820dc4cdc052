#include "sqg/appendixlab.hpp"

#include <cmath>

namespace sqg {

namespace {

CMatrix bloch_projector(double x, double y, double z) {
    CMatrix m(2, 2);
    m << Complex(1 + z, 0), Complex(x, -y), Complex(x, y), Complex(1 - z, 0);
    return 0.5 * m;
}

CMatrix unit(std::size_t n, std::size_t j, std::size_t k) {
    CMatrix m = CMatrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    m(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k)) = 1.0;
    return m;
}

RMatrix coordinate_matrix(const std::vector<CMatrix>& ops) {
    const auto n = ops.front().rows();
    RMatrix a(n * n, static_cast<Eigen::Index>(ops.size()));
    for (std::size_t k = 0; k < ops.size(); ++k) a.col(static_cast<Eigen::Index>(k)) = herm_coords(ops[k]);
    return a;
}

std::size_t numerical_rank(const RMatrix& a) {
    const Eigen::JacobiSVD<RMatrix> svd(a);
    const auto& sv = svd.singularValues();
    if (sv.size() == 0) return 0;
    const double cut = 1e-10 * std::max(sv(0), 1.0);
    std::size_t r = 0;
    for (Eigen::Index k = 0; k < sv.size(); ++k)
        if (sv(k) > cut) ++r;
    return r;
}

const Labels& bell_labels() {
    static const Labels labels{"Phi+", "Phi-", "Psi+", "Psi-"};
    return labels;
}

// Split a POVM on (A0 or B0) (x) A into its two factor dimensions.
std::pair<std::size_t, std::size_t> bipartite_dims(const Povm& p, const char* who) {
    if (p.dims().size() != 2) throw ArgumentError(std::string(who) + ": POVM must act on two subsystems");
    return {p.dims()[0], p.dims()[1]};
}

}  // namespace

TetraQuestionSet tetra_questions() {
    const double r = 1.0 / std::sqrt(3.0);
    const double v[4][3] = {{r, r, r}, {r, -r, -r}, {-r, r, -r}, {-r, -r, r}};
    TetraQuestionSet q;
    for (const auto& b : v) q.states.emplace_back(bloch_projector(b[0], b[1], b[2]), DimVector{2});
    q.gram = RMatrix(4, 4);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) q.gram(i, j) = hs_inner(q.states[i].mat(), q.states[j].mat()).real();
    return q;
}

BellAnswerSet bell_answers() { return {bell_projectors(2)}; }

SemiQuantumGame tetra_game() {
    const auto q = tetra_questions();
    const std::vector<double> uniform(4, 0.25);
    const Ensemble e(index_labels(4), uniform, q.states);
    return SemiQuantumGame(index_labels(4), index_labels(4), bell_labels(), bell_labels(), e, e, PayoffTensor(4, 4, 4, 4));
}

ConditionalDistribution mu_bar(const DensityMatrix& rho) {
    if (rho.dims() != DimVector{2, 2}) throw ArgumentError("mu_bar: state must be on 2 (x) 2");
    const auto bell = bell_povm(2);
    return joint_distribution(tetra_game(), rho, bell, bell);
}

std::vector<CMatrix> effective_operators(const SemiQuantumGame& g, const DimVector& dims_ab, const Povm& p_povm,
                                         const Povm& q_povm) {
    if (dims_ab.size() != 2) throw ArgumentError("effective_operators: need dims of A and B");
    const std::size_t a0 = g.tau().side(), b0 = g.omega().side(), da = dims_ab[0], db = dims_ab[1];
    if (p_povm.side() != a0 * da || q_povm.side() != db * b0)
        throw ArgumentError("effective_operators: POVM dimensions do not match");
    // Alice: Tr_{A0}[P^x (tau^s (x) 1)], Bob: Tr_{B0}[Q^y (1 (x) omega^t)]
    std::vector<std::vector<CMatrix>> pa(g.nx(), std::vector<CMatrix>(g.ns()));
    std::vector<std::vector<CMatrix>> qb(g.ny(), std::vector<CMatrix>(g.nt()));
    for (std::size_t x = 0; x < g.nx(); ++x)
        for (std::size_t s = 0; s < g.ns(); ++s)
            pa[x][s] = hermitian_part(
                partial_trace(CMatrix(p_povm[x] * kron(g.tau().states()[s].mat(), cidentity(da))), {a0, da}, {1}));
    for (std::size_t y = 0; y < g.ny(); ++y)
        for (std::size_t t = 0; t < g.nt(); ++t)
            qb[y][t] = hermitian_part(
                partial_trace(CMatrix(q_povm[y] * kron(cidentity(db), g.omega().states()[t].mat())), {db, b0}, {0}));
    std::vector<CMatrix> out;
    out.reserve(g.nx() * g.ny() * g.ns() * g.nt());
    for (std::size_t x = 0; x < g.nx(); ++x)
        for (std::size_t y = 0; y < g.ny(); ++y)
            for (std::size_t s = 0; s < g.ns(); ++s)
                for (std::size_t t = 0; t < g.nt(); ++t) out.push_back(kron(pa[x][s], qb[y][t]));
    return out;
}

CMatrix reconstruct_from_mu_bar(const ConditionalDistribution& mu) {
    const auto g = tetra_game();
    if (mu.nx() != 4 || mu.ny() != 4 || mu.ns() != 4 || mu.nt() != 4)
        throw ArgumentError("reconstruct_from_mu_bar: expected a 4x4x4x4 table");
    const auto bell = bell_povm(2);
    const RMatrix a = coordinate_matrix(effective_operators(g, {2, 2}, bell, bell)).transpose();
    const RVector b = Eigen::Map<const RVector>(mu.values().data(), static_cast<Eigen::Index>(mu.values().size()));
    const RVector coords = a.colPivHouseholderQr().solve(b);
    return herm_from_coords(coords, 4);
}

Ensemble ic_question_ensemble(const Povm& theta) {
    const std::size_t d = theta.side();
    if (numerical_rank(coordinate_matrix(theta.elements())) < d * d)
        throw RankError("ic_question_ensemble: POVM is not informationally complete");
    const CMatrix psi_plus = max_entangled(d).mat();
    std::vector<double> probs;
    std::vector<DensityMatrix> states;
    for (const auto& e : theta.elements()) {
        const CMatrix sub = hermitian_part(partial_trace(CMatrix(kron(e, cidentity(d)) * psi_plus), {d, d}, {1}));
        const double p = sub.trace().real();
        if (p <= 0) throw ArgumentError("ic_question_ensemble: zero POVM element");
        probs.push_back(p);
        states.emplace_back(sub / p, DimVector{d});
    }
    return Ensemble(theta.labels(), std::move(probs), std::move(states));
}

Povm tetrahedral_povm() {
    std::vector<CMatrix> el;
    for (const auto& s : tetra_questions().states) el.push_back(s.mat() / 2.0);
    return Povm(std::move(el), {2});
}

Povm hw_ic_povm(std::size_t d) {
    if (d < 2 || d > 4) throw ArgumentError("hw_ic_povm: supported for d in [2, 4]");
    // fixed fiducial with nonzero overlap on every Weyl operator
    Eigen::VectorXcd phi(static_cast<Eigen::Index>(d));
    for (std::size_t k = 0; k < d; ++k)
        phi(static_cast<Eigen::Index>(k)) = std::polar(1.0 + 0.37 * double(k), 0.61 * double(k * k) + 0.2 * double(k));
    phi.normalize();
    const CMatrix f = phi * phi.adjoint();
    std::vector<CMatrix> el;
    for (const auto& w : heisenberg_weyl(d)) el.push_back(hermitian_part(CMatrix(w * f * w.adjoint() / double(d))));
    Povm p(std::move(el), {d});
    if (numerical_rank(coordinate_matrix(p.elements())) < d * d)
        throw RankError("hw_ic_povm: fiducial does not give an informationally complete POVM");
    return p;
}

std::vector<CMatrix> alice_corrections(std::size_t d) {
    std::vector<CMatrix> out;
    for (const auto& w : heisenberg_weyl(d)) out.push_back(w.transpose());
    return out;
}

std::vector<CMatrix> bob_corrections(std::size_t d) { return heisenberg_weyl(d); }

SeparableJointPovm exact_bell_strategy(std::size_t d_a, std::size_t d_b) {
    return SeparableJointPovm({1.0}, {{bell_povm(d_a), bell_povm(d_b)}});
}

DensityMatrix teleport_reconstruct(const DensityMatrix& rho, const SeparableJointPovm& zbar) {
    if (rho.dims().size() != 2) throw ArgumentError("teleport_reconstruct: state must be bipartite");
    const std::size_t da = rho.dims()[0], db = rho.dims()[1];
    const auto& [p0, q0] = zbar.pairs().front();
    if (p0.dims() != DimVector{da, da} || q0.dims() != DimVector{db, db})
        throw ArgumentError("teleport_reconstruct: joint POVM must act on A0 A and B B0 matching the state");
    if (zbar.x_count() != da * da || zbar.y_count() != db * db)
        throw ArgumentError("teleport_reconstruct: need d^2 outcomes per side");

    const auto u = alice_corrections(da);
    const auto v = bob_corrections(db);
    const DimVector dims{da, da, da, db, db, db};  // A1 A0 A B B0 B1
    const CMatrix state = kron(kron(max_entangled(da).mat(), rho.mat()), max_entangled(db).mat());
    const CMatrix ia = cidentity(da), ib = cidentity(db);
    CMatrix out = CMatrix::Zero(static_cast<Eigen::Index>(da * db), static_cast<Eigen::Index>(da * db));
    for (std::size_t x = 0; x < zbar.x_count(); ++x)
        for (std::size_t y = 0; y < zbar.y_count(); ++y) {
            const CMatrix op = kron(kron(ia, zbar.element(x, y)), ib);
            const CMatrix sxy = partial_trace(CMatrix(op * state), dims, {0, 5});
            const CMatrix uv = kron(u[x], v[y]);
            out += uv * sxy * uv.adjoint();
        }
    return DensityMatrix(hermitian_part(out), {da, db});
}

LosrMap build_losr_from_strategy(const SeparableJointPovm& zbar, const std::vector<CMatrix>& u_ops,
                                 const std::vector<CMatrix>& v_ops) {
    if (u_ops.size() != zbar.x_count() || v_ops.size() != zbar.y_count())
        throw ArgumentError("build_losr_from_strategy: one correction unitary per outcome required");
    Tolerances tol = kDefaultTolerances;
    tol.eq = 1e-10;

    std::vector<std::pair<KrausChannel, KrausChannel>> pairs;
    for (const auto& [p, q] : zbar.pairs()) {
        const auto [a0, a] = bipartite_dims(p, "build_losr_from_strategy");
        const auto [b, b0] = bipartite_dims(q, "build_losr_from_strategy");
        const CMatrix psi_a = max_entangled(a0).mat();  // A1 A0
        const CMatrix psi_b = max_entangled(b0).mat();  // B0 B1

        // Choi matrices J = sum_jk |j><k| (x) E(|j><k|)
        CMatrix ja = CMatrix::Zero(static_cast<Eigen::Index>(a * a0), static_cast<Eigen::Index>(a * a0));
        for (std::size_t j = 0; j < a; ++j)
            for (std::size_t k = 0; k < a; ++k) {
                const CMatrix in = kron(psi_a, unit(a, j, k));
                CMatrix out = CMatrix::Zero(static_cast<Eigen::Index>(a0), static_cast<Eigen::Index>(a0));
                for (std::size_t x = 0; x < p.size(); ++x) {
                    const CMatrix t = partial_trace(CMatrix(kron(cidentity(a0), p[x]) * in), {a0, a0, a}, {0});
                    out += u_ops[x] * t * u_ops[x].adjoint();
                }
                ja.block(static_cast<Eigen::Index>(j * a0), static_cast<Eigen::Index>(k * a0), static_cast<Eigen::Index>(a0),
                         static_cast<Eigen::Index>(a0)) = out;
            }
        CMatrix jb = CMatrix::Zero(static_cast<Eigen::Index>(b * b0), static_cast<Eigen::Index>(b * b0));
        for (std::size_t j = 0; j < b; ++j)
            for (std::size_t k = 0; k < b; ++k) {
                const CMatrix in = kron(unit(b, j, k), psi_b);
                CMatrix out = CMatrix::Zero(static_cast<Eigen::Index>(b0), static_cast<Eigen::Index>(b0));
                for (std::size_t y = 0; y < q.size(); ++y) {
                    const CMatrix t = partial_trace(CMatrix(kron(q[y], cidentity(b0)) * in), {b, b0, b0}, {2});
                    out += v_ops[y] * t * v_ops[y].adjoint();
                }
                jb.block(static_cast<Eigen::Index>(j * b0), static_cast<Eigen::Index>(k * b0), static_cast<Eigen::Index>(b0),
                         static_cast<Eigen::Index>(b0)) = out;
            }
        pairs.emplace_back(channel_from_choi(ja, a, a0, tol), channel_from_choi(jb, b, b0, tol));
    }
    return LosrMap(zbar.weights(), std::move(pairs));
}

ContradictionCheck contradiction_pipeline(const DensityMatrix& rho, const DensityMatrix& sigma, const Povm& p_povm,
                                          const Povm& q_povm) {
    const auto [a0, a] = bipartite_dims(p_povm, "contradiction_pipeline");
    const auto [b, b0] = bipartite_dims(q_povm, "contradiction_pipeline");
    (void)a;
    (void)b;
    if (p_povm.size() != a0 * a0 || q_povm.size() != b0 * b0)
        throw ArgumentError("contradiction_pipeline: need d^2 outcomes per side");
    const auto m = build_losr_from_strategy(SeparableJointPovm({1.0}, {{p_povm, q_povm}}), alice_corrections(a0),
                                            bob_corrections(b0));
    const auto out = apply_losr(m, sigma);
    if (out.dims() != rho.dims()) throw ArgumentError("contradiction_pipeline: image and target differ in dimension");
    return {(out.mat() - rho.mat()).norm(), ppt_entangled(out).flag};
}

NonreproducibilityReport entanglement_nonreproducibility_demo(const DensityMatrix& rho,
                                                              const std::vector<SeparableTerm>& sigma_sep,
                                                              const Povm& p_povm, const Povm& q_povm) {
    const DensityMatrix sigma = separable_state(sigma_sep);
    auto mu_rho = mu_bar(rho);
    auto mu_sigma = joint_distribution(tetra_game(), sigma, p_povm, q_povm);
    const double dev = mu_rho.max_abs_deviation(mu_sigma);
    const bool npt = ppt_entangled(rho).flag;
    std::optional<ContradictionCheck> check;
    if (npt && dev < 1e-9) check = contradiction_pipeline(rho, sigma, p_povm, q_povm);
    return {std::move(mu_rho), std::move(mu_sigma), dev, npt, check};
}

}  // namespace sqg
