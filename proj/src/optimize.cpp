#include "sqg/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace sqg {

void SeesawOptions::validate() const {
    if (restarts < 1) throw ArgumentError("SeesawOptions: restarts must be positive");
    if (max_iters < 1) throw ArgumentError("SeesawOptions: max_iters must be positive");
    if (!(improve_tol > 0)) throw ArgumentError("SeesawOptions: improve_tol must be positive");
    if (!(gap_tol > 0)) throw ArgumentError("SeesawOptions: gap_tol must be positive");
}

double GameValueResult::max_gap() const {
    double m = 0;
    for (double g : subproblem_gaps) m = std::max(m, g);
    return m;
}

namespace {

constexpr double kStepFraction = 0.95;

// Largest alpha with a + alpha d still positive definite (infinity if unbounded).
double max_step(const CMatrix& a, const CMatrix& d) {
    Eigen::LLT<CMatrix> llt(a);
    if (llt.info() != Eigen::Success) return 0.0;
    const CMatrix x = llt.matrixL().solve(d);
    const CMatrix m = llt.matrixL().solve(x.adjoint()).adjoint();
    const double lmin = eigh(hermitian_part(m), 1e300).values.minCoeff();
    return lmin >= 0 ? std::numeric_limits<double>::infinity() : -1.0 / lmin;
}

CMatrix sym_product(const CMatrix& p, const CMatrix& e, const CMatrix& s_inv) {
    const CMatrix t = p * e * s_inv;
    return 0.5 * (t + t.adjoint());
}

struct Certificate {
    std::vector<CMatrix> p;
    CMatrix y;
    double value = 0;
    double gap = 0;
};

// Normalize the primal to an exact POVM, lift the dual to feasibility, and
// measure the resulting gap.
Certificate certify(const std::vector<CMatrix>& r, std::vector<CMatrix> p, CMatrix y) {
    const auto n = r.front().rows();
    CMatrix total = CMatrix::Zero(n, n);
    for (auto& px : p) {
        px = psd_sqrt(hermitian_part(px), 1e300);
        px = px * px;  // clip tiny negative eigenvalues
        total += px;
    }
    const CMatrix t = inverse_sqrt(hermitian_part(total), 1e-300, 1e300);
    for (auto& px : p) px = hermitian_part(t * px * t);

    y = hermitian_part(y);
    double lift = 0;
    for (const auto& rx : r) lift = std::max(lift, eigh(hermitian_part(rx - y), 1e300).values(0));
    y += lift * CMatrix::Identity(n, n);

    double value = 0;
    for (std::size_t x = 0; x < r.size(); ++x) value += hs_inner(p[x], r[x]).real();
    const double gap = std::max(0.0, y.trace().real() - value);
    return {std::move(p), std::move(y), value, gap};
}

Certificate solve_diagonal(const std::vector<CMatrix>& r) {
    const auto n = r.front().rows();
    std::vector<CMatrix> p(r.size(), CMatrix::Zero(n, n));
    CMatrix y = CMatrix::Zero(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        std::size_t best = 0;
        for (std::size_t x = 1; x < r.size(); ++x)
            if (r[x](j, j).real() > r[best](j, j).real()) best = x;
        p[best](j, j) = 1.0;
        y(j, j) = r[best](j, j).real();
    }
    double lift = 0;
    for (const auto& rx : r) lift = std::max(lift, eigh(hermitian_part(rx - y), 1e300).values(0));
    y += lift * CMatrix::Identity(n, n);
    double value = 0;
    for (std::size_t x = 0; x < r.size(); ++x) value += hs_inner(p[x], r[x]).real();
    return {std::move(p), std::move(y), value, std::max(0.0, y.trace().real() - value)};
}

Certificate solve_interior_point(const std::vector<CMatrix>& r, double gap_tol) {
    const std::size_t m = r.size();
    const Eigen::Index n = r.front().rows();
    const Eigen::Index nn = n * n;
    const CMatrix id = CMatrix::Identity(n, n);

    double scale = 0, top = -std::numeric_limits<double>::infinity();
    for (const auto& rx : r) {
        scale = std::max(scale, rx.norm());
        top = std::max(top, eigh(rx, 1e300).values(0));
    }
    const double target = std::min(1e-2 * gap_tol, 1e-10 * scale);

    std::vector<CMatrix> p(m, id / static_cast<double>(m));
    CMatrix y = (top + scale) * id;
    std::vector<CMatrix> s(m), s_inv(m);

    std::vector<CMatrix> basis;
    basis.reserve(static_cast<std::size_t>(nn));
    for (Eigen::Index k = 0; k < nn; ++k) basis.push_back(herm_from_coords<double>(Eigen::VectorXd::Unit(nn, k), n));

    for (int iter = 0; iter < 200; ++iter) {
        double gap = 0;
        for (std::size_t x = 0; x < m; ++x) {
            s[x] = hermitian_part(y - r[x]);
            gap += hs_inner(p[x], s[x]).real();
        }
        if (gap <= target) break;
        const double mu = gap / static_cast<double>(m * static_cast<std::size_t>(n));

        bool ok = true;
        for (std::size_t x = 0; x < m && ok; ++x) {
            Eigen::LLT<CMatrix> llt(s[x]);
            ok = llt.info() == Eigen::Success;
            if (ok) s_inv[x] = hermitian_part(llt.solve(id));
        }
        if (!ok) break;

        // Schur operator dY -> sum_x sym(P^x dY S_x^{-1}) in Hermitian coordinates.
        Eigen::MatrixXd schur(nn, nn);
        for (Eigen::Index k = 0; k < nn; ++k) {
            CMatrix col = CMatrix::Zero(n, n);
            for (std::size_t x = 0; x < m; ++x) col += sym_product(p[x], basis[static_cast<std::size_t>(k)], s_inv[x]);
            schur.col(k) = herm_coords(col);
        }
        const Eigen::PartialPivLU<Eigen::MatrixXd> lu(schur);

        CMatrix s_inv_sum = CMatrix::Zero(n, n);
        for (std::size_t x = 0; x < m; ++x) s_inv_sum += s_inv[x];

        // rhs(sigma, C) = sigma mu sum S^{-1} - sum C - 1 ; dP = sigma mu S^{-1} - P - sym(P dY S^{-1}) - C
        auto direction = [&](double sigma_mu, const std::vector<CMatrix>* corr, CMatrix& dy, std::vector<CMatrix>& dp) {
            CMatrix rhs = sigma_mu * s_inv_sum - id;
            if (corr)
                for (const auto& c : *corr) rhs -= c;
            const Eigen::VectorXd sol = lu.solve(herm_coords(rhs));
            dy = herm_from_coords<double>(sol, n);
            dp.resize(m);
            for (std::size_t x = 0; x < m; ++x) {
                dp[x] = sigma_mu * s_inv[x] - p[x] - sym_product(p[x], dy, s_inv[x]);
                if (corr) dp[x] -= (*corr)[x];
                dp[x] = hermitian_part(dp[x]);
            }
        };
        auto step_lengths = [&](const CMatrix& dy, const std::vector<CMatrix>& dp) {
            double ap = std::numeric_limits<double>::infinity(), ad = ap;
            for (std::size_t x = 0; x < m; ++x) {
                ap = std::min(ap, max_step(p[x], dp[x]));
                ad = std::min(ad, max_step(s[x], dy));
            }
            return std::pair{ap, ad};
        };

        CMatrix dy_aff;
        std::vector<CMatrix> dp_aff;
        direction(0.0, nullptr, dy_aff, dp_aff);
        auto [ap_aff, ad_aff] = step_lengths(dy_aff, dp_aff);
        ap_aff = std::min(1.0, ap_aff);
        ad_aff = std::min(1.0, ad_aff);
        double gap_aff = 0;
        for (std::size_t x = 0; x < m; ++x)
            gap_aff += hs_inner(p[x] + ap_aff * dp_aff[x], s[x] + ad_aff * dy_aff).real();
        const double ratio = std::clamp(gap_aff / gap, 0.0, 1.0);
        const double sigma = ratio * ratio * ratio;

        std::vector<CMatrix> corr(m);
        for (std::size_t x = 0; x < m; ++x) corr[x] = sym_product(dp_aff[x], dy_aff, s_inv[x]);
        CMatrix dy;
        std::vector<CMatrix> dp;
        direction(sigma * mu, &corr, dy, dp);
        auto [ap, ad] = step_lengths(dy, dp);
        ap = std::min(1.0, kStepFraction * ap);
        ad = std::min(1.0, kStepFraction * ad);
        if (ap < 1e-12 && ad < 1e-12) break;

        for (std::size_t x = 0; x < m; ++x) p[x] = hermitian_part(p[x] + ap * dp[x]);
        y = hermitian_part(y + ad * dy);
    }
    return certify(r, std::move(p), std::move(y));
}

}  // namespace

SubproblemResult povm_subproblem(const std::vector<CMatrix>& r_ops, const DimVector& dims, double gap_tol,
                                 std::optional<Labels> labels, const Tolerances& tol) {
    if (r_ops.empty()) throw ArgumentError("povm_subproblem: no outcome operators");
    const auto n = static_cast<Eigen::Index>(dim_product(dims));
    std::vector<CMatrix> r;
    r.reserve(r_ops.size());
    for (const auto& rx : r_ops) {
        if (rx.rows() != n || rx.cols() != n) throw ArgumentError("povm_subproblem: operator side does not match dims");
        if (!is_hermitian(rx, tol.herm)) throw ContractError("povm_subproblem: operator is not Hermitian");
        r.push_back(hermitian_part(rx));
    }
    Labels lab = labels ? std::move(*labels) : index_labels(r.size());
    if (lab.size() != r.size()) throw ArgumentError("povm_subproblem: label count does not match operator count");

    if (r.size() == 1) {
        const double v = r.front().trace().real();
        return {Povm(std::move(lab), {CMatrix::Identity(n, n)}, dims), r.front(), v, 0.0};
    }

    double off = 0, scale = 0;
    for (const auto& rx : r) {
        scale = std::max(scale, max_abs(rx));
        off = std::max(off, max_abs(CMatrix(rx - CMatrix(rx.diagonal().asDiagonal()))));
    }
    const bool diagonal = off <= 1e-13 * std::max(scale, 1e-300);
    Certificate cert = diagonal ? solve_diagonal(r) : solve_interior_point(r, gap_tol);
    if (diagonal && cert.gap > gap_tol) cert = solve_interior_point(r, gap_tol);
    if (!(cert.gap <= gap_tol)) {
        char msg[96];
        std::snprintf(msg, sizeof msg, "povm_subproblem: duality gap %.3e above tolerance %.3e", cert.gap, gap_tol);
        throw ConvergenceError(msg, cert.gap);
    }
    return {Povm(std::move(lab), std::move(cert.p), dims, tol), std::move(cert.y), cert.value, cert.gap};
}

// -- see-saw -----------------------------------------------------------------------

DensityMatrix trivial_shared_state() { return DensityMatrix(CMatrix::Identity(1, 1), {1, 1}); }

std::vector<CMatrix> alice_operators(const SemiQuantumGame& g, const DensityMatrix& rho, const Povm& q_povm) {
    const auto d = play_dims(g, rho);
    const auto& p = g.tau().probs();
    const auto& q = g.omega().probs();
    const CMatrix id_a = cidentity(d.a);
    // rho_A^{ty} = Tr_{B B0}[(1_A (x) Q^y)(rho (x) omega^t)]
    std::vector<std::vector<CMatrix>> reduced(g.nt());
    for (std::size_t t = 0; t < g.nt(); ++t) {
        const CMatrix joint = kron(rho.mat(), g.omega().states()[t].mat());
        for (std::size_t y = 0; y < g.ny(); ++y)
            reduced[t].push_back(partial_trace(kron(id_a, q_povm[y]) * joint, {d.a, d.b, d.b0}, {0}));
    }
    const auto na = static_cast<Eigen::Index>(d.a0 * d.a);
    std::vector<CMatrix> out(g.nx(), CMatrix::Zero(na, na));
    for (std::size_t x = 0; x < g.nx(); ++x)
        for (std::size_t s = 0; s < g.ns(); ++s) {
            CMatrix m = CMatrix::Zero(static_cast<Eigen::Index>(d.a), static_cast<Eigen::Index>(d.a));
            for (std::size_t t = 0; t < g.nt(); ++t)
                for (std::size_t y = 0; y < g.ny(); ++y) {
                    const double w = q[t] * g.payoff()(s, t, x, y);
                    if (w != 0.0) m += w * reduced[t][y];
                }
            out[x] += p[s] * kron(g.tau().states()[s].mat(), m);
        }
    for (auto& o : out) o = hermitian_part(o);
    return out;
}

std::vector<CMatrix> bob_operators(const SemiQuantumGame& g, const DensityMatrix& rho, const Povm& p_povm) {
    const auto d = play_dims(g, rho);
    const auto& p = g.tau().probs();
    const auto& q = g.omega().probs();
    const CMatrix id_b = cidentity(d.b);
    // rho_B^{sx} = Tr_{A0 A}[(P^x (x) 1_B)(tau^s (x) rho)]
    std::vector<std::vector<CMatrix>> reduced(g.ns());
    for (std::size_t s = 0; s < g.ns(); ++s) {
        const CMatrix joint = kron(g.tau().states()[s].mat(), rho.mat());
        for (std::size_t x = 0; x < g.nx(); ++x)
            reduced[s].push_back(partial_trace(kron(p_povm[x], id_b) * joint, {d.a0, d.a, d.b}, {2}));
    }
    const auto nb = static_cast<Eigen::Index>(d.b * d.b0);
    std::vector<CMatrix> out(g.ny(), CMatrix::Zero(nb, nb));
    for (std::size_t y = 0; y < g.ny(); ++y)
        for (std::size_t t = 0; t < g.nt(); ++t) {
            CMatrix m = CMatrix::Zero(static_cast<Eigen::Index>(d.b), static_cast<Eigen::Index>(d.b));
            for (std::size_t s = 0; s < g.ns(); ++s)
                for (std::size_t x = 0; x < g.nx(); ++x) {
                    const double w = p[s] * g.payoff()(s, t, x, y);
                    if (w != 0.0) m += w * reduced[s][x];
                }
            out[y] += q[t] * kron(m, g.omega().states()[t].mat());
        }
    for (auto& o : out) o = hermitian_part(o);
    return out;
}

namespace {

double linear_value(const Povm& povm, const std::vector<CMatrix>& ops) {
    double v = 0;
    for (std::size_t k = 0; k < ops.size(); ++k) v += hs_inner(povm[k], ops[k]).real();
    return v;
}

// Projective measurement in the eigenbasis of a generic mixture of Bob's
// question states, basis vector i assigned to outcome i mod |Y|.
Povm eigenbasis_seed(const SemiQuantumGame& g, std::size_t b_dim) {
    const auto b0 = g.omega().side();
    CMatrix h = CMatrix::Zero(static_cast<Eigen::Index>(b0), static_cast<Eigen::Index>(b0));
    for (std::size_t t = 0; t < g.nt(); ++t)
        h += static_cast<double>(t + 1) * g.omega().probs()[t] * g.omega().states()[t].mat();
    const auto e = eigh(hermitian_part(h));
    const auto nb = static_cast<Eigen::Index>(b_dim * b0);
    std::vector<CMatrix> elements(g.ny(), CMatrix::Zero(nb, nb));
    for (std::size_t j = 0; j < b_dim; ++j)
        for (std::size_t k = 0; k < b0; ++k) {
            Eigen::VectorXcd ej = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(b_dim));
            ej(static_cast<Eigen::Index>(j)) = 1.0;
            const Eigen::VectorXcd v = kron(ej, e.vectors.col(static_cast<Eigen::Index>(k)));
            elements[(j * b0 + k) % g.ny()] += v * v.adjoint();
        }
    return Povm(g.y_labels(), std::move(elements), {b_dim, b0});
}

Povm relabel(const Povm& p, const Labels& labels) { return Povm(labels, p.elements(), p.dims()); }

}  // namespace

RestartTrace seesaw_restart(const SemiQuantumGame& g, const DensityMatrix& rho, const StrategyPair& start,
                            const SeesawOptions& opts) {
    const auto d = play_dims(g, rho);
    const DimVector a_dims{d.a0, d.a};
    const DimVector b_dims{d.b, d.b0};
    const double tie = opts.improve_tol * g.payoff().scale();

    Povm p = relabel(start.p, g.x_labels());
    Povm q = relabel(start.q, g.y_labels());
    double value = linear_value(p, alice_operators(g, rho, q));
    double max_gap = 0;
    std::vector<double> history{value};
    int rounds = 0;

    while (rounds < opts.max_iters) {
        ++rounds;
        const double round_start = value;

        const auto ra = alice_operators(g, rho, q);
        auto sa = povm_subproblem(ra, a_dims, opts.gap_tol, g.x_labels());
        max_gap = std::max(max_gap, sa.gap);
        const double current_a = linear_value(p, ra);
        if (sa.value > current_a) {
            p = std::move(sa.povm);
            value = sa.value;
        } else {
            value = current_a;
        }
        history.push_back(value);

        const auto rb = bob_operators(g, rho, p);
        auto sb = povm_subproblem(rb, b_dims, opts.gap_tol, g.y_labels());
        max_gap = std::max(max_gap, sb.gap);
        const double current_b = linear_value(q, rb);
        if (sb.value > current_b) {
            q = std::move(sb.povm);
            value = sb.value;
        } else {
            value = current_b;
        }
        history.push_back(value);

        if (value - round_start < tie) break;
    }
    return {value, std::move(p), std::move(q), rounds, std::move(history), max_gap};
}

GameValueResult seesaw_value(const SemiQuantumGame& g, const DensityMatrix& rho, const SeesawOptions& opts,
                             const std::optional<StrategyPair>& seed_strategy) {
    opts.validate();
    const auto d = play_dims(g, rho);
    const DimVector a_dims{d.a0, d.a};
    const DimVector b_dims{d.b, d.b0};
    const double tie = 1e-10 * g.payoff().scale();

    std::optional<RestartTrace> best;
    std::vector<double> values, gaps;
    for (int k = 0; k < opts.restarts; ++k) {
        StrategyPair start = [&]() -> StrategyPair {
            if (k == 0 && seed_strategy) return *seed_strategy;
            const auto nx = static_cast<Eigen::Index>(d.a0 * d.a);
            std::vector<CMatrix> trivial(g.nx(), CMatrix::Zero(nx, nx));
            trivial[0] = CMatrix::Identity(nx, nx);
            Povm p0(g.x_labels(), std::move(trivial), a_dims);
            if (k == 0) return {std::move(p0), eigenbasis_seed(g, d.b)};
            const std::uint64_t seed = opts.seed + static_cast<std::uint64_t>(k);
            if (k % 2 == 0) return {std::move(p0), relabel(random_povm(b_dims, g.ny(), seed), g.y_labels())};
            // odd restarts: Bob ignores B and measures only the question system
            const Povm on_b0 = random_povm({d.b0}, g.ny(), seed);
            std::vector<CMatrix> local;
            for (const auto& e : on_b0.elements()) local.push_back(kron(cidentity(d.b), e));
            return {std::move(p0), Povm(g.y_labels(), std::move(local), b_dims)};
        }();
        RestartTrace run = [&] {
            try {
                return seesaw_restart(g, rho, start, opts);
            } catch (const ConvergenceError& e) {
                throw ConvergenceError(std::string(e.what()) + " (restart " + std::to_string(k) + ")", e.best_gap(), k);
            }
        }();
        values.push_back(run.value);
        gaps.push_back(run.max_gap);
        if (!best || run.value > best->value + tie) best = std::move(run);
    }

    const double value = expected_payoff(g, rho, best->p, best->q);
    return GameValueResult{value,          best->p, best->q, best->iterations, opts.restarts, std::move(values),
                           std::move(gaps)};
}

GameValueResult separable_value(const SemiQuantumGame& g, const SeesawOptions& opts) {
    return seesaw_value(g, trivial_shared_state(), opts);
}

double brute_force_classical(const NonlocalGame& g) {
    const std::size_t ns = g.s_labels().size(), nt = g.t_labels().size();
    const std::size_t nx = g.x_labels().size(), ny = g.y_labels().size();
    const double count = std::pow(double(nx), double(ns)) * std::pow(double(ny), double(nt));
    if (count > 1e7) throw SizeError("brute_force_classical: more than 1e7 deterministic strategy pairs");

    std::vector<std::size_t> a(ns, 0);
    double best = -std::numeric_limits<double>::infinity();
    while (true) {
        double total = 0;
        for (std::size_t t = 0; t < nt; ++t) {
            double best_y = -std::numeric_limits<double>::infinity();
            for (std::size_t y = 0; y < ny; ++y) {
                double v = 0;
                for (std::size_t s = 0; s < ns; ++s) v += g.p()[s] * g.q()[t] * g.payoff()(s, t, a[s], y);
                best_y = std::max(best_y, v);
            }
            total += best_y;
        }
        best = std::max(best, total);
        std::size_t k = 0;
        while (k < ns && ++a[k] == nx) a[k++] = 0;
        if (k == ns) break;
    }
    return best;
}

}  // namespace sqg
