#include "sqg/games.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>

namespace sqg {

// -- PayoffTensor ----------------------------------------------------------------

PayoffTensor::PayoffTensor(std::size_t ns, std::size_t nt, std::size_t nx, std::size_t ny, double fill)
    : ns_(ns), nt_(nt), nx_(nx), ny_(ny), values_(ns * nt * nx * ny, fill) {}

PayoffTensor::PayoffTensor(std::size_t ns, std::size_t nt, std::size_t nx, std::size_t ny, std::vector<double> values)
    : ns_(ns), nt_(nt), nx_(nx), ny_(ny), values_(std::move(values)) {
    if (values_.size() != ns * nt * nx * ny) throw ContractError("PayoffTensor: entry count does not match shape");
    for (double v : values_)
        if (!std::isfinite(v)) throw ContractError("PayoffTensor: non-finite payoff");
}

double PayoffTensor::scale() const {
    double m = 0;
    for (double v : values_) m = std::max(m, std::abs(v));
    return m > 0 ? m : 1.0;
}

// -- games -----------------------------------------------------------------------

namespace {

void require_shape(const PayoffTensor& w, std::size_t ns, std::size_t nt, std::size_t nx, std::size_t ny) {
    if (w.ns() != ns || w.nt() != nt || w.nx() != nx || w.ny() != ny)
        throw ContractError("game: payoff tensor shape does not match label sets");
    if (ns == 0 || nt == 0 || nx == 0 || ny == 0) throw ContractError("game: empty label set");
}

}  // namespace

SemiQuantumGame::SemiQuantumGame(Labels s_labels, Labels t_labels, Labels x_labels, Labels y_labels, Ensemble tau,
                                 Ensemble omega, PayoffTensor payoff)
    : s_labels_(std::move(s_labels)),
      t_labels_(std::move(t_labels)),
      x_labels_(std::move(x_labels)),
      y_labels_(std::move(y_labels)),
      tau_(std::move(tau)),
      omega_(std::move(omega)),
      payoff_(std::move(payoff)) {
    require_shape(payoff_, ns(), nt(), nx(), ny());
    if (tau_.size() != ns()) throw ContractError("SemiQuantumGame: tau size does not match s_labels");
    if (omega_.size() != nt()) throw ContractError("SemiQuantumGame: omega size does not match t_labels");
}

SemiQuantumGame SemiQuantumGame::with_payoff(PayoffTensor payoff) const {
    return SemiQuantumGame(s_labels_, t_labels_, x_labels_, y_labels_, tau_, omega_, std::move(payoff));
}

NonlocalGame::NonlocalGame(Labels s_labels, Labels t_labels, Labels x_labels, Labels y_labels, std::vector<double> p,
                           std::vector<double> q, PayoffTensor payoff)
    : s_labels_(std::move(s_labels)),
      t_labels_(std::move(t_labels)),
      x_labels_(std::move(x_labels)),
      y_labels_(std::move(y_labels)),
      p_(std::move(p)),
      q_(std::move(q)),
      payoff_(std::move(payoff)) {
    require_shape(payoff_, s_labels_.size(), t_labels_.size(), x_labels_.size(), y_labels_.size());
    auto check = [](const std::vector<double>& d, std::size_t n, const char* name) {
        if (d.size() != n) throw ContractError(std::string("NonlocalGame: ") + name + " has wrong length");
        double sum = 0;
        for (double v : d) {
            if (!(v >= -kDefaultTolerances.eq)) throw ContractError(std::string("NonlocalGame: negative ") + name);
            sum += v;
        }
        if (std::abs(sum - 1.0) > kDefaultTolerances.eq)
            throw ContractError(std::string("NonlocalGame: ") + name + " does not sum to 1");
    };
    check(p_, s_labels_.size(), "p");
    check(q_, t_labels_.size(), "q");
}

// -- ConditionalDistribution -------------------------------------------------------

ConditionalDistribution::ConditionalDistribution(std::size_t nx, std::size_t ny, std::size_t ns, std::size_t nt,
                                                 std::vector<double> values, const Tolerances& tol)
    : nx_(nx), ny_(ny), ns_(ns), nt_(nt), values_(std::move(values)) {
    if (values_.size() != nx * ny * ns * nt) throw ContractError("ConditionalDistribution: wrong number of entries");
    for (double v : values_)
        if (!std::isfinite(v) || v < -tol.eq) throw ContractError("ConditionalDistribution: negative probability");
    for (std::size_t s = 0; s < ns; ++s)
        for (std::size_t t = 0; t < nt; ++t) {
            double sum = 0;
            for (std::size_t x = 0; x < nx; ++x)
                for (std::size_t y = 0; y < ny; ++y) sum += (*this)(x, y, s, t);
            if (std::abs(sum - 1.0) > tol.eq)
                throw ContractError("ConditionalDistribution: mu(.,.|s,t) does not sum to 1");
        }
}

double ConditionalDistribution::max_abs_deviation(const ConditionalDistribution& other) const {
    if (other.values_.size() != values_.size()) throw ArgumentError("max_abs_deviation: shape mismatch");
    double m = 0;
    for (std::size_t k = 0; k < values_.size(); ++k) m = std::max(m, std::abs(values_[k] - other.values_[k]));
    return m;
}

// -- operations ------------------------------------------------------------------

NonlocalGame chsh_game() {
    PayoffTensor w(2, 2, 2, 2);
    for (std::size_t s = 0; s < 2; ++s)
        for (std::size_t t = 0; t < 2; ++t)
            for (std::size_t x = 0; x < 2; ++x)
                for (std::size_t y = 0; y < 2; ++y) w(s, t, x, y) = ((x ^ y) == (s & t)) ? 1.0 : 0.0;
    return NonlocalGame(index_labels(2), index_labels(2), index_labels(2), index_labels(2), {0.5, 0.5}, {0.5, 0.5},
                        std::move(w));
}

SemiQuantumGame embed_classical(const NonlocalGame& g) {
    auto basis_ensemble = [](const Labels& labels, const std::vector<double>& probs) {
        const std::size_t n = labels.size();
        std::vector<DensityMatrix> states;
        for (std::size_t k = 0; k < n; ++k) {
            CMatrix m = CMatrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
            m(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k)) = 1.0;
            states.emplace_back(std::move(m), DimVector{n});
        }
        return Ensemble(labels, probs, std::move(states));
    };
    return SemiQuantumGame(g.s_labels(), g.t_labels(), g.x_labels(), g.y_labels(), basis_ensemble(g.s_labels(), g.p()),
                           basis_ensemble(g.t_labels(), g.q()), g.payoff());
}

PlayDims play_dims(const SemiQuantumGame& g, const DensityMatrix& rho) {
    if (rho.dims().size() != 2) throw ArgumentError("shared state must be bipartite (A, B)");
    return {g.tau().side(), rho.dims()[0], rho.dims()[1], g.omega().side()};
}

ConditionalDistribution joint_distribution(const SemiQuantumGame& g, const DensityMatrix& rho, const Povm& p_povm,
                                           const Povm& q_povm, const Tolerances& tol) {
    const auto d = play_dims(g, rho);
    if (p_povm.side() != d.a0 * d.a) throw ArgumentError("joint_distribution: Alice's POVM is not on A0 (x) A");
    if (q_povm.side() != d.b * d.b0) throw ArgumentError("joint_distribution: Bob's POVM is not on B (x) B0");
    if (p_povm.size() != g.nx() || q_povm.size() != g.ny())
        throw ArgumentError("joint_distribution: POVM outcome count does not match answer labels");

    const std::size_t ns = g.ns(), nt = g.nt(), nx = g.nx(), ny = g.ny();
    const CMatrix id_b = cidentity(d.b);
    std::vector<double> values(nx * ny * ns * nt);
    double worst = 0;
    for (std::size_t s = 0; s < ns; ++s) {
        const CMatrix tau_rho = kron(g.tau().states()[s].mat(), rho.mat());
        for (std::size_t x = 0; x < nx; ++x) {
            const CMatrix rho_b = partial_trace(kron(p_povm[x], id_b) * tau_rho, {d.a0, d.a, d.b}, {2});
            for (std::size_t t = 0; t < nt; ++t) {
                const CMatrix joint_b = kron(rho_b, g.omega().states()[t].mat());
                for (std::size_t y = 0; y < ny; ++y) {
                    double v = hs_inner(q_povm[y], joint_b).real();
                    if (v < 0) {
                        if (v < -tol.eq) throw ContractError("joint_distribution: negative probability");
                        worst = std::min(worst, v);
                        v = 0;
                    }
                    values[((x * ny + y) * ns + s) * nt + t] = v;
                }
            }
        }
    }
    if (worst < -1e-12) std::clog << "[sqg] warning: clamped negative probabilities down to " << worst << "\n";
    return ConditionalDistribution(nx, ny, ns, nt, std::move(values), tol);
}

double expected_payoff(const SemiQuantumGame& g, const ConditionalDistribution& mu) {
    if (mu.ns() != g.ns() || mu.nt() != g.nt() || mu.nx() != g.nx() || mu.ny() != g.ny())
        throw ArgumentError("expected_payoff: distribution shape does not match game");
    const auto& p = g.tau().probs();
    const auto& q = g.omega().probs();
    double total = 0;
    for (std::size_t s = 0; s < g.ns(); ++s)
        for (std::size_t t = 0; t < g.nt(); ++t)
            for (std::size_t x = 0; x < g.nx(); ++x)
                for (std::size_t y = 0; y < g.ny(); ++y) total += p[s] * q[t] * g.payoff()(s, t, x, y) * mu(x, y, s, t);
    return total;
}

double expected_payoff(const SemiQuantumGame& g, const DensityMatrix& rho, const Povm& p_povm, const Povm& q_povm) {
    return expected_payoff(g, joint_distribution(g, rho, p_povm, q_povm));
}

SemiQuantumGame random_game(std::size_t ns, std::size_t nt, std::size_t nx, std::size_t ny, std::size_t d_a0,
                            std::size_t d_b0, std::uint64_t seed, std::size_t question_rank) {
    Rng rng(seed);
    auto ensemble = [&](std::size_t n, std::size_t d) {
        std::vector<DensityMatrix> states;
        for (std::size_t k = 0; k < n; ++k) states.push_back(random_state({d}, question_rank, rng));
        return Ensemble(index_labels(n), random_distribution(n, rng), std::move(states));
    };
    Ensemble tau = ensemble(ns, d_a0);
    Ensemble omega = ensemble(nt, d_b0);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    PayoffTensor w(ns, nt, nx, ny);
    for (std::size_t s = 0; s < ns; ++s)
        for (std::size_t t = 0; t < nt; ++t)
            for (std::size_t x = 0; x < nx; ++x)
                for (std::size_t y = 0; y < ny; ++y) w(s, t, x, y) = unif(rng);
    return SemiQuantumGame(index_labels(ns), index_labels(nt), index_labels(nx), index_labels(ny), std::move(tau),
                           std::move(omega), std::move(w));
}

}  // namespace sqg
