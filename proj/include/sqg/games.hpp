#pragma once

#include <cstdint>
#include <vector>

#include "sqg/qobjects.hpp"

namespace sqg {

/// Dense payoff table indexed [s][t][x][y].
class PayoffTensor {
public:
    PayoffTensor() = default;
    PayoffTensor(std::size_t ns, std::size_t nt, std::size_t nx, std::size_t ny, double fill = 0.0);
    PayoffTensor(std::size_t ns, std::size_t nt, std::size_t nx, std::size_t ny, std::vector<double> values);

    double operator()(std::size_t s, std::size_t t, std::size_t x, std::size_t y) const {
        return values_[index(s, t, x, y)];
    }
    double& operator()(std::size_t s, std::size_t t, std::size_t x, std::size_t y) { return values_[index(s, t, x, y)]; }

    std::size_t ns() const noexcept { return ns_; }
    std::size_t nt() const noexcept { return nt_; }
    std::size_t nx() const noexcept { return nx_; }
    std::size_t ny() const noexcept { return ny_; }
    const std::vector<double>& values() const noexcept { return values_; }

    /// Largest |entry|, or 1 for the all-zero tensor.
    double scale() const;

private:
    std::size_t index(std::size_t s, std::size_t t, std::size_t x, std::size_t y) const {
        return ((s * nt_ + t) * nx_ + x) * ny_ + y;
    }
    std::size_t ns_ = 0, nt_ = 0, nx_ = 0, ny_ = 0;
    std::vector<double> values_;
};

/// Referee sends quantum questions tau^s (to A0) and omega^t (to B0); the
/// players answer x and y and collect payoff(s, t, x, y).
class SemiQuantumGame {
public:
    SemiQuantumGame(Labels s_labels, Labels t_labels, Labels x_labels, Labels y_labels, Ensemble tau,
                    Ensemble omega, PayoffTensor payoff);

    const Labels& s_labels() const noexcept { return s_labels_; }
    const Labels& t_labels() const noexcept { return t_labels_; }
    const Labels& x_labels() const noexcept { return x_labels_; }
    const Labels& y_labels() const noexcept { return y_labels_; }
    const Ensemble& tau() const noexcept { return tau_; }
    const Ensemble& omega() const noexcept { return omega_; }
    const PayoffTensor& payoff() const noexcept { return payoff_; }

    std::size_t ns() const noexcept { return s_labels_.size(); }
    std::size_t nt() const noexcept { return t_labels_.size(); }
    std::size_t nx() const noexcept { return x_labels_.size(); }
    std::size_t ny() const noexcept { return y_labels_.size(); }

    SemiQuantumGame with_payoff(PayoffTensor payoff) const;

private:
    Labels s_labels_, t_labels_, x_labels_, y_labels_;
    Ensemble tau_, omega_;
    PayoffTensor payoff_;
};

/// Conventional nonlocal game with classical questions.
class NonlocalGame {
public:
    NonlocalGame(Labels s_labels, Labels t_labels, Labels x_labels, Labels y_labels, std::vector<double> p,
                 std::vector<double> q, PayoffTensor payoff);

    const Labels& s_labels() const noexcept { return s_labels_; }
    const Labels& t_labels() const noexcept { return t_labels_; }
    const Labels& x_labels() const noexcept { return x_labels_; }
    const Labels& y_labels() const noexcept { return y_labels_; }
    const std::vector<double>& p() const noexcept { return p_; }
    const std::vector<double>& q() const noexcept { return q_; }
    const PayoffTensor& payoff() const noexcept { return payoff_; }

private:
    Labels s_labels_, t_labels_, x_labels_, y_labels_;
    std::vector<double> p_, q_;
    PayoffTensor payoff_;
};

/// Conditional table mu(x, y | s, t).
class ConditionalDistribution {
public:
    ConditionalDistribution(std::size_t nx, std::size_t ny, std::size_t ns, std::size_t nt, std::vector<double> values,
                            const Tolerances& tol = kDefaultTolerances);

    double operator()(std::size_t x, std::size_t y, std::size_t s, std::size_t t) const {
        return values_[((x * ny_ + y) * ns_ + s) * nt_ + t];
    }
    std::size_t nx() const noexcept { return nx_; }
    std::size_t ny() const noexcept { return ny_; }
    std::size_t ns() const noexcept { return ns_; }
    std::size_t nt() const noexcept { return nt_; }
    const std::vector<double>& values() const noexcept { return values_; }

    double max_abs_deviation(const ConditionalDistribution& other) const;

private:
    std::size_t nx_, ny_, ns_, nt_;
    std::vector<double> values_;
};

/// The CHSH game: payoff 1 iff x xor y = s and t.
NonlocalGame chsh_game();

/// Questions become orthogonal basis states |s><s| on a |S|-dimensional system.
SemiQuantumGame embed_classical(const NonlocalGame& g);

/// mu(x,y|s,t) = Tr[(P^x (x) Q^y)(tau^s (x) rho (x) omega^t)] on A0 (x) A (x) B (x) B0.
ConditionalDistribution joint_distribution(const SemiQuantumGame& g, const DensityMatrix& rho, const Povm& p_povm,
                                           const Povm& q_povm, const Tolerances& tol = kDefaultTolerances);

/// sum_{s,t,x,y} p(s) q(t) payoff(s,t,x,y) mu(x,y|s,t), summed in lexicographic order.
double expected_payoff(const SemiQuantumGame& g, const ConditionalDistribution& mu);

double expected_payoff(const SemiQuantumGame& g, const DensityMatrix& rho, const Povm& p_povm, const Povm& q_povm);

/// Random game with random question states (dims d_a0, d_b0), random priors
/// and payoffs drawn uniformly from [-1, 1].
SemiQuantumGame random_game(std::size_t ns, std::size_t nt, std::size_t nx, std::size_t ny, std::size_t d_a0,
                            std::size_t d_b0, std::uint64_t seed, std::size_t question_rank = 1);

/// Side of A0, A, B, B0 spaces for a game played on rho.
struct PlayDims {
    std::size_t a0, a, b, b0;
};
PlayDims play_dims(const SemiQuantumGame& g, const DensityMatrix& rho);

}  // namespace sqg
