#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "sqg/config.hpp"
#include "sqg/matcore.hpp"

namespace sqg {

using Labels = std::vector<std::string>;
using Rng = std::mt19937_64;

/// "0", "1", ..., "n-1".
Labels index_labels(std::size_t n);

/// Unit-trace positive semidefinite operator on a composite space.
class DensityMatrix {
public:
    DensityMatrix(CMatrix mat, DimVector dims, const Tolerances& tol = kDefaultTolerances);

    const CMatrix& mat() const noexcept { return mat_; }
    const DimVector& dims() const noexcept { return dims_; }
    std::size_t side() const noexcept { return static_cast<std::size_t>(mat_.rows()); }

private:
    CMatrix mat_;
    DimVector dims_;
};

/// Projector onto a (not necessarily normalized) pure state vector.
DensityMatrix pure_state(const Eigen::VectorXcd& psi, DimVector dims);

DensityMatrix maximally_mixed(DimVector dims);

/// Labelled family of positive operators summing to the identity.
class Povm {
public:
    Povm(Labels labels, std::vector<CMatrix> elements, DimVector dims, const Tolerances& tol = kDefaultTolerances);
    Povm(std::vector<CMatrix> elements, DimVector dims, const Tolerances& tol = kDefaultTolerances);

    const Labels& labels() const noexcept { return labels_; }
    const std::vector<CMatrix>& elements() const noexcept { return elements_; }
    const CMatrix& operator[](std::size_t k) const { return elements_.at(k); }
    std::size_t size() const noexcept { return elements_.size(); }
    const DimVector& dims() const noexcept { return dims_; }
    std::size_t side() const noexcept { return dim_product(dims_); }

private:
    Labels labels_;
    std::vector<CMatrix> elements_;
    DimVector dims_;
};

/// Labelled source of normalized states with prior probabilities.
class Ensemble {
public:
    Ensemble(Labels labels, std::vector<double> probs, std::vector<DensityMatrix> states,
             const Tolerances& tol = kDefaultTolerances);

    const Labels& labels() const noexcept { return labels_; }
    const std::vector<double>& probs() const noexcept { return probs_; }
    const std::vector<DensityMatrix>& states() const noexcept { return states_; }
    std::size_t size() const noexcept { return states_.size(); }
    const DimVector& dims() const { return states_.front().dims(); }
    std::size_t side() const { return states_.front().side(); }

    /// p(s) * state(s): the trace-p(s) view of question s.
    CMatrix subnormalized(std::size_t s) const;

private:
    Labels labels_;
    std::vector<double> probs_;
    std::vector<DensityMatrix> states_;
};

/// Trace-preserving channel in Kraus form, mapping in_dim -> out_dim.
class KrausChannel {
public:
    explicit KrausChannel(std::vector<CMatrix> kraus_ops, const Tolerances& tol = kDefaultTolerances);

    const std::vector<CMatrix>& kraus_ops() const noexcept { return ops_; }
    std::size_t in_dim() const { return static_cast<std::size_t>(ops_.front().cols()); }
    std::size_t out_dim() const { return static_cast<std::size_t>(ops_.front().rows()); }

    /// Sum K rho K^dagger on a bare matrix.
    CMatrix apply(const CMatrix& rho) const;

private:
    std::vector<CMatrix> ops_;
};

KrausChannel identity_channel(std::size_t d);
KrausChannel unitary_channel(const CMatrix& u);

/// Trace out the input and prepare `target`.
KrausChannel replacement_channel(std::size_t in_dim, const DensityMatrix& target);

/// Channel reconstructed from a Choi matrix J = sum_{jk} |j><k| (x) E(|j><k|).
KrausChannel channel_from_choi(const CMatrix& choi, std::size_t in_dim, std::size_t out_dim,
                               const Tolerances& tol = kDefaultTolerances);

/// Convex mixture of product channels, sum_i nu(i) E^i (x) F^i.
class LosrMap {
public:
    LosrMap(std::vector<double> weights, std::vector<std::pair<KrausChannel, KrausChannel>> pairs,
            const Tolerances& tol = kDefaultTolerances);

    const std::vector<double>& weights() const noexcept { return weights_; }
    const std::vector<std::pair<KrausChannel, KrausChannel>>& pairs() const noexcept { return pairs_; }
    DimVector in_dims() const;
    DimVector out_dims() const;

private:
    std::vector<double> weights_;
    std::vector<std::pair<KrausChannel, KrausChannel>> pairs_;
};

/// Convex combination of product POVMs (P(i) on A0 A, Q(i) on B B0).
class SeparableJointPovm {
public:
    SeparableJointPovm(std::vector<double> weights, std::vector<std::pair<Povm, Povm>> pairs,
                       const Tolerances& tol = kDefaultTolerances);

    const std::vector<double>& weights() const noexcept { return weights_; }
    const std::vector<std::pair<Povm, Povm>>& pairs() const noexcept { return pairs_; }
    std::size_t x_count() const { return pairs_.front().first.size(); }
    std::size_t y_count() const { return pairs_.front().second.size(); }

    /// Z^{xy} = sum_i nu(i) P^x(i) (x) Q^y(i).
    CMatrix element(std::size_t x, std::size_t y) const;

private:
    std::vector<double> weights_;
    std::vector<std::pair<Povm, Povm>> pairs_;
};

// -- standard constructions ---------------------------------------------------

/// Projector onto (1/sqrt d) sum_i |ii>.
DensityMatrix max_entangled(std::size_t d);

/// p |psi-><psi-| + (1-p) I/4.
DensityMatrix werner_state(double p);

/// Generalized Pauli operators X^a Z^b, index a*d + b.
std::vector<CMatrix> heisenberg_weyl(std::size_t d);

/// Projectors onto (W_ab (x) 1)|Psi+>, same index order as heisenberg_weyl.
/// For d = 2 this is Phi+, Phi-, Psi+, Psi-.
std::vector<CMatrix> bell_projectors(std::size_t d);

Povm bell_povm(std::size_t d);

struct PptResult {
    bool flag;
    double min_pt_eigenvalue;
    CMatrix witness_vector;  // eigenvector of the most negative eigenvalue (column)
};

/// Negative-partial-transpose test; transposes the second subsystem.
PptResult ppt_entangled(const DensityMatrix& rho, const Tolerances& tol = kDefaultTolerances);

DensityMatrix apply_channel(const KrausChannel& ch, const DensityMatrix& rho);
DensityMatrix apply_channel(const KrausChannel& ch, const DensityMatrix& rho, DimVector out_dims);

// -- samplers -----------------------------------------------------------------

DensityMatrix random_state(const DimVector& dims, std::size_t rank, Rng& rng);
DensityMatrix random_state(const DimVector& dims, std::size_t rank, std::uint64_t seed);

/// P^k = S^{-1/2} G^k S^{-1/2} with G^k Wishart and S = sum G^k.
Povm random_povm(const DimVector& dims, std::size_t n_outcomes, Rng& rng);
Povm random_povm(const DimVector& dims, std::size_t n_outcomes, std::uint64_t seed);

/// Kraus operators cut from a random isometry in -> out (x) C^kraus_rank.
KrausChannel random_channel(std::size_t in_dim, std::size_t out_dim, std::size_t kraus_rank, Rng& rng);

LosrMap random_losr(const DimVector& dims_in, const DimVector& dims_out, std::size_t n_terms, Rng& rng);
LosrMap random_losr(const DimVector& dims_in, const DimVector& dims_out, std::size_t n_terms, std::uint64_t seed);

/// Uniform point of the probability simplex.
std::vector<double> random_distribution(std::size_t n, Rng& rng);

}  // namespace sqg
