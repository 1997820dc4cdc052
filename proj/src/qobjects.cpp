#include "sqg/qobjects.hpp"

#include <cmath>
#include <numbers>

namespace sqg {

Labels index_labels(std::size_t n) {
    Labels out;
    out.reserve(n);
    for (std::size_t k = 0; k < n; ++k) out.push_back(std::to_string(k));
    return out;
}

namespace {

void require_finite(const CMatrix& m, const char* who) {
    if (!m.allFinite()) throw ContractError(std::string(who) + ": non-finite entry");
}

void require_distribution(const std::vector<double>& probs, const Tolerances& tol, const char* who) {
    if (probs.empty()) throw ContractError(std::string(who) + ": empty distribution");
    double sum = 0;
    for (double p : probs) {
        if (!std::isfinite(p) || p < -tol.eq) throw ContractError(std::string(who) + ": negative or non-finite weight");
        sum += p;
    }
    if (std::abs(sum - 1.0) > tol.eq) throw ContractError(std::string(who) + ": weights do not sum to 1");
}

Eigen::VectorXcd basis_vector(std::size_t d, std::size_t k) {
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(d));
    v(static_cast<Eigen::Index>(k)) = 1.0;
    return v;
}

CMatrix ginibre(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    CMatrix g(rows, cols);
    for (Eigen::Index c = 0; c < cols; ++c)
        for (Eigen::Index r = 0; r < rows; ++r) {
            const double re = normal(rng);
            const double im = normal(rng);
            g(r, c) = Complex(re, im);
        }
    return g;
}

}  // namespace

// -- DensityMatrix -------------------------------------------------------------

DensityMatrix::DensityMatrix(CMatrix mat, DimVector dims, const Tolerances& tol)
    : mat_(std::move(mat)), dims_(std::move(dims)) {
    if (dims_.empty()) throw ContractError("DensityMatrix: empty dimension vector");
    detail::require_square_with_dims(mat_, dims_, "DensityMatrix");
    require_finite(mat_, "DensityMatrix");
    if (!is_hermitian(mat_, tol.herm)) throw ContractError("DensityMatrix: not Hermitian");
    if (std::abs(mat_.trace() - Complex(1.0)) > tol.eq) throw ContractError("DensityMatrix: trace is not 1");
    if (!is_psd(mat_, tol.psd, tol.herm)) throw ContractError("DensityMatrix: not positive semidefinite");
}

DensityMatrix pure_state(const Eigen::VectorXcd& psi, DimVector dims) {
    const double n = psi.norm();
    if (n == 0.0) throw ArgumentError("pure_state: zero vector");
    const Eigen::VectorXcd u = psi / n;
    return DensityMatrix(u * u.adjoint(), std::move(dims));
}

DensityMatrix maximally_mixed(DimVector dims) {
    const auto n = dim_product(dims);
    return DensityMatrix(cidentity(n) / static_cast<double>(n), std::move(dims));
}

// -- Povm ------------------------------------------------------------------------

Povm::Povm(Labels labels, std::vector<CMatrix> elements, DimVector dims, const Tolerances& tol)
    : labels_(std::move(labels)), elements_(std::move(elements)), dims_(std::move(dims)) {
    if (elements_.empty()) throw ContractError("Povm: no outcomes");
    if (labels_.empty()) labels_ = index_labels(elements_.size());
    if (labels_.size() != elements_.size()) throw ContractError("Povm: label count does not match element count");
    if (dims_.empty()) throw ContractError("Povm: empty dimension vector");
    const auto n = dim_product(dims_);
    CMatrix sum = CMatrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (const auto& e : elements_) {
        detail::require_square_with_dims(e, dims_, "Povm");
        require_finite(e, "Povm");
        if (!is_psd(e, tol.psd, tol.herm)) throw ContractError("Povm: element not positive semidefinite");
        sum += e;
    }
    if (max_abs(sum - cidentity(n)) > tol.eq) throw ContractError("Povm: elements do not sum to identity");
}

Povm::Povm(std::vector<CMatrix> elements, DimVector dims, const Tolerances& tol)
    : Povm(Labels{}, std::move(elements), std::move(dims), tol) {}

// -- Ensemble ------------------------------------------------------------------

Ensemble::Ensemble(Labels labels, std::vector<double> probs, std::vector<DensityMatrix> states,
                   const Tolerances& tol)
    : labels_(std::move(labels)), probs_(std::move(probs)), states_(std::move(states)) {
    if (states_.empty()) throw ContractError("Ensemble: no states");
    if (labels_.size() != states_.size() || probs_.size() != states_.size())
        throw ContractError("Ensemble: labels, probs and states differ in length");
    require_distribution(probs_, tol, "Ensemble");
    for (const auto& s : states_)
        if (s.dims() != states_.front().dims()) throw ContractError("Ensemble: states do not share dims");
}

CMatrix Ensemble::subnormalized(std::size_t s) const { return probs_.at(s) * states_.at(s).mat(); }

// -- KrausChannel ------------------------------------------------------------

KrausChannel::KrausChannel(std::vector<CMatrix> kraus_ops, const Tolerances& tol) : ops_(std::move(kraus_ops)) {
    if (ops_.empty()) throw ContractError("KrausChannel: no Kraus operators");
    const auto rows = ops_.front().rows();
    const auto cols = ops_.front().cols();
    CMatrix sum = CMatrix::Zero(cols, cols);
    for (const auto& k : ops_) {
        if (k.rows() != rows || k.cols() != cols) throw ContractError("KrausChannel: Kraus operators differ in shape");
        require_finite(k, "KrausChannel");
        sum += k.adjoint() * k;
    }
    if (max_abs(sum - CMatrix::Identity(cols, cols)) > tol.eq)
        throw ContractError("KrausChannel: not trace preserving");
}

CMatrix KrausChannel::apply(const CMatrix& rho) const {
    if (static_cast<std::size_t>(rho.rows()) != in_dim() || rho.cols() != rho.rows())
        throw ArgumentError("KrausChannel: input dimension mismatch");
    CMatrix out = CMatrix::Zero(static_cast<Eigen::Index>(out_dim()), static_cast<Eigen::Index>(out_dim()));
    for (const auto& k : ops_) out.noalias() += k * rho * k.adjoint();
    return hermitian_part(out);
}

KrausChannel identity_channel(std::size_t d) { return KrausChannel({cidentity(d)}); }

KrausChannel unitary_channel(const CMatrix& u) { return KrausChannel({u}); }

KrausChannel replacement_channel(std::size_t in_dim, const DensityMatrix& target) {
    const auto e = eigh(target.mat());
    std::vector<CMatrix> ops;
    for (Eigen::Index j = 0; j < e.values.size(); ++j) {
        if (e.values(j) <= 1e-15) continue;
        const Eigen::VectorXcd v = std::sqrt(e.values(j)) * e.vectors.col(j);
        for (std::size_t k = 0; k < in_dim; ++k) ops.emplace_back(v * basis_vector(in_dim, k).adjoint());
    }
    return KrausChannel(std::move(ops));
}

KrausChannel channel_from_choi(const CMatrix& choi, std::size_t in_dim, std::size_t out_dim, const Tolerances& tol) {
    if (static_cast<std::size_t>(choi.rows()) != in_dim * out_dim || choi.cols() != choi.rows())
        throw ArgumentError("channel_from_choi: Choi matrix has wrong size");
    const auto e = eigh(hermitian_part(choi), tol.herm);
    const double top = std::max(e.values.maxCoeff(), 0.0);
    std::vector<CMatrix> ops;
    for (Eigen::Index l = 0; l < e.values.size(); ++l) {
        const double lam = e.values(l);
        if (lam < -tol.psd) throw ConstructionError("channel_from_choi: map is not completely positive");
        if (lam <= 1e-14 * std::max(top, 1.0)) continue;
        CMatrix k(static_cast<Eigen::Index>(out_dim), static_cast<Eigen::Index>(in_dim));
        for (std::size_t j = 0; j < in_dim; ++j)
            for (std::size_t a = 0; a < out_dim; ++a)
                k(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(j)) =
                    std::sqrt(lam) * e.vectors(static_cast<Eigen::Index>(j * out_dim + a), l);
        ops.push_back(std::move(k));
    }
    if (ops.empty()) throw ConstructionError("channel_from_choi: zero map");
    try {
        return KrausChannel(std::move(ops), tol);
    } catch (const ContractError& err) {
        throw ConstructionError(std::string("channel_from_choi: ") + err.what());
    }
}

// -- LosrMap -------------------------------------------------------------------

LosrMap::LosrMap(std::vector<double> weights, std::vector<std::pair<KrausChannel, KrausChannel>> pairs,
                 const Tolerances& tol)
    : weights_(std::move(weights)), pairs_(std::move(pairs)) {
    if (pairs_.empty() || weights_.size() != pairs_.size())
        throw ContractError("LosrMap: weights and channel pairs differ in length");
    require_distribution(weights_, tol, "LosrMap");
    const auto& [a0, b0] = pairs_.front();
    for (const auto& [a, b] : pairs_) {
        if (a.in_dim() != a0.in_dim() || a.out_dim() != a0.out_dim() || b.in_dim() != b0.in_dim() ||
            b.out_dim() != b0.out_dim())
            throw ContractError("LosrMap: inconsistent channel dimensions across terms");
    }
}

DimVector LosrMap::in_dims() const { return {pairs_.front().first.in_dim(), pairs_.front().second.in_dim()}; }
DimVector LosrMap::out_dims() const { return {pairs_.front().first.out_dim(), pairs_.front().second.out_dim()}; }

// -- SeparableJointPovm ------------------------------------------------------

SeparableJointPovm::SeparableJointPovm(std::vector<double> weights, std::vector<std::pair<Povm, Povm>> pairs,
                                       const Tolerances& tol)
    : weights_(std::move(weights)), pairs_(std::move(pairs)) {
    if (pairs_.empty() || weights_.size() != pairs_.size())
        throw ContractError("SeparableJointPovm: weights and POVM pairs differ in length");
    require_distribution(weights_, tol, "SeparableJointPovm");
    const auto& [p0, q0] = pairs_.front();
    for (const auto& [p, q] : pairs_) {
        if (p.labels() != p0.labels() || q.labels() != q0.labels())
            throw ContractError("SeparableJointPovm: label sets differ across terms");
        if (p.dims() != p0.dims() || q.dims() != q0.dims())
            throw ContractError("SeparableJointPovm: dimensions differ across terms");
    }
}

CMatrix SeparableJointPovm::element(std::size_t x, std::size_t y) const {
    CMatrix z;
    for (std::size_t i = 0; i < pairs_.size(); ++i) {
        CMatrix term = weights_[i] * kron(pairs_[i].first[x], pairs_[i].second[y]);
        if (i == 0)
            z = std::move(term);
        else
            z += term;
    }
    return z;
}

// -- constructions -------------------------------------------------------------

DensityMatrix max_entangled(std::size_t d) {
    if (d < 2) throw ArgumentError("max_entangled: d must be >= 2");
    Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(d * d));
    for (std::size_t i = 0; i < d; ++i) psi(static_cast<Eigen::Index>(i * d + i)) = 1.0;
    return pure_state(psi, {d, d});
}

DensityMatrix werner_state(double p) {
    if (!(p >= 0.0 && p <= 1.0)) throw ArgumentError("werner_state: p must lie in [0, 1]");
    Eigen::VectorXcd singlet = Eigen::VectorXcd::Zero(4);
    singlet(1) = 1.0 / std::numbers::sqrt2;
    singlet(2) = -1.0 / std::numbers::sqrt2;
    CMatrix m = p * (singlet * singlet.adjoint()) + (1.0 - p) * cidentity(4) / 4.0;
    return DensityMatrix(std::move(m), {2, 2});
}

std::vector<CMatrix> heisenberg_weyl(std::size_t d) {
    if (d < 2) throw ArgumentError("heisenberg_weyl: d must be >= 2");
    const auto n = static_cast<Eigen::Index>(d);
    CMatrix x = CMatrix::Zero(n, n);
    CMatrix z = CMatrix::Zero(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        x((j + 1) % n, j) = 1.0;
        z(j, j) = std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(d));
    }
    std::vector<CMatrix> out;
    out.reserve(d * d);
    CMatrix xa = cidentity(d);
    for (std::size_t a = 0; a < d; ++a) {
        CMatrix zb = cidentity(d);
        for (std::size_t b = 0; b < d; ++b) {
            out.push_back(xa * zb);
            zb = zb * z;
        }
        xa = xa * x;
    }
    return out;
}

std::vector<CMatrix> bell_projectors(std::size_t d) {
    const auto w = heisenberg_weyl(d);
    Eigen::VectorXcd phi = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(d * d));
    for (std::size_t i = 0; i < d; ++i) phi(static_cast<Eigen::Index>(i * d + i)) = 1.0 / std::sqrt(double(d));
    std::vector<CMatrix> out;
    out.reserve(w.size());
    for (const auto& u : w) {
        const Eigen::VectorXcd v = kron(u, cidentity(d)) * phi;
        out.emplace_back(v * v.adjoint());
    }
    return out;
}

Povm bell_povm(std::size_t d) { return Povm(bell_projectors(d), {d, d}); }

PptResult ppt_entangled(const DensityMatrix& rho, const Tolerances& tol) {
    if (rho.dims().size() != 2) throw ArgumentError("ppt_entangled: state must have exactly two subsystems");
    const auto e = eigh(partial_transpose(rho.mat(), rho.dims(), 1), tol.herm);
    const auto last = e.values.size() - 1;
    PptResult r;
    r.min_pt_eigenvalue = e.values(last);
    r.flag = r.min_pt_eigenvalue < -tol.psd;
    r.witness_vector = e.vectors.col(last);
    return r;
}

DensityMatrix apply_channel(const KrausChannel& ch, const DensityMatrix& rho) {
    if (ch.in_dim() != rho.side()) throw ArgumentError("apply_channel: channel input dimension mismatch");
    DimVector dims = ch.out_dim() == ch.in_dim() ? rho.dims() : DimVector{ch.out_dim()};
    return DensityMatrix(ch.apply(rho.mat()), std::move(dims));
}

DensityMatrix apply_channel(const KrausChannel& ch, const DensityMatrix& rho, DimVector out_dims) {
    if (ch.in_dim() != rho.side()) throw ArgumentError("apply_channel: channel input dimension mismatch");
    if (dim_product(out_dims) != ch.out_dim()) throw ArgumentError("apply_channel: output dims mismatch");
    return DensityMatrix(ch.apply(rho.mat()), std::move(out_dims));
}

// -- samplers ------------------------------------------------------------------

DensityMatrix random_state(const DimVector& dims, std::size_t rank, Rng& rng) {
    if (dims.empty()) throw ArgumentError("random_state: empty dims");
    const auto n = dim_product(dims);
    if (rank < 1 || rank > n) throw ArgumentError("random_state: rank must lie in [1, dim]");
    const CMatrix g = ginibre(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(rank), rng);
    CMatrix m = g * g.adjoint();
    m /= m.trace().real();
    return DensityMatrix(hermitian_part(m), dims);
}

DensityMatrix random_state(const DimVector& dims, std::size_t rank, std::uint64_t seed) {
    Rng rng(seed);
    return random_state(dims, rank, rng);
}

Povm random_povm(const DimVector& dims, std::size_t n_outcomes, Rng& rng) {
    if (dims.empty()) throw ArgumentError("random_povm: empty dims");
    if (n_outcomes < 1) throw ArgumentError("random_povm: need at least one outcome");
    const auto n = static_cast<Eigen::Index>(dim_product(dims));
    std::vector<CMatrix> g;
    CMatrix sum = CMatrix::Zero(n, n);
    for (std::size_t k = 0; k < n_outcomes; ++k) {
        const CMatrix a = ginibre(n, n, rng);
        g.emplace_back(a * a.adjoint());
        sum += g.back();
    }
    const CMatrix s = inverse_sqrt(hermitian_part(sum));
    std::vector<CMatrix> elements;
    for (const auto& gk : g) elements.emplace_back(hermitian_part(s * gk * s));
    return Povm(std::move(elements), dims);
}

Povm random_povm(const DimVector& dims, std::size_t n_outcomes, std::uint64_t seed) {
    Rng rng(seed);
    return random_povm(dims, n_outcomes, rng);
}

KrausChannel random_channel(std::size_t in_dim, std::size_t out_dim, std::size_t kraus_rank, Rng& rng) {
    if (in_dim < 1 || out_dim < 1 || kraus_rank < 1) throw ArgumentError("random_channel: dimensions must be >= 1");
    if (out_dim * kraus_rank < in_dim) throw ArgumentError("random_channel: no isometry into a smaller space");
    const auto big = static_cast<Eigen::Index>(out_dim * kraus_rank);
    const auto in = static_cast<Eigen::Index>(in_dim);
    const CMatrix g = ginibre(big, in, rng);
    Eigen::HouseholderQR<CMatrix> qr(g);
    CMatrix q = qr.householderQ() * CMatrix::Identity(big, in);
    const CMatrix r = qr.matrixQR();
    for (Eigen::Index j = 0; j < in; ++j) {
        const Complex d = r(j, j);
        if (std::abs(d) > 0) q.col(j) *= d / std::abs(d);
    }
    std::vector<CMatrix> ops;
    for (std::size_t k = 0; k < kraus_rank; ++k)
        ops.emplace_back(q.block(static_cast<Eigen::Index>(k * out_dim), 0, static_cast<Eigen::Index>(out_dim), in));
    return KrausChannel(std::move(ops));
}

std::vector<double> random_distribution(std::size_t n, Rng& rng) {
    std::exponential_distribution<double> expo(1.0);
    std::vector<double> w(n);
    double sum = 0;
    for (auto& x : w) sum += (x = expo(rng));
    for (auto& x : w) x /= sum;
    return w;
}

LosrMap random_losr(const DimVector& dims_in, const DimVector& dims_out, std::size_t n_terms, Rng& rng) {
    if (dims_in.size() != 2 || dims_out.size() != 2) throw ArgumentError("random_losr: expected bipartite dims");
    if (n_terms < 1) throw ArgumentError("random_losr: need at least one term");
    auto weights = random_distribution(n_terms, rng);
    std::vector<std::pair<KrausChannel, KrausChannel>> pairs;
    for (std::size_t i = 0; i < n_terms; ++i) {
        auto a = random_channel(dims_in[0], dims_out[0], 2 * dims_in[0], rng);
        auto b = random_channel(dims_in[1], dims_out[1], 2 * dims_in[1], rng);
        pairs.emplace_back(std::move(a), std::move(b));
    }
    return LosrMap(std::move(weights), std::move(pairs));
}

LosrMap random_losr(const DimVector& dims_in, const DimVector& dims_out, std::size_t n_terms, std::uint64_t seed) {
    Rng rng(seed);
    return random_losr(dims_in, dims_out, n_terms, rng);
}

}  // namespace sqg
