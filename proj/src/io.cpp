#include "sqg/io.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

namespace sqg::io {

namespace {

template <typename T>
std::vector<T> list(const json& j, const char* key) {
    if (!j.contains(key)) throw ArgumentError(std::string("missing field \"") + key + "\"");
    return j.at(key).get<std::vector<T>>();
}

Labels labels_or_index(const json& j, const char* key, std::size_t n) {
    return j.contains(key) ? j.at(key).get<Labels>() : index_labels(n);
}

PayoffTensor payoff_from_json(const json& j) {
    if (!j.contains("payoff")) throw ArgumentError("missing field \"payoff\"");
    const auto& w = j.at("payoff");
    const std::size_t ns = w.size();
    if (ns == 0) throw ContractError("payoff: empty tensor");
    const std::size_t nt = w.at(0).size();
    if (nt == 0) throw ContractError("payoff: empty tensor");
    const std::size_t nx = w.at(0).at(0).size();
    if (nx == 0) throw ContractError("payoff: empty tensor");
    const std::size_t ny = w.at(0).at(0).at(0).size();
    std::vector<double> values;
    for (std::size_t s = 0; s < ns; ++s) {
        if (w.at(s).size() != nt) throw ContractError("payoff: ragged tensor");
        for (std::size_t t = 0; t < nt; ++t) {
            if (w.at(s).at(t).size() != nx) throw ContractError("payoff: ragged tensor");
            for (std::size_t x = 0; x < nx; ++x) {
                const auto row = w.at(s).at(t).at(x).get<std::vector<double>>();
                if (row.size() != ny) throw ContractError("payoff: ragged tensor");
                values.insert(values.end(), row.begin(), row.end());
            }
        }
    }
    return PayoffTensor(ns, nt, nx, ny, std::move(values));
}

json payoff_to_json(const PayoffTensor& w) {
    json out = json::array();
    for (std::size_t s = 0; s < w.ns(); ++s) {
        json js = json::array();
        for (std::size_t t = 0; t < w.nt(); ++t) {
            json jt = json::array();
            for (std::size_t x = 0; x < w.nx(); ++x) {
                json jx = json::array();
                for (std::size_t y = 0; y < w.ny(); ++y) jx.push_back(w(s, t, x, y));
                jt.push_back(std::move(jx));
            }
            js.push_back(std::move(jt));
        }
        out.push_back(std::move(js));
    }
    return out;
}

}  // namespace

json to_json(const CMatrix& m) {
    json data = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r)
        for (Eigen::Index c = 0; c < m.cols(); ++c) data.push_back({m(r, c).real(), m(r, c).imag()});
    return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

CMatrix matrix_from_json(const json& j) {
    const auto rows = j.at("rows").get<Eigen::Index>();
    const auto cols = j.at("cols").get<Eigen::Index>();
    const auto& data = j.at("data");
    if (rows < 0 || cols < 0 || data.size() != static_cast<std::size_t>(rows * cols))
        throw ContractError("matrix: data length does not match rows * cols");
    CMatrix m(rows, cols);
    std::size_t k = 0;
    for (Eigen::Index r = 0; r < rows; ++r)
        for (Eigen::Index c = 0; c < cols; ++c, ++k) {
            const auto& e = data.at(k);
            if (e.is_number()) {
                m(r, c) = e.get<double>();
            } else {
                if (e.size() != 2) throw ContractError("matrix: entries must be numbers or [re, im] pairs");
                m(r, c) = Complex(e.at(0).get<double>(), e.at(1).get<double>());
            }
        }
    return m;
}

json to_json(const DensityMatrix& rho) { return {{"dims", rho.dims()}, {"mat", to_json(rho.mat())}}; }

DensityMatrix state_from_json(const json& j) {
    return DensityMatrix(matrix_from_json(j.at("mat")), list<std::size_t>(j, "dims"));
}

json to_json(const Povm& p) {
    json el = json::array();
    for (const auto& e : p.elements()) el.push_back(to_json(e));
    return {{"labels", p.labels()}, {"elements", std::move(el)}, {"dims", p.dims()}};
}

Povm povm_from_json(const json& j) {
    std::vector<CMatrix> el;
    for (const auto& e : j.at("elements")) el.push_back(matrix_from_json(e));
    Labels labels = labels_or_index(j, "labels", el.size());
    return Povm(std::move(labels), std::move(el), list<std::size_t>(j, "dims"));
}

json to_json(const Ensemble& e) {
    json states = json::array();
    for (const auto& s : e.states()) states.push_back(to_json(s));
    return {{"labels", e.labels()}, {"probs", e.probs()}, {"states", std::move(states)}};
}

Ensemble ensemble_from_json(const json& j) {
    std::vector<DensityMatrix> states;
    for (const auto& s : j.at("states")) states.push_back(state_from_json(s));
    Labels labels = labels_or_index(j, "labels", states.size());
    return Ensemble(std::move(labels), list<double>(j, "probs"), std::move(states));
}

json to_json(const SemiQuantumGame& g) {
    return {{"tau", to_json(g.tau())},           {"omega", to_json(g.omega())},
            {"s_labels", g.s_labels()},          {"t_labels", g.t_labels()},
            {"x_labels", g.x_labels()},          {"y_labels", g.y_labels()},
            {"payoff", payoff_to_json(g.payoff())}};
}

json to_json(const NonlocalGame& g) {
    return {{"kind", "classical"},          {"p", g.p()},
            {"q", g.q()},                   {"s_labels", g.s_labels()},
            {"t_labels", g.t_labels()},     {"x_labels", g.x_labels()},
            {"y_labels", g.y_labels()},     {"payoff", payoff_to_json(g.payoff())}};
}

bool is_classical_game(const json& j) { return j.value("kind", std::string("semi-quantum")) == "classical"; }

NonlocalGame classical_game_from_json(const json& j) {
    auto w = payoff_from_json(j);
    return NonlocalGame(labels_or_index(j, "s_labels", w.ns()), labels_or_index(j, "t_labels", w.nt()),
                        labels_or_index(j, "x_labels", w.nx()), labels_or_index(j, "y_labels", w.ny()),
                        list<double>(j, "p"), list<double>(j, "q"), std::move(w));
}

SemiQuantumGame game_from_json(const json& j) {
    if (is_classical_game(j)) return embed_classical(classical_game_from_json(j));
    const std::string kind = j.value("kind", std::string("semi-quantum"));
    if (kind != "semi-quantum") throw ArgumentError("game: unknown kind \"" + kind + "\"");
    auto w = payoff_from_json(j);
    Ensemble tau = ensemble_from_json(j.at("tau"));
    Ensemble omega = ensemble_from_json(j.at("omega"));
    Labels s = labels_or_index(j, "s_labels", w.ns());
    Labels t = labels_or_index(j, "t_labels", w.nt());
    if (!j.contains("s_labels")) s = tau.labels();
    if (!j.contains("t_labels")) t = omega.labels();
    return SemiQuantumGame(std::move(s), std::move(t), labels_or_index(j, "x_labels", w.nx()),
                           labels_or_index(j, "y_labels", w.ny()), std::move(tau), std::move(omega), std::move(w));
}

std::optional<StrategyPair> strategy_from_json(const json& game_file) {
    if (!game_file.contains("strategy")) return std::nullopt;
    const auto& s = game_file.at("strategy");
    return StrategyPair{povm_from_json(s.at("p")), povm_from_json(s.at("q"))};
}

json to_json(const LosrMap& m) {
    json pairs = json::array();
    for (const auto& [a, b] : m.pairs()) {
        json ak = json::array(), bk = json::array();
        for (const auto& k : a.kraus_ops()) ak.push_back(to_json(k));
        for (const auto& k : b.kraus_ops()) bk.push_back(to_json(k));
        pairs.push_back({{"a_kraus", std::move(ak)}, {"b_kraus", std::move(bk)}});
    }
    return {{"weights", m.weights()}, {"pairs", std::move(pairs)}};
}

LosrMap losr_from_json(const json& j) {
    std::vector<std::pair<KrausChannel, KrausChannel>> pairs;
    for (const auto& p : j.at("pairs")) {
        std::vector<CMatrix> ak, bk;
        for (const auto& k : p.at("a_kraus")) ak.push_back(matrix_from_json(k));
        for (const auto& k : p.at("b_kraus")) bk.push_back(matrix_from_json(k));
        pairs.emplace_back(KrausChannel(std::move(ak)), KrausChannel(std::move(bk)));
    }
    return LosrMap(list<double>(j, "weights"), std::move(pairs));
}

json to_json(const ConditionalDistribution& mu) {
    json rows = json::array();
    for (std::size_t s = 0; s < mu.ns(); ++s)
        for (std::size_t t = 0; t < mu.nt(); ++t) {
            json row = json::array();
            for (std::size_t x = 0; x < mu.nx(); ++x)
                for (std::size_t y = 0; y < mu.ny(); ++y) row.push_back(mu(x, y, s, t));
            rows.push_back(std::move(row));
        }
    return {{"shape", {{"x", mu.nx()}, {"y", mu.ny()}, {"s", mu.ns()}, {"t", mu.nt()}}},
            {"rows", "(s,t) lexicographic"},
            {"cols", "(x,y) lexicographic"},
            {"table", std::move(rows)}};
}

std::string to_csv(const ConditionalDistribution& mu) {
    std::ostringstream out;
    out << std::setprecision(17);
    out << "s,t";
    for (std::size_t x = 0; x < mu.nx(); ++x)
        for (std::size_t y = 0; y < mu.ny(); ++y) out << ",x" << x << "y" << y;
    out << "\n";
    for (std::size_t s = 0; s < mu.ns(); ++s)
        for (std::size_t t = 0; t < mu.nt(); ++t) {
            out << s << "," << t;
            for (std::size_t x = 0; x < mu.nx(); ++x)
                for (std::size_t y = 0; y < mu.ny(); ++y) out << "," << mu(x, y, s, t);
            out << "\n";
        }
    return out.str();
}

json to_json(const GameValueResult& r) {
    return {{"value", r.value},
            {"restarts_used", r.restarts_used},
            {"iterations", r.iterations},
            {"per_restart_values", r.per_restart_values},
            {"max_gap", r.max_gap()},
            {"p_opt", to_json(r.p_opt)},
            {"q_opt", to_json(r.q_opt)}};
}

json to_json(const MonotonicityReport& r) {
    json entries = json::array();
    for (const auto& e : r.entries)
        entries.push_back({{"value_before", e.value_before}, {"value_after", e.value_after}, {"slack_ok", e.slack_ok}});
    return {{"slack", r.slack},
            {"games", std::move(entries)},
            {"violations", r.violations},
            {"max_subproblem_gap", r.max_subproblem_gap}};
}

json to_json(const WitnessGapResult& r) {
    return {{"entangled_value", r.entangled_value},
            {"separable_value", r.separable_value},
            {"gap", r.gap},
            {"scale_c", r.scale_c},
            {"max_subproblem_gap", r.max_subproblem_gap}};
}

json to_json(const WitnessGame& wg) {
    json beta = json::array();
    for (Eigen::Index s = 0; s < wg.beta.rows(); ++s) {
        json row = json::array();
        for (Eigen::Index t = 0; t < wg.beta.cols(); ++t) row.push_back(wg.beta(s, t));
        beta.push_back(std::move(row));
    }
    return {{"game", to_json(wg.game)},
            {"beta", std::move(beta)},
            {"w_matrix", to_json(wg.w_matrix)},
            {"scale_c", wg.scale_c},
            {"payoff_identity", "Bell-strategy payoff = -scale_c * Tr[W rho]"}};
}

json to_json(const PptResult& r) { return {{"flag", r.flag}, {"min_pt_eig", r.min_pt_eigenvalue}}; }

json load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ArgumentError("cannot open \"" + path + "\"");
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw ArgumentError("malformed JSON in \"" + path + "\": " + e.what());
    }
}

}  // namespace sqg::io
