#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "sqg/witness.hpp"

namespace sqg::io {

using json = nlohmann::json;

/// {"rows", "cols", "data": [[re, im], ...]} in row-major order. Entries may also be plain reals.
json to_json(const CMatrix& m);
CMatrix matrix_from_json(const json& j);

/// {"dims", "mat"}
json to_json(const DensityMatrix& rho);
DensityMatrix state_from_json(const json& j);

/// {"labels", "elements", "dims"}; labels optional on input.
json to_json(const Povm& p);
Povm povm_from_json(const json& j);

/// {"labels", "probs", "states"}
json to_json(const Ensemble& e);
Ensemble ensemble_from_json(const json& j);

/// {"tau", "omega", "x_labels", "y_labels", "payoff": [s][t][x][y]} or, for a
/// classical game, {"kind": "classical", "p", "q", "s_labels", ..., "payoff"}.
/// Classical games are embedded into basis-state questions.
json to_json(const SemiQuantumGame& g);
json to_json(const NonlocalGame& g);
SemiQuantumGame game_from_json(const json& j);
bool is_classical_game(const json& j);
NonlocalGame classical_game_from_json(const json& j);

/// Optional {"strategy": {"p": Povm, "q": Povm}} block of a game file.
std::optional<StrategyPair> strategy_from_json(const json& game_file);

/// {"weights", "pairs": [{"a_kraus": [...], "b_kraus": [...]}]}
json to_json(const LosrMap& m);
LosrMap losr_from_json(const json& j);

/// Rows (s,t) and columns (x,y), both lexicographic.
json to_json(const ConditionalDistribution& mu);
std::string to_csv(const ConditionalDistribution& mu);

json to_json(const GameValueResult& r);
json to_json(const MonotonicityReport& r);
json to_json(const WitnessGapResult& r);
json to_json(const WitnessGame& wg);
json to_json(const PptResult& r);

/// Parse a JSON file; throws ArgumentError when missing or malformed.
json load_file(const std::string& path);

}  // namespace sqg::io
