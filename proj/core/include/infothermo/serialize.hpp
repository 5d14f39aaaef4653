#pragma once

#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "infothermo/cycle_laws.hpp"
#include "infothermo/monte_carlo.hpp"
#include "infothermo/optimal.hpp"
#include "infothermo/paths.hpp"
#include "infothermo/sensory.hpp"
#include "infothermo/state.hpp"

// JSON forms of the library's values. Doubles are written in shortest
// round-trip form, so re-parsing restores the exact bits.

namespace infothermo {

using json = nlohmann::json;

void to_json(json& j, const NoiseModel& n);
void to_json(json& j, const InferenceState& s);
void to_json(json& j, const Partials& p);
void to_json(json& j, const QuasiPotentials& q);
void to_json(json& j, const ClosureReport& r);
void to_json(json& j, const LoopPoint& p);
void to_json(json& j, const ProcessPath& path);
void to_json(json& j, const StimulusLoop& loop);
void to_json(json& j, const BudgetProblem& b);
void to_json(json& j, const EfficiencyBound& e);
void to_json(json& j, const CyclicInformation& c);
void to_json(json& j, const SecondLawVerdict& v);
void to_json(json& j, const AdaptationParams& p);
void to_json(json& j, const AdaptationTriple& t);
void to_json(json& j, const FixedPoints& f);
void to_json(json& j, const InequalityVerdict& v);
void to_json(json& j, const SlopeFit& s);
void to_json(json& j, const CorpusReport& r);
void to_json(json& j, const SamplingSpec& s);
void to_json(json& j, const EntropyValidation& v);
void to_json(json& j, const VarianceScaling& v);
void to_json(json& j, const Normality& n);

/// Reads j[key] as a number. Errors are Error(parse_error) and name the
/// dotted field path, e.g. "budget.m_a".
double number_at(const json& j, std::string_view key, const std::string& where);

NoiseModel noise_from_json(const json& j, const std::string& where = "noise");
InferenceState state_from_json(const json& j, const std::string& where = "state");
/// Accepts [{"m":..,"sigma2":..}, ...] or {"nodes": [...]}.
ProcessPath path_from_json(const json& j, const std::string& where = "path");
/// Accepts [{"mu":..,"m":..}, ...] or {"points": [...]}.
StimulusLoop loop_from_json(const json& j, const std::string& where = "loop");
AdaptationParams params_from_json(const json& j, const std::string& where = "params");
AdaptationTriple triple_from_json(const json& j, const std::string& where = "triple");

/// Parses text, mapping syntax errors to Error(parse_error).
json parse_json(std::string_view text, std::string_view source = "input");

}  // namespace infothermo
