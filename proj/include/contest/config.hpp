#pragma once

#include <map>
#include <string>
#include <string_view>

#include "contest/scoring.hpp"
#include "contest/tournament.hpp"

namespace contest {

/// `key = value` lines; `#` starts a comment. Throws ParseError with the
/// line number on malformed lines or repeated keys.
std::map<std::string, std::string> parse_key_values(std::string_view text);

/// Parses a flat config whose keys mirror the field names of
/// SimulationConfig, SelectorSpec, ScoringWeights and TournamentConfig
/// (`methods` is a comma-separated list, `weights` a preset name).
/// Unknown keys are a ConfigError.
TournamentConfig parse_config(std::string_view text);

/// Weight preset `table1` or `proposed`, or a key-value file with
/// w_tp, w_fp, w_tn, w_fn.
ScoringWeights resolve_weights(const std::string& preset_or_path);

}  // namespace contest
