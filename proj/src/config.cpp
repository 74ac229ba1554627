#include "contest/config.hpp"

#include <charconv>
#include <filesystem>
#include <functional>
#include <sstream>

#include "contest/errors.hpp"
#include "contest/serialize.hpp"

namespace contest {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

template <class T>
T parse_number(const std::string& key, const std::string& value) {
  T out{};
  const char* end = value.data() + value.size();
  auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc() || ptr != end)
    throw ConfigError("config key '" + key + "': cannot parse '" + value + "'");
  return out;
}

double parse_double(const std::string& key, const std::string& value) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(value, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != value.size() || value.empty())
    throw ConfigError("config key '" + key + "': cannot parse '" + value + "'");
  return v;
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  throw ConfigError("config key '" + key + "': expected true/false, got '" + value + "'");
}

using Setter = std::function<void(TournamentConfig&, const std::string&, const std::string&)>;

template <class T, class Member>
Setter integer(Member member) {
  return [member](TournamentConfig& c, const std::string& k, const std::string& v) {
    member(c) = parse_number<T>(k, v);
  };
}

template <class Member>
Setter real(Member member) {
  return [member](TournamentConfig& c, const std::string& k, const std::string& v) {
    member(c) = parse_double(k, v);
  };
}

#define FIELD(path) [](TournamentConfig& c) -> auto& { return c.path; }

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      // simulation
      {"d", integer<int>(FIELD(sim.d))},
      {"n_cases", integer<int>(FIELD(sim.n_cases))},
      {"n_controls", integer<int>(FIELD(sim.n_controls))},
      {"prev_max", real(FIELD(sim.prev_max))},
      {"prev_min", real(FIELD(sim.prev_min))},
      {"k_min", integer<int>(FIELD(sim.k_min))},
      {"k_max", integer<int>(FIELD(sim.k_max))},
      {"effect_lo", real(FIELD(sim.effect_lo))},
      {"effect_hi", real(FIELD(sim.effect_hi))},
      {"n_confounders", integer<int>(FIELD(sim.n_confounders))},
      {"confounder_prev", real(FIELD(sim.confounder_prev))},
      {"confounder_links", integer<int>(FIELD(sim.confounder_links))},
      {"confounder_boost", real(FIELD(sim.confounder_boost))},
      {"confounder_prev_cap", real(FIELD(sim.confounder_prev_cap))},
      {"baseline_intercept", real(FIELD(sim.baseline_intercept))},
      {"draw_budget_factor", real(FIELD(sim.draw_budget_factor))},
      {"seed", integer<std::uint64_t>(FIELD(sim.seed))},
      {"jitter_prevalences",
       [](TournamentConfig& c, const std::string& k, const std::string& v) {
         c.sim.jitter_prevalences = parse_bool(k, v);
       }},
      // selectors
      {"min_size", integer<int>(FIELD(selector.min_size))},
      {"max_size", integer<int>(FIELD(selector.max_size))},
      {"train_fraction", real(FIELD(selector.train_fraction))},
      {"max_select", integer<int>(FIELD(selector.max_select))},
      {"lasso_folds", integer<int>(FIELD(selector.lasso_folds))},
      {"lambda_points", integer<int>(FIELD(selector.lambda_points))},
      {"lambda_ratio", real(FIELD(selector.lambda_ratio))},
      {"ridge_points", integer<int>(FIELD(selector.ridge_points))},
      {"cv_folds", integer<int>(FIELD(selector.cv_folds))},
      {"budget", integer<std::uint64_t>(FIELD(selector.budget))},
      {"selector_threads", integer<int>(FIELD(selector.threads))},
      {"n_resamples", integer<int>(FIELD(selector.n_resamples))},
      {"threshold", real(FIELD(selector.threshold))},
      {"max_d_select", integer<int>(FIELD(selector.max_d_select))},
      // scoring
      {"w_tp", real(FIELD(weights.w_tp))},
      {"w_fp", real(FIELD(weights.w_fp))},
      {"w_tn", real(FIELD(weights.w_tn))},
      {"w_fn", real(FIELD(weights.w_fn))},
      {"weights",
       [](TournamentConfig& c, const std::string&, const std::string& v) {
         c.weights = resolve_weights(v);
       }},
      // tournament
      {"replicates", integer<int>(FIELD(replicates))},
      {"master_seed", integer<std::uint64_t>(FIELD(master_seed))},
      {"threads", integer<int>(FIELD(threads))},
      {"leaderboard_out", [](TournamentConfig& c, const std::string&,
                             const std::string& v) { c.leaderboard_path = v; }},
      {"results_out", [](TournamentConfig& c, const std::string&,
                         const std::string& v) { c.results_path = v; }},
      {"methods",
       [](TournamentConfig& c, const std::string&, const std::string& v) {
         c.methods.clear();
         std::stringstream ss(v);
         std::string item;
         while (std::getline(ss, item, ',')) {
           item = trim(item);
           if (!item.empty()) c.methods.push_back(parse_method(item));
         }
       }},
  };
  return table;
}

#undef FIELD

}  // namespace

std::map<std::string, std::string> parse_key_values(std::string_view text) {
  std::map<std::string, std::string> out;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ParseError("config line " + std::to_string(line_no) + ": expected key = value");
    const std::string key = trim(std::string_view(line).substr(0, eq));
    const std::string value = trim(std::string_view(line).substr(eq + 1));
    if (key.empty()) throw ParseError("config line " + std::to_string(line_no) + ": empty key");
    if (!out.emplace(key, value).second)
      throw ParseError("config line " + std::to_string(line_no) + ": repeated key '" + key + "'");
  }
  return out;
}

TournamentConfig parse_config(std::string_view text) {
  TournamentConfig config;
  const auto kv = parse_key_values(text);
  // a preset must not overwrite explicit w_* keys, so apply it first
  if (auto it = kv.find("weights"); it != kv.end()) setters().at("weights")(config, it->first, it->second);
  for (const auto& [key, value] : kv) {
    if (key == "weights") continue;
    const auto it = setters().find(key);
    if (it == setters().end()) throw ConfigError("unknown config key '" + key + "'");
    it->second(config, key, value);
  }
  return config;
}

ScoringWeights resolve_weights(const std::string& preset_or_path) {
  if (preset_or_path == "table1") return ScoringWeights::table1();
  if (preset_or_path == "proposed") return ScoringWeights::proposed();
  if (!std::filesystem::exists(preset_or_path))
    throw ConfigError("unknown weights preset or missing file '" + preset_or_path +
                      "' (presets: table1, proposed, youden)");
  const auto kv = parse_key_values(read_file(preset_or_path));
  ScoringWeights w;
  for (const auto& [key, value] : kv) {
    if (key == "w_tp") w.w_tp = parse_double(key, value);
    else if (key == "w_fp") w.w_fp = parse_double(key, value);
    else if (key == "w_tn") w.w_tn = parse_double(key, value);
    else if (key == "w_fn") w.w_fn = parse_double(key, value);
    else throw ConfigError("weights file: unknown key '" + key + "'");
  }
  validate(w);
  return w;
}

}  // namespace contest
