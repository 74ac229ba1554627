#include "contest/tournament.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <map>
#include <ostream>
#include <thread>

#include "contest/errors.hpp"

namespace contest {

namespace {

// Seed streams within one replicate.
constexpr std::uint64_t kTruthStream = 1;
constexpr std::uint64_t kDataStream = 2;
constexpr std::uint64_t kMethodStream = 100;

std::string fixed(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

std::string sanitize(std::string s) {
  for (char& c : s)
    if (c == ',' || c == '\n' || c == '\r' || c == '"') c = ' ';
  return s;
}

}  // namespace

void validate(const TournamentConfig& c) {
  if (c.replicates < 1) throw ConfigError("replicates must be >= 1");
  if (c.methods.empty()) throw ConfigError("methods must list at least one method");
  if (c.threads < 0) throw ConfigError("threads must be >= 0");
  validate(c.sim);
  validate(c.weights);
  for (Method m : c.methods) {
    SelectorSpec s = c.selector;
    s.method = m;
    validate(s, c.sim.d);
  }
}

std::uint64_t replicate_seed(std::uint64_t master_seed, int replicate) {
  return derive_seed(master_seed, static_cast<std::uint64_t>(replicate));
}

std::vector<ReplicateRow> run_replicate(const TournamentConfig& config, int replicate) {
  const std::uint64_t seed = replicate_seed(config.master_seed, replicate);
  SimulationConfig sim = config.sim;
  sim.seed = seed;

  std::vector<ReplicateRow> rows;
  for (Method m : config.methods) {
    ReplicateRow row;
    row.replicate = replicate;
    row.seed = seed;
    row.method = std::string(method_name(m));
    rows.push_back(row);
  }

  GroundTruth truth;
  Dataset data;
  try {
    Rng truth_rng(derive_seed(seed, kTruthStream));
    truth = draw_ground_truth(sim, truth_rng);
    Rng data_rng(derive_seed(seed, kDataStream));
    data = simulate_dataset(truth, sim, data_rng);
  } catch (const std::exception& e) {
    for (auto& row : rows) row.error = std::string("simulation: ") + e.what();
    return rows;
  }

  for (std::size_t i = 0; i < config.methods.size(); ++i) {
    auto& row = rows[i];
    row.k = truth.k();
    try {
      SelectorSpec spec = config.selector;
      spec.method = config.methods[i];
      spec.seed = derive_seed(seed, kMethodStream + static_cast<std::uint64_t>(spec.method));
      const Submission sub = select(data, spec);
      row.selected = sub.selected;
      row.report = contest_score(sub, truth, config.weights);
      row.ok = true;
    } catch (const std::exception& e) {
      row.error = e.what();
    }
  }
  return rows;
}

std::vector<MethodSummary> summarize(const TournamentConfig& config,
                                     const std::vector<ReplicateRow>& rows) {
  std::vector<MethodSummary> out;
  std::map<std::string, std::size_t> slot;
  for (Method m : config.methods) {
    const std::string name(method_name(m));
    if (slot.emplace(name, out.size()).second) out.push_back({name});
  }
  std::map<int, double> top;
  for (const auto& r : rows) {
    if (!r.ok) continue;
    auto [it, fresh] = top.emplace(r.replicate, r.report.score);
    if (!fresh) it->second = std::max(it->second, r.report.score);
  }
  for (const auto& r : rows) {
    auto& s = out[slot.at(r.method)];
    if (!r.ok) {
      ++s.failures;
      continue;
    }
    ++s.successes;
    s.mean_score += r.report.score;
    s.mean_tp += r.report.tp;
    s.mean_fp += r.report.fp;
    if (r.report.score == top.at(r.replicate)) ++s.wins;
  }
  for (auto& s : out) {
    if (s.successes == 0) continue;
    s.mean_score /= s.successes;
    s.mean_tp /= s.successes;
    s.mean_fp /= s.successes;
  }
  std::stable_sort(out.begin(), out.end(), [](const MethodSummary& a, const MethodSummary& b) {
    if (a.mean_score != b.mean_score) return a.mean_score > b.mean_score;
    return a.method < b.method;
  });
  return out;
}

TournamentResult run_tournament(const TournamentConfig& config, std::optional<int> only) {
  validate(config);
  if (only && (*only < 1 || *only > config.replicates))
    throw ConfigError("replicate " + std::to_string(*only) + " outside 1.." +
                      std::to_string(config.replicates));
  std::vector<int> todo;
  if (only) {
    todo.push_back(*only);
  } else {
    for (int r = 1; r <= config.replicates; ++r) todo.push_back(r);
  }

  unsigned workers = config.threads > 0 ? static_cast<unsigned>(config.threads)
                                        : std::max(1U, std::thread::hardware_concurrency());
  workers = std::min<unsigned>(workers, static_cast<unsigned>(todo.size()));
  TournamentConfig inner = config;
  if (workers > 1) inner.selector.threads = 1;

  std::vector<std::vector<ReplicateRow>> per(todo.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < todo.size(); i = next++) per[i] = run_replicate(inner, todo[i]);
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }

  TournamentResult result;
  for (auto& rows : per)
    for (auto& r : rows) result.rows.push_back(std::move(r));
  result.summary = summarize(config, result.rows);
  return result;
}

void write_results_csv(const TournamentResult& result, std::ostream& out) {
  out << "replicate,seed,method,status,k,tp,fp,tn,fn,score,selected,error\n";
  for (const auto& r : result.rows) {
    std::string selected;
    for (std::size_t i = 0; i < r.selected.size(); ++i)
      selected += (i ? ";" : "") + std::to_string(r.selected[i]);
    out << r.replicate << ',' << r.seed << ',' << r.method << ',' << (r.ok ? "ok" : "error") << ','
        << r.k << ',';
    if (r.ok)
      out << r.report.tp << ',' << r.report.fp << ',' << r.report.tn << ',' << r.report.fn << ','
          << fixed(r.report.score);
    else
      out << ",,,,";
    out << ',' << selected << ',' << sanitize(r.error) << '\n';
  }
}

void write_leaderboard_csv(const TournamentResult& result, std::ostream& out) {
  out << "rank,method,replicates_ok,replicates_failed,mean_score,mean_tp,mean_fp,wins\n";
  int rank = 0;
  for (const auto& s : result.summary)
    out << ++rank << ',' << s.method << ',' << s.successes << ',' << s.failures << ','
        << fixed(s.mean_score) << ',' << fixed(s.mean_tp) << ',' << fixed(s.mean_fp) << ','
        << s.wins << '\n';
}

}  // namespace contest
