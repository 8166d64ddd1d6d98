#include "xgr/bundle.h"

#include <charconv>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "xgr/error.h"

namespace xgr {

namespace fs = std::filesystem;

std::string GoalLabel(std::size_t goal) { return "g" + std::to_string(goal + 1); }

std::size_t ParseGoalLabel(std::string_view label, std::size_t num_goals) {
  std::string_view digits = label;
  if (digits.starts_with('g') || digits.starts_with('G')) digits.remove_prefix(1);
  std::size_t n = 0;
  auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), n);
  if (ec != std::errc() || ptr != digits.data() + digits.size() || digits.empty() || n == 0 ||
      n > num_goals) {
    throw InvalidArgumentError("unknown goal '" + std::string(label) + "'");
  }
  return n - 1;
}

const State& ScenarioBundle::StateAfter(std::size_t step) const {
  if (step == 0) return initial;
  if (step > observations.size()) {
    throw InvalidArgumentError("observation " + std::to_string(step) + " out of range");
  }
  return observations[step - 1].state;
}

PlanningTask ScenarioBundle::TaskFrom(const State& from, std::size_t goal) const {
  return PlanningTask(domain, from, hypotheses.at(goal));
}

std::vector<double> ScenarioBundle::EffectivePriors() const {
  if (priors) return *priors;
  return std::vector<double>(hypotheses.size(), hypotheses.empty() ? 0.0 : 1.0 / hypotheses.size());
}

std::vector<ObservationStep> ReplayObservations(const Domain& domain, const State& initial,
                                                const std::vector<std::string>& actions) {
  std::string text;
  for (const auto& a : actions) text += a + '\n';
  return ParseObservations(text, domain, initial);
}

Annotations ParseAnnotations(std::string_view text, std::size_t num_goals,
                             std::size_t num_observations) {
  Annotations out;
  try {
    const auto doc = nlohmann::json::parse(text);
    auto read_indices = [&](const char* key, std::map<std::size_t, std::vector<std::size_t>>& dst) {
      if (!doc.contains(key)) return;
      for (const auto& [label, indices] : doc.at(key).items()) {
        const std::size_t goal = ParseGoalLabel(label, num_goals);
        auto list = indices.get<std::vector<std::size_t>>();
        if (list.empty() || list.size() > 2) {
          throw ParseError(std::string("'") + key + "' for " + label +
                           " must list one or two observations");
        }
        for (std::size_t i : list) {
          if (i < 1 || i > num_observations) {
            throw ParseError("observation " + std::to_string(i) +
                             " outside 1.." + std::to_string(num_observations));
          }
        }
        dst[goal] = std::move(list);
      }
    };
    read_indices("why", out.why);
    read_indices("why_not", out.why_not);
    if (doc.contains("counterfactual_action")) {
      for (const auto& [label, action] : doc.at("counterfactual_action").items()) {
        out.counterfactual_action[ParseGoalLabel(label, num_goals)] = action.get<std::string>();
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(e.what());
  } catch (const InvalidArgumentError& e) {
    throw ParseError(e.what());
  }
  return out;
}

std::string SerializeAnnotations(const Annotations& annotations) {
  nlohmann::json doc = nlohmann::json::object();
  auto write = [&](const char* key, const std::map<std::size_t, std::vector<std::size_t>>& src) {
    nlohmann::json obj = nlohmann::json::object();
    for (const auto& [goal, list] : src) obj[GoalLabel(goal)] = list;
    doc[key] = obj;
  };
  write("why", annotations.why);
  write("why_not", annotations.why_not);
  nlohmann::json cf = nlohmann::json::object();
  for (const auto& [goal, action] : annotations.counterfactual_action) cf[GoalLabel(goal)] = action;
  doc["counterfactual_action"] = cf;
  return doc.dump(2) + "\n";
}

namespace {

std::string ReadFile(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot read " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void WriteFile(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidArgumentError("cannot write " + path.string());
  out << content;
}

// Re-raises parse errors with the offending file name.
template <typename Fn>
auto InFile(const fs::path& path, Fn&& fn) {
  try {
    return fn();
  } catch (const ParseError& e) {
    throw e.InFile(path.filename().string());
  } catch (const DomainMismatchError& e) {
    throw ParseError(path.filename().string() + ": " + e.what());
  } catch (const InvalidArgumentError& e) {
    throw ParseError(path.filename().string() + ": " + e.what());
  }
}

}  // namespace

ScenarioBundle LoadBundle(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw ParseError("bundle directory not found: " + dir.string());
  ScenarioBundle bundle;
  bundle.name = dir.filename().string();
  if (bundle.name.empty()) bundle.name = dir.parent_path().filename().string();

  const auto domain_path = dir / "domain.strips";
  bundle.domain = InFile(domain_path, [&] { return ParseDomain(ReadFile(domain_path)); });
  const Domain& domain = *bundle.domain;

  const auto init_path = dir / "init.state";
  bundle.initial = InFile(init_path, [&] { return ParseState(ReadFile(init_path), domain); });

  const auto hyps_path = dir / "hyps.dat";
  bundle.hypotheses = InFile(hyps_path, [&] { return ParseHypotheses(ReadFile(hyps_path), domain); });

  const auto obs_path = dir / "obs.dat";
  if (fs::exists(obs_path)) {
    bundle.observations = InFile(obs_path, [&] {
      return ParseObservations(ReadFile(obs_path), domain, bundle.initial);
    });
  }

  const auto priors_path = dir / "priors.dat";
  if (fs::exists(priors_path)) {
    bundle.priors = InFile(priors_path, [&] {
      return ParsePriors(ReadFile(priors_path), bundle.hypotheses.size());
    });
  }

  const auto annotations_path = dir / "annotations.json";
  if (fs::exists(annotations_path)) {
    bundle.annotations = InFile(annotations_path, [&] {
      return ParseAnnotations(ReadFile(annotations_path), bundle.hypotheses.size(),
                              bundle.observations.size());
    });
  }

  bundle.heuristics = HeuristicRegistry(domain);
  const auto map_path = dir / "map.txt";
  if (fs::exists(map_path)) {
    bundle.map = InFile(map_path, [&] { return ParseMap(ReadFile(map_path)); });
    const Board& board = GetBoard(*bundle.map);
    if (const auto* sokoban = std::get_if<SokobanMap>(&*bundle.map)) {
      bundle.heuristics.Register(std::make_shared<BoxDistanceHeuristic>(
          domain, board, static_cast<int>(sokoban->boxes.size())));
      bundle.vocab = SokobanVocabulary();
    } else {
      bundle.heuristics.Register(std::make_shared<GridDistanceHeuristic>(domain, board));
      bundle.vocab = GridVocabulary();
    }
  }

  const auto vocab_path = dir / "vocab.json";
  if (fs::exists(vocab_path)) {
    bundle.vocab = InFile(vocab_path, [&] { return Vocabulary::FromJson(ReadFile(vocab_path)); });
  }
  return bundle;
}

void SaveBundle(const ScenarioBundle& bundle, const fs::path& dir) {
  fs::create_directories(dir);
  const Domain& domain = *bundle.domain;
  WriteFile(dir / "domain.strips", SerializeDomain(domain));
  WriteFile(dir / "init.state", SerializeState(bundle.initial, domain));
  WriteFile(dir / "hyps.dat", SerializeHypotheses(bundle.hypotheses, domain));
  WriteFile(dir / "obs.dat", SerializeObservations(bundle.observations, domain));
  if (bundle.priors) {
    std::ostringstream out;
    out.precision(17);
    for (double p : *bundle.priors) out << p << '\n';
    WriteFile(dir / "priors.dat", out.str());
  }
  if (bundle.annotations) {
    WriteFile(dir / "annotations.json", SerializeAnnotations(*bundle.annotations));
  }
  if (!bundle.vocab.empty()) WriteFile(dir / "vocab.json", bundle.vocab.ToJson());
  if (bundle.map) WriteFile(dir / "map.txt", SerializeMap(*bundle.map));
}

}  // namespace xgr
