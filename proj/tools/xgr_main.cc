// xgr: goal recognition with weight-of-evidence explanations.
//
//   xgr recognize fixtures/fig1-grid
//   xgr explain fixtures/fig1-grid --question why-not --goal g1
//   xgr bench fixtures/grid fixtures/sokoban --reps 5 --format csv
//   xgr eval fixtures/sokoban --format json

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "xgr/bundle.h"
#include "xgr/error.h"
#include "xgr/explainer.h"
#include "xgr/harness.h"
#include "xgr/text_format.h"

namespace fs = std::filesystem;

namespace {

struct CommonFlags {
  std::string log_base = "e";
  double floor = 1e-6;
  double tie_epsilon = 1e-9;
  std::string priors;
  std::string format = "text";
  std::uint64_t seed = 0;
  std::uint64_t budget = 1'000'000;
  double time_limit_s = 60.0;
  std::string heuristic;
  unsigned threads = 1;
};

void AddCommonFlags(CLI::App* cmd, CommonFlags& flags, bool csv_allowed = false) {
  cmd->add_option("--log-base", flags.log_base, "Logarithm base for weight of evidence")
      ->check(CLI::IsMember({"e", "2", "10"}))
      ->capture_default_str();
  cmd->add_option("--floor", flags.floor, "Posterior probability floor")->capture_default_str();
  cmd->add_option("--tie-epsilon", flags.tie_epsilon, "Tolerance for probability and WoE ties")
      ->capture_default_str();
  cmd->add_option("--priors", flags.priors,
                  "Goal priors: a file path or comma-separated values summing to 1");
  std::vector<std::string> formats = {"text", "json"};
  if (csv_allowed) formats.push_back("csv");
  cmd->add_option("--format", flags.format, "Output format")
      ->check(CLI::IsMember(formats))
      ->capture_default_str();
  cmd->add_option("--seed", flags.seed, "Tie-breaking seed; 0 orders ties by action name")
      ->capture_default_str();
  cmd->add_option("--budget", flags.budget, "Node expansion budget per search")
      ->capture_default_str();
  cmd->add_option("--time-limit", flags.time_limit_s, "Wall-clock limit per search, seconds")
      ->capture_default_str();
  cmd->add_option("--heuristic", flags.heuristic,
                  "Heuristic id (blind, goal-count, grid-manhattan, box-distance)");
  cmd->add_option("--threads", flags.threads, "Worker threads for recognition")
      ->capture_default_str();
}

std::string ReadFile(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw xgr::InvalidArgumentError("cannot read " + path.string());
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

xgr::RunOptions MakeRunOptions(const CommonFlags& flags, std::size_t num_goals) {
  xgr::RunOptions options;
  options.recognizer.probability_floor = flags.floor;
  options.recognizer.tie_epsilon = flags.tie_epsilon;
  options.recognizer.threads = flags.threads;
  options.log_base = xgr::LogBase::Parse(flags.log_base);
  options.heuristic = flags.heuristic;
  options.search.tie_seed = flags.seed;
  options.search.budget.max_expansions = flags.budget;
  options.search.budget.time_limit = std::chrono::milliseconds(
      static_cast<std::int64_t>(flags.time_limit_s * 1000.0));
  if (!flags.priors.empty()) {
    std::string text = fs::exists(flags.priors) ? ReadFile(flags.priors) : flags.priors;
    for (char& c : text) {
      if (c == ',') c = ' ';
    }
    options.priors = xgr::ParsePriors(text, num_goals);
  }
  return options;
}

void Emit(const nlohmann::json& j) { std::cout << j.dump(2) << '\n'; }

int RunPlan(const std::string& dir, const std::string& goal_label, std::size_t from_step,
            const CommonFlags& flags) {
  const auto bundle = xgr::LoadBundle(dir);
  const auto options = MakeRunOptions(flags, bundle.num_goals());
  const std::size_t goal = xgr::ParseGoalLabel(goal_label, bundle.num_goals());
  if (from_step > bundle.num_observations()) {
    throw xgr::InvalidArgumentError("--from exceeds the number of observations");
  }
  const auto heuristic = bundle.heuristics.Get(
      options.heuristic.empty() ? bundle.heuristics.preferred() : options.heuristic);
  const auto task = bundle.TaskFrom(bundle.StateAfter(from_step), goal);
  const auto result = xgr::AStarSearch(task, *heuristic, options.search);
  const double seconds = std::chrono::duration<double>(result.elapsed).count();

  if (flags.format == "json") {
    nlohmann::json plan = nlohmann::json::array();
    if (result.plan) {
      for (auto a : result.plan->steps) plan.push_back(bundle.domain->action(a).name);
    }
    Emit({{"goal", xgr::GoalLabel(goal)},
          {"from_step", from_step},
          {"status", std::string(xgr::ToString(result.status))},
          {"cost", result.plan ? nlohmann::json(xgr::FormatCost(result.plan->total_cost))
                               : nlohmann::json()},
          {"plan", plan},
          {"heuristic", std::string(heuristic->name())},
          {"expanded", result.expanded_nodes},
          {"seconds", seconds}});
  } else {
    std::cout << xgr::GoalLabel(goal) << " from step " << from_step << ": "
              << xgr::ToString(result.status) << " (" << result.expanded_nodes
              << " expanded, " << seconds << " s)\n";
    if (result.plan) {
      for (auto a : result.plan->steps) std::cout << "  " << bundle.domain->action(a).name << '\n';
      std::cout << "cost " << xgr::FormatCost(result.plan->total_cost) << '\n';
    }
  }
  switch (result.status) {
    case xgr::SearchStatus::kSolved: return 0;
    case xgr::SearchStatus::kUnsolvable:
      std::cerr << "error: goal is unreachable\n";
      return 3;
    case xgr::SearchStatus::kBudgetExhausted:
      std::cerr << "error: search budget exhausted\n";
      return 3;
  }
  return 3;
}

int RunRecognize(const std::string& dir, const CommonFlags& flags) {
  const auto bundle = xgr::LoadBundle(dir);
  const auto options = MakeRunOptions(flags, bundle.num_goals());
  const auto heuristic = bundle.heuristics.Get(
      options.heuristic.empty() ? bundle.heuristics.preferred() : options.heuristic);
  xgr::Planner planner(heuristic, options.search);
  const auto trace = options.priors
                         ? xgr::Recognize(bundle, planner, *options.priors, options.recognizer)
                         : xgr::Recognize(bundle, planner, options.recognizer);
  if (flags.format == "json") {
    Emit(xgr::TraceToJson(trace));
  } else {
    std::cout << xgr::TraceToText(trace);
  }
  return 0;
}

int RunExplain(const std::string& dir, const std::string& question, const std::string& goal_label,
               const CommonFlags& flags) {
  const auto bundle = xgr::LoadBundle(dir);
  const auto options = MakeRunOptions(flags, bundle.num_goals());

  if (question.empty()) {
    const auto run = xgr::RunScenario(bundle, options);
    if (flags.format == "json") {
      Emit(xgr::RunToJson(run, bundle, /*include_timing=*/true));
    } else {
      std::cout << xgr::RunToText(run, bundle);
    }
    return 0;
  }

  if (goal_label.empty()) throw xgr::InvalidArgumentError("--question needs --goal");
  const std::size_t goal = xgr::ParseGoalLabel(goal_label, bundle.num_goals());
  const auto heuristic = bundle.heuristics.Get(
      options.heuristic.empty() ? bundle.heuristics.preferred() : options.heuristic);
  xgr::Planner planner(heuristic, options.search);
  const auto trace = options.priors
                         ? xgr::Recognize(bundle, planner, *options.priors, options.recognizer)
                         : xgr::Recognize(bundle, planner, options.recognizer);
  const auto explanan = xgr::CompleteExplanan(trace, options.log_base);
  const auto explanation =
      question == "why" ? xgr::ExplainWhy(bundle, trace, explanan, goal)
                        : xgr::ExplainWhyNot(bundle, trace, explanan, goal, planner);
  if (flags.format == "json") {
    Emit(xgr::ToJson(explanation, *bundle.domain));
  } else {
    std::cout << explanation.text << '\n';
  }
  return 0;
}

int RunRender(const std::string& dir, bool with_explanations, const CommonFlags& flags) {
  const auto bundle = xgr::LoadBundle(dir);
  if (with_explanations) {
    const auto run = xgr::RunScenario(bundle, MakeRunOptions(flags, bundle.num_goals()));
    std::cout << xgr::RenderBoard(bundle, &run);
  } else {
    std::cout << xgr::RenderBoard(bundle);
  }
  return 0;
}

int RunBench(const std::vector<std::string>& dirs, std::size_t reps, const CommonFlags& flags) {
  const std::vector<fs::path> paths(dirs.begin(), dirs.end());
  CommonFlags no_priors = flags;  // priors are per bundle (priors.dat)
  no_priors.priors.clear();
  const auto report = xgr::Bench(paths, reps, MakeRunOptions(no_priors, 0));
  if (flags.format == "csv") {
    std::cout << xgr::ToCsv(report);
  } else if (flags.format == "json") {
    Emit(xgr::ToJson(report));
  } else {
    std::cout << xgr::ToText(report);
  }
  for (const auto& row : report.scenarios) {
    if (row.failed) return 3;
  }
  return 0;
}

int RunEval(const std::vector<std::string>& dirs, const CommonFlags& flags) {
  const std::vector<fs::path> paths(dirs.begin(), dirs.end());
  CommonFlags no_priors = flags;
  no_priors.priors.clear();
  const auto report = xgr::Evaluate(paths, MakeRunOptions(no_priors, 0));
  if (flags.format == "csv") {
    std::cout << xgr::ToCsv(report);
  } else if (flags.format == "json") {
    Emit(xgr::ToJson(report));
  } else {
    std::cout << xgr::ToText(report);
  }
  if (report.scenarios.empty()) {
    std::cerr << "error: no annotated scenario could be evaluated\n";
    return 4;
  }
  return report.failures.empty() ? 0 : 4;
}

int RunCompile(const std::string& map_path, const std::string& out_dir,
               const std::vector<std::string>& actions, const std::string& name) {
  const auto map = xgr::ParseMap(ReadFile(map_path));
  auto bundle = xgr::CompileMap(map);
  bundle.name = name.empty() ? fs::path(out_dir).filename().string() : name;
  bundle.observations = xgr::ReplayObservations(*bundle.domain, bundle.initial, actions);
  xgr::SaveBundle(bundle, out_dir);
  std::cout << "wrote " << out_dir << ": " << bundle.domain->num_facts() << " facts, "
            << bundle.domain->num_actions() << " actions, " << bundle.num_goals() << " goals, "
            << bundle.num_observations() << " observations\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Goal recognition with weight-of-evidence explanations"};
  app.require_subcommand(1);
  CommonFlags flags;

  std::string dir;
  std::string goal = "g1";
  std::size_t from_step = 0;
  auto* plan = app.add_subcommand("plan", "Optimal plan from the initial state (or --from) to a goal");
  plan->add_option("bundle", dir, "Scenario bundle directory")->required();
  plan->add_option("--goal", goal, "Goal label, e.g. g2")->capture_default_str();
  plan->add_option("--from", from_step, "Plan from the state after this many observations");
  AddCommonFlags(plan, flags);

  auto* recognize = app.add_subcommand("recognize", "Posterior over goals after each observation");
  recognize->add_option("bundle", dir, "Scenario bundle directory")->required();
  AddCommonFlags(recognize, flags);

  std::string question;
  std::string explain_goal;
  auto* explain = app.add_subcommand("explain", "Why / why-not explanations");
  explain->add_option("bundle", dir, "Scenario bundle directory")->required();
  explain->add_option("--question", question, "Single question; default answers all")
      ->check(CLI::IsMember({"why", "why-not"}));
  explain->add_option("--goal", explain_goal, "Goal the question is about");
  AddCommonFlags(explain, flags);

  bool with_explanations = false;
  auto* render = app.add_subcommand("render", "ASCII board with the observed trajectory");
  render->add_option("bundle", dir, "Scenario bundle directory")->required();
  render->add_flag("--explain", with_explanations, "List counterfactual actions under the board");
  AddCommonFlags(render, flags);

  std::vector<std::string> dirs;
  std::size_t reps = 5;
  auto* bench = app.add_subcommand("bench", "Timing of recognition against explanation");
  bench->add_option("paths", dirs, "Bundle directories or directories of bundles")->required();
  bench->add_option("--reps", reps, "Repetitions per scenario")->capture_default_str();
  AddCommonFlags(bench, flags, /*csv_allowed=*/true);

  auto* eval = app.add_subcommand("eval", "Score explanations against annotations");
  eval->add_option("paths", dirs, "Bundle directories or directories of bundles")->required();
  AddCommonFlags(eval, flags, /*csv_allowed=*/true);

  std::string map_path;
  std::string out_dir;
  std::vector<std::string> actions;
  std::string name;
  auto* compile = app.add_subcommand("compile", "Compile a map file into a scenario bundle");
  compile->add_option("map", map_path, "Map file")->required()->check(CLI::ExistingFile);
  compile->add_option("out", out_dir, "Output bundle directory")->required();
  compile->add_option("--obs", actions, "Observed action names, in order");
  compile->add_option("--name", name, "Scenario name");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (*plan) return RunPlan(dir, goal, from_step, flags);
    if (*recognize) return RunRecognize(dir, flags);
    if (*explain) return RunExplain(dir, question, explain_goal, flags);
    if (*render) return RunRender(dir, with_explanations, flags);
    if (*bench) return RunBench(dirs, reps, flags);
    if (*eval) return RunEval(dirs, flags);
    if (*compile) return RunCompile(map_path, out_dir, actions, name);
  } catch (const xgr::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return static_cast<int>(e.category());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
