#include "xgr/harness.h"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "xgr/error.h"

namespace xgr {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

ScenarioRun RunScenario(const ScenarioBundle& bundle, const RunOptions& options) {
  const auto heuristic = bundle.heuristics.Get(
      options.heuristic.empty() ? bundle.heuristics.preferred() : options.heuristic);
  ScenarioRun run;

  Planner gr_planner(heuristic, options.search);
  const auto gr_start = Clock::now();
  if (options.priors) {
    ValidatePriors(*options.priors, bundle.num_goals());
    run.trace = Recognize(bundle, gr_planner, *options.priors, options.recognizer);
  } else {
    run.trace = Recognize(bundle, gr_planner, options.recognizer);
  }
  const auto xgr_start = Clock::now();

  Planner cf_planner(heuristic, options.search);
  run.explanan = CompleteExplanan(run.trace, options.log_base);
  const StepPosterior& last = run.trace.final_step();
  for (std::size_t g : last.partition.predicted) {
    run.why.push_back(ExplainWhy(bundle, run.trace, run.explanan, g));
  }
  for (std::size_t g : last.partition.counterfactual) {
    run.why_not.push_back(ExplainWhyNot(bundle, run.trace, run.explanan, g, cf_planner));
  }
  const auto xgr_end = Clock::now();

  run.timing.gr = xgr_start - gr_start;
  run.timing.xgr = xgr_end - xgr_start;
  for (const auto& e : run.why_not) {
    for (const auto& cf : e.counterfactuals) run.timing.counterfactual_planning += cf.planning_time;
  }
  return run;
}

nlohmann::json TraceToJson(const PosteriorTrace& trace) {
  auto cost_json = [](const std::optional<Cost>& c) {
    return c ? nlohmann::json(FormatCost(*c)) : nlohmann::json();
  };
  auto labels = [](const std::vector<std::size_t>& goals) {
    nlohmann::json out = nlohmann::json::array();
    for (std::size_t g : goals) out.push_back(GoalLabel(g));
    return out;
  };
  nlohmann::json goals = nlohmann::json::array();
  for (std::size_t g = 0; g < trace.num_goals(); ++g) {
    goals.push_back({{"goal", GoalLabel(g)},
                     {"prior", trace.priors[g]},
                     {"optimal_cost", cost_json(trace.optimal_cost[g])}});
  }
  nlohmann::json steps = nlohmann::json::array();
  for (const auto& s : trace.steps) {
    nlohmann::json matched = nlohmann::json::array();
    for (const auto& c : s.matched_cost) matched.push_back(cost_json(c));
    steps.push_back({{"step", s.step},
                     {"probabilities", s.probabilities},
                     {"scores", s.scores},
                     {"matched_cost", matched},
                     {"predicted", labels(s.partition.predicted)},
                     {"counterfactual", labels(s.partition.counterfactual)}});
  }
  return {{"goals", goals},
          {"steps", steps},
          {"config",
           {{"scorer", trace.scorer},
            {"floor", trace.probability_floor},
            {"tie_epsilon", trace.tie_epsilon}}},
          {"warnings", trace.warnings}};
}

nlohmann::json RunToJson(const ScenarioRun& run, const ScenarioBundle& bundle,
                         bool include_timing) {
  nlohmann::json explanan = nlohmann::json::array();
  for (const auto& e : run.explanan.entries) {
    explanan.push_back({{"pair", {GoalLabel(e.goal), GoalLabel(e.counterfactual)}},
                        {"woe", e.woe},
                        {"observation", e.step}});
  }
  nlohmann::json explanations = nlohmann::json::array();
  for (const auto& e : run.why) explanations.push_back(ToJson(e, *bundle.domain));
  for (const auto& e : run.why_not) explanations.push_back(ToJson(e, *bundle.domain));
  nlohmann::json out = {{"scenario", bundle.name},
                        {"trace", TraceToJson(run.trace)},
                        {"explanan", explanan},
                        {"explanations", explanations}};
  if (include_timing) {
    auto seconds = [](std::chrono::nanoseconds d) { return std::chrono::duration<double>(d).count(); };
    out["timing"] = {{"gr_s", seconds(run.timing.gr)},
                     {"xgr_s", seconds(run.timing.xgr)},
                     {"cf_planning_s", seconds(run.timing.counterfactual_planning)},
                     {"total_s", seconds(run.timing.total())}};
  }
  return out;
}

std::string TraceToText(const PosteriorTrace& trace) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(4);
  out << "step";
  for (std::size_t g = 0; g < trace.num_goals(); ++g) out << "  " << std::setw(8) << GoalLabel(g);
  out << "  predicted\n";
  for (const auto& s : trace.steps) {
    out << std::setw(4) << s.step;
    for (double p : s.probabilities) out << "  " << std::setw(8) << p;
    out << "  ";
    for (std::size_t k = 0; k < s.partition.predicted.size(); ++k) {
      out << (k ? "," : "") << GoalLabel(s.partition.predicted[k]);
    }
    out << '\n';
  }
  for (const auto& w : trace.warnings) out << "warning: " << w << '\n';
  return out.str();
}

std::string RunToText(const ScenarioRun& run, const ScenarioBundle& bundle) {
  std::ostringstream out;
  out << "scenario " << bundle.name << ": " << bundle.num_goals() << " goals, "
      << bundle.num_observations() << " observations\n\n";
  out << TraceToText(run.trace) << '\n';
  out << std::fixed << std::setprecision(4);
  if (!run.explanan.empty()) {
    out << "explanan:\n";
    for (const auto& e : run.explanan.entries) {
      out << "  o" << e.step << "  (" << GoalLabel(e.goal) << ", " << GoalLabel(e.counterfactual)
          << ")  " << e.woe << '\n';
    }
    out << '\n';
  }
  auto describe = [&](const Explanation& e) {
    out << (e.question == Question::kWhy ? "why " : "why not ") << GoalLabel(e.goal) << "?";
    if (!e.markers.empty()) {
      out << "  markers:";
      for (const auto& m : e.markers) out << " o" << m.step;
      out << "  (woe " << e.markers.front().woe << ")";
    }
    out << "\n  " << e.text << '\n';
  };
  for (const auto& e : run.why) describe(e);
  for (const auto& e : run.why_not) describe(e);
  return out.str();
}

std::string RenderBoard(const ScenarioBundle& bundle, const ScenarioRun* run) {
  if (!bundle.map) throw InvalidArgumentError("bundle has no map.txt to render");
  const Board& board = GetBoard(*bundle.map);
  const Domain& domain = *bundle.domain;
  std::vector<std::string> rows(static_cast<std::size_t>(board.rows),
                                std::string(static_cast<std::size_t>(board.cols), '.'));
  auto at = [&](int index) -> char& { return rows[board.Row(index)][board.Col(index)]; };
  for (int i = 0; i < board.size(); ++i) {
    if (board.walls[i]) at(i) = '#';
  }

  if (const auto* grid = std::get_if<GridMap>(&*bundle.map)) {
    for (std::size_t j = 0; j < grid->goals.size() && j < 9; ++j) {
      at(grid->goals[j]) = static_cast<char>('1' + j);
    }
  } else {
    const auto& sokoban = std::get<SokobanMap>(*bundle.map);
    std::map<int, int> digits;
    for (const auto& goal : sokoban.goals) {
      for (const auto& [box, cell] : goal) {
        if (!digits.contains(cell)) digits.emplace(cell, static_cast<int>(digits.size()) + 1);
      }
    }
    for (const auto& [cell, digit] : digits) {
      if (digit <= 9) at(cell) = static_cast<char>('0' + digit);
    }
  }

  std::vector<int> path;
  for (std::size_t step = 0; step <= bundle.num_observations(); ++step) {
    const auto cell = AgentCell(domain, bundle.StateAfter(step));
    path.push_back(cell.value_or(-1));
  }
  for (std::size_t k = 0; k + 1 < path.size(); ++k) {
    const int from = path[k];
    const int to = path[k + 1];
    if (from < 0 || to < 0 || from == to) continue;
    char arrow = '>';
    if (board.Row(to) < board.Row(from)) arrow = '^';
    else if (board.Row(to) > board.Row(from)) arrow = 'v';
    else if (board.Col(to) < board.Col(from)) arrow = '<';
    at(from) = arrow;
  }
  if (!path.empty() && path.front() >= 0 && path.size() > 1) at(path.front()) = 'I';

  const State& now = bundle.StateAfter(bundle.num_observations());
  now.facts().ForEach([&](FactId f) {
    const auto& name = domain.fact_name(f);
    if (name.starts_with("box")) {
      const auto sep = name.find("_at_");
      if (sep != std::string::npos) {
        const int cell = std::stoi(name.substr(sep + 4)) - 1;
        if (cell >= 0 && cell < board.size()) at(cell) = '$';
      }
    }
  });
  if (!path.empty() && path.back() >= 0) at(path.back()) = '@';

  std::ostringstream out;
  for (const auto& row : rows) out << row << '\n';
  out << "\nobservations:\n";
  for (const auto& o : bundle.observations) {
    out << "  o" << o.index << "  " << bundle.vocab.Describe(domain.action(o.action).name) << '\n';
  }
  if (run != nullptr && !run->why_not.empty()) {
    out << "counterfactual actions:\n";
    for (const auto& e : run->why_not) {
      for (const auto& cf : e.counterfactuals) {
        out << "  " << GoalLabel(e.goal) << " at o" << cf.marker_step << ": "
            << (cf.action ? bundle.vocab.Describe(domain.action(*cf.action).name)
                          : std::string("none"))
            << '\n';
      }
    }
  }
  return out.str();
}

std::size_t RankObservation(const Explanan& explanan, Question question, std::size_t goal,
                            std::size_t step, double tie_epsilon) {
  const bool why = question == Question::kWhy;
  const auto entries = why ? explanan.ForPredicted(goal) : explanan.ForCounterfactual(goal);
  // Most extreme value per observation, in ranking direction.
  std::map<std::size_t, double> value;
  for (const auto& e : entries) {
    auto [it, inserted] = value.emplace(e.step, e.woe);
    if (!inserted) it->second = why ? std::max(it->second, e.woe) : std::min(it->second, e.woe);
  }
  std::vector<double> ordered;
  for (const auto& [s, v] : value) ordered.push_back(why ? -v : v);  // ascending = better first
  std::sort(ordered.begin(), ordered.end());
  std::vector<double> levels;
  for (double v : ordered) {
    if (levels.empty() || v - levels.back() > tie_epsilon) levels.push_back(v);
  }
  auto it = value.find(step);
  if (it == value.end()) return levels.size() + 1;
  const double target = why ? -it->second : it->second;
  std::size_t rank = 1;
  for (double level : levels) {
    if (target - level > tie_epsilon) ++rank;
    else break;
  }
  return rank;
}

std::vector<std::size_t> IdealRanks(std::size_t k) {
  std::vector<std::size_t> ranks(k);
  std::iota(ranks.begin(), ranks.end(), std::size_t{1});
  return ranks;
}

double Mae(std::span<const std::size_t> ground_truth, std::span<const std::size_t> model,
           std::size_t n) {
  if (ground_truth.empty()) throw EvaluationError("MAE needs at least one annotated observation");
  if (ground_truth.size() != model.size()) {
    throw EvaluationError("ground-truth and model rank lists differ in length");
  }
  if (n == 0) throw EvaluationError("MAE needs a non-empty observation sequence");
  double sum = 0.0;
  for (std::size_t k = 0; k < ground_truth.size(); ++k) {
    sum += std::abs(static_cast<double>(ground_truth[k]) - static_cast<double>(model[k]));
  }
  return sum / static_cast<double>(n);
}

double CfPercent(std::size_t agreements, std::size_t disagreements) {
  if (agreements + disagreements == 0) {
    throw EvaluationError("CF% is undefined without any counterfactual comparisons");
  }
  return 100.0 * static_cast<double>(agreements) /
         static_cast<double>(agreements + disagreements);
}

ScenarioEvaluation EvaluateScenario(const ScenarioBundle& bundle, const ScenarioRun& run) {
  if (!bundle.annotations) throw EvaluationError("scenario " + bundle.name + " has no annotations");
  const Annotations& ann = *bundle.annotations;
  const std::size_t n = bundle.num_observations();
  ScenarioEvaluation eval;
  eval.scenario = bundle.name;

  auto question_mae = [&](const std::map<std::size_t, std::vector<std::size_t>>& annotated,
                          Question q) -> std::optional<double> {
    std::vector<double> per_goal;
    for (const auto& [goal, steps] : annotated) {
      std::vector<std::size_t> model;
      for (std::size_t s : steps) {
        model.push_back(RankObservation(run.explanan, q, goal, s, run.trace.tie_epsilon));
      }
      per_goal.push_back(Mae(IdealRanks(steps.size()), model, n));
    }
    if (per_goal.empty()) return std::nullopt;
    return std::accumulate(per_goal.begin(), per_goal.end(), 0.0) /
           static_cast<double>(per_goal.size());
  };
  eval.mae_why = question_mae(ann.why, Question::kWhy);
  eval.mae_why_not = question_mae(ann.why_not, Question::kWhyNot);

  for (const auto& [goal, action] : ann.counterfactual_action) {
    bool agree = false;
    for (const auto& e : run.why_not) {
      if (e.goal != goal) continue;
      for (const auto& cf : e.counterfactuals) {
        if (cf.action && bundle.domain->action(*cf.action).name == action) agree = true;
      }
    }
    ++(agree ? eval.cf_agreements : eval.cf_disagreements);
  }
  if (eval.cf_agreements + eval.cf_disagreements > 0) {
    eval.cf_percent = CfPercent(eval.cf_agreements, eval.cf_disagreements);
  }
  return eval;
}

Summary Summarize(std::span<const double> values) {
  Summary s;
  s.count = values.size();
  if (values.empty()) return s;
  s.mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
  if (values.size() > 1) {
    double sq = 0.0;
    for (double v : values) sq += (v - s.mean) * (v - s.mean);
    s.sd = std::sqrt(sq / static_cast<double>(values.size() - 1));
  }
  return s;
}

std::vector<std::pair<std::string, fs::path>> DiscoverBundles(const fs::path& path) {
  std::vector<std::pair<std::string, fs::path>> out;
  if (fs::exists(path / "domain.strips")) {
    const fs::path canonical = fs::weakly_canonical(path);
    out.emplace_back(canonical.parent_path().filename().string(), canonical);
    return out;
  }
  if (!fs::is_directory(path)) throw InvalidArgumentError("not a directory: " + path.string());
  const std::string domain = fs::weakly_canonical(path).filename().string();
  for (const auto& entry : fs::directory_iterator(path)) {
    if (entry.is_directory() && fs::exists(entry.path() / "domain.strips")) {
      out.emplace_back(domain, entry.path());
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

std::vector<std::pair<std::string, fs::path>> DiscoverAll(std::span<const fs::path> paths) {
  std::vector<std::pair<std::string, fs::path>> all;
  for (const auto& p : paths) {
    auto found = DiscoverBundles(p);
    all.insert(all.end(), found.begin(), found.end());
  }
  if (all.empty()) throw InvalidArgumentError("no scenario bundles found");
  return all;
}

double Median(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  if (n == 0) return 0.0;
  return n % 2 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

std::string Num(double v, int precision = 6) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(precision) << v;
  return out.str();
}

std::string OptNum(const std::optional<double>& v, int precision = 4) {
  return v ? Num(*v, precision) : std::string("");
}

nlohmann::json OptJson(const std::optional<double>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json();
}

}  // namespace

EvalReport Evaluate(std::span<const fs::path> paths, const RunOptions& options) {
  EvalReport report;
  for (const auto& [domain, dir] : DiscoverAll(paths)) {
    try {
      const ScenarioBundle bundle = LoadBundle(dir);
      if (!bundle.annotations) continue;
      const ScenarioRun run = RunScenario(bundle, options);
      ScenarioEvaluation eval = EvaluateScenario(bundle, run);
      eval.domain = domain;
      report.scenarios.push_back(std::move(eval));
    } catch (const Error& e) {
      report.failures.push_back(dir.filename().string() + ": " + e.what());
    }
  }
  std::map<std::string, std::array<std::vector<double>, 3>> by_domain;
  std::vector<std::string> order;
  for (const auto& s : report.scenarios) {
    if (!by_domain.contains(s.domain)) order.push_back(s.domain);
    auto& cols = by_domain[s.domain];
    if (s.mae_why) cols[0].push_back(*s.mae_why);
    if (s.mae_why_not) cols[1].push_back(*s.mae_why_not);
    if (s.cf_percent) cols[2].push_back(*s.cf_percent);
  }
  for (const auto& d : order) {
    const auto& cols = by_domain[d];
    report.domains.push_back({d, Summarize(cols[0]), Summarize(cols[1]), Summarize(cols[2])});
  }
  return report;
}

nlohmann::json ToJson(const EvalReport& report) {
  nlohmann::json scenarios = nlohmann::json::array();
  for (const auto& s : report.scenarios) {
    scenarios.push_back({{"domain", s.domain},
                         {"scenario", s.scenario},
                         {"mae_why", OptJson(s.mae_why)},
                         {"mae_whynot", OptJson(s.mae_why_not)},
                         {"cf_pct", OptJson(s.cf_percent)},
                         {"cf_agreements", s.cf_agreements},
                         {"cf_disagreements", s.cf_disagreements}});
  }
  auto summary = [](const Summary& s) {
    return nlohmann::json{{"mean", s.mean}, {"sd", s.sd}, {"count", s.count}};
  };
  nlohmann::json domains = nlohmann::json::array();
  for (const auto& d : report.domains) {
    domains.push_back({{"domain", d.domain},
                       {"mae_why", summary(d.mae_why)},
                       {"mae_whynot", summary(d.mae_why_not)},
                       {"cf_pct", summary(d.cf_percent)}});
  }
  return {{"convention",
           {{"ground_truth_rank", "k-th annotated observation has ideal rank k"},
            {"mae_denominator", "observation sequence length n"},
            {"ranking", "dense; why from highest WoE, why-not from lowest WoE"},
            {"unranked_observation", "number of ranked observations + 1"}}},
          {"scenarios", scenarios},
          {"domains", domains},
          {"failures", report.failures}};
}

std::string ToText(const EvalReport& report) {
  std::ostringstream out;
  out << std::left << std::setw(16) << "domain" << std::setw(20) << "scenario" << std::setw(10)
      << "why" << std::setw(10) << "why-not" << "cf%\n";
  for (const auto& s : report.scenarios) {
    out << std::setw(16) << s.domain << std::setw(20) << s.scenario << std::setw(10)
        << OptNum(s.mae_why, 2) << std::setw(10) << OptNum(s.mae_why_not, 2)
        << OptNum(s.cf_percent, 1) << '\n';
  }
  for (const auto& d : report.domains) {
    out << std::setw(16) << d.domain << std::setw(20) << "mean" << std::setw(10)
        << Num(d.mae_why.mean, 2) << std::setw(10) << Num(d.mae_why_not.mean, 2)
        << Num(d.cf_percent.mean, 1) << '\n';
    out << std::setw(16) << d.domain << std::setw(20) << "sd" << std::setw(10)
        << Num(d.mae_why.sd, 2) << std::setw(10) << Num(d.mae_why_not.sd, 2)
        << Num(d.cf_percent.sd, 1) << '\n';
  }
  for (const auto& f : report.failures) out << "failed: " << f << '\n';
  return out.str();
}

std::string ToCsv(const EvalReport& report) {
  std::ostringstream out;
  out << "# ground-truth rank convention: k-th annotated observation has ideal rank k\n";
  for (const auto& f : report.failures) out << "# failed: " << f << '\n';
  out << "domain,scenario,mae_why,mae_whynot,cf_pct\n";
  for (const auto& s : report.scenarios) {
    out << s.domain << ',' << s.scenario << ',' << OptNum(s.mae_why) << ','
        << OptNum(s.mae_why_not) << ',' << OptNum(s.cf_percent, 2) << '\n';
  }
  return out.str();
}

TimingReport Bench(std::span<const fs::path> paths, std::size_t repetitions,
                   const RunOptions& options) {
  if (repetitions == 0) throw InvalidArgumentError("repetitions must be positive");
  TimingReport report;
  report.repetitions = repetitions;
  for (const auto& [domain, dir] : DiscoverAll(paths)) {
    ScenarioTimingRow row;
    row.domain = domain;
    row.scenario = dir.filename().string();
    try {
      const ScenarioBundle bundle = LoadBundle(dir);
      std::vector<double> gr, xgr, cf;
      std::string reference;
      for (std::size_t r = 0; r < repetitions; ++r) {
        const ScenarioRun run = RunScenario(bundle, options);
        gr.push_back(std::chrono::duration<double>(run.timing.gr).count());
        xgr.push_back(std::chrono::duration<double>(run.timing.xgr).count());
        cf.push_back(std::chrono::duration<double>(run.timing.counterfactual_planning).count());
        const std::string content = RunToJson(run, bundle).dump();
        if (r == 0) reference = content;
        else if (content != reference) row.deterministic = false;
      }
      row.gr_s = Median(gr);
      row.xgr_s = Median(xgr);
      row.cf_s = Median(cf);
      row.total_s = row.gr_s + row.xgr_s;
      row.increase_pct = row.gr_s > 0 ? 100.0 * row.xgr_s / row.gr_s : 0.0;
      row.cf_planning_pct = row.xgr_s > 0 ? 100.0 * row.cf_s / row.xgr_s : 0.0;
    } catch (const Error& e) {
      row.failed = true;
      row.error = e.what();
    }
    report.scenarios.push_back(std::move(row));
  }

  std::vector<std::string> order;
  std::map<std::string, std::vector<const ScenarioTimingRow*>> by_domain;
  for (const auto& row : report.scenarios) {
    if (row.failed) continue;
    if (!by_domain.contains(row.domain)) order.push_back(row.domain);
    by_domain[row.domain].push_back(&row);
  }
  for (const auto& d : order) {
    std::vector<double> total, xgr, gr;
    double cf_sum = 0.0, xgr_sum = 0.0;
    for (const auto* row : by_domain[d]) {
      total.push_back(row->total_s);
      xgr.push_back(row->xgr_s);
      gr.push_back(row->gr_s);
      cf_sum += row->cf_s;
      xgr_sum += row->xgr_s;
    }
    DomainTimingRow agg;
    agg.domain = d;
    agg.problems = total.size();
    agg.total_s = Summarize(total);
    agg.xgr_s = Summarize(xgr);
    agg.gr_s = Summarize(gr);
    agg.increase_pct = agg.gr_s.mean > 0 ? 100.0 * agg.xgr_s.mean / agg.gr_s.mean : 0.0;
    agg.cf_planning_pct = xgr_sum > 0 ? 100.0 * cf_sum / xgr_sum : 0.0;
    report.domains.push_back(agg);
  }
  return report;
}

std::string ToCsv(const TimingReport& report) {
  std::ostringstream out;
  out << "# repetitions: " << report.repetitions << " (per-scenario medians)\n";
  out << "# cache policy: recognition and counterfactual planning each start from a cold "
         "plan cache per run\n";
  for (const auto& row : report.scenarios) {
    if (row.failed) out << "# failed: " << row.domain << '/' << row.scenario << ": " << row.error << '\n';
  }
  out << "domain,scenario,total_s,xgr_s,increase_pct,cf_planning_pct\n";
  for (const auto& row : report.scenarios) {
    if (row.failed) continue;
    out << row.domain << ',' << row.scenario << ',' << Num(row.total_s, 9) << ','
        << Num(row.xgr_s, 9) << ',' << Num(row.increase_pct, 2) << ','
        << Num(row.cf_planning_pct, 2) << '\n';
  }
  for (const auto& d : report.domains) {
    out << d.domain << ",mean," << Num(d.total_s.mean, 9) << ',' << Num(d.xgr_s.mean, 9) << ','
        << Num(d.increase_pct, 2) << ',' << Num(d.cf_planning_pct, 2) << '\n';
    out << d.domain << ",sd," << Num(d.total_s.sd, 9) << ',' << Num(d.xgr_s.sd, 9) << ",,\n";
  }
  return out.str();
}

nlohmann::json ToJson(const TimingReport& report) {
  nlohmann::json scenarios = nlohmann::json::array();
  for (const auto& row : report.scenarios) {
    nlohmann::json j = {{"domain", row.domain}, {"scenario", row.scenario}, {"failed", row.failed}};
    if (row.failed) {
      j["error"] = row.error;
    } else {
      j.update({{"total_s", row.total_s},
                {"gr_s", row.gr_s},
                {"xgr_s", row.xgr_s},
                {"cf_planning_s", row.cf_s},
                {"increase_pct", row.increase_pct},
                {"cf_planning_pct", row.cf_planning_pct},
                {"deterministic", row.deterministic}});
    }
    scenarios.push_back(j);
  }
  nlohmann::json domains = nlohmann::json::array();
  for (const auto& d : report.domains) {
    domains.push_back({{"domain", d.domain},
                       {"problems", d.problems},
                       {"total_s", {{"mean", d.total_s.mean}, {"sd", d.total_s.sd}}},
                       {"xgr_s", {{"mean", d.xgr_s.mean}, {"sd", d.xgr_s.sd}}},
                       {"gr_s", {{"mean", d.gr_s.mean}, {"sd", d.gr_s.sd}}},
                       {"increase_pct", d.increase_pct},
                       {"cf_planning_pct", d.cf_planning_pct}});
  }
  return {{"repetitions", report.repetitions},
          {"cache_policy", "cold plan cache per run for recognition and for counterfactual planning"},
          {"scenarios", scenarios},
          {"domains", domains}};
}

std::string ToText(const TimingReport& report) {
  std::ostringstream out;
  out << std::left << std::setw(14) << "domain" << std::setw(8) << "n" << std::setw(26)
      << "GR+XGR s (sd)" << std::setw(26) << "XGR only s (sd)" << std::setw(12) << "increase%"
      << "cf planning%\n";
  for (const auto& d : report.domains) {
    out << std::setw(14) << d.domain << std::setw(8) << d.problems << std::setw(26)
        << (Num(d.total_s.mean, 6) + " (" + Num(d.total_s.sd, 6) + ")") << std::setw(26)
        << (Num(d.xgr_s.mean, 6) + " (" + Num(d.xgr_s.sd, 6) + ")") << std::setw(12)
        << Num(d.increase_pct, 2) << Num(d.cf_planning_pct, 2) << '\n';
  }
  for (const auto& row : report.scenarios) {
    if (row.failed) out << "failed: " << row.domain << '/' << row.scenario << ": " << row.error << '\n';
  }
  return out.str();
}

}  // namespace xgr
