#include "xgr/text_format.h"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <optional>
#include <sstream>
#include <unordered_map>

#include "xgr/error.h"

namespace xgr {

namespace {

std::string Located(const std::string& message, std::size_t line,
                    std::size_t column) {
  if (line == 0) return message;
  std::string out = "line " + std::to_string(line);
  if (column != 0) out += ", column " + std::to_string(column);
  return out + ": " + message;
}

bool IsSpace(char c) {
  return c == ' ' || c == '\t' || c == '\r' || c == '\v' || c == '\f';
}

std::string_view Trim(std::string_view s) {
  while (!s.empty() && (IsSpace(s.front()) || s.front() == '\n')) s.remove_prefix(1);
  while (!s.empty() && (IsSpace(s.back()) || s.back() == '\n')) s.remove_suffix(1);
  return s;
}

// Splits on '\n'. A single trailing newline does not produce an empty line.
std::vector<std::string_view> SplitLines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) {
      if (start < text.size()) lines.push_back(text.substr(start));
      break;
    }
    lines.push_back(text.substr(start, end - start));
    start = end + 1;
  }
  for (auto& line : lines) {
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  }
  return lines;
}

// Drops a `#` comment that starts the line or follows whitespace.
std::string_view StripComment(std::string_view line) {
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '#' && (i == 0 || IsSpace(line[i - 1]))) return line.substr(0, i);
  }
  return line;
}

struct Token {
  std::string_view text;
  std::size_t column;  // 1-based
};

std::vector<Token> Tokenize(std::string_view line) {
  std::vector<Token> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && IsSpace(line[i])) ++i;
    const std::size_t start = i;
    while (i < line.size() && !IsSpace(line[i])) ++i;
    if (i > start) tokens.push_back({line.substr(start, i - start), start + 1});
  }
  return tokens;
}

struct FactRef {
  std::string name;
  std::size_t line;
  std::size_t column;
};

// Parses a comma separated list spread over `tokens`.
std::vector<FactRef> ParseFactList(std::span<const Token> tokens, std::size_t line) {
  std::vector<FactRef> out;
  bool expect_item = true;
  std::size_t last_column = 0;
  for (const Token& token : tokens) {
    std::size_t pos = 0;
    while (pos <= token.text.size()) {
      const std::size_t comma = token.text.find(',', pos);
      const std::size_t end = comma == std::string_view::npos ? token.text.size() : comma;
      const std::string_view piece = token.text.substr(pos, end - pos);
      const std::size_t column = token.column + pos;
      if (!piece.empty()) {
        if (!expect_item) throw ParseError("missing ',' before '" + std::string(piece) + "'", line, column);
        out.push_back({std::string(piece), line, column});
        expect_item = false;
      } else if (comma != std::string_view::npos && expect_item) {
        throw ParseError("empty fact name in list", line, column);
      }
      last_column = column;
      if (comma == std::string_view::npos) break;
      expect_item = true;
      pos = comma + 1;
    }
  }
  if (expect_item && !out.empty()) {
    throw ParseError("trailing ',' in fact list", line, last_column);
  }
  return out;
}

}  // namespace

ParseError::ParseError(const std::string& message, std::size_t line,
                       std::size_t column)
    : Error(ErrorCategory::kParse, Located(message, line, column)),
      line_(line),
      column_(column) {}

ParseError ParseError::InFile(const std::string& file) const {
  return ParseError(Preformatted{}, file + ": " + what(), line_, column_);
}

Cost ParseCost(std::string_view text) {
  text = Trim(text);
  auto parse_int = [&](std::string_view s) -> std::int64_t {
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
      throw ParseError("invalid cost '" + std::string(text) + "'");
    }
    return v;
  };
  Cost cost;
  if (const auto slash = text.find('/'); slash != std::string_view::npos) {
    const std::int64_t den = parse_int(text.substr(slash + 1));
    if (den == 0) throw ParseError("zero denominator in cost '" + std::string(text) + "'");
    cost = Cost(parse_int(text.substr(0, slash)), den);
  } else if (const auto dot = text.find('.'); dot != std::string_view::npos) {
    const std::string_view frac = text.substr(dot + 1);
    if (frac.size() > 12) throw ParseError("too many decimals in cost '" + std::string(text) + "'");
    std::int64_t scale = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
    const std::string_view whole = text.substr(0, dot);
    const std::int64_t w = whole.empty() ? 0 : parse_int(whole);
    const std::int64_t f = frac.empty() ? 0 : parse_int(frac);
    cost = Cost(w * scale + f, scale);
  } else {
    cost = Cost(parse_int(text));
  }
  if (cost < Cost(0)) throw ParseError("negative cost '" + std::string(text) + "'");
  return cost;
}

std::shared_ptr<const Domain> ParseDomain(std::string_view text) {
  struct PendingAction {
    std::string name;
    std::vector<FactRef> pre, add, del;
    Cost cost{1};
  };
  DomainBuilder builder;
  std::vector<PendingAction> actions;
  std::unordered_map<std::string, std::size_t> action_lines;

  const auto lines = SplitLines(text);
  for (std::size_t n = 0; n < lines.size(); ++n) {
    const std::size_t line_no = n + 1;
    const auto tokens = Tokenize(StripComment(lines[n]));
    if (tokens.empty()) continue;
    const std::string_view keyword = tokens[0].text;

    if (keyword == "fact") {
      if (tokens.size() != 2) {
        throw ParseError("expected 'fact <name>'", line_no, tokens[0].column);
      }
      const std::string name(tokens[1].text);
      if (!IsValidToken(name)) throw ParseError("invalid fact name", line_no, tokens[1].column);
      if (builder.HasFact(name)) {
        throw ParseError("duplicate fact '" + name + "'", line_no, tokens[1].column);
      }
      builder.AddFact(name);
      continue;
    }
    if (keyword != "action") {
      throw ParseError("expected 'fact' or 'action', found '" + std::string(keyword) + "'",
                       line_no, tokens[0].column);
    }
    if (tokens.size() < 2) throw ParseError("missing action name", line_no, tokens[0].column);

    PendingAction action;
    action.name = std::string(tokens[1].text);
    if (!IsValidToken(action.name)) {
      throw ParseError("invalid action name", line_no, tokens[1].column);
    }
    if (action_lines.contains(action.name)) {
      throw ParseError("duplicate action '" + action.name + "' (first declared on line " +
                           std::to_string(action_lines[action.name]) + ")",
                       line_no, tokens[1].column);
    }

    bool seen_cost = false, seen_pre = false, seen_add = false, seen_del = false;
    std::size_t i = 2;
    auto is_keyword = [](std::string_view t) {
      return t == "cost" || t == "pre" || t == "add" || t == "del";
    };
    while (i < tokens.size()) {
      const Token section = tokens[i];
      if (!is_keyword(section.text)) {
        throw ParseError("expected one of cost/pre/add/del, found '" +
                             std::string(section.text) + "'",
                         line_no, section.column);
      }
      std::size_t j = i + 1;
      while (j < tokens.size() && !is_keyword(tokens[j].text)) ++j;
      const std::span<const Token> body(tokens.data() + i + 1, j - i - 1);
      auto once = [&](bool& seen) {
        if (seen) {
          throw ParseError("repeated '" + std::string(section.text) + "' section",
                           line_no, section.column);
        }
        seen = true;
      };
      if (section.text == "cost") {
        once(seen_cost);
        if (body.size() != 1) throw ParseError("expected a single cost value", line_no, section.column);
        try {
          action.cost = ParseCost(body[0].text);
        } catch (const ParseError& e) {
          throw ParseError(e.what(), line_no, body[0].column);
        }
      } else if (section.text == "pre") {
        once(seen_pre);
        action.pre = ParseFactList(body, line_no);
      } else if (section.text == "add") {
        once(seen_add);
        action.add = ParseFactList(body, line_no);
      } else {
        once(seen_del);
        action.del = ParseFactList(body, line_no);
      }
      i = j;
    }
    action_lines[action.name] = line_no;
    actions.push_back(std::move(action));
  }

  auto names = [&](const std::vector<FactRef>& refs) {
    std::vector<std::string> out;
    for (const auto& ref : refs) {
      if (!builder.HasFact(ref.name)) {
        throw ParseError("undeclared fact '" + ref.name + "'", ref.line, ref.column);
      }
      out.push_back(ref.name);
    }
    return out;
  };
  for (const auto& action : actions) {
    const auto pre = names(action.pre);
    const auto add = names(action.add);
    const auto del = names(action.del);
    for (const auto& a : add) {
      for (const auto& d : del) {
        if (a == d) {
          throw ParseError("action '" + action.name + "' adds and deletes '" + a + "'",
                           action_lines[action.name]);
        }
      }
    }
    builder.AddAction(action.name, pre, add, del, action.cost);
  }
  return builder.Build();
}

std::string SerializeDomain(const Domain& domain) {
  std::ostringstream out;
  for (const auto& name : domain.fact_names()) out << "fact " << name << '\n';
  auto list = [&](const FactSet& facts) {
    std::string s;
    facts.ForEach([&](FactId f) {
      if (!s.empty()) s += ',';
      s += domain.fact_name(f);
    });
    return s;
  };
  for (const auto& action : domain.actions()) {
    out << "action " << action.name << " cost " << FormatCost(action.cost);
    if (!action.preconditions.empty()) out << " pre " << list(action.preconditions);
    if (!action.add_effects.empty()) out << " add " << list(action.add_effects);
    if (!action.delete_effects.empty()) out << " del " << list(action.delete_effects);
    out << '\n';
  }
  return out.str();
}

State ParseState(std::string_view text, const Domain& domain) {
  FactSet facts = domain.EmptyFactSet();
  const auto lines = SplitLines(text);
  for (std::size_t n = 0; n < lines.size(); ++n) {
    const auto tokens = Tokenize(StripComment(lines[n]));
    for (const auto& ref : ParseFactList(tokens, n + 1)) {
      const auto id = domain.FindFact(ref.name);
      if (!id) throw ParseError("unknown fact '" + ref.name + "'", ref.line, ref.column);
      facts.Insert(*id);
    }
  }
  return State(std::move(facts));
}

std::string SerializeState(const State& state, const Domain& domain) {
  std::string out;
  state.facts().ForEach([&](FactId f) { out += domain.fact_name(f) + '\n'; });
  return out;
}

std::vector<FactSet> ParseHypotheses(std::string_view text, const Domain& domain) {
  const auto lines = SplitLines(text);
  if (lines.empty()) throw ParseError("hypothesis file is empty");
  std::vector<FactSet> hypotheses;
  for (std::size_t n = 0; n < lines.size(); ++n) {
    const auto tokens = Tokenize(lines[n]);
    if (tokens.empty()) throw ParseError("empty hypothesis line", n + 1, 1);
    FactSet goal = domain.EmptyFactSet();
    for (const auto& ref : ParseFactList(tokens, n + 1)) {
      const auto id = domain.FindFact(ref.name);
      if (!id) throw ParseError("unknown fact '" + ref.name + "'", ref.line, ref.column);
      goal.Insert(*id);
    }
    hypotheses.push_back(std::move(goal));
  }
  return hypotheses;
}

std::string SerializeHypotheses(const std::vector<FactSet>& hypotheses,
                                const Domain& domain) {
  std::string out;
  for (const auto& goal : hypotheses) {
    std::string line;
    goal.ForEach([&](FactId f) {
      if (!line.empty()) line += ", ";
      line += domain.fact_name(f);
    });
    out += line + '\n';
  }
  return out;
}

std::vector<ObservationStep> ParseObservations(std::string_view text,
                                               const Domain& domain,
                                               const State& initial) {
  std::vector<ObservationStep> steps;
  State current = initial;
  const auto lines = SplitLines(text);
  for (std::size_t n = 0; n < lines.size(); ++n) {
    const auto tokens = Tokenize(StripComment(lines[n]));
    if (tokens.empty()) continue;
    const std::size_t step = steps.size() + 1;
    if (tokens.size() != 1) {
      throw ParseError("observation step " + std::to_string(step) +
                           ": expected a single action name",
                       n + 1, tokens[1].column);
    }
    const auto id = domain.FindAction(tokens[0].text);
    if (!id) {
      throw ParseError("observation step " + std::to_string(step) + ": unknown action '" +
                           std::string(tokens[0].text) + "'",
                       n + 1, tokens[0].column);
    }
    const GroundAction& action = domain.action(*id);
    if (!Applicable(action, current)) {
      throw ParseError("observation step " + std::to_string(step) + ": action '" +
                           action.name + "' is not applicable",
                       n + 1, tokens[0].column);
    }
    current = Apply(action, current);
    steps.push_back({*id, current, step});
  }
  return steps;
}

std::string SerializeObservations(const std::vector<ObservationStep>& observations,
                                  const Domain& domain) {
  std::string out;
  for (const auto& step : observations) out += domain.action(step.action).name + '\n';
  return out;
}

void ValidatePriors(const std::vector<double>& priors, std::size_t expected_size) {
  if (priors.size() != expected_size) {
    throw ParseError("expected " + std::to_string(expected_size) + " priors, found " +
                     std::to_string(priors.size()));
  }
  double sum = 0.0;
  for (double p : priors) {
    if (!std::isfinite(p) || p < 0.0) throw ParseError("priors must be finite and non-negative");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw ParseError("priors sum to " + std::to_string(sum) + ", expected 1");
  }
}

std::vector<double> ParsePriors(std::string_view text, std::size_t expected_size) {
  std::vector<double> priors;
  const auto lines = SplitLines(text);
  for (std::size_t n = 0; n < lines.size(); ++n) {
    const std::string value(Trim(StripComment(lines[n])));
    if (value.empty()) continue;
    char* end = nullptr;
    const double p = std::strtod(value.c_str(), &end);
    if (end != value.c_str() + value.size()) {
      throw ParseError("invalid probability '" + value + "'", n + 1, 1);
    }
    priors.push_back(p);
  }
  ValidatePriors(priors, expected_size);
  return priors;
}

}  // namespace xgr
