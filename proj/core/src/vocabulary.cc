#include "xgr/vocabulary.h"

#include <nlohmann/json.hpp>

#include "xgr/error.h"

namespace xgr {

namespace {

struct Part {
  bool slot;
  std::string text;  // literal text or slot name
};

std::vector<Part> SplitPattern(std::string_view pattern) {
  std::vector<Part> parts;
  std::size_t i = 0;
  while (i < pattern.size()) {
    if (pattern[i] == '{') {
      const std::size_t close = pattern.find('}', i);
      if (close == std::string_view::npos || close == i + 1) {
        throw InvalidArgumentError("malformed slot in pattern '" + std::string(pattern) + "'");
      }
      if (!parts.empty() && parts.back().slot) {
        throw InvalidArgumentError("adjacent slots in pattern '" + std::string(pattern) + "'");
      }
      parts.push_back({true, std::string(pattern.substr(i + 1, close - i - 1))});
      i = close + 1;
    } else {
      const std::size_t next = pattern.find('{', i);
      const std::size_t end = next == std::string_view::npos ? pattern.size() : next;
      parts.push_back({false, std::string(pattern.substr(i, end - i))});
      i = end;
    }
  }
  return parts;
}

bool MatchFrom(const std::vector<Part>& parts, std::size_t part, std::string_view name,
               std::map<std::string, std::string>& captures) {
  if (part == parts.size()) return name.empty();
  const Part& p = parts[part];
  if (!p.slot) {
    if (!name.starts_with(p.text)) return false;
    return MatchFrom(parts, part + 1, name.substr(p.text.size()), captures);
  }
  for (std::size_t len = 1; len <= name.size() && name[len - 1] != '_'; ++len) {
    captures[p.text] = std::string(name.substr(0, len));
    if (MatchFrom(parts, part + 1, name.substr(len), captures)) return true;
  }
  captures.erase(p.text);
  return false;
}

std::string Fill(std::string_view phrase, const std::map<std::string, std::string>& slots) {
  std::string out;
  std::size_t i = 0;
  while (i < phrase.size()) {
    if (phrase[i] == '{') {
      const std::size_t close = phrase.find('}', i);
      if (close != std::string_view::npos) {
        auto it = slots.find(std::string(phrase.substr(i + 1, close - i - 1)));
        if (it != slots.end()) {
          out += it->second;
          i = close + 1;
          continue;
        }
      }
    }
    out += phrase[i++];
  }
  return out;
}

}  // namespace

std::optional<std::map<std::string, std::string>> MatchPattern(std::string_view pattern,
                                                               std::string_view name) {
  const auto parts = SplitPattern(pattern);
  std::map<std::string, std::string> captures;
  if (MatchFrom(parts, 0, name, captures)) return captures;
  return std::nullopt;
}

void Vocabulary::Add(std::string pattern, std::string phrase) {
  SplitPattern(pattern);  // validates
  entries_.push_back({std::move(pattern), std::move(phrase)});
}

std::optional<std::string> Vocabulary::Phrase(std::string_view action_name) const {
  for (const auto& entry : entries_) {
    if (auto slots = MatchPattern(entry.pattern, action_name)) {
      return Fill(entry.phrase, *slots);
    }
  }
  return std::nullopt;
}

std::string Vocabulary::Describe(std::string_view action_name) const {
  if (auto phrase = Phrase(action_name)) return *phrase;
  return "performed " + std::string(action_name);
}

Vocabulary Vocabulary::FromJson(std::string_view text) {
  Vocabulary vocab;
  try {
    const auto doc = nlohmann::json::parse(text);
    for (const auto& item : doc.at("actions")) {
      vocab.Add(item.at("pattern").get<std::string>(), item.at("phrase").get<std::string>());
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("vocab.json: ") + e.what());
  } catch (const InvalidArgumentError& e) {
    throw ParseError(std::string("vocab.json: ") + e.what());
  }
  return vocab;
}

std::string Vocabulary::ToJson() const {
  nlohmann::json actions = nlohmann::json::array();
  for (const auto& e : entries_) actions.push_back({{"pattern", e.pattern}, {"phrase", e.phrase}});
  return nlohmann::json{{"actions", actions}}.dump(2) + "\n";
}

Vocabulary GridVocabulary() {
  Vocabulary v;
  v.Add("move_{dir}_{from}_{to}", "moved {dir} from cell {from} to cell {to}");
  return v;
}

Vocabulary SokobanVocabulary() {
  Vocabulary v;
  v.Add("move_{dir}_{from}_{to}", "moved {dir} from cell {from} to cell {to}");
  v.Add("push_{dir}_{from}_{to}_box{a}",
        "pushed box {a} {dir} moving from cell {from} to cell {to}");
  v.Add("push_{dir}_{from}_{to}_box{a}_box{b}",
        "pushed boxes {a} and {b} {dir} moving from cell {from} to cell {to}");
  v.Add("push_{dir}_{from}_{to}_box{a}_box{b}_box{c}",
        "pushed boxes {a}, {b} and {c} {dir} moving from cell {from} to cell {to}");
  return v;
}

}  // namespace xgr
