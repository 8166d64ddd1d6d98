#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace xgr {

// Maps action-name patterns to phrase templates. A pattern is a literal
// action name in which `{slot}` stands for one or more characters other than
// '_'; the phrase reuses the captured slots:
//
//   "move_{dir}_{from}_{to}"  ->  "moved {dir} from cell {from} to cell {to}"
//
// Patterns are tried in insertion order and the first match wins.
class Vocabulary {
 public:
  struct Entry {
    std::string pattern;
    std::string phrase;
  };

  void Add(std::string pattern, std::string phrase);
  const std::vector<Entry>& entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }

  std::optional<std::string> Phrase(std::string_view action_name) const;
  // Falls back to "performed <action>".
  std::string Describe(std::string_view action_name) const;

  // {"actions": [{"pattern": "...", "phrase": "..."}]}
  static Vocabulary FromJson(std::string_view text);
  std::string ToJson() const;

 private:
  std::vector<Entry> entries_;
};

// Slot captures when `name` matches `pattern`, nullopt otherwise.
std::optional<std::map<std::string, std::string>> MatchPattern(
    std::string_view pattern, std::string_view name);

Vocabulary GridVocabulary();
Vocabulary SokobanVocabulary();

}  // namespace xgr
