#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>

namespace planpeer {

using PromptVars = std::map<std::string, std::string, std::less<>>;

/// Replaces every `{name}` in `text` with vars[name]. Substituted values are
/// not rescanned. Throws ConfigError for a placeholder without a binding.
std::string render_placeholders(std::string_view text, const PromptVars& vars);

struct PromptTemplate {
  std::string name;
  int version = 1;
  /// Wording reconstructed rather than taken from a published prompt.
  bool reconstruction = false;
  std::string body;      // placeholders {context}, {question}
  std::string question;  // may use {label}, {domain}, {tier}, {tier_plural}

  std::string render_question(const PromptVars& vars) const { return render_placeholders(question, vars); }
  std::string render(std::string_view context, std::string_view question_text) const;
};

/// Prompt files `<name>.json` from one directory. The workflow needs
/// "screening", "extraction", "binary" and "taxonomy".
class PromptLibrary {
 public:
  static PromptLibrary load(const std::filesystem::path& dir);

  void add(PromptTemplate t);
  /// Throws LookupError.
  const PromptTemplate& get(std::string_view name) const;

 private:
  std::map<std::string, PromptTemplate, std::less<>> templates_;
};

}  // namespace planpeer
