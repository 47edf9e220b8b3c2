#include "planpeer/prompts.hpp"

#include <cctype>
#include <fstream>

#include <nlohmann/json.hpp>

#include "planpeer/error.hpp"

namespace planpeer {

namespace {

bool is_ident(char c) { return std::islower(static_cast<unsigned char>(c)) || c == '_'; }

}  // namespace

std::string render_placeholders(std::string_view text, const PromptVars& vars) {
  std::string out;
  out.reserve(text.size());
  std::size_t i = 0;
  while (i < text.size()) {
    if (text[i] == '{') {
      std::size_t j = i + 1;
      while (j < text.size() && is_ident(text[j])) ++j;
      if (j < text.size() && text[j] == '}' && j > i + 1) {
        auto name = text.substr(i + 1, j - i - 1);
        auto it = vars.find(name);
        if (it == vars.end()) throw ConfigError("unbound prompt placeholder {" + std::string(name) + "}");
        out += it->second;
        i = j + 1;
        continue;
      }
    }
    out += text[i++];
  }
  return out;
}

std::string PromptTemplate::render(std::string_view context, std::string_view question_text) const {
  return render_placeholders(body, {{"context", std::string(context)}, {"question", std::string(question_text)}});
}

PromptLibrary PromptLibrary::load(const std::filesystem::path& dir) {
  PromptLibrary lib;
  if (!std::filesystem::is_directory(dir)) throw LookupError("prompt directory not found: " + dir.string());
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.path().extension() != ".json") continue;
    std::ifstream in(entry.path());
    auto j = nlohmann::json::parse(in);
    PromptTemplate t;
    t.name = j.at("name").get<std::string>();
    t.version = j.value("version", 1);
    t.reconstruction = j.value("reconstruction", false);
    t.body = j.at("body").get<std::string>();
    t.question = j.value("question", "");
    lib.add(std::move(t));
  }
  return lib;
}

void PromptLibrary::add(PromptTemplate t) {
  auto name = t.name;
  templates_.insert_or_assign(std::move(name), std::move(t));
}

const PromptTemplate& PromptLibrary::get(std::string_view name) const {
  auto it = templates_.find(name);
  if (it == templates_.end()) throw LookupError("no prompt template named '" + std::string(name) + "'");
  return it->second;
}

}  // namespace planpeer
