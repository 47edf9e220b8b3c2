#include "planpeer/text.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>

#include "planpeer/error.hpp"

namespace planpeer {

namespace {

bool is_ws(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }
bool is_alpha(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
}

bool looks_like_url(std::string_view raw) {
  while (!raw.empty() && !std::isalnum(static_cast<unsigned char>(raw.front()))) raw.remove_prefix(1);
  auto l = to_lower(raw.substr(0, std::min<std::size_t>(raw.size(), 8)));
  return l.starts_with("http://") || l.starts_with("https://") || l.starts_with("www.");
}

}  // namespace

std::string to_lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && is_ws(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_ws(s.back())) s.remove_suffix(1);
  return s;
}

StopwordSet load_stopwords(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw LookupError("cannot open stopword list " + file.string());
  StopwordSet words;
  for (std::string line; std::getline(in, line);) {
    auto t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    words.insert(to_lower(t));
  }
  return words;
}

std::vector<std::string> tokenize(std::string_view text, const StopwordSet& stopwords) {
  std::vector<std::string> tokens;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && is_ws(text[i])) ++i;
    std::size_t j = i;
    while (j < text.size() && !is_ws(text[j])) ++j;
    auto raw = text.substr(i, j - i);
    i = j;
    if (raw.empty() || looks_like_url(raw)) continue;

    std::size_t a = 0;
    while (a < raw.size()) {
      while (a < raw.size() && !is_alpha(raw[a])) ++a;
      std::size_t b = a;
      while (b < raw.size() && is_alpha(raw[b])) ++b;
      if (b - a >= 2) {
        auto word = to_lower(raw.substr(a, b - a));
        if (!stopwords.contains(word)) tokens.push_back(std::move(word));
      }
      a = b;
    }
  }
  return tokens;
}

std::vector<TextSpan> sentence_spans(std::string_view text) {
  std::vector<TextSpan> spans;
  auto push = [&](std::size_t b, std::size_t e) {
    while (b < e && is_ws(text[b])) ++b;
    while (e > b && is_ws(text[e - 1])) --e;
    if (e > b) spans.push_back({b, e});
  };
  std::size_t start = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if ((c == '.' || c == '!' || c == '?') && i + 1 < text.size() && is_ws(text[i + 1])) {
      push(start, i + 1);
      start = i + 1;
    }
  }
  push(start, text.size());
  return spans;
}

std::vector<std::string> split_sentences(std::string_view text) {
  std::vector<std::string> out;
  for (auto s : sentence_spans(text)) out.emplace_back(text.substr(s.begin, s.end - s.begin));
  return out;
}

}  // namespace planpeer
