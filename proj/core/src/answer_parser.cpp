#include "planpeer/answer_parser.hpp"

#include <algorithm>
#include <cctype>

#include "planpeer/text.hpp"

namespace planpeer {

namespace {

constexpr std::string_view kLeftCurly = "\xE2\x80\x9C";
constexpr std::string_view kRightCurly = "\xE2\x80\x9D";
constexpr std::string_view kEnDash = "\xE2\x80\x93";
constexpr int kMaxRangeExpansion = 500;

bool alpha(char c) { return std::isalpha(static_cast<unsigned char>(c)) != 0; }
bool digit(char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }

void skip_spaces(std::string_view s, std::size_t& i) {
  while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\n')) ++i;
}

// Positive integer of at most 6 digits at `i`; 0 if none.
int read_number(std::string_view s, std::size_t& i) {
  std::size_t j = i;
  while (j < s.size() && digit(s[j]) && j - i < 7) ++j;
  if (j == i || j - i > 6 || (j < s.size() && digit(s[j]))) return 0;
  int n = std::stoi(std::string(s.substr(i, j - i)));
  if (n <= 0) return 0;
  i = j;
  return n;
}

// Optional "-B", "–B" or " to B" after a first page number.
int read_range_end(std::string_view s, std::size_t& i) {
  std::size_t j = i;
  skip_spaces(s, j);
  if (j < s.size() && s[j] == '-') {
    ++j;
  } else if (s.substr(j).starts_with(kEnDash)) {
    j += kEnDash.size();
  } else if (s.substr(j).starts_with("to ")) {
    j += 3;
  } else {
    return 0;
  }
  skip_spaces(s, j);
  int b = read_number(s, j);
  if (b) i = j;
  return b;
}

void add_range(std::vector<int>& pages, int a, int b) {
  if (b == 0) {
    pages.push_back(a);
    return;
  }
  if (b < a) std::swap(a, b);
  if (b - a > kMaxRangeExpansion) {
    pages.push_back(a);
    pages.push_back(b);
    return;
  }
  for (int p = a; p <= b; ++p) pages.push_back(p);
}

void normalize(std::vector<int>& pages) {
  std::sort(pages.begin(), pages.end());
  pages.erase(std::unique(pages.begin(), pages.end()), pages.end());
}

struct QuoteSpan {
  std::size_t open;
  std::size_t close_end;
  std::string text;
};

std::vector<QuoteSpan> find_quotes(std::string_view s) {
  std::vector<QuoteSpan> quotes;
  std::size_t i = 0;
  while (i < s.size()) {
    std::size_t body = 0;
    if (s[i] == '"') {
      body = i + 1;
    } else if (s.substr(i).starts_with(kLeftCurly)) {
      body = i + kLeftCurly.size();
    } else {
      ++i;
      continue;
    }
    std::size_t j = body;
    std::size_t close_len = 0;
    while (j < s.size()) {
      if (s[j] == '"') {
        close_len = 1;
        break;
      }
      if (s.substr(j).starts_with(kRightCurly)) {
        close_len = kRightCurly.size();
        break;
      }
      ++j;
    }
    if (close_len == 0) break;  // unterminated
    if (j > body) quotes.push_back({i, j + close_len, std::string(s.substr(body, j - body))});
    i = j + close_len;
  }
  return quotes;
}

bool has_phrase(std::string_view lower, std::string_view phrase) {
  std::size_t pos = 0;
  while ((pos = lower.find(phrase, pos)) != std::string_view::npos) {
    bool left = pos == 0 || !alpha(lower[pos - 1]);
    std::size_t end = pos + phrase.size();
    bool right = end >= lower.size() || !alpha(lower[end]);
    if (left && right) return true;
    pos += 1;
  }
  return false;
}

std::string_view first_sentence(std::string_view s) {
  for (std::size_t i = 0; i < s.size(); ++i) {
    char c = s[i];
    if ((c == '.' || c == '!' || c == '?') && (i + 1 == s.size() || std::isspace(static_cast<unsigned char>(s[i + 1]))))
      return s.substr(0, i + 1);
  }
  return s;
}

}  // namespace

std::string_view to_string(Polarity p) {
  switch (p) {
    case Polarity::yes: return "yes";
    case Polarity::no: return "no";
    case Polarity::idk: return "idk";
  }
  return "";
}

std::vector<int> find_pages(std::string_view text) {
  const std::string lower = to_lower(text);
  const std::string_view s = lower;
  std::vector<int> pages;
  std::size_t i = 0;
  while (i < s.size()) {
    if (i > 0 && alpha(s[i - 1])) {
      ++i;
      continue;
    }
    std::size_t j = i;
    bool matched = false;
    if (s.substr(i).starts_with("pages")) {
      j = i + 5;
      matched = j < s.size() && (s[j] == ' ' || s[j] == '\t');
    } else if (s.substr(i).starts_with("page")) {
      j = i + 4;
      matched = j < s.size() && (s[j] == ' ' || s[j] == '\t');
    } else if (s.substr(i).starts_with("pp.")) {
      j = i + 3;
      matched = true;
    } else if (s.substr(i).starts_with("p.")) {
      j = i + 2;
      matched = true;
    }
    if (matched) {
      skip_spaces(s, j);
      if (int a = read_number(s, j)) {
        add_range(pages, a, read_range_end(s, j));
        i = j;
        continue;
      }
    }
    ++i;
  }
  normalize(pages);
  return pages;
}

ParsedAnswer parse_answer(std::string_view raw) {
  ParsedAnswer out;
  const std::string lower = to_lower(raw);
  if (has_phrase(lower, "i don't know") || has_phrase(lower, "i don\xE2\x80\x99t know")) {
    out.dont_know = true;
    out.polarity = Polarity::idk;
    return out;
  }

  auto sentence = trim(first_sentence(std::string_view(lower)));
  bool yes_cue = false, no_cue = false;
  std::string lead;
  for (std::size_t i = 0; i < sentence.size();) {
    if (!alpha(sentence[i])) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < sentence.size() && alpha(sentence[j])) ++j;
    auto word = sentence.substr(i, j - i);
    if (lead.empty()) lead = std::string(word);
    yes_cue |= word == "yes";
    no_cue |= word == "no";
    i = j;
  }
  if (lead == "yes") {
    out.polarity = Polarity::yes;
  } else if (lead == "no") {
    out.polarity = Polarity::no;
  } else if (yes_cue != no_cue) {
    out.polarity = yes_cue ? Polarity::yes : Polarity::no;
  } else {
    out.polarity = Polarity::idk;
    out.ambiguous = true;
  }

  auto quotes = find_quotes(raw);
  std::vector<int> tail;
  if (!quotes.empty()) tail = find_pages(raw.substr(quotes.back().close_end));
  for (std::size_t q = 0; q < quotes.size(); ++q) {
    std::size_t seg_end = q + 1 < quotes.size() ? quotes[q + 1].open : raw.size();
    auto seg = find_pages(raw.substr(quotes[q].close_end, seg_end - quotes[q].close_end));
    out.quote_pages.push_back(seg.empty() ? tail : seg);
    out.quotes.push_back(std::move(quotes[q].text));
  }
  out.pages = find_pages(raw);
  return out;
}

std::string render_answer(Polarity polarity, const std::vector<int>& pages) {
  std::string s;
  switch (polarity) {
    case Polarity::yes: s = "Yes."; break;
    case Polarity::no: s = "No."; break;
    case Polarity::idk: s = pages.empty() ? "I don't know." : "Unclear."; break;
  }
  for (std::size_t i = 0; i < pages.size(); ++i) {
    s += i == 0 ? " See page " : ", page ";
    s += std::to_string(pages[i]);
  }
  if (!pages.empty()) s += '.';
  return s;
}

}  // namespace planpeer
