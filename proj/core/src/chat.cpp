#include "planpeer/chat.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "planpeer/error.hpp"

namespace planpeer {

namespace {

std::string sanitize_quote(std::string_view s) {
  std::string out(s);
  std::replace(out.begin(), out.end(), '"', '\'');
  return out;
}

std::vector<std::pair<std::size_t, std::string_view>> lines_of(std::string_view text) {
  std::vector<std::pair<std::size_t, std::string_view>> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    out.emplace_back(pos, text.substr(pos, nl - pos));
    pos = nl + 1;
  }
  return out;
}

std::string join_quoted(const std::vector<std::pair<std::string, int>>& items) {
  std::string s;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i > 0) s += i + 1 == items.size() ? " and " : ", ";
    s += "\"" + items[i].first + "\" (page " + std::to_string(items[i].second) + ")";
  }
  return s;
}

}  // namespace

void GenerationConfig::validate() const {
  if (!(temperature >= 0.0)) throw ConfigError("temperature must be non-negative");
  if (max_output_tokens == 0) throw ConfigError("max_output_tokens must be positive");
}

int ContextPassage::page_at(std::size_t offset) const {
  if (page_starts.empty()) return pages.first;
  int page = page_starts.front().second;
  for (const auto& [start, number] : page_starts) {
    if (start > offset) break;
    page = number;
  }
  return page;
}

MockChatProvider::MockChatProvider(MockRules rules) : rules_(std::move(rules)) {}

std::string MockChatProvider::complete(const ChatRequest& r) {
  if (r.kind == PromptKind::taxonomy) return answer_taxonomy(r);
  if (r.context.empty()) return "I don't know.";
  for (const auto& p : r.context)
    if (!rules_.uncertain_marker.empty() && p.text.find(rules_.uncertain_marker) != std::string::npos)
      return "I don't know.";
  switch (r.kind) {
    case PromptKind::binary: return answer_binary(r);
    case PromptKind::extraction: return answer_extraction(r);
    case PromptKind::screening: return answer_screening(r);
    case PromptKind::taxonomy: break;
  }
  return "I don't know.";
}

std::string MockChatProvider::answer_binary(const ChatRequest& r) const {
  auto words = tokenize(r.label, rules_.stopwords);
  if (words.empty()) return "No.";
  for (const auto& p : r.context) {
    auto tokens = tokenize(p.text);
    std::unordered_set<std::string> present(tokens.begin(), tokens.end());
    bool all = std::all_of(words.begin(), words.end(), [&](const std::string& w) { return present.contains(w); });
    if (all)
      return "Yes, the provided context addresses " + r.label + " on page " + std::to_string(p.pages.first) + ".";
  }
  return "No.";
}

std::string MockChatProvider::answer_extraction(const ChatRequest& r) const {
  auto marker_it = rules_.markers.find(r.tier);
  if (marker_it == rules_.markers.end() || marker_it->second.empty()) return "I don't know.";
  const std::string& marker = marker_it->second;

  std::vector<std::pair<std::string, int>> found;
  std::set<std::string> seen;
  for (const auto& p : r.context) {
    for (const auto& [line_offset, line] : lines_of(p.text)) {
      for (auto span : sentence_spans(line)) {
        auto sentence = line.substr(span.begin, span.end - span.begin);
        if (!sentence.starts_with(marker)) continue;
        auto statement = sanitize_quote(trim(sentence.substr(marker.size())));
        if (statement.empty() || !seen.insert(statement).second) continue;
        found.emplace_back(std::move(statement), p.page_at(line_offset + span.begin));
      }
    }
  }
  const std::string what(plural(r.tier));
  if (found.empty()) return "No, the provided context does not list any " + what + ".";
  return "Yes, the document includes a dedicated section listing " + what +
         ". The relevant sentences are: " + join_quoted(found) + ".";
}

std::string MockChatProvider::answer_screening(const ChatRequest& r) const {
  const auto phrase = to_lower(rules_.screening_phrase);
  for (const auto& p : r.context) {
    for (const auto& [line_offset, line] : lines_of(p.text)) {
      if (to_lower(line).find(phrase) == std::string::npos) continue;
      return "Yes, the document includes a dedicated section acknowledging climate equity challenges: \"" +
             sanitize_quote(trim(line)) + "\" on page " + std::to_string(p.page_at(line_offset)) + ".";
    }
  }
  return "No, the provided context does not include a dedicated section on climate equity challenges.";
}

std::string MockChatProvider::answer_taxonomy(const ChatRequest& r) const {
  std::unordered_map<std::string, std::size_t> counts;
  for (const auto& p : r.context)
    for (auto& t : tokenize(p.text, rules_.stopwords)) ++counts[t];
  std::vector<std::pair<std::string, std::size_t>> ranked(counts.begin(), counts.end());
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    return a.second != b.second ? a.second > b.second : a.first < b.first;
  });

  std::string out;
  for (std::size_t i = 0; i < rules_.taxonomy_size; ++i) {
    std::string label;
    if (i < ranked.size()) {
      label = ranked[i].first;
      label[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(label[0])));
    } else {
      label = "Theme " + std::to_string(i + 1);
    }
    out += std::to_string(i + 1) + ". " + label + "\n";
  }
  return out;
}

RateLimiter::RateLimiter(std::size_t max_in_flight, std::size_t requests_per_minute)
    : max_in_flight_(std::max<std::size_t>(1, max_in_flight)), per_minute_(requests_per_minute) {}

RateLimiter::Permit RateLimiter::acquire() {
  using clock = std::chrono::steady_clock;
  std::unique_lock lock(mu_);
  while (true) {
    auto now = clock::now();
    while (!recent_.empty() && now - recent_.front() >= std::chrono::minutes(1)) recent_.pop_front();
    const bool slot = in_flight_ < max_in_flight_;
    const bool budget = per_minute_ == 0 || recent_.size() < per_minute_;
    if (slot && budget) break;
    if (!budget) {
      cv_.wait_until(lock, recent_.front() + std::chrono::minutes(1));
    } else {
      cv_.wait(lock);
    }
  }
  ++in_flight_;
  if (per_minute_ > 0) recent_.push_back(clock::now());
  return Permit(this);
}

void RateLimiter::release() {
  {
    std::lock_guard lock(mu_);
    --in_flight_;
  }
  cv_.notify_all();
}

}  // namespace planpeer
