#pragma once

#include <chrono>
#include <condition_variable>
#include <cstddef>
#include <deque>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

#include "planpeer/corpus.hpp"
#include "planpeer/taxonomy.hpp"
#include "planpeer/text.hpp"

namespace planpeer {

struct GenerationConfig {
  std::string model_id = "gpt-4o-mini";
  double temperature = 0.0;
  std::size_t max_output_tokens = 1024;
  std::string prompt_profile = "default";

  void validate() const;
};

enum class PromptKind { screening, extraction, binary, taxonomy };

/// A retrieved chunk as shown to the model, with enough page provenance to
/// cite the page of any character inside it.
struct ContextPassage {
  std::string chunk_id;
  std::string text;
  PageRange pages;
  /// (offset into `text`, page number) at each page start, ascending; the
  /// first entry has offset 0.
  std::vector<std::pair<std::size_t, int>> page_starts;

  int page_at(std::size_t offset) const;
};

struct ChatRequest {
  PromptKind kind = PromptKind::binary;
  std::string prompt;  // fully rendered
  GenerationConfig generation;
  /// Theme label for binary prompts; empty otherwise.
  std::string label;
  Domain domain = Domain::transportation;
  Tier tier = Tier::policy;
  std::vector<ContextPassage> context;
};

class ChatProvider {
 public:
  virtual ~ChatProvider() = default;
  virtual std::string id() const = 0;
  /// Throws ProviderError. Implementations must be safe to call from
  /// several threads.
  virtual std::string complete(const ChatRequest& request) = 0;
};

struct MockRules {
  std::string screening_phrase = "climate equity";
  std::map<Tier, std::string> markers = {
      {Tier::policy, "POLICY:"}, {Tier::strategy, "STRATEGY:"}, {Tier::action, "ACTION:"}};
  /// Any retrieved passage containing this makes every answer "I don't know".
  std::string uncertain_marker = "[[UNCERTAIN]]";
  std::size_t taxonomy_size = 20;
  StopwordSet stopwords;
};

/// Rule-based stand-in for a chat model, fully determined by the request's
/// retrieved context:
///  - binary: "Yes, ... page N." iff one passage contains every content word
///    of the label (N = that passage's first page), else "No.";
///  - extraction: quotes each sentence starting with the tier's marker;
///  - screening: quotes the first line containing the screening phrase;
///  - taxonomy: the most frequent content words, title-cased, numbered.
class MockChatProvider final : public ChatProvider {
 public:
  explicit MockChatProvider(MockRules rules = {});

  std::string id() const override { return "mock"; }
  std::string complete(const ChatRequest& request) override;

  const MockRules& rules() const noexcept { return rules_; }

 private:
  std::string answer_binary(const ChatRequest& r) const;
  std::string answer_extraction(const ChatRequest& r) const;
  std::string answer_screening(const ChatRequest& r) const;
  std::string answer_taxonomy(const ChatRequest& r) const;

  MockRules rules_;
};

/// Bounds concurrent requests and requests per rolling minute.
class RateLimiter {
 public:
  RateLimiter(std::size_t max_in_flight, std::size_t requests_per_minute);

  class Permit {
   public:
    explicit Permit(RateLimiter* owner) : owner_(owner) {}
    Permit(Permit&& o) noexcept : owner_(std::exchange(o.owner_, nullptr)) {}
    Permit(const Permit&) = delete;
    Permit& operator=(const Permit&) = delete;
    Permit& operator=(Permit&&) = delete;
    ~Permit() {
      if (owner_) owner_->release();
    }

   private:
    RateLimiter* owner_;
  };

  Permit acquire();

 private:
  void release();

  std::size_t max_in_flight_;
  std::size_t per_minute_;
  std::size_t in_flight_ = 0;
  std::deque<std::chrono::steady_clock::time_point> recent_;
  std::mutex mu_;
  std::condition_variable cv_;
};

class RateLimitedChatProvider final : public ChatProvider {
 public:
  RateLimitedChatProvider(ChatProvider& inner, std::shared_ptr<RateLimiter> limiter)
      : inner_(inner), limiter_(std::move(limiter)) {}

  std::string id() const override { return inner_.id(); }
  std::string complete(const ChatRequest& request) override {
    auto permit = limiter_->acquire();
    return inner_.complete(request);
  }

 private:
  ChatProvider& inner_;
  std::shared_ptr<RateLimiter> limiter_;
};

}  // namespace planpeer
