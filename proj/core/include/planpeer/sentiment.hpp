#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "planpeer/text.hpp"

namespace planpeer {

enum class SentimentLabel { positive, negative };

std::string_view to_string(SentimentLabel l);

struct ClassifierOutput {
  SentimentLabel label = SentimentLabel::positive;
  double confidence = 0.0;
};

struct PolarityScore {
  SentimentLabel label = SentimentLabel::positive;
  double confidence = 0.0;
  /// +confidence for positive, -confidence for negative.
  double signed_value = 0.0;
};

class SentimentClassifier {
 public:
  virtual ~SentimentClassifier() = default;
  virtual ClassifierOutput classify(std::string_view text) = 0;
};

/// Counts lexicon hits: confidence = |pos - neg| / (pos + neg), labelled
/// positive when pos >= neg; 0.5 positive when nothing matches.
class LexiconClassifier final : public SentimentClassifier {
 public:
  LexiconClassifier(StopwordSet positive, StopwordSet negative)
      : positive_(std::move(positive)), negative_(std::move(negative)) {}

  /// Reads positive.txt and negative.txt from `dir`.
  static LexiconClassifier load(const std::filesystem::path& dir);

  ClassifierOutput classify(std::string_view text) override;

 private:
  StopwordSet positive_;
  StopwordSet negative_;
};

/// Throws ProviderError if the classifier fails or reports a confidence
/// outside [0, 1].
PolarityScore polarity(std::string_view text, SentimentClassifier& classifier);
PolarityScore to_polarity(const ClassifierOutput& out);

}  // namespace planpeer
