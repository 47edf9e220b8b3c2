#include "planpeer/sentiment.hpp"

#include <cmath>

#include "planpeer/error.hpp"

namespace planpeer {

std::string_view to_string(SentimentLabel l) { return l == SentimentLabel::positive ? "positive" : "negative"; }

LexiconClassifier LexiconClassifier::load(const std::filesystem::path& dir) {
  return LexiconClassifier(load_stopwords(dir / "positive.txt"), load_stopwords(dir / "negative.txt"));
}

ClassifierOutput LexiconClassifier::classify(std::string_view text) {
  std::size_t pos = 0, neg = 0;
  for (const auto& t : tokenize(text)) {
    pos += positive_.contains(t);
    neg += negative_.contains(t);
  }
  if (pos + neg == 0) return {SentimentLabel::positive, 0.5};
  const double diff = pos >= neg ? static_cast<double>(pos - neg) : static_cast<double>(neg - pos);
  return {pos >= neg ? SentimentLabel::positive : SentimentLabel::negative, diff / static_cast<double>(pos + neg)};
}

PolarityScore to_polarity(const ClassifierOutput& out) {
  if (!std::isfinite(out.confidence) || out.confidence < 0.0 || out.confidence > 1.0)
    throw ProviderError("classifier confidence " + std::to_string(out.confidence) + " outside [0, 1]");
  PolarityScore s;
  s.label = out.label;
  s.confidence = out.confidence;
  s.signed_value = out.label == SentimentLabel::positive ? out.confidence : -out.confidence;
  return s;
}

PolarityScore polarity(std::string_view text, SentimentClassifier& classifier) {
  ClassifierOutput out;
  try {
    out = classifier.classify(text);
  } catch (const ProviderError&) {
    throw;
  } catch (const std::exception& e) {
    throw ProviderError(std::string("sentiment classifier failed: ") + e.what());
  }
  return to_polarity(out);
}

}  // namespace planpeer
