#pragma once

#include <cstddef>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "snipforge/corpus.hpp"

namespace snipforge {

enum class ErrorSubtype { kIncorrectMixing, kMissingAlthough, kOnInsertion, kInputModification };

std::string_view to_string(ErrorSubtype subtype);

struct ExactTemplate {
  TemplateId template_id = 0;
  bool operator==(const ExactTemplate&) const = default;
};

struct NewFusion {
  std::string connective;  // space-joined tokens
  bool operator==(const NewFusion&) const = default;
};

struct GenerationError {
  ErrorSubtype subtype = ErrorSubtype::kIncorrectMixing;
  Tokens connective;
  bool operator==(const GenerationError&) const = default;
};

using ConnectiveClass = std::variant<ExactTemplate, NewFusion, GenerationError>;

// Connecting strings produced by fusing two template connectives or by
// appending a comma to one.
class FusionInventory {
 public:
  // Observed fusions plus every head ("however", "but", "yet",
  // "on the other hand") alone, with a comma, and with a comma followed by a
  // template tail clause; inventory template connectives are excluded.
  static FusionInventory standard();

  void add(std::string_view connective);
  bool contains(std::span<const Token> connective) const;
  std::size_t size() const { return forms_.size(); }
  const std::set<std::string>& forms() const { return forms_; }

 private:
  std::set<std::string> forms_;
};

// prediction = lead + positive + middle + negative + trail, taking the
// leftmost positive occurrence and the leftmost negative after it.
struct OpinionLayout {
  Tokens lead;
  Tokens middle;
  Tokens trail;
};

std::optional<OpinionLayout> locate_opinions(std::span<const Token> prediction,
                                             std::span<const Token> positive,
                                             std::span<const Token> negative);

// The located layout's lead + middle + trail without the two sentence-final
// stops; falls back to isolate_connective when the opinions are not intact.
Tokens predicted_connective(std::span<const Token> prediction,
                            const SnippetInstance& instance);

// Priority: exact reference match, then a known fusion between intact
// opinions, then an error (input modification, missing "although", lone "on",
// otherwise incorrect mixing).
ConnectiveClass classify(std::span<const Token> prediction,
                         const SnippetInstance& instance,
                         const FusionInventory& fusions);

// Label, fraction; sorted by fraction descending then label.
using Distribution = std::vector<std::pair<std::string, double>>;

inline constexpr std::string_view kNegativeFirstWord = "[first word from the negative opinion]";

// Replaces every connective token equal to the negative opinion's first token.
std::string mixing_pattern(std::span<const Token> connective, const SnippetInstance& instance);

// Pattern counts over the given incorrect-mixing predictions, each divided by
// `failure_count` (all failures, not only mixing ones).
Distribution mine_mixing_patterns(std::span<const PredictionRecord> mixing_errors,
                                  std::span<const SnippetInstance> instances,
                                  std::size_t failure_count);

struct ClassifiedPrediction {
  std::string instance_id;
  ConnectiveClass verdict;
};

struct AnalysisReport {
  std::size_t evaluated = 0;
  std::size_t exact_count = 0;
  std::size_t new_fusion_count = 0;
  std::size_t error_count = 0;
  double exact_match_fraction = 0.0;
  double new_fusion_fraction = 0.0;
  double error_fraction = 0.0;
  Distribution exact_distribution;  // over exact matches
  Distribution new_distribution;    // over new fusions
  Distribution error_distribution;  // over failures
  Distribution mixing_patterns;     // over failures
  std::vector<ClassifiedPrediction> rows;  // sorted by instance id
};

// Throws ValidationError on duplicate or unknown prediction ids.
AnalysisReport analyze_corpus(std::span<const PredictionRecord> predictions,
                              std::span<const SnippetInstance> instances,
                              const FusionInventory& fusions);

}  // namespace snipforge
