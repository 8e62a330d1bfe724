#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "snipforge/corpus.hpp"

namespace snipforge {

// Clipped n-gram recall: sum over reference n-grams of
// min(candidate count, reference count) / reference n-gram total. A reference
// shorter than n scores 1.0 against an identical candidate and 0.0 otherwise.
double ngram_recall(std::span<const Token> candidate,
                    std::span<const Token> reference, std::size_t n);

std::size_t lcs_length(std::span<const Token> a, std::span<const Token> b);

// |LCS| / |reference|. An empty reference scores 1.0 only against an empty
// candidate.
double lcs_recall(std::span<const Token> candidate,
                  std::span<const Token> reference);

// Order-preserving multiset difference: each output token is dropped while
// the input still holds an unconsumed copy of it.
Tokens isolate_connective(std::span<const Token> output,
                          std::span<const Token> input);

struct InstanceScore {
  std::string instance_id;
  double rouge_l_input = 0.0;
  double rouge_3_best = 0.0;
  double rouge_4_best = 0.0;
  double conn_rouge_2 = 0.0;
  double conn_rouge_3 = 0.0;
  TemplateId best_reference_id = 0;

  bool operator==(const InstanceScore&) const = default;
};

struct CorpusMeans {
  double rouge_l_input = 0.0;
  double rouge_3_best = 0.0;
  double rouge_4_best = 0.0;
  double conn_rouge_2 = 0.0;
  double conn_rouge_3 = 0.0;
};

struct EvalReport {
  std::vector<InstanceScore> per_instance;  // sorted by instance id
  std::optional<CorpusMeans> corpus;        // absent when nothing was scored
  std::size_t evaluated = 0;
  // Dataset instances without a prediction.
  std::size_t skipped = 0;
};

// rouge_l_input compares words only; punctuation tokens are dropped from both
// sides first. Each best-of score is maximised over the references independently.
// best_reference_id maximises (rouge_4, rouge_3), lowest template id on ties.
// Throws ValidationError when the ids differ.
InstanceScore score_instance(const PredictionRecord& prediction,
                             const SnippetInstance& instance);

// Throws ValidationError on duplicate or unknown prediction ids.
EvalReport score_corpus(std::span<const PredictionRecord> predictions,
                        std::span<const SnippetInstance> instances);

}  // namespace snipforge
