#include "snipforge/rouge.hpp"

#include <algorithm>
#include <string_view>
#include <tuple>
#include <unordered_map>
#include <unordered_set>

#include "snipforge/parallel.hpp"

namespace snipforge {
namespace {

// Tokens never contain spaces, so a space-joined window is a unique key.
std::unordered_map<std::string, std::size_t> count_ngrams(std::span<const Token> tokens,
                                                          std::size_t n) {
  std::unordered_map<std::string, std::size_t> counts;
  if (tokens.size() < n) return counts;
  for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
    ++counts[join(tokens.subspan(i, n))];
  }
  return counts;
}

Tokens without_punctuation(std::span<const Token> tokens) {
  Tokens words;
  for (const auto& t : tokens) {
    if (!is_punctuation_token(t)) words.push_back(t);
  }
  return words;
}

}  // namespace

double ngram_recall(std::span<const Token> candidate,
                    std::span<const Token> reference, std::size_t n) {
  if (n == 0) throw ValidationError("n-gram order must be at least 1");
  if (reference.size() < n) {
    return std::equal(candidate.begin(), candidate.end(), reference.begin(),
                      reference.end())
               ? 1.0
               : 0.0;
  }
  const auto ref_counts = count_ngrams(reference, n);
  const auto cand_counts = count_ngrams(candidate, n);
  std::size_t matched = 0;
  for (const auto& [gram, count] : ref_counts) {
    auto it = cand_counts.find(gram);
    if (it != cand_counts.end()) matched += std::min(count, it->second);
  }
  const std::size_t total = reference.size() - n + 1;
  return static_cast<double>(matched) / static_cast<double>(total);
}

std::size_t lcs_length(std::span<const Token> a, std::span<const Token> b) {
  // Two-row DP over b.
  std::vector<std::size_t> prev(b.size() + 1, 0);
  std::vector<std::size_t> cur(b.size() + 1, 0);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      cur[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1 : std::max(prev[j], cur[j - 1]);
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

double lcs_recall(std::span<const Token> candidate,
                  std::span<const Token> reference) {
  if (reference.empty()) return candidate.empty() ? 1.0 : 0.0;
  return static_cast<double>(lcs_length(candidate, reference)) /
         static_cast<double>(reference.size());
}

Tokens isolate_connective(std::span<const Token> output,
                          std::span<const Token> input) {
  std::unordered_map<std::string_view, std::size_t> available;
  for (const auto& t : input) ++available[t];
  Tokens survivors;
  for (const auto& t : output) {
    auto it = available.find(t);
    if (it != available.end() && it->second > 0) {
      --it->second;
    } else {
      survivors.push_back(t);
    }
  }
  return survivors;
}

InstanceScore score_instance(const PredictionRecord& prediction,
                             const SnippetInstance& instance) {
  if (prediction.instance_id != instance.id) {
    throw ValidationError("prediction " + prediction.instance_id +
                          " scored against instance " + instance.id);
  }
  if (instance.references.empty()) {
    throw ValidationError("instance " + instance.id + " has no references");
  }
  const Tokens& out = prediction.output_tokens;
  InstanceScore s;
  s.instance_id = instance.id;
  // Word-level: the "although X , ..." layout drops the full stop after X
  // without losing any input content.
  s.rouge_l_input =
      lcs_recall(without_punctuation(out), without_punctuation(instance.input_tokens));

  const Tokens out_connective = isolate_connective(out, instance.input_tokens);
  std::tuple<double, double, TemplateId> best{-1.0, -1.0, 0};
  for (const auto& ref : instance.references) {
    const double r3 = ngram_recall(out, ref.tokens, 3);
    const double r4 = ngram_recall(out, ref.tokens, 4);
    s.rouge_3_best = std::max(s.rouge_3_best, r3);
    s.rouge_4_best = std::max(s.rouge_4_best, r4);
    // Lower template id wins ties, hence the negation.
    const std::tuple<double, double, TemplateId> key{r4, r3, -ref.template_id};
    if (key > best) best = key;

    const Tokens ref_connective = isolate_connective(ref.tokens, instance.input_tokens);
    s.conn_rouge_2 = std::max(s.conn_rouge_2, ngram_recall(out_connective, ref_connective, 2));
    s.conn_rouge_3 = std::max(s.conn_rouge_3, ngram_recall(out_connective, ref_connective, 3));
  }
  s.best_reference_id = -std::get<2>(best);
  return s;
}

EvalReport score_corpus(std::span<const PredictionRecord> predictions,
                        std::span<const SnippetInstance> instances) {
  std::unordered_map<std::string_view, const SnippetInstance*> by_id;
  for (const auto& inst : instances) {
    if (!by_id.emplace(inst.id, &inst).second) {
      throw ValidationError("duplicate instance id in dataset: " + inst.id);
    }
  }
  std::unordered_set<std::string_view> seen;
  std::vector<const SnippetInstance*> targets;
  targets.reserve(predictions.size());
  for (const auto& p : predictions) {
    if (!seen.insert(p.instance_id).second) {
      throw ValidationError("duplicate instance_id in predictions: " + p.instance_id);
    }
    auto it = by_id.find(p.instance_id);
    if (it == by_id.end()) {
      throw ValidationError("prediction for unknown instance_id: " + p.instance_id);
    }
    targets.push_back(it->second);
  }

  EvalReport report;
  report.per_instance.resize(predictions.size());
  parallel_for(predictions.size(), [&](std::size_t i) {
    report.per_instance[i] = score_instance(predictions[i], *targets[i]);
  });
  std::sort(report.per_instance.begin(), report.per_instance.end(),
            [](const InstanceScore& a, const InstanceScore& b) {
              return a.instance_id < b.instance_id;
            });
  report.evaluated = report.per_instance.size();
  report.skipped = instances.size() - report.evaluated;
  if (report.evaluated > 0) {
    CorpusMeans m;
    for (const auto& s : report.per_instance) {
      m.rouge_l_input += s.rouge_l_input;
      m.rouge_3_best += s.rouge_3_best;
      m.rouge_4_best += s.rouge_4_best;
      m.conn_rouge_2 += s.conn_rouge_2;
      m.conn_rouge_3 += s.conn_rouge_3;
    }
    const auto n = static_cast<double>(report.evaluated);
    m.rouge_l_input /= n;
    m.rouge_3_best /= n;
    m.rouge_4_best /= n;
    m.conn_rouge_2 /= n;
    m.conn_rouge_3 /= n;
    report.corpus = m;
  }
  return report;
}

}  // namespace snipforge
