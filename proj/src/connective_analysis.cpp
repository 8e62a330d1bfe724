#include "snipforge/connective_analysis.hpp"

#include <algorithm>
#include <map>
#include <unordered_map>
#include <unordered_set>

#include "snipforge/parallel.hpp"
#include "snipforge/rouge.hpp"
#include "snipforge/template_engine.hpp"

namespace snipforge {
namespace {

constexpr std::string_view kObservedFusions[] = {
    "yet, there are people who have complained that",
    "but, there are people who have complained that",
    "however, some users have also mentioned that",
    "but, some users have also mentioned that",
    "however,",
    "yet,",
    "but",
    "yet",
};

constexpr std::string_view kHeads[] = {"however", "but", "yet", "on the other hand"};

constexpr std::string_view kTails[] = {
    "some users have also mentioned that",
    "there are people who have complained that",
    "a few users have complained that",
};

Distribution to_distribution(const std::map<std::string, std::size_t>& counts,
                             std::size_t denominator) {
  Distribution out;
  if (denominator == 0) return out;
  std::vector<std::pair<std::string, std::size_t>> sorted(counts.begin(), counts.end());
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  for (const auto& [label, count] : sorted) {
    out.emplace_back(label, static_cast<double>(count) / static_cast<double>(denominator));
  }
  return out;
}

std::unordered_map<std::string_view, const SnippetInstance*> index_instances(
    std::span<const SnippetInstance> instances) {
  std::unordered_map<std::string_view, const SnippetInstance*> by_id;
  for (const auto& inst : instances) {
    if (!by_id.emplace(inst.id, &inst).second) {
      throw ValidationError("duplicate instance id in dataset: " + inst.id);
    }
  }
  return by_id;
}

const SnippetInstance& resolve(
    const std::unordered_map<std::string_view, const SnippetInstance*>& by_id,
    const std::string& id) {
  auto it = by_id.find(id);
  if (it == by_id.end()) throw ValidationError("prediction for unknown instance_id: " + id);
  return *it->second;
}

}  // namespace

std::string_view to_string(ErrorSubtype subtype) {
  switch (subtype) {
    case ErrorSubtype::kIncorrectMixing: return "incorrect_mixing";
    case ErrorSubtype::kMissingAlthough: return "missing_although";
    case ErrorSubtype::kOnInsertion: return "on_insertion";
    case ErrorSubtype::kInputModification: return "input_modification";
  }
  return "incorrect_mixing";
}

FusionInventory FusionInventory::standard() {
  FusionInventory inv;
  for (auto s : kObservedFusions) inv.add(s);
  for (auto head : kHeads) {
    const std::string h(head);
    inv.add(h);
    inv.add(h + " ,");
    for (auto tail : kTails) inv.add(h + " , " + std::string(tail));
  }
  for (const auto& t : template_inventory()) inv.forms_.erase(join(t.connective()));
  return inv;
}

void FusionInventory::add(std::string_view connective) {
  const Tokens tokens = tokenize(connective);
  if (!tokens.empty()) forms_.insert(join(tokens));
}

bool FusionInventory::contains(std::span<const Token> connective) const {
  return forms_.contains(join(connective));
}

std::optional<OpinionLayout> locate_opinions(std::span<const Token> prediction,
                                             std::span<const Token> positive,
                                             std::span<const Token> negative) {
  if (positive.empty() || negative.empty()) return std::nullopt;
  const auto pos_it =
      std::search(prediction.begin(), prediction.end(), positive.begin(), positive.end());
  if (pos_it == prediction.end()) return std::nullopt;
  const auto pos_end = pos_it + static_cast<std::ptrdiff_t>(positive.size());
  const auto neg_it = std::search(pos_end, prediction.end(), negative.begin(), negative.end());
  if (neg_it == prediction.end()) return std::nullopt;
  const auto neg_end = neg_it + static_cast<std::ptrdiff_t>(negative.size());
  OpinionLayout layout;
  layout.lead.assign(prediction.begin(), pos_it);
  layout.middle.assign(pos_end, neg_it);
  layout.trail.assign(neg_end, prediction.end());
  return layout;
}

namespace {

Tokens layout_connective(const OpinionLayout& layout) {
  Tokens out = layout.lead;
  auto mid = layout.middle.begin();
  if (mid != layout.middle.end() && *mid == ".") ++mid;
  out.insert(out.end(), mid, layout.middle.end());
  auto trail_end = layout.trail.end();
  if (trail_end != layout.trail.begin() && *(trail_end - 1) == ".") --trail_end;
  out.insert(out.end(), layout.trail.begin(), trail_end);
  return out;
}

}  // namespace

Tokens predicted_connective(std::span<const Token> prediction,
                            const SnippetInstance& instance) {
  if (auto layout = locate_opinions(prediction, instance.pair.positive.tokens,
                                    instance.pair.negative.tokens)) {
    return layout_connective(*layout);
  }
  return isolate_connective(prediction, instance.input_tokens);
}

ConnectiveClass classify(std::span<const Token> prediction,
                         const SnippetInstance& instance,
                         const FusionInventory& fusions) {
  for (const auto& ref : instance.references) {
    if (std::equal(prediction.begin(), prediction.end(), ref.tokens.begin(), ref.tokens.end())) {
      // References are stored in id order; the first hit is the lowest id.
      return ExactTemplate{ref.template_id};
    }
  }

  const Tokens& positive = instance.pair.positive.tokens;
  const auto layout = locate_opinions(prediction, positive, instance.pair.negative.tokens);
  if (!layout) {
    return GenerationError{ErrorSubtype::kInputModification,
                           isolate_connective(prediction, instance.input_tokens)};
  }
  Tokens connective = layout_connective(*layout);

  const bool between_opinions = layout->lead.empty() && !layout->middle.empty() &&
                                layout->middle.front() == "." &&
                                layout->trail == Tokens{"."};
  if (between_opinions && fusions.contains(connective)) {
    return NewFusion{join(connective)};
  }

  const bool repeated_first_word =
      !layout->lead.empty() &&
      std::all_of(layout->lead.begin(), layout->lead.end(),
                  [&](const Token& t) { return t == positive.front(); });
  if (instance.chosen_template == 4 && repeated_first_word) {
    return GenerationError{ErrorSubtype::kMissingAlthough, std::move(connective)};
  }
  if (connective == Tokens{"on"} || connective == Tokens{"on", ","}) {
    return GenerationError{ErrorSubtype::kOnInsertion, std::move(connective)};
  }
  return GenerationError{ErrorSubtype::kIncorrectMixing, std::move(connective)};
}

std::string mixing_pattern(std::span<const Token> connective, const SnippetInstance& instance) {
  const Tokens& negative = instance.pair.negative.tokens;
  std::string out;
  for (const auto& t : connective) {
    if (!out.empty()) out += ' ';
    if (!negative.empty() && t == negative.front()) {
      out += kNegativeFirstWord;
    } else {
      out += t;
    }
  }
  return out;
}

Distribution mine_mixing_patterns(std::span<const PredictionRecord> mixing_errors,
                                  std::span<const SnippetInstance> instances,
                                  std::size_t failure_count) {
  const auto by_id = index_instances(instances);
  std::map<std::string, std::size_t> counts;
  for (const auto& p : mixing_errors) {
    const SnippetInstance& inst = resolve(by_id, p.instance_id);
    ++counts[mixing_pattern(predicted_connective(p.output_tokens, inst), inst)];
  }
  return to_distribution(counts, failure_count);
}

AnalysisReport analyze_corpus(std::span<const PredictionRecord> predictions,
                              std::span<const SnippetInstance> instances,
                              const FusionInventory& fusions) {
  const auto by_id = index_instances(instances);
  std::unordered_set<std::string_view> seen;
  std::vector<const SnippetInstance*> targets;
  for (const auto& p : predictions) {
    if (!seen.insert(p.instance_id).second) {
      throw ValidationError("duplicate instance_id in predictions: " + p.instance_id);
    }
    targets.push_back(&resolve(by_id, p.instance_id));
  }

  AnalysisReport report;
  report.rows.resize(predictions.size());
  parallel_for(predictions.size(), [&](std::size_t i) {
    report.rows[i] = {predictions[i].instance_id,
                      classify(predictions[i].output_tokens, *targets[i], fusions)};
  });

  std::map<std::string, std::size_t> exact, fused, errors;
  std::vector<PredictionRecord> mixing;
  for (std::size_t i = 0; i < report.rows.size(); ++i) {
    const auto& verdict = report.rows[i].verdict;
    if (const auto* e = std::get_if<ExactTemplate>(&verdict)) {
      ++report.exact_count;
      ++exact[inventory_template(e->template_id).label()];
    } else if (const auto* f = std::get_if<NewFusion>(&verdict)) {
      ++report.new_fusion_count;
      ++fused[f->connective];
    } else {
      const auto& err = std::get<GenerationError>(verdict);
      ++report.error_count;
      ++errors[std::string(to_string(err.subtype))];
      if (err.subtype == ErrorSubtype::kIncorrectMixing) mixing.push_back(predictions[i]);
    }
  }
  std::sort(report.rows.begin(), report.rows.end(),
            [](const auto& a, const auto& b) { return a.instance_id < b.instance_id; });

  report.evaluated = predictions.size();
  if (report.evaluated > 0) {
    const auto n = static_cast<double>(report.evaluated);
    report.exact_match_fraction = static_cast<double>(report.exact_count) / n;
    report.new_fusion_fraction = static_cast<double>(report.new_fusion_count) / n;
    report.error_fraction = static_cast<double>(report.error_count) / n;
  }
  report.exact_distribution = to_distribution(exact, report.exact_count);
  report.new_distribution = to_distribution(fused, report.new_fusion_count);
  report.error_distribution = to_distribution(errors, report.error_count);
  report.mixing_patterns = mine_mixing_patterns(mixing, instances, report.error_count);
  return report;
}

}  // namespace snipforge
