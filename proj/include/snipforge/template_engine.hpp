#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "snipforge/corpus.hpp"

namespace snipforge {

// A fusion pattern: prefix + POS + infix + NEG + suffix.
struct Template {
  TemplateId id = 0;
  Tokens prefix;
  Tokens infix;
  Tokens suffix;

  // Parses "{POS} . but , {NEG} ." style patterns. Both slots must appear
  // once, POS before NEG. Throws ValidationError otherwise.
  static Template parse(TemplateId id, std::string_view pattern);

  // Template tokens minus the sentence-boundary full stops, in order:
  // [but, ","] for 1, [although, ",", according, to, a, few, users] for 4.
  Tokens connective() const;

  // Display form used in analysis tables, e.g. "but ," or
  // "although [positive opinion] , according to a few users".
  std::string label() const;

  bool operator==(const Template&) const = default;
};

// The seven patterns, ids 1..7.
std::span<const Template> template_inventory();
// Throws ValidationError for ids outside 1..7.
const Template& inventory_template(TemplateId id);

// Throws ValidationError when either opinion is empty.
Tokens render(const Template& tmpl, std::span<const Token> positive,
              std::span<const Token> negative);
Tokens render(const Template& tmpl, const OpinionPair& pair);

// One rendering per inventory template, ordered by id.
std::vector<Reference> references_for(const OpinionPair& pair);

enum class StrategyMode { kRoundRobin, kSeededRandom, kAllTemplates };

std::string_view to_string(StrategyMode mode);
std::optional<StrategyMode> parse_strategy_mode(std::string_view s);

struct GenerationStrategy {
  StrategyMode mode = StrategyMode::kRoundRobin;
  // Only read in kSeededRandom mode.
  std::uint64_t seed = 13;
};

// Product-level split fractions (train, validation, test).
struct SplitSpec {
  std::array<double, 3> fractions{0.786, 0.098, 0.116};
  std::uint64_t seed = 13;

  // Non-negative fractions summing to 1 (within 1e-6).
  void validate() const;
  // Parses "0.786,0.098,0.116".
  static SplitSpec parse(std::string_view text, std::uint64_t seed);
};

struct DatasetBuild {
  std::vector<SnippetInstance> instances;
  std::vector<std::string> warnings;
};

// Per product, every positive x negative pair, ordered by product id then
// (positive index, negative index). Each product lands in exactly one split.
// Products missing either polarity are skipped with a warning.
DatasetBuild build_dataset(std::span<const Segment> positives,
                           std::span<const Segment> negatives,
                           const GenerationStrategy& strategy,
                           const SplitSpec& splits);

// Split of each product (indexed in sorted-id order): a seeded shuffle, then
// cuts at round(count * cumulative fraction).
std::vector<Split> assign_splits(std::size_t product_count, const SplitSpec& spec);

}  // namespace snipforge
