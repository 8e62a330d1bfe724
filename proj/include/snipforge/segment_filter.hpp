#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string_view>
#include <vector>

#include "snipforge/corpus.hpp"

namespace snipforge {

struct FilterConfig {
  std::size_t min_words = 3;
  std::set<Token> first_person_words{"i",  "me", "my",  "myself",   "mine",
                                     "we", "us", "our", "ourselves"};
  std::set<Token> leading_connectives{"because", "and",  "before", "but",
                                      "however", "now",  "of",     "then",
                                      "&",       "or"};
  std::uint64_t popularity_threshold = 18;
  // Tag untagged segments with the closed-class lexicon heuristic instead of
  // failing. Lower fidelity than a trained tagger.
  bool heuristic_tags = false;

  // Throws ValidationError when min_words == 0.
  void validate() const;
};

enum class FilterRule { kTooShort, kNoNounOrVerb, kFirstPerson };

std::string_view to_string(FilterRule rule);
std::optional<FilterRule> parse_filter_rule(std::string_view s);

struct FilterOutcome {
  bool kept = false;
  std::optional<FilterRule> rejected_by;
  Tokens transformed_tokens;
  // Input tags narrowed to the surviving tokens, when the input had tags.
  std::optional<std::vector<PosTag>> transformed_tags;
};

// Drops pure-punctuation tokens from both ends; interior tokens untouched.
Tokens strip_edge_punctuation(std::span<const Token> tokens);

// Drops leading tokens while they are listed connectives.
Tokens strip_leading_connectives(std::span<const Token> tokens,
                                 const FilterConfig& config);

// Coarse closed-class lexicon tagger: pronoun and auxiliary lists, -ness /
// -ment / -ion noun suffixes, -ed / -ing / -s verb cues, unknown words as
// nouns.
std::vector<PosTag> heuristic_tag(std::span<const Token> tokens);

// True iff some token is a noun or pronoun and some token is a verb or
// auxiliary. Untagged segments are tagged heuristically when allowed,
// otherwise ValidationError("untagged segment").
bool has_content_pos(const Segment& segment, bool allow_heuristic);
bool has_content_pos(std::span<const PosTag> tags);

// Whole-token match only ("fine" does not match "mine").
bool contains_first_person(std::span<const Token> tokens,
                           const FilterConfig& config);

// Rules in order: edge punctuation, leading connectives, minimum length,
// noun+verb content, first-person rejection. Records the first failing rule.
FilterOutcome filter_segment(const Segment& segment, const FilterConfig& config);

// The kept form of `segment`: text and tokens replaced by the transformed ones.
Segment apply_outcome(const Segment& segment, const FilterOutcome& outcome);

// Segments sampled strictly more than `threshold` times, ordered by
// (product_id, polarity, descending sample_count, text). Output does not
// depend on input order. Throws ValidationError on a missing sample_count.
std::vector<Segment> popularity_select(std::span<const Segment> segments,
                                       std::uint64_t threshold);

}  // namespace snipforge
