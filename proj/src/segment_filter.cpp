#include "snipforge/segment_filter.hpp"

#include <algorithm>
#include <tuple>
#include <unordered_set>

#include "snipforge/records.hpp"

namespace snipforge {
namespace {

struct Bounds {
  std::size_t begin = 0;
  std::size_t end = 0;
};

Bounds edge_punctuation_bounds(std::span<const Token> tokens) {
  Bounds b{0, tokens.size()};
  while (b.begin < b.end && is_punctuation_token(tokens[b.begin])) ++b.begin;
  while (b.end > b.begin && is_punctuation_token(tokens[b.end - 1])) --b.end;
  return b;
}

std::size_t leading_connective_count(std::span<const Token> tokens,
                                     const FilterConfig& config) {
  std::size_t n = 0;
  while (n < tokens.size() && config.leading_connectives.contains(tokens[n])) ++n;
  return n;
}

using Lexicon = std::unordered_set<std::string_view>;

const Lexicon& pronouns() {
  static const Lexicon l{
      "i",    "me",       "my",     "myself",     "mine",   "we",
      "us",   "our",      "ours",   "ourselves",  "you",    "your",
      "yours", "yourself", "he",    "him",        "his",    "himself",
      "she",  "her",      "hers",   "herself",    "it",     "its",
      "itself", "they",   "them",   "their",      "theirs", "themselves",
      "someone", "anyone", "everyone", "something", "anything",
      "everything", "nothing", "nobody", "everybody", "it's", "that's"};
  return l;
}

const Lexicon& demonstratives() {
  static const Lexicon l{"this", "that", "these", "those"};
  return l;
}

const Lexicon& auxiliaries() {
  static const Lexicon l{
      "is",      "am",       "are",     "was",      "were",     "be",
      "been",    "being",    "'s",      "'re",      "'m",       "'ve",
      "'d",      "'ll",      "has",     "have",     "had",      "having",
      "do",      "does",     "did",     "doing",    "will",     "would",
      "shall",   "should",   "can",     "could",    "may",      "might",
      "must",    "ca",       "wo",      "isn't",    "aren't",   "wasn't",
      "weren't", "doesn't",  "don't",   "didn't",   "hasn't",   "haven't",
      "hadn't",  "won't",    "wouldn't", "can't",   "cannot",   "couldn't",
      "shouldn't", "mustn't"};
  return l;
}

const Lexicon& function_words() {
  static const Lexicon l{
      // determiners
      "the", "a", "an", "all", "any", "some", "no", "every", "each", "either",
      "neither", "both", "another", "other", "such", "few", "many", "several",
      "which", "what", "who", "whom", "whose",
      // prepositions
      "of", "in", "on", "at", "to", "for", "with", "without", "from", "by",
      "about", "above", "below", "over", "under", "into", "onto", "through",
      "after", "before", "during", "until", "since", "against", "between",
      "among", "per", "via", "up", "down", "out", "off", "than", "like", "as",
      // conjunctions
      "and", "or", "but", "nor", "so", "yet", "because", "although", "though",
      "while", "if", "when", "whenever", "where", "whereas", "unless",
      "however", "then", "&",
      // adverbs
      "not", "n't", "very", "really", "quite", "too", "also", "just", "only",
      "still", "even", "ever", "never", "always", "often", "sometimes",
      "again", "already", "almost", "much", "more", "most", "less", "least",
      "well", "rather", "pretty", "here", "there", "now", "fairly", "extremely",
      "super", "highly", "somewhat", "enough", "once", "twice",
      // adjectives
      "good", "great", "bad", "nice", "excellent", "awesome", "fantastic",
      "poor", "terrible", "amazing", "perfect", "fine", "easy", "hard", "best",
      "worst", "better", "worse", "big", "small", "long", "short", "high",
      "low", "new", "old", "cheap", "expensive", "clear", "loud", "quiet",
      "bright", "dark", "light", "heavy", "solid", "sturdy", "fast", "slow",
      "happy", "sad", "annoying", "disappointing", "interesting", "boring",
      "worth", "lackluster", "bland", "brilliant", "uncomfortable",
      "comfortable", "decent", "horrible", "awful", "superb", "flimsy",
      "smooth", "smoothly", "simple", "useless", "useful", "able", "unable"};
  return l;
}

const Lexicon& verbs() {
  static const Lexicon l{
      "work", "get", "got", "make", "made", "take", "took", "taken", "go",
      "went", "gone", "come", "came", "like", "love", "hate", "need", "want",
      "use", "buy", "bought", "return", "stop", "feel", "felt", "look", "seem",
      "keep", "kept", "fit", "run", "ran", "break", "broke", "broken",
      "charge", "hold", "held", "last", "sound", "enjoy", "refuse", "turn",
      "meet", "met", "give", "gave", "given", "find", "found", "say", "said",
      "tell", "told", "know", "knew", "think", "thought", "put", "set", "let",
      "slide", "fall", "fell", "die", "play", "connect", "drain", "fail",
      "recommend", "expect", "mention", "complain", "provide", "include",
      "cost", "hurt", "sit", "sat", "stay", "help", "show", "start",
      "read", "hear", "heard", "see", "saw", "seen", "pair", "sync", "lose",
      "lost", "arrive", "arrived"};
  return l;
}

bool ends_with(std::string_view w, std::string_view suffix) {
  return w.size() > suffix.size() + 1 && w.ends_with(suffix);
}

bool verb_stem_in_lexicon(std::string_view w) {
  if (verbs().contains(w)) return true;
  if (w.size() > 2 && w.ends_with('s') && verbs().contains(w.substr(0, w.size() - 1)))
    return true;
  if (w.size() > 3 && w.ends_with("es") && verbs().contains(w.substr(0, w.size() - 2)))
    return true;
  return false;
}

bool looks_numeric(std::string_view w) {
  return std::any_of(w.begin(), w.end(), [](char c) { return c >= '0' && c <= '9'; }) &&
         std::none_of(w.begin(), w.end(), [](char c) { return c >= 'a' && c <= 'z'; });
}

}  // namespace

void FilterConfig::validate() const {
  if (min_words < 1) throw ValidationError("min_words must be at least 1");
}

std::string_view to_string(FilterRule rule) {
  switch (rule) {
    case FilterRule::kTooShort: return "too_short";
    case FilterRule::kNoNounOrVerb: return "no_noun_or_verb";
    case FilterRule::kFirstPerson: return "first_person";
  }
  return "too_short";
}

std::optional<FilterRule> parse_filter_rule(std::string_view s) {
  for (FilterRule r : {FilterRule::kTooShort, FilterRule::kNoNounOrVerb,
                       FilterRule::kFirstPerson}) {
    if (to_string(r) == s) return r;
  }
  return std::nullopt;
}

Tokens strip_edge_punctuation(std::span<const Token> tokens) {
  const Bounds b = edge_punctuation_bounds(tokens);
  return Tokens(tokens.begin() + b.begin, tokens.begin() + b.end);
}

Tokens strip_leading_connectives(std::span<const Token> tokens,
                                 const FilterConfig& config) {
  return Tokens(tokens.begin() + leading_connective_count(tokens, config),
                tokens.end());
}

std::vector<PosTag> heuristic_tag(std::span<const Token> tokens) {
  std::vector<PosTag> tags;
  tags.reserve(tokens.size());
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const std::string_view w = tokens[i];
    const PosTag prev = i == 0 ? PosTag::kOther : tags.back();
    PosTag tag = PosTag::kNoun;
    if (is_punctuation_token(w) || looks_numeric(w)) {
      tag = PosTag::kOther;
    } else if (pronouns().contains(w)) {
      tag = PosTag::kPronoun;
    } else if (demonstratives().contains(w)) {
      // Pronoun when standing alone before a verb ("this is great"), else a
      // determiner ("this tablet").
      const bool standalone =
          i + 1 == tokens.size() || auxiliaries().contains(tokens[i + 1]) ||
          verb_stem_in_lexicon(tokens[i + 1]);
      tag = standalone ? PosTag::kPronoun : PosTag::kOther;
    } else if (auxiliaries().contains(w)) {
      tag = PosTag::kAux;
    } else if (function_words().contains(w)) {
      tag = PosTag::kOther;
    } else if (verb_stem_in_lexicon(w)) {
      // "the last", "a charge"
      const bool after_article = i > 0 && (tokens[i - 1] == "the" || tokens[i - 1] == "a" ||
                                           tokens[i - 1] == "an");
      tag = after_article ? PosTag::kNoun : PosTag::kVerb;
    } else if (ends_with(w, "ness") || ends_with(w, "ment") || ends_with(w, "ion") ||
               ends_with(w, "ity")) {
      tag = PosTag::kNoun;
    } else if (ends_with(w, "ly") || ends_with(w, "ful") || ends_with(w, "ous") ||
               ends_with(w, "ive") || ends_with(w, "able") || ends_with(w, "ible") ||
               ends_with(w, "less") || ends_with(w, "ish")) {
      tag = PosTag::kOther;
    } else if ((ends_with(w, "ed") && !w.ends_with("eed")) || ends_with(w, "ing")) {
      tag = PosTag::kVerb;
    } else if (ends_with(w, "s") && !w.ends_with("ss") && !w.ends_with("us") &&
               !w.ends_with("is") && (prev == PosTag::kNoun || prev == PosTag::kPronoun)) {
      tag = PosTag::kVerb;
    }
    tags.push_back(tag);
  }
  return tags;
}

bool has_content_pos(std::span<const PosTag> tags) {
  const bool nominal = std::any_of(tags.begin(), tags.end(), [](PosTag t) {
    return t == PosTag::kNoun || t == PosTag::kPronoun;
  });
  const bool verbal = std::any_of(tags.begin(), tags.end(), [](PosTag t) {
    return t == PosTag::kVerb || t == PosTag::kAux;
  });
  return nominal && verbal;
}

bool has_content_pos(const Segment& segment, bool allow_heuristic) {
  if (segment.tags) return has_content_pos(*segment.tags);
  if (!allow_heuristic) throw ValidationError("untagged segment");
  return has_content_pos(heuristic_tag(segment.tokens));
}

bool contains_first_person(std::span<const Token> tokens,
                           const FilterConfig& config) {
  return std::any_of(tokens.begin(), tokens.end(), [&](const Token& t) {
    Token lower = t;
    std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) {
      return c < 0x80 ? static_cast<char>(std::tolower(c)) : static_cast<char>(c);
    });
    return config.first_person_words.contains(lower);
  });
}

FilterOutcome filter_segment(const Segment& segment, const FilterConfig& config) {
  // Alternate both strips until neither applies: "but , great value" loses
  // the comma exposed by dropping "but".
  std::span<const Token> all(segment.tokens);
  std::size_t begin = 0;
  std::size_t end = all.size();
  for (;;) {
    const Bounds edges = edge_punctuation_bounds(all.subspan(begin, end - begin));
    end = begin + edges.end;
    begin += edges.begin;
    const std::size_t dropped =
        leading_connective_count(all.subspan(begin, end - begin), config);
    if (dropped == 0) break;
    begin += dropped;
  }
  FilterOutcome out;
  out.transformed_tokens.assign(all.begin() + begin, all.begin() + end);
  if (segment.tags) {
    out.transformed_tags.emplace(segment.tags->begin() + begin,
                                 segment.tags->begin() + end);
  }

  auto reject = [&](FilterRule rule) {
    out.kept = false;
    out.rejected_by = rule;
    return out;
  };
  if (out.transformed_tokens.size() < config.min_words) return reject(FilterRule::kTooShort);

  bool content = false;
  if (out.transformed_tags) {
    content = has_content_pos(*out.transformed_tags);
  } else if (config.heuristic_tags) {
    content = has_content_pos(heuristic_tag(out.transformed_tokens));
  } else {
    throw ValidationError("untagged segment");
  }
  if (!content) return reject(FilterRule::kNoNounOrVerb);
  if (contains_first_person(out.transformed_tokens, config)) {
    return reject(FilterRule::kFirstPerson);
  }
  out.kept = true;
  return out;
}

Segment apply_outcome(const Segment& segment, const FilterOutcome& outcome) {
  Segment s = segment;
  s.tokens = outcome.transformed_tokens;
  s.text = join(s.tokens);
  s.tags = outcome.transformed_tags;
  return s;
}

std::vector<Segment> popularity_select(std::span<const Segment> segments,
                                       std::uint64_t threshold) {
  std::vector<Segment> out;
  for (const auto& s : segments) {
    if (!s.sample_count) {
      throw ValidationError("segment '" + s.text + "' of product " + s.product_id +
                            " has no sample_count");
    }
    if (*s.sample_count > threshold) out.push_back(s);
  }
  auto key = [](const Segment& s) {
    return std::make_tuple(std::string_view(s.product_id), s.polarity,
                           ~*s.sample_count, std::string_view(s.text));
  };
  std::sort(out.begin(), out.end(), [&](const Segment& a, const Segment& b) {
    if (key(a) != key(b)) return key(a) < key(b);
    return encode_record(a) < encode_record(b);
  });
  return out;
}

}  // namespace snipforge
