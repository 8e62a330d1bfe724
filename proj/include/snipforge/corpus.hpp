#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace snipforge {

// Lowercase, whitespace-free, non-empty.
using Token = std::string;
using Tokens = std::vector<Token>;

// Bad input data: schema violations, invalid arguments, unknown ids.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Missing files, unwritable destinations, short writes.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Polarity { kPositive, kNegative };
enum class PosTag { kNoun, kPronoun, kVerb, kAux, kOther };
enum class Split { kTrain, kValidation, kTest };

std::string_view to_string(Polarity p);
std::string_view to_string(PosTag t);
std::string_view to_string(Split s);
std::optional<Polarity> parse_polarity(std::string_view s);
std::optional<PosTag> parse_pos_tag(std::string_view s);
std::optional<Split> parse_split(std::string_view s);

// Characters split off as their own tokens.
bool is_detached_punct(char c);
// Characters that count as punctuation when a whole token is made of them.
bool is_punct_char(char c);
bool is_punctuation_token(std::string_view token);

// Lowercases, splits on whitespace and detaches . , ! ? ; : " & ( ) as
// single-character tokens. Apostrophes and hyphens stay attached.
Tokens tokenize(std::string_view text);

std::string join(std::span<const Token> tokens, std::string_view sep = " ");

struct Segment {
  std::string product_id;
  std::string text;
  Tokens tokens;
  Polarity polarity = Polarity::kPositive;
  std::optional<std::uint64_t> sample_count;
  std::optional<std::vector<PosTag>> tags;

  // Builds a segment whose tokens are tokenize(text).
  static Segment make(std::string product_id, std::string text,
                      Polarity polarity);

  bool operator==(const Segment&) const = default;
};

struct OpinionPair {
  std::string product_id;
  Segment positive;
  Segment negative;

  // Throws ValidationError on polarity or product mismatch.
  static OpinionPair make(Segment positive, Segment negative);

  bool operator==(const OpinionPair&) const = default;
};

using TemplateId = int;

// Size of the fusion-template inventory; ids run 1..kTemplateCount.
inline constexpr TemplateId kTemplateCount = 7;

struct Reference {
  TemplateId template_id = 0;
  Tokens tokens;

  bool operator==(const Reference&) const = default;
};

struct SnippetInstance {
  std::string id;
  OpinionPair pair;
  Tokens input_tokens;
  std::vector<Reference> references;
  Split split = Split::kTrain;
  TemplateId chosen_template = 1;

  const Reference* find_reference(TemplateId id) const;
  // The reference realised with chosen_template.
  const Tokens& output_tokens() const;

  bool operator==(const SnippetInstance&) const = default;
};

struct PredictionRecord {
  std::string instance_id;
  Tokens output_tokens;

  bool operator==(const PredictionRecord&) const = default;
};

// positive + "." + negative + "."
Tokens make_input_sequence(std::span<const Token> positive,
                           std::span<const Token> negative);

}  // namespace snipforge
