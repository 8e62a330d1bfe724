#include "snipforge/corpus.hpp"

#include <algorithm>
#include <cctype>

namespace snipforge {

std::string_view to_string(Polarity p) {
  return p == Polarity::kPositive ? "positive" : "negative";
}

std::string_view to_string(PosTag t) {
  switch (t) {
    case PosTag::kNoun: return "noun";
    case PosTag::kPronoun: return "pronoun";
    case PosTag::kVerb: return "verb";
    case PosTag::kAux: return "aux";
    case PosTag::kOther: return "other";
  }
  return "other";
}

std::string_view to_string(Split s) {
  switch (s) {
    case Split::kTrain: return "train";
    case Split::kValidation: return "validation";
    case Split::kTest: return "test";
  }
  return "train";
}

std::optional<Polarity> parse_polarity(std::string_view s) {
  if (s == "positive") return Polarity::kPositive;
  if (s == "negative") return Polarity::kNegative;
  return std::nullopt;
}

std::optional<PosTag> parse_pos_tag(std::string_view s) {
  for (PosTag t : {PosTag::kNoun, PosTag::kPronoun, PosTag::kVerb,
                   PosTag::kAux, PosTag::kOther}) {
    if (to_string(t) == s) return t;
  }
  return std::nullopt;
}

std::optional<Split> parse_split(std::string_view s) {
  for (Split v : {Split::kTrain, Split::kValidation, Split::kTest}) {
    if (to_string(v) == s) return v;
  }
  return std::nullopt;
}

bool is_detached_punct(char c) {
  switch (c) {
    case '.': case ',': case '!': case '?': case ';': case ':':
    case '"': case '&': case '(': case ')':
      return true;
    default:
      return false;
  }
}

bool is_punct_char(char c) {
  return is_detached_punct(c) || c == '\'' || c == '-';
}

bool is_punctuation_token(std::string_view token) {
  return !token.empty() && std::all_of(token.begin(), token.end(), is_punct_char);
}

Tokens tokenize(std::string_view text) {
  Tokens out;
  std::string current;
  auto flush = [&] {
    if (!current.empty()) {
      out.push_back(std::move(current));
      current.clear();
    }
  };
  for (char raw : text) {
    const auto c = static_cast<unsigned char>(raw);
    if (std::isspace(c)) {
      flush();
    } else if (is_detached_punct(raw)) {
      flush();
      out.emplace_back(1, raw);
    } else {
      // ASCII-only lowercasing; UTF-8 continuation bytes pass through.
      current.push_back(c < 0x80 ? static_cast<char>(std::tolower(c)) : raw);
    }
  }
  flush();
  return out;
}

std::string join(std::span<const Token> tokens, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i) out += sep;
    out += tokens[i];
  }
  return out;
}

Segment Segment::make(std::string product_id, std::string text,
                      Polarity polarity) {
  Segment s;
  s.product_id = std::move(product_id);
  s.tokens = tokenize(text);
  s.text = std::move(text);
  s.polarity = polarity;
  return s;
}

OpinionPair OpinionPair::make(Segment positive, Segment negative) {
  if (positive.polarity != Polarity::kPositive ||
      negative.polarity != Polarity::kNegative) {
    throw ValidationError("opinion pair needs one positive and one negative segment");
  }
  if (positive.product_id != negative.product_id) {
    throw ValidationError("opinion pair spans products '" + positive.product_id +
                          "' and '" + negative.product_id + "'");
  }
  OpinionPair p;
  p.product_id = positive.product_id;
  p.positive = std::move(positive);
  p.negative = std::move(negative);
  return p;
}

const Reference* SnippetInstance::find_reference(TemplateId tid) const {
  for (const auto& r : references) {
    if (r.template_id == tid) return &r;
  }
  return nullptr;
}

const Tokens& SnippetInstance::output_tokens() const {
  const Reference* r = find_reference(chosen_template);
  if (r == nullptr) {
    throw ValidationError("instance " + id + ": chosen template " +
                          std::to_string(chosen_template) + " has no reference");
  }
  return r->tokens;
}

Tokens make_input_sequence(std::span<const Token> positive,
                           std::span<const Token> negative) {
  Tokens out;
  out.reserve(positive.size() + negative.size() + 2);
  out.insert(out.end(), positive.begin(), positive.end());
  out.emplace_back(".");
  out.insert(out.end(), negative.begin(), negative.end());
  out.emplace_back(".");
  return out;
}

}  // namespace snipforge
