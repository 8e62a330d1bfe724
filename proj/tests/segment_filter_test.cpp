#include <algorithm>
#include <random>

#include "gtest/gtest.h"
#include "snipforge/segment_filter.hpp"

namespace snipforge {
namespace {

FilterConfig heuristic_config() {
  FilterConfig c;
  c.heuristic_tags = true;
  return c;
}

Segment seg(const std::string& text, Polarity p = Polarity::kPositive) {
  return Segment::make("prod", text, p);
}

TEST(FilterConfig, DefaultsMatchStandardLists) {
  const FilterConfig c;
  EXPECT_EQ(c.min_words, 3u);
  EXPECT_EQ(c.popularity_threshold, 18u);
  EXPECT_EQ(c.first_person_words,
            (std::set<Token>{"i", "me", "my", "myself", "mine", "we", "us", "our", "ourselves"}));
  EXPECT_EQ(c.leading_connectives, (std::set<Token>{"because", "and", "before", "but", "however",
                                                    "now", "of", "then", "&", "or"}));
  FilterConfig zero;
  zero.min_words = 0;
  EXPECT_THROW(zero.validate(), ValidationError);
}

TEST(StripEdgePunctuation, Examples) {
  EXPECT_EQ(strip_edge_punctuation(Tokens{",", "good", "value", "!", "."}), (Tokens{"good", "value"}));
  EXPECT_EQ(strip_edge_punctuation(Tokens{"good", "value"}), (Tokens{"good", "value"}));
  EXPECT_TRUE(strip_edge_punctuation(Tokens{".", "!"}).empty());
  EXPECT_EQ(strip_edge_punctuation(Tokens{"-", "fast", ",", "cheap", "--"}),
            (Tokens{"fast", ",", "cheap"}));
}

TEST(StripLeadingConnectives, Examples) {
  const FilterConfig c;
  EXPECT_EQ(strip_leading_connectives(tokenize("but it is not that great"), c),
            tokenize("it is not that great"));
  EXPECT_EQ(strip_leading_connectives(tokenize("great product overall"), c),
            tokenize("great product overall"));
  EXPECT_EQ(strip_leading_connectives(tokenize("but however it works"), c), tokenize("it works"));
  // Only leading occurrences.
  EXPECT_EQ(strip_leading_connectives(tokenize("it works and then breaks"), c),
            tokenize("it works and then breaks"));
}

TEST(HasContentPos, ExamplesWithHeuristicTagger) {
  EXPECT_FALSE(has_content_pos(seg("the only problem"), true));
  EXPECT_FALSE(has_content_pos(seg("and was destroyed"), true));
  EXPECT_FALSE(has_content_pos(seg("which is annoying"), true));
  EXPECT_TRUE(has_content_pos(seg("speed was brilliant"), true));
  EXPECT_TRUE(has_content_pos(seg("it works great"), true));
  EXPECT_TRUE(has_content_pos(seg("camera is not good"), true));
}

TEST(HasContentPos, UsesSuppliedTags) {
  Segment s = seg("speed was brilliant");
  s.tags = {PosTag::kNoun, PosTag::kAux, PosTag::kOther};
  EXPECT_TRUE(has_content_pos(s, false));
  s.tags = {PosTag::kOther, PosTag::kAux, PosTag::kOther};
  EXPECT_FALSE(has_content_pos(s, false));
}

TEST(HasContentPos, UntaggedWithoutHeuristicFails) {
  try {
    has_content_pos(seg("speed was brilliant"), false);
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_STREQ(e.what(), "untagged segment");
  }
}

TEST(HeuristicTag, ClosedClassAndSuffixCues) {
  EXPECT_EQ(heuristic_tag(tokenize("this is great")),
            (std::vector<PosTag>{PosTag::kPronoun, PosTag::kAux, PosTag::kOther}));
  EXPECT_EQ(heuristic_tag(tokenize("this tablet")),
            (std::vector<PosTag>{PosTag::kOther, PosTag::kNoun}));
  EXPECT_EQ(heuristic_tag(tokenize("the improvement disappointed")),
            (std::vector<PosTag>{PosTag::kOther, PosTag::kNoun, PosTag::kVerb}));
  EXPECT_EQ(heuristic_tag(tokenize("battery drains")),
            (std::vector<PosTag>{PosTag::kNoun, PosTag::kVerb}));
}

TEST(ContainsFirstPerson, WholeTokensOnly) {
  const FilterConfig c;
  EXPECT_TRUE(contains_first_person(Tokens{"i", "love", "this"}, c));
  EXPECT_TRUE(contains_first_person(Tokens{"mine", "craft", "fan"}, c));
  EXPECT_FALSE(contains_first_person(Tokens{"the", "screen", "is", "fine"}, c));
  EXPECT_TRUE(contains_first_person(Tokens{"We", "like"}, c));
  EXPECT_FALSE(contains_first_person(Tokens{"museum", "use"}, c));
}

TEST(FilterSegment, Examples) {
  const FilterConfig c = heuristic_config();
  auto short_one = filter_segment(seg("good product"), c);
  EXPECT_FALSE(short_one.kept);
  EXPECT_EQ(short_one.rejected_by, FilterRule::kTooShort);

  auto kept = filter_segment(seg("but it is not that great"), c);
  EXPECT_TRUE(kept.kept);
  EXPECT_FALSE(kept.rejected_by);
  EXPECT_EQ(join(kept.transformed_tokens), "it is not that great");

  auto first = filter_segment(seg("i returned it immediately"), c);
  EXPECT_EQ(first.rejected_by, FilterRule::kFirstPerson);

  EXPECT_EQ(filter_segment(seg("the only problem"), c).rejected_by, FilterRule::kNoNounOrVerb);
}

TEST(FilterSegment, LengthIsCheckedAfterStripping) {
  const FilterConfig c = heuristic_config();
  const auto out = filter_segment(seg("but , great value"), c);
  EXPECT_EQ(out.rejected_by, FilterRule::kTooShort);
  EXPECT_EQ(out.transformed_tokens, (Tokens{"great", "value"}));
}

TEST(FilterSegment, TagsFollowTransformation) {
  Segment s = seg(", but the battery lasts !");
  s.tags = {PosTag::kOther, PosTag::kOther, PosTag::kOther, PosTag::kNoun, PosTag::kVerb,
            PosTag::kOther};
  const auto out = filter_segment(s, FilterConfig{});
  ASSERT_TRUE(out.kept);
  EXPECT_EQ(out.transformed_tokens, tokenize("the battery lasts"));
  EXPECT_EQ(*out.transformed_tags,
            (std::vector<PosTag>{PosTag::kOther, PosTag::kNoun, PosTag::kVerb}));
  const Segment applied = apply_outcome(s, out);
  EXPECT_EQ(applied.text, "the battery lasts");
  EXPECT_EQ(tokenize(applied.text), applied.tokens);
}

TEST(FilterSegment, UntaggedErrorPropagates) {
  EXPECT_THROW(filter_segment(seg("the battery lasts all day"), FilterConfig{}), ValidationError);
}

TEST(FilterSegment, KeptOutputsSatisfyInvariantsAndAreIdempotent) {
  const std::vector<std::string> vocab{
      "but", "and", "however", "&", ",", ".", "!", "-", "i", "we", "mine", "the", "battery",
      "screen", "is", "was", "works", "great", "not", "it", "they", "broke", "quickly", "fine"};
  const FilterConfig c = heuristic_config();
  std::mt19937_64 rng(5);
  int kept_count = 0;
  for (int trial = 0; trial < 5000; ++trial) {
    std::string text;
    const std::size_t len = rng() % 9;
    for (std::size_t i = 0; i < len; ++i) text += vocab[rng() % vocab.size()] + " ";
    const auto out = filter_segment(seg(text), c);
    ASSERT_EQ(out.kept, !out.rejected_by.has_value());
    if (!out.kept) continue;
    ++kept_count;
    const Tokens& t = out.transformed_tokens;
    ASSERT_GE(t.size(), c.min_words);
    ASSERT_FALSE(is_punctuation_token(t.front()));
    ASSERT_FALSE(is_punctuation_token(t.back()));
    ASSERT_FALSE(c.leading_connectives.contains(t.front()));
    ASSERT_FALSE(contains_first_person(t, c));
    const auto again = filter_segment(seg(join(t)), c);
    ASSERT_TRUE(again.kept) << text;
    ASSERT_EQ(again.transformed_tokens, t);
  }
  EXPECT_GT(kept_count, 100);
}

Segment counted(const std::string& product, const std::string& text, Polarity p,
                std::uint64_t count) {
  Segment s = Segment::make(product, text, p);
  s.sample_count = count;
  return s;
}

TEST(PopularitySelect, StrictThreshold) {
  const std::vector<Segment> in{counted("p", "a", Polarity::kPositive, 19),
                                counted("p", "b", Polarity::kPositive, 18),
                                counted("p", "c", Polarity::kPositive, 50)};
  const auto out = popularity_select(in, 18);
  ASSERT_EQ(out.size(), 2u);
  EXPECT_EQ(out[0].text, "c");
  EXPECT_EQ(out[1].text, "a");
  EXPECT_EQ(popularity_select(in, 0).size(), 3u);
  EXPECT_TRUE(popularity_select(in, 1'000'000'000).empty());
}

TEST(PopularitySelect, MissingCountIsAnError) {
  const std::vector<Segment> in{Segment::make("p", "a b c", Polarity::kNegative)};
  EXPECT_THROW(popularity_select(in, 18), ValidationError);
}

TEST(PopularitySelect, SubsetAndOrderInvariant) {
  std::mt19937_64 rng(11);
  std::vector<Segment> in;
  for (int i = 0; i < 300; ++i) {
    in.push_back(counted("p" + std::to_string(rng() % 5), "seg " + std::to_string(rng() % 40),
                         rng() % 2 ? Polarity::kPositive : Polarity::kNegative, rng() % 40));
  }
  const auto reference = popularity_select(in, 18);
  for (const auto& s : reference) {
    EXPECT_GT(*s.sample_count, 18u);
    EXPECT_NE(std::find(in.begin(), in.end(), s), in.end());
  }
  for (int shuffle = 0; shuffle < 10; ++shuffle) {
    std::shuffle(in.begin(), in.end(), rng);
    EXPECT_EQ(popularity_select(in, 18), reference);
  }
  // Grouped by product then polarity.
  for (std::size_t i = 1; i < reference.size(); ++i) {
    const auto& a = reference[i - 1];
    const auto& b = reference[i];
    EXPECT_LE(std::tie(a.product_id, a.polarity), std::tie(b.product_id, b.polarity));
  }
}

}  // namespace
}  // namespace snipforge
