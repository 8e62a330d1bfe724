#include <random>

#include "error_examples.hpp"
#include "gtest/gtest.h"
#include "snipforge/connective_analysis.hpp"
#include "test_support.hpp"

namespace snipforge {
namespace {

using testing::error_examples;
using testing::instance_for;

double total(const Distribution& d) {
  double sum = 0.0;
  for (const auto& [label, fraction] : d) sum += fraction;
  return sum;
}

double fraction_of(const Distribution& d, const std::string& label) {
  for (const auto& [l, f] : d) {
    if (l == label) return f;
  }
  return -1.0;
}

TEST(Classify, KnownErrorRows) {
  const FusionInventory fusions = FusionInventory::standard();
  for (const auto& ex : error_examples()) {
    SCOPED_TRACE(ex.predicted);
    EXPECT_EQ(ex.instance.output_tokens(), tokenize(ex.expected));
    const auto verdict = classify(tokenize(ex.predicted), ex.instance, fusions);
    const auto* err = std::get_if<GenerationError>(&verdict);
    ASSERT_NE(err, nullptr);
    EXPECT_EQ(err->subtype, ex.subtype);
  }
}

TEST(Classify, ErrorConnectives) {
  const FusionInventory fusions = FusionInventory::standard();
  const auto examples = error_examples();
  const auto mixing = std::get<GenerationError>(
      classify(tokenize(examples[0].predicted), examples[0].instance, fusions));
  EXPECT_EQ(mixing.connective,
            tokenize("on the other hand , right few users have complained that"));
  const auto on = std::get<GenerationError>(
      classify(tokenize(examples[2].predicted), examples[2].instance, fusions));
  EXPECT_EQ(on.connective, (Tokens{"on", ","}));
}

TEST(Classify, EveryRenderedTemplateIsExact) {
  const FusionInventory fusions = FusionInventory::standard();
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    const auto inst = instance_for("x", testing::nonce_phrase(rng, 1, 5),
                                   testing::nonce_phrase(rng, 1, 5), 1 + trial % 7);
    for (const auto& t : template_inventory()) {
      EXPECT_EQ(classify(render(t, inst.pair), inst, fusions), ConnectiveClass{ExactTemplate{t.id}});
    }
  }
}

TEST(Classify, NewFusions) {
  const FusionInventory fusions = FusionInventory::standard();
  const auto inst = instance_for("x", "it works great", "camera is not good", 2);
  auto verdict = [&](const std::string& text) { return classify(tokenize(text), inst, fusions); };
  EXPECT_EQ(verdict("it works great. however, some users have also mentioned that camera is not "
                    "good."),
            ConnectiveClass{NewFusion{"however , some users have also mentioned that"}});
  EXPECT_EQ(verdict("it works great. however, camera is not good."),
            ConnectiveClass{NewFusion{"however ,"}});
  EXPECT_EQ(verdict("it works great. yet camera is not good."), ConnectiveClass{NewFusion{"yet"}});
  // A fusion outside the between-opinions slot is not accepted.
  EXPECT_TRUE(std::holds_alternative<GenerationError>(
      verdict("however , it works great. camera is not good.")));
  // Unknown connective.
  EXPECT_EQ(std::get<GenerationError>(verdict("it works great. sadly camera is not good.")).subtype,
            ErrorSubtype::kIncorrectMixing);
}

TEST(Classify, OnInsertionAndMissingAlthoughNeedTheirContext) {
  const FusionInventory fusions = FusionInventory::standard();
  const auto t1 = instance_for("x", "it works great", "camera is not good", 1);
  EXPECT_EQ(std::get<GenerationError>(
                classify(tokenize("it works great . on camera is not good ."), t1, fusions))
                .subtype,
            ErrorSubtype::kOnInsertion);
  // Repeated first word without template 4 falls through to mixing.
  EXPECT_EQ(std::get<GenerationError>(
                classify(tokenize("it it works great , according to a few users camera is not "
                                  "good ."),
                         t1, fusions))
                .subtype,
            ErrorSubtype::kIncorrectMixing);
}

TEST(Classify, TotalOnPerturbedOutputs) {
  const FusionInventory fusions = FusionInventory::standard();
  const std::vector<std::string> noise{"on", "however", ",", ".", "the", "few", "yet"};
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 2000; ++trial) {
    const auto inst = instance_for("x", testing::nonce_phrase(rng, 1, 4),
                                   testing::nonce_phrase(rng, 1, 4), 1 + trial % 7);
    Tokens out = inst.references[rng() % 7].tokens;
    const int edits = static_cast<int>(rng() % 3);
    for (int e = 0; e < edits; ++e) {
      const std::size_t at = rng() % (out.size() + 1);
      if (rng() % 2 && at < out.size()) {
        out.erase(out.begin() + static_cast<long>(at));
      } else {
        out.insert(out.begin() + static_cast<long>(at), noise[rng() % noise.size()]);
      }
    }
    const auto v = classify(out, inst, fusions);
    bool is_reference = false;
    for (const auto& r : inst.references) is_reference = is_reference || r.tokens == out;
    ASSERT_EQ(std::holds_alternative<ExactTemplate>(v), is_reference);
    ASSERT_EQ(classify(out, inst, fusions), v);
  }
}

TEST(FusionInventory, SeedsPresentTemplatesExcluded) {
  const FusionInventory inv = FusionInventory::standard();
  for (const char* seed : {"yet, there are people who have complained that",
                           "but, there are people who have complained that",
                           "however, some users have also mentioned that",
                           "but, some users have also mentioned that", "however,", "yet,", "but",
                           "yet"}) {
    EXPECT_TRUE(inv.contains(tokenize(seed))) << seed;
  }
  for (const auto& t : template_inventory()) {
    EXPECT_FALSE(inv.contains(t.connective())) << t.id;
  }
  EXPECT_TRUE(inv.contains(tokenize("on the other hand , there are people who have complained that")));
  FusionInventory custom;
  custom.add("Sadly,");
  EXPECT_TRUE(custom.contains(Tokens{"sadly", ","}));
  EXPECT_EQ(custom.size(), 1u);
}

TEST(MixingPattern, ReplacesNegativeFirstWord) {
  const auto inst = error_examples()[0].instance;
  EXPECT_EQ(mixing_pattern(tokenize("on the other hand , right few users have complained that"),
                           inst),
            "on the other hand , [first word from the negative opinion] few users have "
            "complained that");
  EXPECT_EQ(mixing_pattern(Tokens{}, inst), "");
}

TEST(MixingPattern, EmptyErrorSet) {
  EXPECT_TRUE(mine_mixing_patterns({}, {}, 0).empty());
}

TEST(AnalyzeCorpus, ChosenReferencesAreAllExact) {
  std::vector<SnippetInstance> instances;
  std::vector<PredictionRecord> preds;
  std::mt19937_64 rng(1);
  for (int i = 0; i < 70; ++i) {
    instances.push_back(instance_for("i" + std::to_string(i), testing::nonce_phrase(rng, 1, 4),
                                     testing::nonce_phrase(rng, 1, 4), 1 + i % 7));
    preds.push_back({instances.back().id, instances.back().output_tokens()});
  }
  const auto report = analyze_corpus(preds, instances, FusionInventory::standard());
  EXPECT_EQ(report.exact_match_fraction, 1.0);
  EXPECT_TRUE(report.error_distribution.empty());
  EXPECT_TRUE(report.mixing_patterns.empty());
  ASSERT_EQ(report.exact_distribution.size(), 7u);
  for (const auto& [label, fraction] : report.exact_distribution) EXPECT_DOUBLE_EQ(fraction, 1.0 / 7.0);
  EXPECT_GE(fraction_of(report.exact_distribution,
                        "although [positive opinion] , according to a few users"),
            0.0);
}

TEST(AnalyzeCorpus, ExactDistributionHalfAndHalf) {
  std::vector<SnippetInstance> instances;
  std::vector<PredictionRecord> preds;
  std::mt19937_64 rng(2);
  for (int i = 0; i < 100; ++i) {
    instances.push_back(instance_for("i" + std::to_string(i), testing::nonce_phrase(rng, 1, 4),
                                     testing::nonce_phrase(rng, 1, 4), i < 50 ? 2 : 1));
    preds.push_back({instances.back().id, instances.back().output_tokens()});
  }
  const auto report = analyze_corpus(preds, instances, FusionInventory::standard());
  ASSERT_EQ(report.exact_distribution.size(), 2u);
  EXPECT_EQ(fraction_of(report.exact_distribution, "however"), 0.5);
  EXPECT_EQ(fraction_of(report.exact_distribution, "but ,"), 0.5);
}

TEST(AnalyzeCorpus, FourErrorFixture) {
  std::vector<SnippetInstance> instances;
  std::vector<PredictionRecord> preds;
  for (const auto& ex : error_examples()) {
    instances.push_back(ex.instance);
    preds.push_back({ex.instance.id, tokenize(ex.predicted)});
  }
  const auto report = analyze_corpus(preds, instances, FusionInventory::standard());
  EXPECT_EQ(report.error_fraction, 1.0);
  ASSERT_EQ(report.error_distribution.size(), 4u);
  for (const auto& [label, fraction] : report.error_distribution) EXPECT_EQ(fraction, 0.25);
  ASSERT_EQ(report.mixing_patterns.size(), 1u);
  EXPECT_EQ(report.mixing_patterns[0].second, 0.25);
  // Rows come back in id order.
  for (std::size_t i = 1; i < report.rows.size(); ++i) {
    EXPECT_LT(report.rows[i - 1].instance_id, report.rows[i].instance_id);
  }
}

TEST(AnalyzeCorpus, RepeatedPatternOverAllFailures) {
  std::vector<SnippetInstance> instances;
  std::vector<PredictionRecord> preds;
  const auto examples = error_examples();
  for (const auto& ex : examples) {
    instances.push_back(ex.instance);
    if (ex.subtype != ErrorSubtype::kMissingAlthough) {
      preds.push_back({ex.instance.id, tokenize(ex.predicted)});
    }
  }
  // A second mixing error with the same shape on another pair.
  instances.push_back(instance_for("err-mixing-2", "the strap feels solid", "velcro wears out", 7));
  preds.push_back({"err-mixing-2",
                   tokenize("the strap feels solid . on the other hand , velcro few users have "
                            "complained that velcro wears out .")});
  const auto report = analyze_corpus(preds, instances, FusionInventory::standard());
  EXPECT_EQ(report.error_count, 4u);
  ASSERT_EQ(report.mixing_patterns.size(), 1u);
  EXPECT_EQ(report.mixing_patterns[0].first,
            "on the other hand , [first word from the negative opinion] few users have "
            "complained that");
  EXPECT_EQ(report.mixing_patterns[0].second, 0.5);
  EXPECT_EQ(fraction_of(report.error_distribution, "incorrect_mixing"), 0.5);
}

TEST(AnalyzeCorpus, MixedKindsSumToOne) {
  std::vector<SnippetInstance> instances;
  std::vector<PredictionRecord> preds;
  std::mt19937_64 rng(4);
  for (int i = 0; i < 30; ++i) {
    const auto pos = testing::nonce_phrase(rng, 1, 3);
    const auto neg = testing::nonce_phrase(rng, 1, 3);
    instances.push_back(instance_for("m" + std::to_string(i), pos, neg, 2));
    std::string text = pos + " . however , " + neg + " .";
    if (i % 3 == 1) text = pos + " . however " + neg + " .";
    if (i % 3 == 2) text = pos + " . on " + neg + " .";
    preds.push_back({instances.back().id, tokenize(text)});
  }
  const auto report = analyze_corpus(preds, instances, FusionInventory::standard());
  EXPECT_EQ(report.exact_count, 10u);
  EXPECT_EQ(report.new_fusion_count, 10u);
  EXPECT_EQ(report.error_count, 10u);
  EXPECT_NEAR(report.exact_match_fraction + report.new_fusion_fraction + report.error_fraction, 1.0,
              1e-12);
  EXPECT_NEAR(total(report.new_distribution), 1.0, 1e-12);
  EXPECT_EQ(fraction_of(report.new_distribution, "however ,"), 1.0);
  EXPECT_EQ(fraction_of(report.error_distribution, "on_insertion"), 1.0);
}

TEST(AnalyzeCorpus, EmptyAndInvalidInputs) {
  const auto inst = instance_for("a", "it works great", "camera is not good", 1);
  std::vector<SnippetInstance> instances{inst};
  const auto empty = analyze_corpus({}, instances, FusionInventory::standard());
  EXPECT_EQ(empty.evaluated, 0u);
  EXPECT_TRUE(empty.exact_distribution.empty());
  std::vector<PredictionRecord> dup{{"a", inst.input_tokens}, {"a", inst.input_tokens}};
  EXPECT_THROW(analyze_corpus(dup, instances, FusionInventory::standard()), ValidationError);
  std::vector<PredictionRecord> unknown{{"b", inst.input_tokens}};
  EXPECT_THROW(analyze_corpus(unknown, instances, FusionInventory::standard()), ValidationError);
}

}  // namespace
}  // namespace snipforge
