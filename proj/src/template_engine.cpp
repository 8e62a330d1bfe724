#include "snipforge/template_engine.hpp"

#include <charconv>
#include <cmath>
#include <map>
#include <numeric>
#include <random>

namespace snipforge {
namespace {

constexpr std::array<std::string_view, kTemplateCount> kPatterns{
    "{POS} . but , {NEG} .",
    "{POS} . however {NEG} .",
    "{POS} . on the other hand , {NEG} .",
    "although {POS} , according to a few users {NEG} .",
    "{POS} . yet , some users have also mentioned that {NEG} .",
    "{POS} . however , there are people who have complained that {NEG} .",
    "{POS} . on the other hand , a few users have complained that {NEG} .",
};

std::vector<Template> build_inventory() {
  std::vector<Template> out;
  for (std::size_t i = 0; i < kPatterns.size(); ++i) {
    out.push_back(Template::parse(static_cast<TemplateId>(i + 1), kPatterns[i]));
  }
  return out;
}

Tokens drop_boundary_stops(const Template& t) {
  Tokens out = t.prefix;
  auto infix_begin = t.infix.begin();
  if (infix_begin != t.infix.end() && *infix_begin == ".") ++infix_begin;
  out.insert(out.end(), infix_begin, t.infix.end());
  auto suffix_end = t.suffix.end();
  if (suffix_end != t.suffix.begin() && *(suffix_end - 1) == ".") --suffix_end;
  out.insert(out.end(), t.suffix.begin(), suffix_end);
  return out;
}

Segment bare_segment(const Segment& s) {
  return Segment::make(s.product_id, s.text, s.polarity);
}

}  // namespace

Template Template::parse(TemplateId id, std::string_view pattern) {
  const Tokens tokens = tokenize(pattern);
  Template t;
  t.id = id;
  int stage = 0;  // 0: prefix, 1: infix, 2: suffix
  for (const auto& tok : tokens) {
    if (tok == "{pos}") {
      if (stage != 0) throw ValidationError("template pattern: misplaced {POS}");
      stage = 1;
    } else if (tok == "{neg}") {
      if (stage != 1) throw ValidationError("template pattern: misplaced {NEG}");
      stage = 2;
    } else {
      (stage == 0 ? t.prefix : stage == 1 ? t.infix : t.suffix).push_back(tok);
    }
  }
  if (stage != 2) {
    throw ValidationError("template pattern needs {POS} and {NEG}: " + std::string(pattern));
  }
  return t;
}

Tokens Template::connective() const { return drop_boundary_stops(*this); }

std::string Template::label() const {
  Template body = *this;
  body.prefix.clear();
  const std::string tail = join(drop_boundary_stops(body));
  if (prefix.empty()) return tail;
  return join(prefix) + " [positive opinion] " + tail;
}

std::span<const Template> template_inventory() {
  static const std::vector<Template> inventory = build_inventory();
  return inventory;
}

const Template& inventory_template(TemplateId id) {
  if (id < 1 || id > kTemplateCount) {
    throw ValidationError("no template with id " + std::to_string(id));
  }
  return template_inventory()[static_cast<std::size_t>(id - 1)];
}

Tokens render(const Template& tmpl, std::span<const Token> positive,
              std::span<const Token> negative) {
  if (positive.empty() || negative.empty()) {
    throw ValidationError("cannot render template " + std::to_string(tmpl.id) +
                          " with an empty opinion");
  }
  Tokens out;
  out.reserve(tmpl.prefix.size() + positive.size() + tmpl.infix.size() +
              negative.size() + tmpl.suffix.size());
  out.insert(out.end(), tmpl.prefix.begin(), tmpl.prefix.end());
  out.insert(out.end(), positive.begin(), positive.end());
  out.insert(out.end(), tmpl.infix.begin(), tmpl.infix.end());
  out.insert(out.end(), negative.begin(), negative.end());
  out.insert(out.end(), tmpl.suffix.begin(), tmpl.suffix.end());
  return out;
}

Tokens render(const Template& tmpl, const OpinionPair& pair) {
  return render(tmpl, pair.positive.tokens, pair.negative.tokens);
}

std::vector<Reference> references_for(const OpinionPair& pair) {
  std::vector<Reference> refs;
  refs.reserve(kTemplateCount);
  for (const auto& t : template_inventory()) refs.push_back({t.id, render(t, pair)});
  return refs;
}

std::string_view to_string(StrategyMode mode) {
  switch (mode) {
    case StrategyMode::kRoundRobin: return "round_robin";
    case StrategyMode::kSeededRandom: return "seeded_random";
    case StrategyMode::kAllTemplates: return "all_templates";
  }
  return "round_robin";
}

std::optional<StrategyMode> parse_strategy_mode(std::string_view s) {
  for (StrategyMode m : {StrategyMode::kRoundRobin, StrategyMode::kSeededRandom,
                         StrategyMode::kAllTemplates}) {
    if (to_string(m) == s) return m;
  }
  return std::nullopt;
}

void SplitSpec::validate() const {
  double sum = 0.0;
  for (double f : fractions) {
    if (!(f >= 0.0)) throw ValidationError("split fractions must be non-negative");
    sum += f;
  }
  if (std::abs(sum - 1.0) > 1e-6) {
    throw ValidationError("split fractions must sum to 1, got " + std::to_string(sum));
  }
}

SplitSpec SplitSpec::parse(std::string_view text, std::uint64_t seed) {
  SplitSpec spec;
  spec.seed = seed;
  std::size_t field = 0;
  while (true) {
    const auto comma = text.find(',');
    const std::string part(text.substr(0, comma));
    if (field >= spec.fractions.size()) {
      throw ValidationError("expected three split fractions");
    }
    std::size_t used = 0;
    try {
      spec.fractions[field] = std::stod(part, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != part.size()) {
      throw ValidationError("bad split fraction '" + part + "'");
    }
    ++field;
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  if (field != spec.fractions.size()) throw ValidationError("expected three split fractions");
  spec.validate();
  return spec;
}

std::vector<Split> assign_splits(std::size_t product_count, const SplitSpec& spec) {
  spec.validate();
  std::vector<std::size_t> order(product_count);
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(spec.seed);
  for (std::size_t i = product_count; i > 1; --i) {
    std::swap(order[i - 1], order[rng() % i]);
  }
  const double n = static_cast<double>(product_count);
  const auto train_end = static_cast<std::size_t>(std::llround(n * spec.fractions[0]));
  const auto valid_end = static_cast<std::size_t>(
      std::llround(n * (spec.fractions[0] + spec.fractions[1])));
  std::vector<Split> out(product_count, Split::kTest);
  for (std::size_t rank = 0; rank < product_count; ++rank) {
    if (rank < train_end) {
      out[order[rank]] = Split::kTrain;
    } else if (rank < valid_end) {
      out[order[rank]] = Split::kValidation;
    }
  }
  return out;
}

DatasetBuild build_dataset(std::span<const Segment> positives,
                           std::span<const Segment> negatives,
                           const GenerationStrategy& strategy,
                           const SplitSpec& splits) {
  struct ProductSegments {
    std::vector<const Segment*> pos;
    std::vector<const Segment*> neg;
  };
  std::map<std::string, ProductSegments> products;
  for (const auto& s : positives) {
    if (s.polarity != Polarity::kPositive) {
      throw ValidationError("negative segment '" + s.text + "' in positive input");
    }
    products[s.product_id].pos.push_back(&s);
  }
  for (const auto& s : negatives) {
    if (s.polarity != Polarity::kNegative) {
      throw ValidationError("positive segment '" + s.text + "' in negative input");
    }
    products[s.product_id].neg.push_back(&s);
  }

  DatasetBuild build;
  std::vector<const std::pair<const std::string, ProductSegments>*> usable;
  for (const auto& entry : products) {
    const auto& [product, segs] = entry;
    if (segs.pos.empty() || segs.neg.empty()) {
      build.warnings.push_back("product " + product + ": no " +
                               (segs.pos.empty() ? "positive" : "negative") +
                               " segments, skipped");
      continue;
    }
    usable.push_back(&entry);
  }

  const std::vector<Split> split_of = assign_splits(usable.size(), splits);
  std::mt19937_64 rng(strategy.seed);
  std::uint64_t pair_index = 0;

  for (std::size_t p = 0; p < usable.size(); ++p) {
    const auto& [product, segs] = *usable[p];
    for (std::size_t i = 0; i < segs.pos.size(); ++i) {
      for (std::size_t j = 0; j < segs.neg.size(); ++j, ++pair_index) {
        OpinionPair pair = OpinionPair::make(bare_segment(*segs.pos[i]),
                                             bare_segment(*segs.neg[j]));
        const std::string pair_id = product + "#" + std::to_string(i) + "-" + std::to_string(j);
        if (pair.positive.tokens == pair.negative.tokens) {
          build.warnings.push_back("pair " + pair_id + ": identical positive and negative opinion");
        }
        SnippetInstance inst;
        inst.id = pair_id;
        inst.input_tokens = make_input_sequence(pair.positive.tokens, pair.negative.tokens);
        inst.references = references_for(pair);
        inst.pair = std::move(pair);
        inst.split = split_of[p];

        switch (strategy.mode) {
          case StrategyMode::kRoundRobin:
            inst.chosen_template = static_cast<TemplateId>(pair_index % kTemplateCount) + 1;
            build.instances.push_back(std::move(inst));
            break;
          case StrategyMode::kSeededRandom:
            inst.chosen_template = static_cast<TemplateId>(rng() % kTemplateCount) + 1;
            build.instances.push_back(std::move(inst));
            break;
          case StrategyMode::kAllTemplates:
            for (TemplateId t = 1; t <= kTemplateCount; ++t) {
              SnippetInstance copy = inst;
              copy.id = pair_id + "-t" + std::to_string(t);
              copy.chosen_template = t;
              build.instances.push_back(std::move(copy));
            }
            break;
        }
      }
    }
  }
  return build;
}

}  // namespace snipforge
