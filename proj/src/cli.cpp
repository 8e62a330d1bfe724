#include "snipforge/cli.hpp"

#include <array>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "snipforge/connective_analysis.hpp"
#include "snipforge/records.hpp"
#include "snipforge/rouge.hpp"
#include "snipforge/segment_filter.hpp"
#include "snipforge/template_engine.hpp"

namespace snipforge {
namespace {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

void require_input(const fs::path& path) {
  std::error_code ec;
  if (!fs::is_regular_file(path, ec)) throw IoError("no such input file: " + path.string());
}

// Output directory must exist and the output must not alias an input.
void require_output(const fs::path& path, std::initializer_list<fs::path> inputs) {
  std::error_code ec;
  const fs::path parent = path.parent_path();
  if (!parent.empty() && !fs::is_directory(parent, ec)) {
    throw IoError("output directory does not exist: " + parent.string());
  }
  const fs::path target = fs::weakly_canonical(path, ec);
  for (const auto& in : inputs) {
    if (!in.empty() && fs::weakly_canonical(in, ec) == target) {
      throw ValidationError("output " + path.string() + " would overwrite input " + in.string());
    }
  }
}

std::ofstream open_text(const fs::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  return out;
}

void finish(std::ofstream& out, const fs::path& path) {
  out.flush();
  if (!out) throw IoError("write failure on " + path.string());
}

Json header(std::string_view command, const Json& config, std::optional<std::uint64_t> seed) {
  Json h;
  h["tool"] = "snipforge";
  h["command"] = command;
  h["seed"] = seed ? Json(*seed) : Json(nullptr);
  h["config"] = config;
  return h;
}

std::string header_line(const Json& h) { return Json{{"_header", h}}.dump(); }

Json filter_config_json(const FilterConfig& c) {
  Json j;
  j["min_words"] = c.min_words;
  j["first_person_words"] = c.first_person_words;
  j["leading_connectives"] = c.leading_connectives;
  j["popularity_threshold"] = c.popularity_threshold;
  j["heuristic_tags"] = c.heuristic_tags;
  return j;
}

std::set<Token> token_set(const Json& j, const char* field) {
  if (!j.is_array()) throw ValidationError(std::string("config field ") + field + ": expected array");
  std::set<Token> out;
  for (const auto& v : j) {
    if (!v.is_string()) throw ValidationError(std::string("config field ") + field + ": expected strings");
    for (auto& t : tokenize(v.get<std::string>())) out.insert(std::move(t));
  }
  return out;
}

FilterConfig load_filter_config(const std::string& path) {
  FilterConfig c;
  if (path.empty()) return c;
  require_input(path);
  std::ifstream in(path);
  Json j;
  try {
    j = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ValidationError("config " + path + ": " + e.what());
  }
  if (!j.is_object()) throw ValidationError("config " + path + ": expected an object");
  auto uint_field = [&](const char* name) -> std::optional<std::uint64_t> {
    auto it = j.find(name);
    if (it == j.end()) return std::nullopt;
    if (!it->is_number_integer() || it->get<std::int64_t>() < 0) {
      throw ValidationError(std::string("config field ") + name + ": expected non-negative integer");
    }
    return it->get<std::uint64_t>();
  };
  if (auto v = uint_field("min_words")) c.min_words = *v;
  if (auto v = uint_field("popularity_threshold")) c.popularity_threshold = *v;
  if (auto it = j.find("first_person_words"); it != j.end()) {
    c.first_person_words = token_set(*it, "first_person_words");
  }
  if (auto it = j.find("leading_connectives"); it != j.end()) {
    c.leading_connectives = token_set(*it, "leading_connectives");
  }
  if (auto it = j.find("heuristic_tags"); it != j.end()) {
    if (!it->is_boolean()) throw ValidationError("config field heuristic_tags: expected boolean");
    c.heuristic_tags = it->get<bool>();
  }
  return c;
}

std::string fixed(double v, int digits) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(digits) << v;
  return s.str();
}

std::string percent(double fraction) { return fixed(100.0 * fraction, 2) + "%"; }

// ---- filter -----------------------------------------------------------------

struct FilterArgs {
  std::string config, in, out, rejects;
  std::int64_t min_words = -1;
  bool heuristic_tags = false;
};

void run_filter(const FilterArgs& a, std::ostream& err) {
  FilterConfig config = load_filter_config(a.config);
  if (a.min_words >= 0) config.min_words = static_cast<std::size_t>(a.min_words);
  if (a.heuristic_tags) config.heuristic_tags = true;
  config.validate();
  require_input(a.in);
  require_output(a.out, {a.in, a.config});
  if (!a.rejects.empty()) require_output(a.rejects, {a.in, a.config, a.out});

  const Json h = header("filter", filter_config_json(config), std::nullopt);
  RecordReader<Segment> reader(a.in);
  RecordWriter<Segment> kept(a.out);
  kept.write_header(h.dump());
  std::ofstream rejects;
  if (!a.rejects.empty()) {
    rejects = open_text(a.rejects);
    rejects << header_line(h) << '\n';
  }
  std::size_t rejected = 0;
  while (auto segment = reader.next()) {
    FilterOutcome outcome;
    try {
      outcome = filter_segment(*segment, config);
    } catch (const ValidationError& e) {
      throw ValidationError("line " + std::to_string(reader.line_number()) + ": " + e.what());
    }
    if (outcome.kept) {
      kept.write(apply_outcome(*segment, outcome));
    } else {
      ++rejected;
      if (rejects.is_open()) {
        Json j = Json::parse(encode_record(*segment));
        j["rejected_by"] = to_string(*outcome.rejected_by);
        rejects << j.dump() << '\n';
      }
    }
  }
  kept.close();
  if (rejects.is_open()) finish(rejects, a.rejects);
  err << "filter: kept " << kept.count() << ", rejected " << rejected << '\n';
}

// ---- select -----------------------------------------------------------------

struct SelectArgs {
  std::string config, in, out;
  std::int64_t threshold = -1;
  bool threshold_set = false;
};

void run_select(const SelectArgs& a, std::ostream& err) {
  FilterConfig config = load_filter_config(a.config);
  if (a.threshold_set) {
    if (a.threshold < 0) throw ValidationError("--threshold must be non-negative");
    config.popularity_threshold = static_cast<std::uint64_t>(a.threshold);
  }
  require_input(a.in);
  require_output(a.out, {a.in, a.config});
  const auto segments = read_records<Segment>(a.in);
  const auto selected = popularity_select(segments, config.popularity_threshold);
  Json cfg;
  cfg["threshold"] = config.popularity_threshold;
  RecordWriter<Segment> writer(a.out);
  writer.write_header(header("select", cfg, std::nullopt).dump());
  for (const auto& s : selected) writer.write(s);
  writer.close();
  err << "select: " << selected.size() << " of " << segments.size()
      << " segments sampled more than " << config.popularity_threshold << " times\n";
}

// ---- generate ---------------------------------------------------------------

struct GenerateArgs {
  std::string pos, neg, strategy = "round_robin", splits = "0.786,0.098,0.116", out;
  std::int64_t seed = 13;
};

void run_generate(const GenerateArgs& a, std::ostream& err) {
  auto mode = parse_strategy_mode(a.strategy);
  if (!mode) throw ValidationError("unknown strategy '" + a.strategy + "'");
  if (a.seed < 0) throw ValidationError("--seed must be non-negative");
  GenerationStrategy strategy{*mode, static_cast<std::uint64_t>(a.seed)};
  const SplitSpec splits = SplitSpec::parse(a.splits, strategy.seed);
  require_input(a.pos);
  require_input(a.neg);
  require_output(a.out, {a.pos, a.neg});

  const auto positives = read_records<Segment>(a.pos);
  const auto negatives = read_records<Segment>(a.neg);
  const DatasetBuild build = build_dataset(positives, negatives, strategy, splits);
  for (const auto& w : build.warnings) err << "warning: " << w << '\n';

  Json cfg;
  cfg["strategy"] = to_string(strategy.mode);
  cfg["splits"] = splits.fractions;
  cfg["pos"] = a.pos;
  cfg["neg"] = a.neg;
  RecordWriter<SnippetInstance> writer(a.out);
  writer.write_header(header("generate", cfg, strategy.seed).dump());
  for (const auto& inst : build.instances) writer.write(inst);
  writer.close();
  err << "generate: " << build.instances.size() << " instances\n";
}

// ---- evaluate ---------------------------------------------------------------

struct EvaluateArgs {
  std::string dataset, predictions, report, summary;
};

Json score_json(const InstanceScore& s) {
  Json j;
  j["instance_id"] = s.instance_id;
  j["rouge_l_input"] = s.rouge_l_input;
  j["rouge_3_best"] = s.rouge_3_best;
  j["rouge_4_best"] = s.rouge_4_best;
  j["conn_rouge_2"] = s.conn_rouge_2;
  j["conn_rouge_3"] = s.conn_rouge_3;
  j["best_reference_id"] = s.best_reference_id;
  return j;
}

std::string render_summary(const EvalReport& r) {
  struct Row {
    const char* metric;
    double CorpusMeans::*field;
    const char* source;
  };
  const Row rows[] = {
      {"ROUGE-L", &CorpusMeans::rouge_l_input, "input vs prediction"},
      {"ROUGE-3", &CorpusMeans::rouge_3_best, "prediction vs best reference"},
      {"ROUGE-4", &CorpusMeans::rouge_4_best, "prediction vs best reference"},
      {"ROUGE-2", &CorpusMeans::conn_rouge_2, "connective vs best reference connective"},
      {"ROUGE-3", &CorpusMeans::conn_rouge_3, "connective vs best reference connective"},
  };
  std::ostringstream s;
  s << std::left << std::setw(10) << "Recall" << std::setw(10) << "Score" << "Comparison\n";
  for (const auto& row : rows) {
    s << std::setw(10) << row.metric << std::setw(10)
      << (r.corpus ? fixed((*r.corpus).*row.field, 4) : std::string("n/a")) << row.source
      << '\n';
  }
  s << "evaluated " << r.evaluated << ", skipped " << r.skipped << '\n';
  return s.str();
}

void run_evaluate(const EvaluateArgs& a, std::ostream& err) {
  require_input(a.dataset);
  require_input(a.predictions);
  require_output(a.report, {a.dataset, a.predictions});
  require_output(a.summary, {a.dataset, a.predictions, a.report});

  const auto instances = read_records<SnippetInstance>(a.dataset);
  const auto predictions = read_records<PredictionRecord>(a.predictions);
  const EvalReport report = score_corpus(predictions, instances);

  Json cfg;
  cfg["dataset"] = a.dataset;
  cfg["predictions"] = a.predictions;
  std::ofstream out = open_text(a.report);
  out << header_line(header("evaluate", cfg, std::nullopt)) << '\n';
  for (const auto& s : report.per_instance) out << score_json(s).dump() << '\n';
  Json corpus;
  if (report.corpus) {
    const CorpusMeans& m = *report.corpus;
    corpus = {{"rouge_l_input", m.rouge_l_input}, {"rouge_3_best", m.rouge_3_best},
              {"rouge_4_best", m.rouge_4_best},   {"conn_rouge_2", m.conn_rouge_2},
              {"conn_rouge_3", m.conn_rouge_3}};
  }
  out << Json{{"_corpus", corpus}, {"evaluated", report.evaluated}, {"skipped", report.skipped}}
             .dump()
      << '\n';
  finish(out, a.report);

  std::ofstream summary = open_text(a.summary);
  summary << render_summary(report);
  finish(summary, a.summary);
  err << "evaluate: " << report.evaluated << " predictions scored\n";
}

// ---- analyze ----------------------------------------------------------------

struct AnalyzeArgs {
  std::string dataset, predictions, out, tables, fusions;
};

Json distribution_json(const Distribution& d) {
  Json j = Json::array();
  for (const auto& [label, fraction] : d) j.push_back({{"label", label}, {"fraction", fraction}});
  return j;
}

void table(std::ostream& s, const std::string& title, const std::string& column,
           const Distribution& d) {
  s << title << '\n';
  std::size_t width = column.size();
  for (const auto& [label, f] : d) width = std::max(width, label.size());
  s << std::left << std::setw(static_cast<int>(width + 2)) << column << "%age\n";
  for (const auto& [label, f] : d) {
    s << std::setw(static_cast<int>(width + 2)) << label << percent(f) << '\n';
  }
  s << '\n';
}

std::string render_tables(const AnalysisReport& r) {
  std::ostringstream s;
  s << "Exact matches: " << percent(r.exact_match_fraction) << " (" << r.exact_count << " of "
    << r.evaluated << ")\n";
  table(s, "Connecting strings of exact matches (share of exact matches)", "Connecting string",
        r.exact_distribution);
  s << "New connecting strings: " << percent(r.new_fusion_fraction) << " (" << r.new_fusion_count
    << " of " << r.evaluated << ")\n";
  table(s, "New connecting strings (share of new fusions)", "New connecting string",
        r.new_distribution);
  s << "Failures: " << percent(r.error_fraction) << " (" << r.error_count << " of "
    << r.evaluated << ")\n";
  table(s, "Error types (share of failures)", "Error type", r.error_distribution);
  table(s, "Incorrect mixing patterns (share of all failures)", "Incorrect mixing pattern",
        r.mixing_patterns);
  return s.str();
}

void run_analyze(const AnalyzeArgs& a, std::ostream& err) {
  require_input(a.dataset);
  require_input(a.predictions);
  if (!a.fusions.empty()) require_input(a.fusions);
  require_output(a.out, {a.dataset, a.predictions, a.fusions});
  require_output(a.tables, {a.dataset, a.predictions, a.fusions, a.out});

  FusionInventory fusions = FusionInventory::standard();
  if (!a.fusions.empty()) {
    std::ifstream in(a.fusions);
    for (std::string line; std::getline(in, line);) fusions.add(line);
  }
  const auto instances = read_records<SnippetInstance>(a.dataset);
  const auto predictions = read_records<PredictionRecord>(a.predictions);
  const AnalysisReport report = analyze_corpus(predictions, instances, fusions);

  std::map<std::string_view, const SnippetInstance*> by_id;
  for (const auto& inst : instances) by_id.emplace(inst.id, &inst);
  std::map<std::string_view, const PredictionRecord*> pred_by_id;
  for (const auto& p : predictions) pred_by_id.emplace(p.instance_id, &p);

  Json cfg;
  cfg["dataset"] = a.dataset;
  cfg["predictions"] = a.predictions;
  cfg["fusion_forms"] = fusions.size();
  std::ofstream out = open_text(a.out);
  out << header_line(header("analyze", cfg, std::nullopt)) << '\n';
  for (const auto& row : report.rows) {
    Json j;
    j["instance_id"] = row.instance_id;
    if (const auto* e = std::get_if<ExactTemplate>(&row.verdict)) {
      j["class"] = "exact_template";
      j["template_id"] = e->template_id;
    } else if (const auto* f = std::get_if<NewFusion>(&row.verdict)) {
      j["class"] = "new_fusion";
      j["connective"] = f->connective;
    } else {
      const auto& g = std::get<GenerationError>(row.verdict);
      j["class"] = "error";
      j["subtype"] = to_string(g.subtype);
      j["connective"] = join(g.connective);
      if (g.subtype == ErrorSubtype::kIncorrectMixing) {
        j["pattern"] = mixing_pattern(g.connective, *by_id.at(row.instance_id));
      }
    }
    out << j.dump() << '\n';
  }
  Json summary;
  summary["evaluated"] = report.evaluated;
  summary["exact_match_fraction"] = report.exact_match_fraction;
  summary["new_fusion_fraction"] = report.new_fusion_fraction;
  summary["error_fraction"] = report.error_fraction;
  summary["exact_distribution"] = distribution_json(report.exact_distribution);
  summary["new_distribution"] = distribution_json(report.new_distribution);
  summary["error_distribution"] = distribution_json(report.error_distribution);
  summary["mixing_patterns"] = distribution_json(report.mixing_patterns);
  out << Json{{"_summary", summary}}.dump() << '\n';
  finish(out, a.out);

  std::ofstream tables = open_text(a.tables);
  tables << render_tables(report);
  finish(tables, a.tables);
  err << "analyze: " << report.evaluated << " predictions classified\n";
}

// ---- stats ------------------------------------------------------------------

void run_stats(const std::string& dataset, std::ostream& out) {
  require_input(dataset);
  std::array<std::size_t, 3> instances{};
  std::array<std::set<std::string>, 3> products;
  std::map<std::string, std::set<std::pair<Tokens, Tokens>>> pairs;
  RecordReader<SnippetInstance> reader(dataset);
  while (auto inst = reader.next()) {
    const auto s = static_cast<std::size_t>(inst->split);
    ++instances[s];
    products[s].insert(inst->pair.product_id);
    pairs[inst->pair.product_id].emplace(inst->pair.positive.tokens, inst->pair.negative.tokens);
  }
  out << "train " << instances[0] << " / validation " << instances[1] << " / test "
      << instances[2] << '\n';
  out << "products: train " << products[0].size() << " / validation " << products[1].size()
      << " / test " << products[2].size() << '\n';
  std::map<std::size_t, std::size_t> histogram;
  for (const auto& [product, set] : pairs) ++histogram[set.size()];
  out << "pairs per product:\n";
  for (const auto& [count, n] : histogram) out << "  " << count << " pairs: " << n << " products\n";
}

}  // namespace

int run(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"snipforge: comparative snippet dataset and evaluation toolkit", "snipforge"};
  app.require_subcommand(1);

  FilterArgs filter;
  auto* filter_cmd = app.add_subcommand("filter", "apply segment post-processing rules");
  filter_cmd->add_option("--config", filter.config, "JSON filter configuration");
  filter_cmd->add_option("--in", filter.in, "input segments")->required();
  filter_cmd->add_option("--out", filter.out, "kept segments")->required();
  filter_cmd->add_option("--rejects", filter.rejects, "rejected segments with rule");
  filter_cmd->add_option("--min-words", filter.min_words, "minimum tokens after stripping");
  filter_cmd->add_flag("--heuristic-tags", filter.heuristic_tags,
                       "tag untagged segments with the lexicon heuristic");

  SelectArgs select;
  auto* select_cmd = app.add_subcommand("select", "keep segments sampled more than a threshold");
  select_cmd->add_option("--config", select.config, "JSON filter configuration");
  auto* threshold_opt =
      select_cmd->add_option("--threshold", select.threshold, "popularity threshold t");
  select_cmd->add_option("--in", select.in, "sampled segments")->required();
  select_cmd->add_option("--out", select.out, "summary segments")->required();

  GenerateArgs generate;
  auto* generate_cmd = app.add_subcommand("generate", "fuse opinion pairs into a dataset");
  generate_cmd->add_option("--pos", generate.pos, "positive summary segments")->required();
  generate_cmd->add_option("--neg", generate.neg, "negative summary segments")->required();
  generate_cmd->add_option("--strategy", generate.strategy,
                           "round_robin | seeded_random | all_templates");
  generate_cmd->add_option("--seed", generate.seed, "seed for splits and random templates");
  generate_cmd->add_option("--splits", generate.splits, "train,validation,test fractions");
  generate_cmd->add_option("--out", generate.out, "dataset instances")->required();

  EvaluateArgs evaluate;
  auto* evaluate_cmd = app.add_subcommand("evaluate", "score predictions with ROUGE recall");
  evaluate_cmd->add_option("--dataset", evaluate.dataset)->required();
  evaluate_cmd->add_option("--predictions", evaluate.predictions)->required();
  evaluate_cmd->add_option("--report", evaluate.report)->required();
  evaluate_cmd->add_option("--summary", evaluate.summary)->required();

  AnalyzeArgs analyze;
  auto* analyze_cmd = app.add_subcommand("analyze", "classify predicted connectives");
  analyze_cmd->add_option("--dataset", analyze.dataset)->required();
  analyze_cmd->add_option("--predictions", analyze.predictions)->required();
  analyze_cmd->add_option("--out", analyze.out)->required();
  analyze_cmd->add_option("--tables", analyze.tables)->required();
  analyze_cmd->add_option("--fusions", analyze.fusions, "extra fusion forms, one per line");

  std::string stats_dataset;
  auto* stats_cmd = app.add_subcommand("stats", "count instances, products and pairs");
  stats_cmd->add_option("--dataset", stats_dataset)->required();

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, err, err);
    return kExitValidation;
  }
  select.threshold_set = threshold_opt->count() > 0;

  try {
    if (*filter_cmd) run_filter(filter, err);
    else if (*select_cmd) run_select(select, err);
    else if (*generate_cmd) run_generate(generate, err);
    else if (*evaluate_cmd) run_evaluate(evaluate, err);
    else if (*analyze_cmd) run_analyze(analyze, err);
    else if (*stats_cmd) run_stats(stats_dataset, out);
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  }
  return kExitOk;
}

}  // namespace snipforge
