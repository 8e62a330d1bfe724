#include "snipforge/records.hpp"

#include <set>

#include "json.hpp"

namespace snipforge {
namespace {

using Json = nlohmann::ordered_json;

[[noreturn]] void fail(std::size_t line, const std::string& what) {
  throw ValidationError("line " + std::to_string(line) + ": " + what);
}

const Json& require(const Json& obj, const char* field, std::size_t line) {
  auto it = obj.find(field);
  if (it == obj.end() || it->is_null()) fail(line, std::string("missing field ") + field);
  return *it;
}

std::string require_string(const Json& obj, const char* field, std::size_t line) {
  const Json& v = require(obj, field, line);
  if (!v.is_string()) fail(line, std::string("field ") + field + ": expected string");
  return v.get<std::string>();
}

std::int64_t require_int(const Json& obj, const char* field, std::size_t line) {
  const Json& v = require(obj, field, line);
  if (!v.is_number_integer()) fail(line, std::string("field ") + field + ": expected integer");
  return v.get<std::int64_t>();
}

Tokens require_tokens(const Json& obj, const char* field, std::size_t line) {
  Tokens t = tokenize(require_string(obj, field, line));
  if (t.empty()) fail(line, std::string("field ") + field + ": empty text");
  return t;
}

Json parse_object(std::string_view text, std::size_t line) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    fail(line, std::string("malformed record: ") + e.what());
  }
  if (!j.is_object()) fail(line, "malformed record: expected an object");
  return j;
}

Segment decode_segment(const Json& j, std::size_t line) {
  Segment s;
  s.product_id = require_string(j, "product_id", line);
  s.text = require_string(j, "text", line);
  s.tokens = tokenize(s.text);
  const std::string pol = require_string(j, "polarity", line);
  auto p = parse_polarity(pol);
  if (!p) fail(line, "field polarity: invalid value '" + pol + "'");
  s.polarity = *p;
  if (auto it = j.find("sample_count"); it != j.end() && !it->is_null()) {
    if (!it->is_number_integer() || it->get<std::int64_t>() < 0) {
      fail(line, "field sample_count: expected non-negative integer");
    }
    s.sample_count = it->get<std::uint64_t>();
  }
  if (auto it = j.find("tags"); it != j.end() && !it->is_null()) {
    if (!it->is_array()) fail(line, "field tags: expected array");
    std::vector<PosTag> tags;
    for (const auto& t : *it) {
      std::optional<PosTag> tag;
      if (t.is_string()) tag = parse_pos_tag(t.get<std::string>());
      if (!tag) fail(line, "field tags: invalid value " + t.dump());
      tags.push_back(*tag);
    }
    if (tags.size() != s.tokens.size()) {
      fail(line, "field tags: " + std::to_string(tags.size()) +
                     " tags for " + std::to_string(s.tokens.size()) + " tokens");
    }
    s.tags = std::move(tags);
  }
  return s;
}

Json encode_segment(const Segment& s) {
  Json j;
  j["product_id"] = s.product_id;
  j["text"] = s.text;
  j["polarity"] = to_string(s.polarity);
  if (s.sample_count) j["sample_count"] = *s.sample_count;
  if (s.tags) {
    Json tags = Json::array();
    for (PosTag t : *s.tags) tags.push_back(to_string(t));
    j["tags"] = std::move(tags);
  }
  return j;
}

OpinionPair decode_pair_fields(const Json& j, std::size_t line) {
  const std::string product = require_string(j, "product_id", line);
  Segment pos = Segment::make(product, require_string(j, "positive", line),
                              Polarity::kPositive);
  Segment neg = Segment::make(product, require_string(j, "negative", line),
                              Polarity::kNegative);
  if (pos.tokens.empty()) fail(line, "field positive: empty text");
  if (neg.tokens.empty()) fail(line, "field negative: empty text");
  return OpinionPair::make(std::move(pos), std::move(neg));
}

}  // namespace

std::optional<RecordKind> parse_record_kind(std::string_view s) {
  if (s == "segments" || s == "segment") return RecordKind::kSegment;
  if (s == "pairs" || s == "pair") return RecordKind::kPair;
  if (s == "instances" || s == "instance") return RecordKind::kInstance;
  if (s == "predictions" || s == "prediction") return RecordKind::kPrediction;
  return std::nullopt;
}

std::string encode_record(const Segment& s) {
  return encode_segment(s).dump();
}

std::string encode_record(const OpinionPair& p) {
  Json j;
  j["product_id"] = p.product_id;
  j["positive"] = p.positive.text;
  j["negative"] = p.negative.text;
  return j.dump();
}

std::string encode_record(const SnippetInstance& inst) {
  Json j;
  j["id"] = inst.id;
  j["product_id"] = inst.pair.product_id;
  j["positive"] = inst.pair.positive.text;
  j["negative"] = inst.pair.negative.text;
  j["chosen_template"] = inst.chosen_template;
  j["output"] = join(inst.output_tokens());
  Json refs = Json::array();
  for (const auto& r : inst.references) {
    Json rj;
    rj["template_id"] = r.template_id;
    rj["text"] = join(r.tokens);
    refs.push_back(std::move(rj));
  }
  j["references"] = std::move(refs);
  j["split"] = to_string(inst.split);
  return j.dump();
}

std::string encode_record(const PredictionRecord& p) {
  Json j;
  j["instance_id"] = p.instance_id;
  j["output"] = join(p.output_tokens);
  return j.dump();
}

template <>
Segment decode_record<Segment>(std::string_view text, std::size_t line) {
  return decode_segment(parse_object(text, line), line);
}

template <>
OpinionPair decode_record<OpinionPair>(std::string_view text, std::size_t line) {
  return decode_pair_fields(parse_object(text, line), line);
}

template <>
SnippetInstance decode_record<SnippetInstance>(std::string_view text, std::size_t line) {
  const Json j = parse_object(text, line);
  SnippetInstance inst;
  inst.id = require_string(j, "id", line);
  inst.pair = decode_pair_fields(j, line);
  inst.input_tokens =
      make_input_sequence(inst.pair.positive.tokens, inst.pair.negative.tokens);
  inst.chosen_template = static_cast<TemplateId>(require_int(j, "chosen_template", line));

  const Json& refs = require(j, "references", line);
  if (!refs.is_array()) fail(line, "field references: expected array");
  if (refs.size() != static_cast<std::size_t>(kTemplateCount)) {
    fail(line, "field references: expected " + std::to_string(kTemplateCount) +
                   " entries, found " + std::to_string(refs.size()));
  }
  std::set<TemplateId> seen;
  for (const auto& r : refs) {
    if (!r.is_object()) fail(line, "field references: expected objects");
    Reference ref;
    ref.template_id = static_cast<TemplateId>(require_int(r, "template_id", line));
    if (ref.template_id < 1 || ref.template_id > kTemplateCount ||
        !seen.insert(ref.template_id).second) {
      fail(line, "field references: bad template_id " + std::to_string(ref.template_id));
    }
    ref.tokens = require_tokens(r, "text", line);
    inst.references.push_back(std::move(ref));
  }
  if (inst.find_reference(inst.chosen_template) == nullptr) {
    fail(line, "field chosen_template: " + std::to_string(inst.chosen_template) +
                   " not among references");
  }
  if (require_tokens(j, "output", line) != inst.output_tokens()) {
    fail(line, "field output: does not match the chosen_template reference");
  }
  const std::string split = require_string(j, "split", line);
  auto s = parse_split(split);
  if (!s) fail(line, "field split: invalid value '" + split + "'");
  inst.split = *s;
  return inst;
}

template <>
PredictionRecord decode_record<PredictionRecord>(std::string_view text, std::size_t line) {
  const Json j = parse_object(text, line);
  PredictionRecord p;
  p.instance_id = require_string(j, "instance_id", line);
  p.output_tokens = require_tokens(j, "output", line);
  return p;
}

template <class Record>
RecordReader<Record>::RecordReader(const std::filesystem::path& path)
    : in_(path) {
  if (!in_) throw IoError("cannot open " + path.string());
}

template <class Record>
std::optional<Record> RecordReader<Record>::next() {
  while (std::getline(in_, buffer_)) {
    ++line_number_;
    if (!buffer_.empty() && buffer_.back() == '\r') buffer_.pop_back();
    if (buffer_.find_first_not_of(" \t") == std::string::npos) continue;
    if (!seen_record_) {
      seen_record_ = true;
      if (buffer_.starts_with("{\"_header\"")) continue;
    }
    return decode_record<Record>(buffer_, line_number_);
  }
  if (in_.bad()) throw IoError("read failure at line " + std::to_string(line_number_));
  return std::nullopt;
}

template <class Record>
RecordWriter<Record>::RecordWriter(const std::filesystem::path& path)
    : path_(path), out_(path, std::ios::binary | std::ios::trunc) {
  if (!out_) throw IoError("cannot open " + path.string() + " for writing");
}

template <class Record>
void RecordWriter<Record>::write_header(std::string_view header_json) {
  out_ << "{\"_header\":" << header_json << "}\n";
}

template <class Record>
void RecordWriter<Record>::write(const Record& record) {
  out_ << encode_record(record) << '\n';
  ++count_;
  if (!out_) throw IoError("write failure on " + path_.string());
}

template <class Record>
void RecordWriter<Record>::close() {
  out_.flush();
  if (!out_) throw IoError("write failure on " + path_.string());
  out_.close();
}

template class RecordReader<Segment>;
template class RecordReader<OpinionPair>;
template class RecordReader<SnippetInstance>;
template class RecordReader<PredictionRecord>;
template class RecordWriter<Segment>;
template class RecordWriter<OpinionPair>;
template class RecordWriter<SnippetInstance>;
template class RecordWriter<PredictionRecord>;

std::vector<AnyRecord> read_records(const std::filesystem::path& path,
                                    RecordKind kind) {
  std::vector<AnyRecord> out;
  auto drain = [&]<class R>(RecordReader<R> reader) {
    while (auto r = reader.next()) out.emplace_back(std::move(*r));
  };
  switch (kind) {
    case RecordKind::kSegment: drain(RecordReader<Segment>(path)); break;
    case RecordKind::kPair: drain(RecordReader<OpinionPair>(path)); break;
    case RecordKind::kInstance: drain(RecordReader<SnippetInstance>(path)); break;
    case RecordKind::kPrediction: drain(RecordReader<PredictionRecord>(path)); break;
  }
  return out;
}

}  // namespace snipforge
