#pragma once

// Line-delimited JSON records (".ndrec"): one object per line.
//
//   segments:    {"product_id", "text", "polarity", "sample_count"?, "tags"?}
//   pairs:       {"product_id", "positive", "negative"}
//   instances:   {"id", "product_id", "positive", "negative", "chosen_template",
//                 "output", "references": [{"template_id", "text"} x7], "split"}
//   predictions: {"instance_id", "output"}
//
// A file may open with a single {"_header": {...}} provenance line, which
// readers skip. Blank lines are ignored.

#include <cstddef>
#include <filesystem>
#include <fstream>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "snipforge/corpus.hpp"

namespace snipforge {

enum class RecordKind { kSegment, kPair, kInstance, kPrediction };

std::optional<RecordKind> parse_record_kind(std::string_view s);

std::string encode_record(const Segment& record);
std::string encode_record(const OpinionPair& record);
std::string encode_record(const SnippetInstance& record);
std::string encode_record(const PredictionRecord& record);

// Throws ValidationError("line <n>: ...") on schema violations.
template <class Record>
Record decode_record(std::string_view line, std::size_t line_number);
template <>
Segment decode_record<Segment>(std::string_view, std::size_t);
template <>
OpinionPair decode_record<OpinionPair>(std::string_view, std::size_t);
template <>
SnippetInstance decode_record<SnippetInstance>(std::string_view, std::size_t);
template <>
PredictionRecord decode_record<PredictionRecord>(std::string_view, std::size_t);

template <class Record>
class RecordReader {
 public:
  explicit RecordReader(const std::filesystem::path& path);

  // Next record, or nullopt at end of file.
  std::optional<Record> next();
  std::size_t line_number() const { return line_number_; }

 private:
  std::ifstream in_;
  std::string buffer_;
  std::size_t line_number_ = 0;
  bool seen_record_ = false;
};

template <class Record>
class RecordWriter {
 public:
  explicit RecordWriter(const std::filesystem::path& path);

  // `header_json` must be a serialized JSON object; emitted as {"_header": ...}.
  void write_header(std::string_view header_json);
  void write(const Record& record);
  void close();
  std::size_t count() const { return count_; }

 private:
  std::filesystem::path path_;
  std::ofstream out_;
  std::size_t count_ = 0;
};

template <class Record>
std::vector<Record> read_records(const std::filesystem::path& path) {
  RecordReader<Record> reader(path);
  std::vector<Record> out;
  while (auto r = reader.next()) out.push_back(std::move(*r));
  return out;
}

template <class Record>
void write_records(std::span<const Record> records,
                   const std::filesystem::path& path) {
  RecordWriter<Record> writer(path);
  for (const auto& r : records) writer.write(r);
  writer.close();
}

using AnyRecord =
    std::variant<Segment, OpinionPair, SnippetInstance, PredictionRecord>;

std::vector<AnyRecord> read_records(const std::filesystem::path& path,
                                    RecordKind kind);

}  // namespace snipforge
