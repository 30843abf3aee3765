#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "topiclab/broker_net.hpp"

namespace topiclab::ingest {

struct Document {
  std::string id;
  std::string created_at;
  std::string text;
  std::set<std::string> matched_keywords;

  friend bool operator==(const Document&, const Document&) = default;
};

/// Non-empty set of lowercase, trimmed keywords.
class KeywordSet {
 public:
  explicit KeywordSet(const std::vector<std::string>& keywords);

  /// One keyword per line, `#` comments allowed.
  static KeywordSet load(const std::filesystem::path& path);
  /// The 21 health keywords shipped in resources/keywords.txt.
  static KeywordSet defaults();

  const std::set<std::string>& words() const { return words_; }

 private:
  std::set<std::string> words_;
};

/// Parses one source record. Returns std::nullopt (skip) for deletion and
/// profile-update notices and for records without usable text. The extended
/// full_text wins over the truncated text field.
/// Throws Error(MalformedRecord) when `raw` is not a JSON object.
std::optional<Document> parse_record(std::string_view raw);

/// Every keyword that occurs as a case-folded substring of `text`.
std::set<std::string> keyword_filter(std::string_view text, const KeywordSet& keywords);

/// Compact single-line JSON record; parse_record() reads it back.
std::string serialize_document(const Document& doc);

/// Replays a newline-delimited record file into `topic`. Lines that are
/// skipped or match no keyword are dropped. On a malformed line, throws
/// Error(MalformedRecord) naming the 1-based line; earlier lines stay
/// published.
std::size_t replay_produce(const std::filesystem::path& path, broker::BrokerClient& client,
                           std::string_view topic, const KeywordSet& keywords);

/// All documents from `from_offset` to the end of the log, in offset order.
std::vector<Document> consume_documents(broker::BrokerClient& client, std::string_view topic,
                                        std::uint64_t from_offset);

std::vector<Document> read_documents(const std::filesystem::path& path);
void write_documents(const std::filesystem::path& path, const std::vector<Document>& docs);

}  // namespace topiclab::ingest
