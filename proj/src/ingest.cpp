#include "topiclab/ingest.hpp"

#include <fstream>
#include <nlohmann/json.hpp>

#include "topiclab/error.hpp"
#include "topiclab/util.hpp"

namespace topiclab::ingest {

using nlohmann::json;

namespace {

std::optional<std::string> string_field(const json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end() || !it->is_string()) return std::nullopt;
  return it->get<std::string>();
}

}  // namespace

KeywordSet::KeywordSet(const std::vector<std::string>& keywords) {
  for (const auto& k : keywords) {
    auto word = util::to_lower_ascii(util::trim(k));
    if (!word.empty()) words_.insert(std::move(word));
  }
  if (words_.empty()) throw Error(ErrorCode::InvalidArgument, "keyword set is empty");
}

KeywordSet KeywordSet::load(const std::filesystem::path& path) {
  return KeywordSet(util::read_word_list(path));
}

KeywordSet KeywordSet::defaults() { return load(util::resource_path("keywords.txt")); }

std::optional<Document> parse_record(std::string_view raw) {
  json rec;
  try {
    rec = json::parse(raw);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::MalformedRecord, std::string("record is not valid JSON: ") + e.what());
  }
  if (!rec.is_object()) throw Error(ErrorCode::MalformedRecord, "record is not a JSON object");
  if (rec.contains("delete") || rec.contains("user_update")) return std::nullopt;

  std::optional<std::string> text;
  if (auto ext = rec.find("extended_tweet"); ext != rec.end() && ext->is_object()) {
    text = string_field(*ext, "full_text");
  }
  if (!text) text = string_field(rec, "full_text");
  if (!text) text = string_field(rec, "text");
  if (!text || text->empty()) return std::nullopt;

  Document doc;
  if (auto id = string_field(rec, "id_str")) {
    doc.id = *id;
  } else if (auto it = rec.find("id"); it != rec.end() && it->is_number_integer()) {
    doc.id = std::to_string(it->get<std::int64_t>());
  } else {
    throw Error(ErrorCode::MalformedRecord, "record has text but no id");
  }
  doc.created_at = string_field(rec, "created_at").value_or("");
  doc.text = std::move(*text);
  if (auto it = rec.find("matched_keywords"); it != rec.end() && it->is_array()) {
    for (const auto& k : *it) {
      if (k.is_string()) doc.matched_keywords.insert(k.get<std::string>());
    }
  }
  return doc;
}

std::set<std::string> keyword_filter(std::string_view text, const KeywordSet& keywords) {
  const auto folded = util::to_lower_ascii(text);
  std::set<std::string> hits;
  for (const auto& k : keywords.words()) {
    if (folded.find(k) != std::string::npos) hits.insert(k);
  }
  return hits;
}

std::string serialize_document(const Document& doc) {
  json j = {{"id_str", doc.id},
            {"created_at", doc.created_at},
            {"text", doc.text},
            {"matched_keywords", doc.matched_keywords}};
  return j.dump();
}

std::size_t replay_produce(const std::filesystem::path& path, broker::BrokerClient& client,
                           std::string_view topic, const KeywordSet& keywords) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  std::size_t published = 0;
  std::size_t line_no = 0;
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    if (util::trim(line).empty()) continue;
    std::optional<Document> doc;
    try {
      doc = parse_record(line);
    } catch (const Error& e) {
      throw Error(ErrorCode::MalformedRecord,
                  path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
    if (!doc) continue;
    doc->matched_keywords = keyword_filter(doc->text, keywords);
    if (doc->matched_keywords.empty()) continue;
    client.publish(topic, serialize_document(*doc));
    ++published;
  }
  return published;
}

std::vector<Document> consume_documents(broker::BrokerClient& client, std::string_view topic,
                                        std::uint64_t from_offset) {
  std::vector<Document> docs;
  for (const auto& rec : client.fetch_all(topic, from_offset)) {
    auto doc = parse_record(rec.payload);
    if (!doc) {
      throw Error(ErrorCode::MalformedRecord,
                  "offset " + std::to_string(rec.offset) + " does not hold a document");
    }
    docs.push_back(std::move(*doc));
  }
  return docs;
}

std::vector<Document> read_documents(const std::filesystem::path& path) {
  std::vector<Document> docs;
  std::size_t line_no = 0;
  for (const auto& line : util::read_lines(path)) {
    ++line_no;
    if (util::trim(line).empty()) continue;
    auto doc = parse_record(line);
    if (!doc) {
      throw Error(ErrorCode::MalformedRecord,
                  path.string() + ":" + std::to_string(line_no) + ": not a document");
    }
    docs.push_back(std::move(*doc));
  }
  return docs;
}

void write_documents(const std::filesystem::path& path, const std::vector<Document>& docs) {
  std::string out;
  for (const auto& d : docs) out += serialize_document(d) + "\n";
  util::write_file_atomic(path, out);
}

}  // namespace topiclab::ingest
