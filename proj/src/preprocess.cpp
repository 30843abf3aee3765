#include "topiclab/preprocess.hpp"

#include <algorithm>
#include <nlohmann/json.hpp>
#include <regex>

#include "topiclab/error.hpp"
#include "topiclab/util.hpp"

namespace topiclab::preprocess {

using nlohmann::json;

namespace {

constexpr std::size_t kMinTokenLen = 2;
constexpr std::size_t kMaxTokenLen = 15;

}  // namespace

StopwordSet::StopwordSet(const std::vector<std::string>& words) {
  for (const auto& w : words) {
    auto word = util::to_lower_ascii(util::trim(w));
    if (!word.empty()) words_.insert(std::move(word));
  }
  for (const char* required : {"for", "or", "the"}) {
    if (!words_.count(required)) {
      throw Error(ErrorCode::InvalidArgument,
                  std::string("stopword list must contain '") + required + "'");
    }
  }
}

StopwordSet StopwordSet::load(const std::filesystem::path& path) {
  return StopwordSet(util::read_word_list(path));
}

StopwordSet StopwordSet::english() { return load(util::resource_path("stopwords_en.txt")); }

std::string clean_text(std::string_view raw) {
  static const std::regex kEmail(R"([A-Za-z0-9._%+-]+@[A-Za-z0-9-]+(\.[A-Za-z0-9-]+)+)");
  static const std::regex kUrl(R"((https?://|www\.)\S+)");
  static const std::regex kRetweet(R"((^|\s)RT(?=\s|:|$))");
  static const std::regex kMention(R"(@\w+:?)");
  static const std::regex kWhitespace(R"(\s+)");

  std::string text(raw);
  text = std::regex_replace(text, kEmail, " ");
  text = std::regex_replace(text, kUrl, " ");
  text = std::regex_replace(text, kRetweet, "$1");
  text = std::regex_replace(text, kMention, " ");
  // Newlines are whitespace, so this also removes them.
  text = std::regex_replace(text, kWhitespace, " ");
  return std::string(util::trim(text));
}

Tokens tokenize(std::string_view cleaned) {
  Tokens out;
  std::string current;
  const auto flush = [&] {
    if (current.size() >= kMinTokenLen && current.size() <= kMaxTokenLen) out.push_back(current);
    current.clear();
  };
  for (char c : cleaned) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    if (c >= 'a' && c <= 'z') {
      current.push_back(c);
    } else {
      flush();
    }
  }
  flush();
  return out;
}

Tokens remove_stopwords(const Tokens& tokens, const StopwordSet& stops) {
  Tokens out;
  out.reserve(tokens.size());
  std::copy_if(tokens.begin(), tokens.end(), std::back_inserter(out),
               [&](const std::string& t) { return !stops.contains(t); });
  return out;
}

PhraseModel::PhraseModel(std::uint64_t min_count, double threshold)
    : min_count_(min_count), threshold_(threshold) {
  if (min_count == 0) throw Error(ErrorCode::InvalidArgument, "phrase min_count must be >= 1");
  if (!(threshold > 0.0)) throw Error(ErrorCode::InvalidArgument, "phrase threshold must be > 0");
}

std::string PhraseModel::pair_key(std::string_view a, std::string_view b) {
  std::string key;
  key.reserve(a.size() + b.size() + 1);
  key.append(a).push_back(' ');
  key.append(b);
  return key;
}

void PhraseModel::add_document(const Tokens& tokens) {
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    ++unigrams_[tokens[i]];
    if (i + 1 < tokens.size()) ++bigrams_[pair_key(tokens[i], tokens[i + 1])];
  }
}

std::uint64_t PhraseModel::unigram_count(std::string_view token) const {
  auto it = unigrams_.find(std::string(token));
  return it == unigrams_.end() ? 0 : it->second;
}

std::uint64_t PhraseModel::bigram_count(std::string_view a, std::string_view b) const {
  auto it = bigrams_.find(pair_key(a, b));
  return it == bigrams_.end() ? 0 : it->second;
}

double PhraseModel::score(std::string_view a, std::string_view b) const {
  const auto ca = unigram_count(a);
  const auto cb = unigram_count(b);
  if (ca == 0 || cb == 0) return -std::numeric_limits<double>::infinity();
  const double cab = static_cast<double>(bigram_count(a, b));
  return (cab - static_cast<double>(min_count_)) * static_cast<double>(vocab_size()) /
         (static_cast<double>(ca) * static_cast<double>(cb));
}

bool PhraseModel::accepts(std::string_view a, std::string_view b) const {
  return score(a, b) > threshold_;
}

std::vector<std::string> PhraseModel::phrases() const {
  std::vector<std::string> out;
  for (const auto& [key, count] : bigrams_) {
    const auto sp = key.find(' ');
    const auto a = std::string_view(key).substr(0, sp);
    const auto b = std::string_view(key).substr(sp + 1);
    if (accepts(a, b)) out.push_back(std::string(a) + "_" + std::string(b));
  }
  std::sort(out.begin(), out.end());
  return out;
}

PhraseModel learn_phrases(const std::vector<Tokens>& docs, std::uint64_t min_count,
                          double threshold) {
  PhraseModel model(min_count, threshold);
  for (const auto& d : docs) model.add_document(d);
  return model;
}

Tokens apply_phrases(const Tokens& tokens, const PhraseModel& model) {
  Tokens out;
  out.reserve(tokens.size());
  std::size_t i = 0;
  while (i < tokens.size()) {
    if (i + 1 < tokens.size() && tokens[i].size() + tokens[i + 1].size() + 1 <= kMaxTokenLen &&
        model.accepts(tokens[i], tokens[i + 1])) {
      out.push_back(tokens[i] + "_" + tokens[i + 1]);
      i += 2;
    } else {
      out.push_back(tokens[i]);
      ++i;
    }
  }
  return out;
}

Tokens surface_tokens(std::string_view text, const StopwordSet& stops) {
  return remove_stopwords(tokenize(clean_text(text)), stops);
}

TokenizedDoc preprocess_doc(const ingest::Document& doc, const StopwordSet& stops,
                            const PhraseModel& phrases) {
  TokenizedDoc out{doc.id, {}};
  for (const auto& tok : apply_phrases(surface_tokens(doc.text, stops), phrases)) {
    auto stem = porter_stem(tok);
    if (stem.size() >= kMinTokenLen) out.tokens.push_back(std::move(stem));
  }
  return out;
}

std::vector<TokenizedDoc> preprocess_corpus(const std::vector<ingest::Document>& docs,
                                            const StopwordSet& stops,
                                            const PreprocessOptions& options) {
  PhraseModel phrases(options.phrase_min_count, options.phrase_threshold);
  for (const auto& d : docs) phrases.add_document(surface_tokens(d.text, stops));
  std::vector<TokenizedDoc> out;
  out.reserve(docs.size());
  for (const auto& d : docs) out.push_back(preprocess_doc(d, stops, phrases));
  return out;
}

std::vector<TokenizedDoc> read_tokenized(const std::filesystem::path& path) {
  std::vector<TokenizedDoc> docs;
  std::size_t line_no = 0;
  for (const auto& line : util::read_lines(path)) {
    ++line_no;
    if (util::trim(line).empty()) continue;
    try {
      const auto j = json::parse(line);
      docs.push_back({j.at("doc_id").get<std::string>(), j.at("tokens").get<Tokens>()});
    } catch (const json::exception& e) {
      throw Error(ErrorCode::MalformedRecord,
                  path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return docs;
}

void write_tokenized(const std::filesystem::path& path, const std::vector<TokenizedDoc>& docs) {
  std::string out;
  for (const auto& d : docs) {
    out += json{{"doc_id", d.doc_id}, {"tokens", d.tokens}}.dump();
    out += '\n';
  }
  util::write_file_atomic(path, out);
}

}  // namespace topiclab::preprocess
