#include "topiclab/eval.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <random>
#include <sstream>
#include <unordered_map>

#include "topiclab/error.hpp"
#include "topiclab/util.hpp"

namespace topiclab::eval {

namespace {

int parse_int(std::string_view field, const std::string& what) {
  field = util::trim(field);
  int value = 0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc{} || ptr != field.data() + field.size()) {
    throw Error(ErrorCode::MalformedRecord, what + ": '" + std::string(field) + "' is not an integer");
  }
  return value;
}

std::string fixed(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", x);
  return buf;
}

}  // namespace

EvalReport accuracy(const std::vector<lda::TopicAssignment>& assignments,
                    const std::vector<Annotation>& gold, int k) {
  if (gold.empty()) throw Error(ErrorCode::InvalidArgument, "accuracy of an empty gold set is undefined");
  if (k < 1) throw Error(ErrorCode::InvalidArgument, "k must be >= 1");
  std::unordered_map<std::string, const lda::TopicAssignment*> by_id;
  for (const auto& a : assignments) by_id.emplace(a.doc_id, &a);

  std::string missing;
  for (const auto& g : gold) {
    if (!by_id.count(g.doc_id)) missing += (missing.empty() ? "" : ", ") + g.doc_id;
  }
  if (!missing.empty()) throw Error(ErrorCode::MissingPrediction, "no prediction for: " + missing);

  EvalReport report;
  report.n = gold.size();
  report.confusion.setZero(k, k);
  std::size_t top1 = 0, top2 = 0;
  for (const auto& g : gold) {
    if (g.label < 1 || g.label > k) {
      throw Error(ErrorCode::InvalidArgument, "label " + std::to_string(g.label) + " of " +
                                                  g.doc_id + " outside 1.." + std::to_string(k));
    }
    const auto& a = *by_id.at(g.doc_id);
    const int truth = g.label - 1;
    if (a.dominant_topic < 0 || a.dominant_topic >= k) {
      throw Error(ErrorCode::InvalidArgument, "prediction for " + g.doc_id + " outside the model's topics");
    }
    ++report.confusion(truth, a.dominant_topic);
    if (a.dominant_topic == truth) {
      ++top1;
      ++top2;
    } else if (a.second_topic && *a.second_topic == truth) {
      ++top2;
    }
  }
  report.top1_accuracy = static_cast<double>(top1) / static_cast<double>(report.n);
  report.top2_accuracy = static_cast<double>(top2) / static_cast<double>(report.n);
  return report;
}

std::vector<EvalReport> prefix_accuracy(const std::vector<lda::TopicAssignment>& assignments,
                                        const std::vector<Annotation>& gold, int k,
                                        std::size_t step) {
  if (step == 0) throw Error(ErrorCode::InvalidArgument, "prefix step must be >= 1");
  std::vector<EvalReport> out;
  for (std::size_t n = step;; n += step) {
    const std::size_t len = std::min(n, gold.size());
    out.push_back(accuracy(assignments, {gold.begin(), gold.begin() + static_cast<std::ptrdiff_t>(len)}, k));
    if (len == gold.size()) break;
  }
  return out;
}

double random_baseline(int k, std::size_t n, std::size_t trials, std::uint64_t seed) {
  if (k < 1 || n == 0 || trials == 0) {
    throw Error(ErrorCode::InvalidArgument, "k, n and trials must be >= 1");
  }
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> label(0, k - 1);
  double total = 0.0;
  std::vector<int> gold(n);
  for (auto& g : gold) g = label(rng);
  for (std::size_t trial = 0; trial < trials; ++trial) {
    std::size_t hits = 0;
    for (int g : gold) hits += label(rng) == g ? 1 : 0;
    total += static_cast<double>(hits) / static_cast<double>(n);
  }
  return total / static_cast<double>(trials);
}

TopicHistogram topic_histogram(const std::vector<lda::TopicAssignment>& assignments, int k) {
  if (k < 1) throw Error(ErrorCode::InvalidArgument, "k must be >= 1");
  TopicHistogram h{std::vector<std::size_t>(static_cast<std::size_t>(k), 0),
                   std::vector<std::size_t>(static_cast<std::size_t>(k), 0)};
  for (const auto& a : assignments) {
    if (a.dominant_topic < 0 || a.dominant_topic >= k ||
        (a.second_topic && (*a.second_topic < 0 || *a.second_topic >= k))) {
      throw Error(ErrorCode::InvalidArgument, "assignment for " + a.doc_id + " outside 1.." + std::to_string(k));
    }
    ++h.dominant[static_cast<std::size_t>(a.dominant_topic)];
    if (a.second_topic) ++h.second[static_cast<std::size_t>(*a.second_topic)];
  }
  return h;
}

AnnotationFile read_annotations(const std::filesystem::path& path) {
  const auto lines = util::read_lines(path);
  AnnotationFile file;
  bool header_seen = false;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const auto line = util::trim(lines[i]);
    if (line.empty()) continue;
    if (line.front() == '#') {
      const auto body = util::trim(line.substr(1));
      if (body.rfind("model ", 0) == 0) file.model_hash = std::string(util::trim(body.substr(6)));
      continue;
    }
    const auto fields = util::split(line, ',');
    const std::string where = path.string() + ":" + std::to_string(i + 1);
    if (fields.size() != 2) throw Error(ErrorCode::MalformedRecord, where + ": expected doc_id,label");
    if (!header_seen) {
      header_seen = true;
      if (util::trim(fields[0]) == "doc_id") continue;
    }
    file.annotations.push_back({std::string(util::trim(fields[0])), parse_int(fields[1], where)});
  }
  return file;
}

void write_annotations(const std::filesystem::path& path, const AnnotationFile& file) {
  std::string out;
  if (file.model_hash) out += "# model " + *file.model_hash + "\n";
  out += "doc_id,label\n";
  for (const auto& a : file.annotations) out += a.doc_id + "," + std::to_string(a.label) + "\n";
  util::write_file_atomic(path, out);
}

std::string format_assignments(const std::vector<lda::TopicAssignment>& assignments) {
  std::string out = "doc_id,dominant_topic,dominant_pct,second_topic,second_pct\n";
  for (const auto& a : assignments) {
    out += a.doc_id + "," + std::to_string(a.dominant_topic + 1) + "," +
           std::to_string(a.dominant_pct()) + ",";
    if (a.second_topic) {
      out += std::to_string(*a.second_topic + 1) + "," + std::to_string(a.second_pct());
    } else {
      out += ",";
    }
    out += "\n";
  }
  return out;
}

std::vector<lda::TopicAssignment> parse_assignments(const std::string& csv) {
  std::vector<lda::TopicAssignment> out;
  std::istringstream in(csv);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || (line_no == 1 && line.rfind("doc_id,", 0) == 0)) continue;
    const auto f = util::split(line, ',');
    const std::string where = "assignment line " + std::to_string(line_no);
    if (f.size() != 5) throw Error(ErrorCode::MalformedRecord, where + ": expected 5 fields");
    lda::TopicAssignment a;
    a.doc_id = f[0];
    a.dominant_topic = parse_int(f[1], where) - 1;
    a.dominant_share = parse_int(f[2], where) / 100.0;
    if (!util::trim(f[3]).empty()) {
      a.second_topic = parse_int(f[3], where) - 1;
      a.second_share = parse_int(f[4], where) / 100.0;
    }
    out.push_back(std::move(a));
  }
  return out;
}

std::string format_report(const EvalReport& report) {
  std::string out = "metric,value\n";
  out += "n," + std::to_string(report.n) + "\n";
  out += "top1_accuracy," + fixed(report.top1_accuracy) + "\n";
  out += "top2_accuracy," + fixed(report.top2_accuracy) + "\n";
  out += "\nconfusion";
  for (Eigen::Index t = 0; t < report.confusion.cols(); ++t) out += ",pred_" + std::to_string(t + 1);
  out += "\n";
  for (Eigen::Index g = 0; g < report.confusion.rows(); ++g) {
    out += "gold_" + std::to_string(g + 1);
    for (Eigen::Index t = 0; t < report.confusion.cols(); ++t) {
      out += "," + std::to_string(report.confusion(g, t));
    }
    out += "\n";
  }
  return out;
}

std::string format_histogram(const TopicHistogram& histogram) {
  std::string out = "topic,dominant_count,second_count\n";
  for (std::size_t t = 0; t < histogram.dominant.size(); ++t) {
    out += std::to_string(t + 1) + "," + std::to_string(histogram.dominant[t]) + "," +
           std::to_string(histogram.second[t]) + "\n";
  }
  return out;
}

}  // namespace topiclab::eval
