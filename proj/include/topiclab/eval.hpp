#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "topiclab/lda.hpp"

namespace topiclab::eval {

/// A human label for one document; topics are 1-indexed.
struct Annotation {
  std::string doc_id;
  int label = 0;

  friend bool operator==(const Annotation&, const Annotation&) = default;
};

struct AnnotationFile {
  /// Hash of the model file whose topic indices the labels refer to, from a
  /// leading `# model <sha256>` line.
  std::optional<std::string> model_hash;
  std::vector<Annotation> annotations;
};

struct EvalReport {
  std::size_t n = 0;
  double top1_accuracy = 0.0;
  double top2_accuracy = 0.0;
  /// confusion(label - 1, dominant) counts, k x k.
  Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic> confusion;
};

/// Scores dominant (top1) and dominant-or-runner-up (top2) hits. Throws
/// Error(MissingPrediction) listing gold ids without an assignment,
/// Error(InvalidArgument) for an empty gold set or a label outside 1..k.
EvalReport accuracy(const std::vector<lda::TopicAssignment>& assignments,
                    const std::vector<Annotation>& gold, int k);

/// One report per nested prefix of `gold` of size step, 2*step, ... (the
/// full set is always included last).
std::vector<EvalReport> prefix_accuracy(const std::vector<lda::TopicAssignment>& assignments,
                                        const std::vector<Annotation>& gold, int k,
                                        std::size_t step = 100);

/// Mean accuracy of uniform random guessing against one seeded draw of
/// random gold labels, over `trials` independent guessing rounds.
double random_baseline(int k, std::size_t n, std::size_t trials, std::uint64_t seed);

struct TopicHistogram {
  std::vector<std::size_t> dominant;  // index t = topic t (0-based)
  std::vector<std::size_t> second;
};

TopicHistogram topic_histogram(const std::vector<lda::TopicAssignment>& assignments, int k);

/// CSV with header `doc_id,label`; an optional `# model <hash>` first line.
AnnotationFile read_annotations(const std::filesystem::path& path);
void write_annotations(const std::filesystem::path& path, const AnnotationFile& file);

/// CSV `doc_id,dominant_topic,dominant_pct,second_topic,second_pct`, 1-indexed.
std::string format_assignments(const std::vector<lda::TopicAssignment>& assignments);
std::vector<lda::TopicAssignment> parse_assignments(const std::string& csv);

/// Summary rows then a `confusion` block, one row per gold label.
std::string format_report(const EvalReport& report);
std::string format_histogram(const TopicHistogram& histogram);

}  // namespace topiclab::eval
