#include "topiclab/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <csignal>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <optional>
#include <pthread.h>

#include "topiclab/broker_net.hpp"
#include "topiclab/coherence.hpp"
#include "topiclab/corpus.hpp"
#include "topiclab/error.hpp"
#include "topiclab/eval.hpp"
#include "topiclab/ingest.hpp"
#include "topiclab/model_io.hpp"
#include "topiclab/preprocess.hpp"
#include "topiclab/synth.hpp"
#include "topiclab/util.hpp"
#include "topiclab/visexport.hpp"

namespace topiclab::cli {

namespace fs = std::filesystem;

namespace {

constexpr std::uint64_t kDefaultSeed = 42;

std::string num(double x, int digits = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, x);
  return buf;
}

struct VocabFlags {
  std::string vocab_in;
  std::uint64_t no_below = 2;
  double no_above = 0.5;

  void add(CLI::App* sub) {
    sub->add_option("--vocab", vocab_in, "Reuse an existing vocabulary file instead of building one");
    sub->add_option("--no-below", no_below, "Drop terms in fewer documents than this");
    sub->add_option("--no-above", no_above, "Drop terms in more than this fraction of documents");
  }

  corpus::Vocabulary vocabulary(const std::vector<preprocess::TokenizedDoc>& docs) const {
    if (!vocab_in.empty()) return corpus::Vocabulary::load(vocab_in);
    return corpus::Vocabulary::build(docs, no_below, no_above);
  }
};

// --- broker / ingest / consume -------------------------------------------

struct BrokerCmd {
  std::string listen = "127.0.0.1:9092";
  std::size_t max_payload = 65536;
  std::string data_dir;

  void operator()(std::ostream& out) const {
    broker::BrokerConfig config;
    config.listen_address = listen;
    config.max_payload_bytes = max_payload;
    if (!data_dir.empty()) config.data_dir = fs::path(data_dir);

    // Block the stop signals before any thread starts so only sigwait sees them.
    sigset_t signals;
    sigemptyset(&signals);
    sigaddset(&signals, SIGINT);
    sigaddset(&signals, SIGTERM);
    pthread_sigmask(SIG_BLOCK, &signals, nullptr);

    broker::Broker broker(config);
    broker::BrokerServer server(broker, broker::parse_endpoint(listen));
    server.start();
    out << "broker listening on port " << server.port() << std::endl;
    int sig = 0;
    sigwait(&signals, &sig);
    server.stop();
    out << "broker stopped" << std::endl;
  }
};

struct IngestCmd {
  std::string broker_address = "127.0.0.1:9092";
  std::string topic = "tweets";
  std::string in;
  std::string keywords;

  void operator()(std::ostream& out) const {
    const auto keys = keywords.empty() ? ingest::KeywordSet::defaults() : ingest::KeywordSet::load(keywords);
    if (!fs::exists(in)) throw Error(ErrorCode::Io, "input file not found: " + in);
    broker::BrokerClient client(broker_address);
    const auto n = ingest::replay_produce(in, client, topic, keys);
    out << "published " << n << " records to " << topic << "\n";
  }
};

struct ConsumeCmd {
  std::string broker_address = "127.0.0.1:9092";
  std::string topic = "tweets";
  std::uint64_t from = 0;
  std::string out_path;

  void operator()(std::ostream& out) const {
    broker::BrokerClient client(broker_address);
    const auto docs = ingest::consume_documents(client, topic, from);
    ingest::write_documents(out_path, docs);
    out << "wrote " << docs.size() << " documents to " << out_path << "\n";
  }
};

// --- preprocess / train / select-k -----------------------------------------

struct PreprocessCmd {
  std::string in;
  std::string out_path;
  std::string stopwords;
  std::uint64_t min_count = 5;
  double threshold = 10.0;

  void operator()(std::ostream& out) const {
    const auto docs = ingest::read_documents(in);
    const auto stops =
        stopwords.empty() ? preprocess::StopwordSet::english() : preprocess::StopwordSet::load(stopwords);
    const auto tokenized = preprocess::preprocess_corpus(docs, stops, {min_count, threshold});
    preprocess::write_tokenized(out_path, tokenized);
    out << "wrote " << tokenized.size() << " tokenized documents to " << out_path << "\n";
  }
};

void print_topics(std::ostream& out, const coherence::TopTerms& topics) {
  for (std::size_t t = 0; t < topics.size(); ++t) {
    out << "topic " << t + 1 << ":";
    for (const auto& term : topics[t]) out << " " << term;
    out << "\n";
  }
}

struct TrainCmd {
  std::string algo = "lda";
  int k = 4;
  std::uint64_t seed = kDefaultSeed;
  std::string in;
  std::string out_path;
  std::string vocab_out;
  VocabFlags vocab;
  int iters = 0;
  double alpha = -1.0;
  double beta = 0.01;
  double tol = 1e-5;
  bool include_w = false;
  std::size_t top_n = 10;

  void operator()(std::ostream& out) const {
    const auto algorithm = coherence::parse_algorithm(algo);
    const auto docs = preprocess::read_tokenized(in);
    const auto v = vocab.vocabulary(docs);
    const auto counts = corpus::bow_matrix(docs, v);
    v.save(vocab_out.empty() ? out_path + ".vocab.tsv" : vocab_out);

    coherence::TopTerms topics;
    model_io::AnyModel any;
    switch (algorithm) {
      case coherence::Algorithm::Lsa: {
        auto m = lsa::train_lsa(corpus::tfidf_weight(counts, v), k, seed);
        m.vocab_hash = v.hash();
        topics = coherence::top_terms(m, v, top_n);
        any = std::move(m);
        break;
      }
      case coherence::Algorithm::Nmf: {
        nmf::NmfOptions options;
        if (iters > 0) options.max_iters = iters;
        options.tol = tol;
        auto m = nmf::train_nmf(corpus::tfidf_weight(counts, v), k, seed, options);
        m.vocab_hash = v.hash();
        topics = coherence::top_terms(m, v, top_n);
        const auto shared = nmf::shared_top_terms(m, top_n);
        out << "nmf: " << m.n_iters << " iterations, " << shared
            << " terms shared between top lists\n";
        if (!include_w) m.w.resize(0, 0);
        any = std::move(m);
        break;
      }
      case coherence::Algorithm::Lda: {
        lda::LdaOptions options;
        options.alpha = alpha;
        options.beta = beta;
        if (iters > 0) options.n_iters = iters;
        auto m = lda::train_lda(counts, k, seed, options);
        m.vocab_hash = v.hash();
        topics = coherence::top_terms(m, v, top_n);
        any = std::move(m);
        break;
      }
    }
    model_io::save(out_path, any);
    print_topics(out, topics);
    out << "model written to " << out_path << "\n";
  }
};

struct SelectKCmd {
  std::string algo = "lda";
  std::string krange = "2..10";
  std::string measure;
  std::uint64_t seed = kDefaultSeed;
  std::string in;
  std::string report;
  VocabFlags vocab;
  int iters = 0;
  int window = 110;
  bool sequential = false;

  void operator()(std::ostream& out) const {
    const auto algorithm = coherence::parse_algorithm(algo);
    const auto m = measure.empty() ? coherence::default_measure(algorithm) : coherence::parse_measure(measure);
    const auto ks = parse_k_range(krange);
    const auto docs = preprocess::read_tokenized(in);
    const auto v = vocab.vocabulary(docs);

    coherence::SweepOptions options;
    options.cv_window = window;
    options.parallel = !sequential;
    if (iters > 0) {
      options.lda.n_iters = iters;
      options.nmf.max_iters = iters;
    }
    const auto result = coherence::select_k(algorithm, ks, m, docs, v, seed, options);

    std::string csv = "algorithm,measure,k,topic_index,score\n";
    const auto prefix = coherence::to_string(algorithm) + "," + coherence::to_string(m) + ",";
    for (const auto& [k, rep] : result.reports) {
      for (std::size_t t = 0; t < rep.per_topic.size(); ++t) {
        csv += prefix + std::to_string(k) + "," + std::to_string(t + 1) + "," + num(rep.per_topic[t], 12) + "\n";
      }
      csv += prefix + std::to_string(k) + ",aggregate," + num(rep.aggregate, 12) + "\n";
    }
    if (!report.empty()) util::write_file_atomic(report, csv);

    for (const auto& [k, score] : result.scores) out << "k=" << k << " " << coherence::to_string(m) << "=" << num(score) << "\n";
    out << "best_k=" << result.best_k << "\n";
  }
};

// --- infer / eval / baseline / histogram / export-vis -----------------------

std::vector<lda::TopicAssignment> infer_all(const lda::LdaModel& model, const corpus::Vocabulary& v,
                                            const std::vector<preprocess::TokenizedDoc>& docs,
                                            int iters, std::uint64_t seed) {
  std::vector<lda::TopicAssignment> out;
  out.reserve(docs.size());
  for (std::size_t i = 0; i < docs.size(); ++i) {
    const auto theta = lda::infer_theta(model, v, docs[i].tokens, iters, seed + i);
    out.push_back(lda::dominant_topics(theta, docs[i].doc_id));
  }
  return out;
}

struct InferCmd {
  std::string model_path;
  std::string vocab_path;
  std::string in;
  std::string out_path;
  int iters = 100;
  std::uint64_t seed = kDefaultSeed;

  void operator()(std::ostream& out) const {
    const auto model = model_io::load_lda(model_path);
    const auto v = corpus::Vocabulary::load(vocab_path.empty() ? model_path + ".vocab.tsv" : vocab_path);
    const auto docs = preprocess::read_tokenized(in);
    const auto assignments = infer_all(model, v, docs, iters, seed);
    util::write_file_atomic(out_path, eval::format_assignments(assignments));
    out << "wrote " << assignments.size() << " assignments to " << out_path << "\n";
  }
};

int resolve_k(const std::string& model_path, int k, const std::optional<std::string>& annotated_hash) {
  if (!model_path.empty()) {
    if (annotated_hash && *annotated_hash != model_io::file_hash(model_path)) {
      throw Error(ErrorCode::VocabularyMismatch,
                  "annotations were made against a different model than " + model_path);
    }
    return model_io::load_lda(model_path).k;
  }
  if (k < 1) throw Error(ErrorCode::InvalidArgument, "pass --model or --k");
  return k;
}

struct EvalCmd {
  std::string assignments;
  std::string gold;
  std::string model_path;
  int k = 0;
  std::size_t prefix_step = 0;
  std::string out_path;

  void operator()(std::ostream& out) const {
    const auto predicted = eval::parse_assignments(util::read_file(assignments));
    const auto annotations = eval::read_annotations(gold);
    const int topics = resolve_k(model_path, k, annotations.model_hash);
    std::string text;
    if (prefix_step > 0) {
      text = "n,top1_accuracy,top2_accuracy\n";
      for (const auto& r : eval::prefix_accuracy(predicted, annotations.annotations, topics, prefix_step)) {
        text += std::to_string(r.n) + "," + num(r.top1_accuracy) + "," + num(r.top2_accuracy) + "\n";
      }
    } else {
      text = eval::format_report(eval::accuracy(predicted, annotations.annotations, topics));
    }
    if (out_path.empty()) {
      out << text;
    } else {
      util::write_file_atomic(out_path, text);
      out << "report written to " << out_path << "\n";
    }
  }
};

struct BaselineCmd {
  int k = 4;
  std::size_t n = 500;
  std::size_t trials = 1000;
  std::uint64_t seed = kDefaultSeed;

  void operator()(std::ostream& out) const {
    out << "random_baseline k=" << k << " n=" << n << " trials=" << trials << " mean_accuracy="
        << num(eval::random_baseline(k, n, trials, seed)) << "\n";
  }
};

struct HistogramCmd {
  std::string assignments;
  std::string model_path;
  int k = 0;
  std::string out_path;

  void operator()(std::ostream& out) const {
    const auto predicted = eval::parse_assignments(util::read_file(assignments));
    const auto text = eval::format_histogram(eval::topic_histogram(predicted, resolve_k(model_path, k, std::nullopt)));
    if (out_path.empty()) {
      out << text;
    } else {
      util::write_file_atomic(out_path, text);
      out << "histogram written to " << out_path << "\n";
    }
  }
};

struct ExportVisCmd {
  std::string model_path;
  std::string vocab_path;
  std::string in;
  std::string out_path;
  double lambda = 0.6;
  std::size_t terms = 30;
  int iters = 100;
  std::uint64_t seed = kDefaultSeed;

  void operator()(std::ostream& out) const {
    const auto model = model_io::load_lda(model_path);
    const auto v = corpus::Vocabulary::load(vocab_path.empty() ? model_path + ".vocab.tsv" : vocab_path);
    const auto docs = preprocess::read_tokenized(in);
    const auto bow = corpus::bow_matrix(docs, v);
    Eigen::MatrixXd theta = model.theta_train;
    if (theta.rows() != static_cast<Eigen::Index>(docs.size())) {
      // Not the training corpus: fold every document in.
      theta.resize(static_cast<Eigen::Index>(docs.size()), model.k);
      for (std::size_t i = 0; i < docs.size(); ++i) {
        theta.row(static_cast<Eigen::Index>(i)) =
            lda::infer_theta(model, v, docs[i].tokens, iters, seed + i).transpose();
      }
    }
    const auto vis = visexport::export_vis(model, v, bow, theta, lambda, terms);
    visexport::write_vis_file(vis, out_path);
    out << "visualization data written to " << out_path << "\n";
  }
};

struct SynthCmd {
  synth::SynthOptions options;
  std::uint64_t seed = kDefaultSeed;
  std::string tokens_out;
  std::string records_out;
  std::string phi_out;

  void operator()(std::ostream& out) const {
    if (tokens_out.empty() && records_out.empty() && phi_out.empty()) {
      throw Error(ErrorCode::InvalidArgument, "pass at least one of --out-tokens, --out-records, --out-phi");
    }
    const auto corpus = synth::generate(options, seed);
    if (!tokens_out.empty()) preprocess::write_tokenized(tokens_out, corpus.docs);
    if (!records_out.empty()) util::write_file_atomic(records_out, synth::to_records(corpus));
    if (!phi_out.empty()) util::write_file_atomic(phi_out, synth::phi_to_json(corpus));
    out << "generated " << corpus.docs.size() << " documents over " << corpus.vocab.size() << " terms\n";
  }
};

// `key = value` lines (optionally under [subcommand] sections) become option
// defaults, so flags still win.
void apply_config(CLI::App& app, const std::string& path) {
  if (!fs::exists(path)) throw Error(ErrorCode::Io, "config file not found: " + path);
  const auto items = CLI::ConfigINI().from_file(path);
  for (const auto& item : items) {
    if (item.name.empty() || item.name == "++" || item.name == "--") continue;
    const std::string flag = "--" + item.name;
    std::string value;
    for (const auto& v : item.inputs) value += (value.empty() ? "" : " ") + v;
    bool matched = false;
    for (auto* sub : app.get_subcommands([](CLI::App*) { return true; })) {
      if (!item.parents.empty() && item.parents.front() != sub->get_name()) continue;
      if (auto* opt = sub->get_option_no_throw(flag)) {
        opt->default_val(value);
        matched = true;
      }
    }
    if (!matched) throw CLI::ConversionError("config key '" + item.name + "' matches no option");
  }
}

std::optional<std::string> find_config(const std::vector<std::string>& args) {
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) return args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) return args[i].substr(9);
  }
  return std::nullopt;
}

}  // namespace

std::vector<int> parse_k_range(const std::string& text) {
  const auto dots = text.find("..");
  try {
    std::size_t used = 0;
    if (dots == std::string::npos) {
      const int k = std::stoi(text, &used);
      if (used != text.size() || k < 1) throw std::invalid_argument(text);
      return {k};
    }
    const std::string lo_text = text.substr(0, dots);
    const std::string hi_text = text.substr(dots + 2);
    const int lo = std::stoi(lo_text, &used);
    if (used != lo_text.size()) throw std::invalid_argument(text);
    const int hi = std::stoi(hi_text, &used);
    if (used != hi_text.size() || lo < 1 || hi < lo) throw std::invalid_argument(text);
    std::vector<int> ks;
    for (int k = lo; k <= hi; ++k) ks.push_back(k);
    return ks;
  } catch (const std::logic_error&) {
    throw Error(ErrorCode::InvalidArgument, "bad k range '" + text + "', expected lo..hi");
  }
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Topic mining pipeline: broker, preprocessing, LSA/NMF/LDA, coherence, evaluation"};
  app.name("topiclab");
  app.require_subcommand(1);
  app.fallthrough();
  std::string config;
  app.add_option("--config", config, "key = value file overriding defaults (flags win)");

  std::function<void(std::ostream&)> action;
  auto bind = [&](CLI::App* sub, auto& cmd) {
    sub->callback([&action, &cmd] { action = [&cmd](std::ostream& o) { cmd(o); }; });
  };
  auto add_seed = [](CLI::App* sub, std::uint64_t& seed) {
    sub->add_option("--seed", seed, "Random seed")->envname("TOPICLAB_SEED");
  };

  BrokerCmd broker_cmd;
  auto* broker = app.add_subcommand("broker", "Serve the message broker until SIGINT/SIGTERM");
  broker->add_option("--listen", broker_cmd.listen, "host:port to bind");
  broker->add_option("--max-payload", broker_cmd.max_payload, "Largest accepted message in bytes");
  broker->add_option("--data-dir", broker_cmd.data_dir, "Persist topic logs here");
  bind(broker, broker_cmd);

  IngestCmd ingest_cmd;
  auto* ingest = app.add_subcommand("ingest", "Replay a tweet-record file into a broker topic");
  ingest->add_option("--broker", ingest_cmd.broker_address, "Broker host:port");
  ingest->add_option("--topic", ingest_cmd.topic, "Broker topic");
  ingest->add_option("--in", ingest_cmd.in, "Newline-delimited JSON records")->required();
  ingest->add_option("--keywords", ingest_cmd.keywords, "Keyword file (default: bundled list)");
  bind(ingest, ingest_cmd);

  ConsumeCmd consume_cmd;
  auto* consume = app.add_subcommand("consume", "Read a broker topic into a document file");
  consume->add_option("--broker", consume_cmd.broker_address, "Broker host:port");
  consume->add_option("--topic", consume_cmd.topic, "Broker topic");
  consume->add_option("--from", consume_cmd.from, "First offset");
  consume->add_option("--out", consume_cmd.out_path, "Document JSONL output")->required();
  bind(consume, consume_cmd);

  PreprocessCmd pre_cmd;
  auto* pre = app.add_subcommand("preprocess", "Clean, tokenize, join phrases and stem documents");
  pre->add_option("--in", pre_cmd.in, "Document JSONL")->required();
  pre->add_option("--out", pre_cmd.out_path, "Tokenized JSONL output")->required();
  pre->add_option("--stopwords", pre_cmd.stopwords, "Stopword file (default: bundled English list)");
  pre->add_option("--min-count", pre_cmd.min_count, "Phrase minimum pair count");
  pre->add_option("--threshold", pre_cmd.threshold, "Phrase score threshold");
  bind(pre, pre_cmd);

  TrainCmd train_cmd;
  auto* train = app.add_subcommand("train", "Train an LSA, NMF or LDA model");
  train->add_option("--algo", train_cmd.algo, "lsa, nmf or lda")->check(CLI::IsMember({"lsa", "nmf", "lda"}));
  train->add_option("--k", train_cmd.k, "Number of topics")->check(CLI::PositiveNumber);
  add_seed(train, train_cmd.seed);
  train->add_option("--in", train_cmd.in, "Tokenized JSONL")->required();
  train->add_option("--out", train_cmd.out_path, "Model file")->required();
  train->add_option("--vocab-out", train_cmd.vocab_out, "Vocabulary file (default: <out>.vocab.tsv)");
  train_cmd.vocab.add(train);
  train->add_option("--iters", train_cmd.iters, "Gibbs sweeps (lda) or maximum updates (nmf)");
  train->add_option("--alpha", train_cmd.alpha, "LDA document-topic prior (default 50/k)");
  train->add_option("--beta", train_cmd.beta, "LDA topic-word prior");
  train->add_option("--tol", train_cmd.tol, "NMF relative-decrease stopping tolerance");
  train->add_flag("--include-w", train_cmd.include_w, "Store the NMF document factor too");
  train->add_option("--top-n", train_cmd.top_n, "Terms printed per topic");
  bind(train, train_cmd);

  SelectKCmd select_cmd;
  auto* select = app.add_subcommand("select-k", "Sweep k and pick the most coherent model");
  select->add_option("--algo", select_cmd.algo, "lsa, nmf or lda")->check(CLI::IsMember({"lsa", "nmf", "lda"}));
  select->add_option("--krange", select_cmd.krange, "Inclusive range lo..hi");
  select->add_option("--measure", select_cmd.measure, "umass, cv or tcw2v (default: cv, tcw2v for nmf)")
      ->check(CLI::IsMember({"umass", "cv", "tcw2v"}));
  add_seed(select, select_cmd.seed);
  select->add_option("--in", select_cmd.in, "Tokenized JSONL")->required();
  select->add_option("--report", select_cmd.report, "Per-topic coherence CSV");
  select_cmd.vocab.add(select);
  select->add_option("--iters", select_cmd.iters, "Gibbs sweeps (lda) or maximum updates (nmf)");
  select->add_option("--window", select_cmd.window, "c_v sliding window")->check(CLI::PositiveNumber);
  select->add_flag("--sequential", select_cmd.sequential, "Train one k at a time");
  bind(select, select_cmd);

  InferCmd infer_cmd;
  auto* infer = app.add_subcommand("infer", "Dominant topics of new documents under an LDA model");
  infer->add_option("--model", infer_cmd.model_path, "LDA model file")->required();
  infer->add_option("--vocab", infer_cmd.vocab_path, "Vocabulary file (default: <model>.vocab.tsv)");
  infer->add_option("--in", infer_cmd.in, "Tokenized JSONL")->required();
  infer->add_option("--out", infer_cmd.out_path, "Assignment CSV")->required();
  infer->add_option("--iters", infer_cmd.iters, "Fold-in sweeps")->check(CLI::PositiveNumber);
  add_seed(infer, infer_cmd.seed);
  bind(infer, infer_cmd);

  EvalCmd eval_cmd;
  auto* ev = app.add_subcommand("eval", "Accuracy of assignments against annotations");
  ev->add_option("--assignments", eval_cmd.assignments, "Assignment CSV from infer")->required();
  ev->add_option("--gold", eval_cmd.gold, "Annotation CSV doc_id,label")->required();
  ev->add_option("--model", eval_cmd.model_path, "Model the labels refer to (checks the recorded hash)");
  ev->add_option("--k", eval_cmd.k, "Number of topics when no model is given");
  ev->add_option("--prefix-step", eval_cmd.prefix_step, "Evaluate nested prefixes of this step");
  ev->add_option("--out", eval_cmd.out_path, "Report CSV (default: stdout)");
  bind(ev, eval_cmd);

  BaselineCmd base_cmd;
  auto* base = app.add_subcommand("baseline", "Mean accuracy of random guessing");
  base->add_option("--k", base_cmd.k, "Number of topics")->check(CLI::PositiveNumber);
  base->add_option("--n", base_cmd.n, "Documents per trial")->check(CLI::PositiveNumber);
  base->add_option("--trials", base_cmd.trials, "Trials")->check(CLI::PositiveNumber);
  add_seed(base, base_cmd.seed);
  bind(base, base_cmd);

  HistogramCmd hist_cmd;
  auto* hist = app.add_subcommand("histogram", "Dominant and second-dominant topic counts");
  hist->add_option("--assignments", hist_cmd.assignments, "Assignment CSV from infer")->required();
  hist->add_option("--model", hist_cmd.model_path, "Model file, for k");
  hist->add_option("--k", hist_cmd.k, "Number of topics when no model is given");
  hist->add_option("--out", hist_cmd.out_path, "Histogram CSV (default: stdout)");
  bind(hist, hist_cmd);

  ExportVisCmd vis_cmd;
  auto* vis = app.add_subcommand("export-vis", "Topic bubbles and salient terms as JSON");
  vis->add_option("--model", vis_cmd.model_path, "LDA model file")->required();
  vis->add_option("--vocab", vis_cmd.vocab_path, "Vocabulary file (default: <model>.vocab.tsv)");
  vis->add_option("--in", vis_cmd.in, "Tokenized JSONL")->required();
  vis->add_option("--out", vis_cmd.out_path, "Output JSON")->required();
  vis->add_option("--lambda", vis_cmd.lambda, "Relevance weight")->check(CLI::Range(0.0, 1.0));
  vis->add_option("--terms", vis_cmd.terms, "Terms per list")->check(CLI::PositiveNumber);
  vis->add_option("--iters", vis_cmd.iters, "Fold-in sweeps for documents outside training");
  add_seed(vis, vis_cmd.seed);
  bind(vis, vis_cmd);

  SynthCmd synth_cmd;
  auto* syn = app.add_subcommand("synth", "Generate a planted-topic corpus");
  add_seed(syn, synth_cmd.seed);
  syn->add_option("--docs", synth_cmd.options.n_docs, "Number of documents");
  syn->add_option("--k", synth_cmd.options.k, "Planted topics");
  syn->add_option("--vocab-size", synth_cmd.options.vocab_size, "Vocabulary size");
  syn->add_option("--alpha", synth_cmd.options.alpha, "Dirichlet concentration of theta");
  syn->add_option("--noise", synth_cmd.options.noise, "Topic mass spread over the whole vocabulary");
  syn->add_option("--min-len", synth_cmd.options.min_len, "Shortest document");
  syn->add_option("--max-len", synth_cmd.options.max_len, "Longest document");
  syn->add_option("--out-tokens", synth_cmd.tokens_out, "Tokenized JSONL");
  syn->add_option("--out-records", synth_cmd.records_out, "Tweet-format records for ingest");
  syn->add_option("--out-phi", synth_cmd.phi_out, "Planted topic-word matrix as JSON");
  bind(syn, synth_cmd);

  try {
    if (const auto path = find_config(args)) apply_config(app, *path);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (action) action(out);
    return 0;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

int run(const std::vector<std::string>& args) { return run(args, std::cout, std::cerr); }

}  // namespace topiclab::cli
