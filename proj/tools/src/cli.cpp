#include "cli.hpp"

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <functional>
#include <iomanip>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ordersum/candidates.hpp"
#include "ordersum/corpus.hpp"
#include "ordersum/embedder.hpp"
#include "ordersum/error.hpp"
#include "ordersum/eval.hpp"
#include "ordersum/model.hpp"
#include "ordersum/oracle.hpp"
#include "ordersum/reranker.hpp"
#include "ordersum/run_config.hpp"
#include "ordersum/synthetic.hpp"
#include "ordersum/trainer.hpp"

namespace ordersum::cli {
namespace {

using nlohmann::ordered_json;

// The config file is read before flag parsing so that every flag can bind
// straight into the loaded values and override them.
std::string find_config_path(int argc, const char* const* argv) {
  for (int i = 1; i < argc; ++i) {
    const std::string_view arg = argv[i];
    if (arg == "--config" && i + 1 < argc) return argv[i + 1];
    if (arg.starts_with("--config=")) return std::string(arg.substr(9));
  }
  return {};
}

void require(const std::string& value, std::string_view flag) {
  if (value.empty()) throw Error(std::string(flag) + " is required (flag or config file)");
}

DatasetSplit load_split(const std::string& path, std::string name, std::size_t max_docs,
                        std::ostream& err) {
  IngestOptions options;
  options.max_docs = max_docs;
  options.warnings = &err;
  return ingest_jsonl(path, std::move(name), options);
}

EmbeddingMap embeddings_for(const DatasetSplit& split, const std::string& path, std::size_t d,
                            std::uint64_t seed) {
  if (!path.empty()) return load_embeddings(path, split);
  return toy_embed_all(split, d, seed);
}

// An explicit --seed wins; otherwise reuse the toy seed recorded at training time.
std::uint64_t toy_seed_for(const Checkpoint& checkpoint, const CLI::Option* seed_option,
                           std::uint64_t configured) {
  if (seed_option->count() > 0 || !checkpoint.toy_seed) return configured;
  return *checkpoint.toy_seed;
}

std::size_t channel_size(const EmbeddingMap& embeddings) {
  return embeddings.empty() ? 0 : embeddings.begin()->second.d;
}

void write_to(const std::string& path, std::ostream& fallback,
              const std::function<void(std::ostream&)>& body) {
  if (path.empty() || path == "-") {
    body(fallback);
    return;
  }
  std::ofstream file(path);
  if (!file) throw Error("cannot write " + path);
  body(file);
  if (!file) throw Error("write failed for " + path);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void print_rows(std::ostream& out, const std::vector<EvalRow>& rows) {
  out << std::left << std::setw(18) << "system" << std::right << std::setw(9) << "R-1"
      << std::setw(9) << "R-2" << std::setw(9) << "R-L" << std::setw(9) << "R-Lnorm"
      << std::setw(7) << "docs" << '\n';
  out << std::fixed << std::setprecision(4);
  for (const auto& row : rows) {
    out << std::left << std::setw(18) << row.system << std::right << std::setw(9) << row.r1
        << std::setw(9) << row.r2 << std::setw(9) << row.rl_full << std::setw(9) << row.rl_norm
        << std::setw(7) << row.count << '\n';
  }
  out.unsetf(std::ios::floatfield);
}

TrainState state_from_curves(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open curves " + path);
  TrainState state;
  state.metrics_log = read_curves(in);
  if (!state.metrics_log.empty()) state.step = state.metrics_log.back().step;
  return state;
}

void add_candidate_options(CLI::App& cmd, CandidateConfig& config) {
  cmd.add_option("--k", config.k, "Number of key sentences")->capture_default_str();
  cmd.add_option("--sizes", config.sizes, "Candidate sizes, comma separated")
      ->delimiter(',')
      ->capture_default_str();
  const std::map<std::string, CandidateMode> modes{{"permutation", CandidateMode::kPermutation},
                                                   {"combination", CandidateMode::kCombination}};
  cmd.add_option("--mode", config.mode, "Candidate generation: permutation or combination")
      ->transform(CLI::CheckedTransformer(modes, CLI::ignore_case));
}

class Program {
 public:
  Program(std::ostream& out, std::ostream& err) : out_(out), err_(err) {}

  int run(int argc, const char* const* argv);

 private:
  void add_ingest();
  void add_synth();
  void add_embed();
  void add_oracle();
  void add_train();
  void add_summarize();
  void add_evaluate();
  void add_analyze();
  void add_candidates();

  CLI::App* subcommand(const char* name, const char* description) {
    CLI::App* cmd = app_.add_subcommand(name, description);
    cmd->add_option("--config", config_path_, "JSON run config; flags override its values");
    return cmd;
  }

  std::ostream& out_;
  std::ostream& err_;
  CLI::App app_{"Order-aware extractive summarization", "ordersum"};
  RunConfig config_;
  std::string config_path_;
  std::function<void()> action_;
};

void Program::add_ingest() {
  auto* cmd = subcommand("ingest", "Validate a JSONL corpus and print split statistics");
  auto split = std::make_shared<std::string>("test");
  cmd->add_option("--corpus", config_.paths.corpus, "Corpus JSONL file");
  cmd->add_option("--split", *split, "Split name")->capture_default_str();
  cmd->add_option("--max-docs", config_.max_docs, "Keep only the first N documents (0 = all)");
  cmd->callback([this, split] {
    action_ = [this, split] {
      require(config_.paths.corpus, "--corpus");
      const auto data = load_split(config_.paths.corpus, *split, config_.max_docs, err_);
      const SplitStats stats = compute_stats(data);
      out_ << "split: " << data.name << '\n'
           << "documents: " << stats.documents << '\n'
           << std::fixed << std::setprecision(2)
           << "mean sentences: " << stats.mean_sentences << '\n'
           << "mean document tokens: " << stats.mean_document_tokens << '\n'
           << "mean reference tokens: " << stats.mean_reference_tokens << '\n';
      out_.unsetf(std::ios::floatfield);
    };
  });
}

void Program::add_synth() {
  auto* cmd = subcommand("synth", "Write a synthetic order-separable corpus");
  auto synthetic = std::make_shared<SyntheticConfig>();
  auto name = std::make_shared<std::string>("syn");
  auto out_path = std::make_shared<std::string>();
  cmd->add_option("--out", *out_path, "Output corpus JSONL")->required();
  cmd->add_option("--documents", synthetic->documents, "Number of documents")->capture_default_str();
  cmd->add_option("--name", *name, "Document id prefix")->capture_default_str();
  cmd->add_option("--seed", synthetic->seed, "Random seed")->capture_default_str();
  cmd->callback([this, synthetic, name, out_path] {
    action_ = [this, synthetic, name, out_path] {
      const auto data = make_synthetic_corpus(*synthetic, *name);
      write_to(*out_path, out_, [&](std::ostream& os) { write_jsonl(data, os); });
      err_ << "wrote " << data.size() << " documents\n";
    };
  });
}

void Program::add_embed() {
  auto* cmd = subcommand("embed", "Write toy feature-hashed embeddings for a corpus");
  auto out_path = std::make_shared<std::string>();
  cmd->add_option("--corpus", config_.paths.corpus, "Corpus JSONL file");
  cmd->add_option("--out", *out_path, "Output embedding JSONL")->required();
  cmd->add_option("--d", config_.d, "Channel size")->capture_default_str();
  cmd->add_option("--seed", config_.train.seed, "Hash seed")->capture_default_str();
  cmd->add_option("--max-docs", config_.max_docs, "Keep only the first N documents (0 = all)");
  cmd->callback([this, out_path] {
    action_ = [this, out_path] {
      require(config_.paths.corpus, "--corpus");
      const auto data = load_split(config_.paths.corpus, "test", config_.max_docs, err_);
      const auto embeddings = toy_embed_all(data, config_.d, config_.train.seed);
      write_to(*out_path, out_, [&](std::ostream& os) { write_embeddings_jsonl(embeddings, os); });
    };
  });
}

void Program::add_oracle() {
  auto* cmd = subcommand("oracle", "Write greedy ORACLE and Ordered ORACLE labels");
  cmd->add_option("--corpus", config_.paths.corpus, "Corpus JSONL file");
  cmd->add_option("--out", config_.paths.labels, "Output label JSONL ('-' for stdout)");
  cmd->add_option("--max-sentences", config_.max_sentences, "Greedy selection cap")
      ->capture_default_str();
  cmd->add_option("--permutation-cap", config_.permutation_cap,
                  "Largest selection the order search will permute")
      ->capture_default_str();
  cmd->add_option("--max-docs", config_.max_docs, "Keep only the first N documents (0 = all)");
  cmd->add_flag("--stemming", config_.train.stemming, "Porter-stem tokens before scoring");
  cmd->callback([this] {
    action_ = [this] {
      require(config_.paths.corpus, "--corpus");
      const auto data = load_split(config_.paths.corpus, "train", config_.max_docs, err_);
      std::vector<OracleLabel> labels;
      labels.reserve(data.size());
      for (const auto& doc : data.documents) {
        labels.push_back(ordered_oracle(doc, config_.max_sentences, config_.permutation_cap,
                                        config_.train.stemming));
      }
      write_to(config_.paths.labels, out_, [&](std::ostream& os) { write_labels_jsonl(labels, os); });
    };
  });
}

void Program::add_train() {
  auto* cmd = subcommand("train", "Two-phase training; writes a checkpoint and validation curves");
  auto svg = std::make_shared<std::string>();
  auto phase1_checkpoint = std::make_shared<std::string>();
  auto save_config = std::make_shared<std::string>();
  TrainConfig& t = config_.train;
  cmd->add_option("--corpus", config_.paths.corpus, "Training corpus JSONL");
  cmd->add_option("--valid", config_.paths.valid, "Validation corpus JSONL");
  cmd->add_option("--labels", config_.paths.labels, "Label JSONL (computed greedily if absent)");
  cmd->add_option("--embeddings", config_.paths.embeddings,
                  "Training embedding JSONL (toy embeddings if absent)");
  cmd->add_option("--valid-embeddings", config_.paths.valid_embeddings,
                  "Validation embedding JSONL (toy embeddings if absent)");
  cmd->add_option("--checkpoint", config_.paths.checkpoint, "Output checkpoint");
  cmd->add_option("--phase1-checkpoint", *phase1_checkpoint, "Also save the phase-1 model here");
  cmd->add_option("--curves", config_.paths.curves, "Output validation CSV");
  cmd->add_option("--svg", *svg, "Output validation plot");
  cmd->add_option("--save-config", *save_config, "Write the effective run config as JSON");
  auto* d_option = cmd->add_option("--d", config_.d, "Toy embedding channel size")->capture_default_str();
  cmd->add_option("--seed", t.seed, "Seed for initialization, shuffling and sampling")
      ->capture_default_str();
  cmd->add_option("--max-docs", config_.max_docs, "Keep only the first N documents (0 = all)");
  cmd->add_option("--max-sentences", config_.max_sentences, "Greedy label cap")->capture_default_str();
  add_candidate_options(*cmd, t.candidates);
  cmd->add_option("--factor", t.factor, "Anchor sampling factor")->capture_default_str();
  cmd->add_option("--lambda", t.lambda, "Margin unit")->capture_default_str();
  cmd->add_option("--lr0-phase1", t.lr0_phase1, "Base learning rate, phase 1")->capture_default_str();
  cmd->add_option("--lr0-phase2", t.lr0_phase2, "Base learning rate, phase 2")->capture_default_str();
  cmd->add_option("--warmup", t.warmup, "Warmup steps")->capture_default_str();
  cmd->add_option("--phase1-steps", t.phase1_steps, "Extraction-only steps")->capture_default_str();
  cmd->add_option("--phase2-steps", t.phase2_steps, "Joint steps")->capture_default_str();
  cmd->add_option("--batch-size", t.batch_size, "Documents per step")->capture_default_str();
  cmd->add_option("--validation-interval", t.validation_interval, "Steps between validations")
      ->capture_default_str();
  cmd->add_option("--init-scale", t.init_scale, "Initialization noise scale")->capture_default_str();
  cmd->add_option("--weight-decay", t.weight_decay, "Decoupled weight decay")->capture_default_str();
  cmd->add_flag("--stemming", t.stemming, "Porter-stem tokens before scoring");
  cmd->callback([this, svg, phase1_checkpoint, save_config, d_option] {
    action_ = [this, svg, phase1_checkpoint, save_config, d_option] {
      require(config_.paths.corpus, "--corpus");
      require(config_.paths.checkpoint, "--checkpoint");
      config_.train.candidates.validate();
      const auto train_split = load_split(config_.paths.corpus, "train", config_.max_docs, err_);

      std::vector<OracleLabel> labels;
      if (!config_.paths.labels.empty()) {
        labels = read_labels_jsonl(config_.paths.labels);
      } else {
        for (const auto& doc : train_split.documents) {
          labels.push_back(greedy_oracle(doc, config_.max_sentences, config_.train.stemming));
        }
      }

      const auto embeddings =
          embeddings_for(train_split, config_.paths.embeddings, config_.d, config_.train.seed);
      const std::size_t d = channel_size(embeddings);
      if (d_option->count() > 0 && d != config_.d) {
        throw Error("embedding channel size " + std::to_string(d) + " does not match --d " +
                    std::to_string(config_.d));
      }
      config_.d = d;

      std::optional<DatasetSplit> valid;
      EmbeddingMap valid_embeddings;
      if (!config_.paths.valid.empty()) {
        valid = load_split(config_.paths.valid, "valid", 0, err_);
        valid_embeddings =
            embeddings_for(*valid, config_.paths.valid_embeddings, d, config_.train.seed);
        if (channel_size(valid_embeddings) != d) {
          throw Error("validation embeddings have channel size " +
                      std::to_string(channel_size(valid_embeddings)) + ", training uses " +
                      std::to_string(d));
        }
      }

      TrainingInputs inputs{&train_split, &labels, &embeddings, valid ? &*valid : nullptr,
                            valid ? &valid_embeddings : nullptr};
      const TrainResult result = train(inputs, config_.train);

      std::optional<std::uint64_t> toy_seed;
      if (config_.paths.embeddings.empty()) toy_seed = config_.train.seed;
      save_checkpoint({result.model, result.state.step, toy_seed}, config_.paths.checkpoint);
      if (!phase1_checkpoint->empty()) {
        save_checkpoint({result.phase1_model, config_.train.phase1_steps, toy_seed},
                        *phase1_checkpoint);
      }
      if (!save_config->empty()) save_run_config(config_, *save_config);
      if (!result.state.metrics_log.empty()) {
        if (!config_.paths.curves.empty()) emit_curves(result.state, config_.paths.curves);
        if (!svg->empty()) {
          write_to(*svg, out_, [&](std::ostream& os) { write_curves_svg(result.state, os); });
        }
        const ValidationRecord& last = result.state.metrics_log.back();
        out_ << "validation at step " << last.step << ": r1 " << last.r1 << ", r2 " << last.r2
             << ", rl " << last.rl_full << '\n';
      } else if (!config_.paths.curves.empty() || !svg->empty()) {
        err_ << "warning: no validation points recorded; curves not written\n";
      }
      out_ << "trained " << result.state.step << " steps (d=" << d << ")\n";
    };
  });
}

void Program::add_summarize() {
  auto* cmd = subcommand("summarize", "Rerank candidates and write one summary per document");
  auto text_path = std::make_shared<std::string>();
  auto dump = std::make_shared<bool>(false);
  auto skip_short = std::make_shared<bool>(false);
  auto* corpus = cmd->add_option("--corpus", config_.paths.corpus, "Corpus JSONL");
  auto* text = cmd->add_option("--text", *text_path, "Raw text file summarized as one document");
  corpus->excludes(text);
  cmd->add_option("--checkpoint", config_.paths.checkpoint, "Model checkpoint");
  cmd->add_option("--embeddings", config_.paths.embeddings,
                  "Embedding JSONL (toy embeddings if absent)");
  cmd->add_option("--out", config_.paths.output, "Output JSONL ('-' for stdout)");
  auto* seed = cmd->add_option("--seed", config_.train.seed,
                               "Toy embedding seed (default: the one used in training)");
  cmd->add_option("--max-docs", config_.max_docs, "Keep only the first N documents (0 = all)");
  cmd->add_flag("--dump-candidates", *dump, "Include every candidate's cosine in the output");
  cmd->add_flag("--skip-short", *skip_short,
                "Skip documents too short for the candidate sizes instead of failing");
  add_candidate_options(*cmd, config_.train.candidates);
  cmd->callback([this, text_path, dump, skip_short, seed] {
    action_ = [this, text_path, dump, skip_short, seed] {
      require(config_.paths.checkpoint, "--checkpoint");
      if (config_.paths.corpus.empty() && text_path->empty()) throw Error("--corpus or --text is required");
      config_.train.candidates.validate();
      const Checkpoint checkpoint = load_checkpoint(config_.paths.checkpoint);
      const RerankerModel& model = checkpoint.model;

      DatasetSplit data;
      if (!text_path->empty()) {
        Document doc;
        doc.id = "text";
        for (auto& sentence : split_sentences(read_file(*text_path))) {
          if (normalize(sentence).empty()) continue;
          doc.sentences.push_back({doc.sentences.size(), std::move(sentence)});
        }
        if (doc.sentences.empty()) throw Error("text file has no sentences");
        data.name = "text";
        data.documents.push_back(std::move(doc));
      } else {
        data = load_split(config_.paths.corpus, "test", config_.max_docs, err_);
      }
      const auto embeddings = embeddings_for(data, config_.paths.embeddings, model.d(),
                                             toy_seed_for(checkpoint, seed, config_.train.seed));

      std::vector<SummaryResult> results;
      std::size_t skipped = 0;
      for (const auto& doc : data.documents) {
        const std::size_t smallest =
            *std::min_element(config_.train.candidates.sizes.begin(),
                              config_.train.candidates.sizes.end());
        if (*skip_short && doc.size() < smallest) {
          ++skipped;
          continue;
        }
        results.push_back(
            summarize(doc, model, embeddings.at(doc.id), config_.train.candidates, *dump));
      }
      if (skipped > 0) err_ << "skipped " << skipped << " short documents\n";
      write_to(config_.paths.output, out_,
               [&](std::ostream& os) { write_results_jsonl(results, os); });
    };
  });
}

void Program::add_evaluate() {
  auto* cmd = subcommand("evaluate", "Score LEAD, ORACLE, Ordered ORACLE and model outputs");
  auto outputs = std::make_shared<std::string>();
  auto system = std::make_shared<std::string>("model");
  auto report = std::make_shared<std::string>();
  auto curves = std::make_shared<std::string>();
  auto svg = std::make_shared<std::string>();
  cmd->add_option("--corpus", config_.paths.corpus, "Reference corpus JSONL");
  cmd->add_option("--outputs", *outputs, "Summaries JSONL to score");
  cmd->add_option("--system", *system, "Row name for --outputs")->capture_default_str();
  cmd->add_option("--labels", config_.paths.labels, "Label JSONL (computed if absent)");
  cmd->add_option("--max-sentences", config_.max_sentences, "Greedy selection cap")
      ->capture_default_str();
  cmd->add_option("--permutation-cap", config_.permutation_cap,
                  "Largest selection the order search will permute")
      ->capture_default_str();
  cmd->add_option("--lead-count", config_.lead_count, "Sentences in the LEAD baseline")
      ->capture_default_str();
  cmd->add_option("--max-docs", config_.max_docs, "Keep only the first N documents (0 = all)");
  cmd->add_option("--report", *report, "Write the table as JSON");
  cmd->add_option("--curves", *curves, "Validation CSV to plot");
  cmd->add_option("--svg", *svg, "Output plot for --curves")->needs("--curves");
  cmd->add_flag("--stemming", config_.train.stemming, "Porter-stem tokens before scoring");
  cmd->callback([this, outputs, system, report, curves, svg] {
    action_ = [this, outputs, system, report, curves, svg] {
      require(config_.paths.corpus, "--corpus");
      const bool stem = config_.train.stemming;
      const auto data = load_split(config_.paths.corpus, "test", config_.max_docs, err_);

      std::map<std::string, OracleLabel, std::less<>> by_id;
      if (!config_.paths.labels.empty()) {
        for (auto& label : read_labels_jsonl(config_.paths.labels)) {
          by_id.emplace(label.document_id, std::move(label));
        }
      }
      std::vector<SummaryResult> lead_out, oracle_out, ordered_out;
      for (const auto& doc : data.documents) {
        lead_out.push_back(make_result(doc, lead(doc, config_.lead_count)));
        auto found = by_id.find(doc.id);
        const OracleLabel label =
            found != by_id.end()
                ? found->second
                : ordered_oracle(doc, config_.max_sentences, config_.permutation_cap, stem);
        oracle_out.push_back(make_result(doc, label.selected));
        ordered_out.push_back(make_result(doc, label.ordered));
      }
      std::vector<EvalRow> rows;
      rows.push_back(evaluate("LEAD-" + std::to_string(config_.lead_count), lead_out, data, stem));
      rows.push_back(evaluate("ORACLE", oracle_out, data, stem));
      rows.push_back(evaluate("Ordered ORACLE", ordered_out, data, stem));
      if (!outputs->empty()) {
        const auto model_out = read_results_jsonl(*outputs, data);
        rows.push_back(evaluate(*system, model_out, data, stem));
      }
      print_rows(out_, rows);
      if (!report->empty()) {
        write_to(*report, out_, [&](std::ostream& os) { os << eval_report_json(rows) << '\n'; });
      }
      if (!curves->empty() && !svg->empty()) {
        const TrainState state = state_from_curves(*curves);
        write_to(*svg, out_, [&](std::ostream& os) { write_curves_svg(state, os); });
      }
    };
  });
}

void Program::add_analyze() {
  auto* cmd = subcommand("analyze", "Compare model sentence order with extractor order");
  auto outputs = std::make_shared<std::string>();
  auto report = std::make_shared<std::string>();
  cmd->add_option("--corpus", config_.paths.corpus, "Reference corpus JSONL");
  cmd->add_option("--outputs", *outputs, "Summaries JSONL from `summarize`")->required();
  cmd->add_option("--checkpoint", config_.paths.checkpoint, "Model checkpoint for probabilities");
  cmd->add_option("--embeddings", config_.paths.embeddings,
                  "Embedding JSONL (toy embeddings if absent)");
  auto* seed = cmd->add_option("--seed", config_.train.seed,
                               "Toy embedding seed (default: the one used in training)");
  cmd->add_option("--max-docs", config_.max_docs, "Keep only the first N documents (0 = all)");
  cmd->add_option("--report", *report, "Write the analysis as JSON");
  cmd->add_flag("--stemming", config_.train.stemming, "Porter-stem tokens before scoring");
  cmd->callback([this, outputs, report, seed] {
    action_ = [this, outputs, report, seed] {
      require(config_.paths.corpus, "--corpus");
      require(config_.paths.checkpoint, "--checkpoint");
      const auto data = load_split(config_.paths.corpus, "test", config_.max_docs, err_);
      const Checkpoint checkpoint = load_checkpoint(config_.paths.checkpoint);
      const RerankerModel& model = checkpoint.model;
      const auto results = read_results_jsonl(*outputs, data);
      const auto embeddings = embeddings_for(data, config_.paths.embeddings, model.d(),
                                             toy_seed_for(checkpoint, seed, config_.train.seed));
      ProbabilityMap probs;
      for (const auto& result : results) {
        probs[result.document_id] = sentence_probs(model, embeddings.at(result.document_id));
      }
      const bool stem = config_.train.stemming;
      const OrderAnalysis analysis = analyze_order(results, probs, data, stem);
      out_ << std::fixed << std::setprecision(4) << "R-L model order:     " << analysis.rl_model
           << '\n'
           << "R-L extractor order: " << analysis.rl_ext << '\n';
      if (analysis.correlation.rho) {
        out_ << "spearman rho:        " << *analysis.correlation.rho << '\n';
      } else {
        out_ << "spearman rho:        n/a\n";
      }
      out_ << "documents:           " << analysis.correlation.count << " ("
           << analysis.correlation.excluded << " excluded, fewer than 2 sentences)\n";
      out_.unsetf(std::ios::floatfield);
      if (!report->empty()) {
        const std::vector<EvalRow> rows{evaluate("model", results, data, stem)};
        write_to(*report, out_,
                 [&](std::ostream& os) { os << eval_report_json(rows, analysis) << '\n'; });
      }
    };
  });
}

void Program::add_candidates() {
  auto* cmd = subcommand("candidates", "Enumerate candidate summaries for a key-sentence set");
  auto dump = std::make_shared<bool>(false);
  auto key = std::make_shared<std::vector<std::size_t>>();
  auto factor = std::make_shared<std::size_t>(0);
  auto out_path = std::make_shared<std::string>();
  cmd->add_flag("--dump", *dump, "Print the candidates as JSON")->required();
  add_candidate_options(*cmd, config_.train.candidates);
  cmd->add_option("--key", *key, "Key sentence indices, comma separated (default 0..k-1)")
      ->delimiter(',');
  cmd->add_option("--factor", *factor, "Apply anchor sampling with this factor (0 = off)");
  cmd->add_option("--seed", config_.train.seed, "Sampling seed")->capture_default_str();
  cmd->add_option("--out", *out_path, "Output JSON ('-' for stdout)");
  cmd->callback([this, key, factor, out_path] {
    action_ = [this, key, factor, out_path] {
      const CandidateConfig& config = config_.train.candidates;
      config.validate();
      std::vector<std::size_t> indices = *key;
      if (indices.empty()) {
        for (std::size_t i = 0; i < config.k; ++i) indices.push_back(i);
      }
      auto all = generate(config, indices);
      if (*factor > 0) all = anchor_sample(all, *factor, config_.train.seed);
      ordered_json doc;
      doc["k"] = config.k;
      doc["sizes"] = config.sizes;
      doc["mode"] = config.mode == CandidateMode::kPermutation ? "permutation" : "combination";
      doc["key"] = indices;
      doc["count"] = all.size();
      ordered_json list = ordered_json::array();
      for (const auto& candidate : all) {
        list.push_back({{"indices", candidate.indices},
                        {"kind", candidate.kind == CandidateKind::kAnchor ? "anchor" : "permuted"}});
      }
      doc["candidates"] = std::move(list);
      write_to(*out_path, out_, [&](std::ostream& os) { os << doc.dump(2) << '\n'; });
    };
  });
}

int Program::run(int argc, const char* const* argv) {
  const std::string config_path = find_config_path(argc, argv);
  try {
    if (!config_path.empty()) config_ = load_run_config(config_path);
  } catch (const std::exception& e) {
    err_ << "error: " << e.what() << '\n';
    return 1;
  }

  app_.require_subcommand(1);
  app_.set_version_flag("--version", "ordersum 0.1.0");
  add_ingest();
  add_synth();
  add_embed();
  add_oracle();
  add_train();
  add_summarize();
  add_evaluate();
  add_analyze();
  add_candidates();

  try {
    app_.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app_.exit(e, out_, err_);
  }
  try {
    if (action_) action_();
  } catch (const std::exception& e) {
    err_ << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Program program(out, err);
  return program.run(argc, argv);
}

}  // namespace ordersum::cli
