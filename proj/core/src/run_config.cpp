#include "ordersum/run_config.hpp"

#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string_view>

#include <json.hpp>

#include "ordersum/error.hpp"

namespace ordersum {
namespace {

using nlohmann::ordered_json;

void reject_unknown(const ordered_json& object, std::string_view where,
                    std::initializer_list<std::string_view> known) {
  for (const auto& [key, value] : object.items()) {
    bool found = false;
    for (auto k : known) found = found || key == k;
    if (!found) throw Error("unknown config key " + std::string(where) + key);
  }
}

template <typename T>
void read(const ordered_json& object, const char* key, T& target) {
  if (object.contains(key)) target = object.at(key).get<T>();
}

CandidateMode parse_mode(const std::string& text) {
  if (text == "permutation") return CandidateMode::kPermutation;
  if (text == "combination") return CandidateMode::kCombination;
  throw Error("candidate mode must be \"permutation\" or \"combination\", got \"" + text + "\"");
}

}  // namespace

RunConfig run_config_from_json(const std::string& text) {
  RunConfig config;
  try {
    const ordered_json root = ordered_json::parse(text);
    if (!root.is_object()) throw Error("config root must be an object");
    reject_unknown(root, "", {"paths", "d", "max_sentences", "permutation_cap", "lead_count",
                              "max_docs", "candidates", "train"});
    if (root.contains("paths")) {
      const auto& paths = root.at("paths");
      reject_unknown(paths, "paths.", {"corpus", "valid", "embeddings", "valid_embeddings",
                                       "labels", "checkpoint", "output", "curves"});
      read(paths, "corpus", config.paths.corpus);
      read(paths, "valid", config.paths.valid);
      read(paths, "embeddings", config.paths.embeddings);
      read(paths, "valid_embeddings", config.paths.valid_embeddings);
      read(paths, "labels", config.paths.labels);
      read(paths, "checkpoint", config.paths.checkpoint);
      read(paths, "output", config.paths.output);
      read(paths, "curves", config.paths.curves);
    }
    read(root, "d", config.d);
    read(root, "max_sentences", config.max_sentences);
    read(root, "permutation_cap", config.permutation_cap);
    read(root, "lead_count", config.lead_count);
    read(root, "max_docs", config.max_docs);
    if (root.contains("candidates")) {
      const auto& c = root.at("candidates");
      reject_unknown(c, "candidates.", {"k", "sizes", "mode"});
      read(c, "k", config.train.candidates.k);
      read(c, "sizes", config.train.candidates.sizes);
      if (c.contains("mode")) config.train.candidates.mode = parse_mode(c.at("mode").get<std::string>());
    }
    if (root.contains("train")) {
      const auto& t = root.at("train");
      reject_unknown(t, "train.", {"factor", "lambda", "lr0_phase1", "lr0_phase2", "warmup",
                                   "phase1_steps", "phase2_steps", "batch_size",
                                   "validation_interval", "seed", "stemming", "init_scale",
                                   "beta1", "beta2", "adam_epsilon", "weight_decay"});
      TrainConfig& train = config.train;
      read(t, "factor", train.factor);
      read(t, "lambda", train.lambda);
      read(t, "lr0_phase1", train.lr0_phase1);
      read(t, "lr0_phase2", train.lr0_phase2);
      read(t, "warmup", train.warmup);
      read(t, "phase1_steps", train.phase1_steps);
      read(t, "phase2_steps", train.phase2_steps);
      read(t, "batch_size", train.batch_size);
      read(t, "validation_interval", train.validation_interval);
      read(t, "seed", train.seed);
      read(t, "stemming", train.stemming);
      read(t, "init_scale", train.init_scale);
      read(t, "beta1", train.beta1);
      read(t, "beta2", train.beta2);
      read(t, "adam_epsilon", train.adam_epsilon);
      read(t, "weight_decay", train.weight_decay);
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("malformed config: ") + e.what());
  }
  config.train.candidates.validate();
  return config;
}

std::string run_config_to_json(const RunConfig& config) {
  const TrainConfig& t = config.train;
  ordered_json root;
  root["paths"] = {{"corpus", config.paths.corpus},
                   {"valid", config.paths.valid},
                   {"embeddings", config.paths.embeddings},
                   {"valid_embeddings", config.paths.valid_embeddings},
                   {"labels", config.paths.labels},
                   {"checkpoint", config.paths.checkpoint},
                   {"output", config.paths.output},
                   {"curves", config.paths.curves}};
  root["d"] = config.d;
  root["max_sentences"] = config.max_sentences;
  root["permutation_cap"] = config.permutation_cap;
  root["lead_count"] = config.lead_count;
  root["max_docs"] = config.max_docs;
  root["candidates"] = {
      {"k", t.candidates.k},
      {"sizes", t.candidates.sizes},
      {"mode", t.candidates.mode == CandidateMode::kPermutation ? "permutation" : "combination"}};
  root["train"] = {{"factor", t.factor},
                   {"lambda", t.lambda},
                   {"lr0_phase1", t.lr0_phase1},
                   {"lr0_phase2", t.lr0_phase2},
                   {"warmup", t.warmup},
                   {"phase1_steps", t.phase1_steps},
                   {"phase2_steps", t.phase2_steps},
                   {"batch_size", t.batch_size},
                   {"validation_interval", t.validation_interval},
                   {"seed", t.seed},
                   {"stemming", t.stemming},
                   {"init_scale", t.init_scale},
                   {"beta1", t.beta1},
                   {"beta2", t.beta2},
                   {"adam_epsilon", t.adam_epsilon},
                   {"weight_decay", t.weight_decay}};
  return root.dump(2);
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return run_config_from_json(buffer.str());
}

void save_run_config(const RunConfig& config, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write config " + path);
  out << run_config_to_json(config) << '\n';
}

}  // namespace ordersum
