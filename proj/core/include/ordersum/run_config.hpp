#pragma once

#include <cstddef>
#include <string>

#include "ordersum/trainer.hpp"

namespace ordersum {

struct RunPaths {
  std::string corpus;
  std::string valid;
  std::string embeddings;
  std::string valid_embeddings;
  std::string labels;
  std::string checkpoint;
  std::string output;
  std::string curves;
};

/// Everything a CLI run needs; serializable to one JSON file.
struct RunConfig {
  RunPaths paths;
  TrainConfig train;
  std::size_t d = 32;
  std::size_t max_sentences = 3;
  std::size_t permutation_cap = 8;
  std::size_t lead_count = 3;
  std::size_t max_docs = 0;
};

/// Missing keys keep their defaults; unknown keys are rejected.
RunConfig run_config_from_json(const std::string& text);
std::string run_config_to_json(const RunConfig& config);
RunConfig load_run_config(const std::string& path);
void save_run_config(const RunConfig& config, const std::string& path);

}  // namespace ordersum
