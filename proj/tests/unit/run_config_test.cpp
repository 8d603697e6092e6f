#include "ordersum/run_config.hpp"

#include <filesystem>

#include <gtest/gtest.h>

#include "ordersum/error.hpp"

namespace ordersum {
namespace {

const std::filesystem::path kConfigDir = ORDERSUM_CONFIG_DIR;

TEST(RunConfig, DefaultsWhenEmpty) {
  const RunConfig config = run_config_from_json("{}");
  EXPECT_EQ(config.d, 32u);
  EXPECT_EQ(config.train.candidates.k, 5u);
  EXPECT_EQ(config.train.lambda, 0.01);
  EXPECT_TRUE(config.paths.corpus.empty());
}

TEST(RunConfig, RoundTrip) {
  RunConfig config;
  config.paths.corpus = "train.jsonl";
  config.paths.curves = "curves.csv";
  config.d = 12;
  config.max_docs = 40;
  config.train.candidates = {8, {6, 7}, CandidateMode::kCombination};
  config.train.lr0_phase2 = 3.5e-4;
  config.train.seed = 99;
  config.train.stemming = true;
  const RunConfig back = run_config_from_json(run_config_to_json(config));
  EXPECT_EQ(back.paths.corpus, "train.jsonl");
  EXPECT_EQ(back.paths.curves, "curves.csv");
  EXPECT_EQ(back.d, 12u);
  EXPECT_EQ(back.max_docs, 40u);
  EXPECT_EQ(back.train.candidates.k, 8u);
  EXPECT_EQ(back.train.candidates.sizes, (std::vector<std::size_t>{6, 7}));
  EXPECT_EQ(back.train.candidates.mode, CandidateMode::kCombination);
  EXPECT_EQ(back.train.lr0_phase2, 3.5e-4);
  EXPECT_EQ(back.train.seed, 99u);
  EXPECT_TRUE(back.train.stemming);
  EXPECT_EQ(run_config_to_json(back), run_config_to_json(config));
}

TEST(RunConfig, FileRoundTrip) {
  RunConfig config;
  config.train.phase2_steps = 17;
  const auto path = std::filesystem::temp_directory_path() / "ordersum_run_config_test.json";
  save_run_config(config, path.string());
  EXPECT_EQ(load_run_config(path.string()).train.phase2_steps, 17u);
  std::filesystem::remove(path);
}

TEST(RunConfig, UnknownKeysRejected) {
  EXPECT_THROW(run_config_from_json(R"({"dd": 3})"), Error);
  EXPECT_THROW(run_config_from_json(R"({"train": {"lr": 0.1}})"), Error);
  EXPECT_THROW(run_config_from_json(R"({"candidates": {"mode": "shuffle"}})"), Error);
  EXPECT_THROW(run_config_from_json("[1, 2]"), Error);
  EXPECT_THROW(run_config_from_json("{"), Error);
}

TEST(Presets, AllParseAndValidate) {
  std::size_t seen = 0;
  for (const auto& entry : std::filesystem::directory_iterator(kConfigDir)) {
    if (entry.path().extension() != ".json") continue;
    const RunConfig config = load_run_config(entry.path().string());
    EXPECT_NO_THROW(config.train.candidates.validate()) << entry.path();
    ++seen;
  }
  EXPECT_EQ(seen, 5u);
}

TEST(Presets, DatasetValues) {
  struct Expected {
    const char* name;
    std::size_t k;
    std::vector<std::size_t> sizes;
    std::size_t max_sentences;
    std::size_t phase2_steps;
  };
  const std::vector<Expected> expected{{"cnndm", 5, {2, 3}, 3, 12000},
                                       {"xsum", 5, {1, 2}, 2, 10000},
                                       {"wikihow", 5, {3, 4, 5}, 5, 12000},
                                       {"pubmed", 8, {6, 7}, 7, 7000}};
  for (const auto& e : expected) {
    const RunConfig config = load_run_config((kConfigDir / (std::string(e.name) + ".json")).string());
    EXPECT_EQ(config.train.candidates.k, e.k) << e.name;
    EXPECT_EQ(config.train.candidates.sizes, e.sizes) << e.name;
    EXPECT_EQ(config.train.candidates.mode, CandidateMode::kPermutation) << e.name;
    EXPECT_EQ(config.max_sentences, e.max_sentences) << e.name;
    EXPECT_EQ(config.train.phase2_steps, e.phase2_steps) << e.name;
    EXPECT_EQ(config.train.lr0_phase1, 2e-3) << e.name;
    EXPECT_EQ(config.train.lr0_phase2, 1e-3) << e.name;
    EXPECT_EQ(config.train.warmup, 10000u) << e.name;
    EXPECT_EQ(config.train.lambda, 0.01) << e.name;
    EXPECT_EQ(config.d, 768u) << e.name;
  }
}

}  // namespace
}  // namespace ordersum
