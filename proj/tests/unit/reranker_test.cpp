#include "ordersum/reranker.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <random>
#include <set>

#include <gtest/gtest.h>

#include "ordersum/error.hpp"

namespace ordersum {
namespace {

Document six_sentences() {
  return make_document("six", {"s zero.", "s one.", "s two.", "s three.", "s four.", "s five."},
                       {"s one."});
}

EmbeddingSet random_set(const Document& doc, std::size_t d, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  EmbeddingSet set{doc.id, d, std::vector<Vector>(doc.size(), Vector(d)), Vector(d)};
  for (auto& v : set.sentence_vectors) {
    for (auto& x : v) x = normal(rng);
  }
  for (auto& x : set.doc_vector) x = normal(rng);
  return set;
}

RerankerModel scoring_model(std::size_t d, std::uint64_t seed) {
  RerankerModel model = RerankerModel::identity(d);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  for (auto& x : model.params.w()) x = normal(rng);
  return model;
}

TEST(Summarize, SingleKeySentence) {
  const Document doc = six_sentences();
  const RerankerModel model = scoring_model(4, 1);
  const EmbeddingSet set = random_set(doc, 4, 2);
  const SummaryResult result = summarize(doc, model, set, {1, {1}, CandidateMode::kPermutation});
  const auto probs = sentence_probs(model, set);
  const auto top = std::max_element(probs.begin(), probs.end()) - probs.begin();
  EXPECT_EQ(result.chosen.indices, std::vector<std::size_t>{static_cast<std::size_t>(top)});
  EXPECT_EQ(result.text, doc.sentences[static_cast<std::size_t>(top)].text);
}

TEST(Summarize, MatchesBruteForceCosines) {
  const Document doc = six_sentences();
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const RerankerModel model = scoring_model(4, seed);
    const EmbeddingSet set = random_set(doc, 4, seed + 100);
    const CandidateConfig config{3, {2, 3}, CandidateMode::kPermutation};
    const SummaryResult result = summarize(doc, model, set, config, true);

    const auto probs = sentence_probs(model, set);
    std::vector<std::size_t> order(doc.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return probs[a] > probs[b]; });
    std::vector<std::size_t> key(order.begin(), order.begin() + 3);

    // Independent scoring: tanh projection, window pooling, cosine.
    auto z = [&](const Vector& v) {
      Vector out(4);
      for (std::size_t i = 0; i < 4; ++i) out[i] = std::tanh(v[i]);
      return out;
    };
    const Vector doc_z = z(set.doc_vector);
    double best = -2.0;
    std::set<std::vector<std::size_t>> seen;
    for (std::size_t r : {2u, 3u}) {
      std::vector<std::size_t> pick(key);
      std::sort(pick.begin(), pick.end());
      do {
        std::vector<std::size_t> cand(pick.begin(), pick.begin() + r);
        if (!seen.insert(cand).second) continue;
        Vector flat;
        for (std::size_t s : cand) {
          const Vector zs = z(set.sentence_vectors[s]);
          flat.insert(flat.end(), zs.begin(), zs.end());
        }
        Vector pooled(4, 0.0);
        for (std::size_t p = 0; p < flat.size(); ++p) pooled[p / r] += flat[p] / r;
        best = std::max(best, cosine(doc_z, pooled));
      } while (std::next_permutation(pick.begin(), pick.end()));
    }
    EXPECT_EQ(seen.size(), 12u);
    EXPECT_NEAR(result.similarity, best, 1e-12);
    EXPECT_EQ(result.all_scores.size(), 12u);
    for (std::size_t s : result.chosen.indices) {
      EXPECT_NE(std::find(key.begin(), key.end(), s), key.end());
    }
  }
}

TEST(Summarize, ShortDocumentUsesAllSentences) {
  const Document doc = make_document("short", {"a one.", "b two."}, {"a one."});
  const RerankerModel model = scoring_model(4, 3);
  const EmbeddingSet set = random_set(doc, 4, 4);
  const SummaryResult result = summarize(doc, model, set, {5, {2, 3}, CandidateMode::kPermutation}, true);
  EXPECT_EQ(result.all_scores.size(), 2u);
  EXPECT_EQ(result.chosen.size(), 2u);
}

TEST(Summarize, TooShortForAnySizeNamesDocument) {
  const Document doc = make_document("tiny", {"a one."}, {"a one."});
  const EmbeddingSet set = random_set(doc, 4, 5);
  try {
    summarize(doc, scoring_model(4, 1), set, {5, {2, 3}, CandidateMode::kPermutation});
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("tiny"), std::string::npos);
  }
}

TEST(Summarize, ChannelMismatch) {
  const Document doc = six_sentences();
  EXPECT_THROW(summarize(doc, scoring_model(3, 1), random_set(doc, 4, 1),
                         {3, {2}, CandidateMode::kPermutation}),
               Error);
}

TEST(ReorderByExtractor, Examples) {
  const Document doc = six_sentences();
  const std::vector<double> probs{0.1, 0.9, 0.2, 0.7, 0.3, 0.0};
  EXPECT_EQ(reorder_by_extractor(make_result(doc, {4, 1, 3}), probs).indices,
            (std::vector<std::size_t>{1, 3, 4}));
  const std::vector<double> flat(6, 0.5);
  EXPECT_EQ(reorder_by_extractor(make_result(doc, {2, 0}), flat).indices,
            (std::vector<std::size_t>{0, 2}));
}

TEST(JoinSentences, SingleSpaces) {
  const Document doc = six_sentences();
  const std::vector<std::size_t> indices{2, 0};
  EXPECT_EQ(join_sentences(doc, indices), "s two. s zero.");
}

TEST(Results, JsonlRoundTrip) {
  const Document doc = six_sentences();
  const DatasetSplit split{"test", {doc}};
  const std::vector<SummaryResult> results{make_result(doc, {3, 1}, 0.25)};
  const auto path = std::filesystem::temp_directory_path() / "ordersum_results_test.jsonl";
  {
    std::ofstream out(path);
    write_results_jsonl(results, out);
  }
  const auto back = read_results_jsonl(path.string(), split);
  ASSERT_EQ(back.size(), 1u);
  EXPECT_EQ(back[0].chosen.indices, (std::vector<std::size_t>{3, 1}));
  EXPECT_EQ(back[0].text, "s three. s one.");
  EXPECT_DOUBLE_EQ(back[0].similarity, 0.25);
  std::filesystem::remove(path);
}

TEST(Results, UnknownIdRejected) {
  const DatasetSplit split{"test", {six_sentences()}};
  const auto path = std::filesystem::temp_directory_path() / "ordersum_results_bad.jsonl";
  {
    std::ofstream out(path);
    out << R"({"id":"nope","indices":[0]})" << '\n';
  }
  EXPECT_THROW(read_results_jsonl(path.string(), split), Error);
  std::filesystem::remove(path);
}

}  // namespace
}  // namespace ordersum
