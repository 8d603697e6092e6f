#include "ordersum/synthetic.hpp"

#include <algorithm>
#include <array>
#include <numeric>
#include <random>
#include <set>
#include <string_view>

#include "ordersum/error.hpp"

namespace ordersum {
namespace {

constexpr std::array<std::array<std::string_view, 3>, 3> kRoleWords = {{
    {"announced", "reported", "revealed"},
    {"meanwhile", "subsequently", "continued"},
    {"finally", "concluded", "eventually"},
}};

constexpr std::array<std::string_view, 12> kSalienceWords = {
    "storm",  "council", "vaccine", "merger",  "election", "drought",
    "strike", "verdict", "launch",  "outbreak", "treaty",  "budget"};

constexpr std::array<std::string_view, 60> kFillerWords = {
    "people", "city",   "local",   "area",    "week",    "group",  "members", "public",
    "report", "office", "according", "police", "school",  "family", "street",  "water",
    "market", "company", "officials", "state",  "county", "team",   "season",  "game",
    "house",  "road",   "river",   "park",    "center",  "north",  "south",   "east",
    "west",   "morning", "evening", "night",  "monday",  "friday", "summer",  "winter",
    "plan",   "project", "service", "program", "system", "record", "number",  "level",
    "price",  "cost",   "travel",  "weather", "traffic", "health", "science", "history",
    "music",  "film",   "book",    "garden"};

std::size_t uniform(std::mt19937_64& engine, std::size_t lo, std::size_t hi) {
  return lo + static_cast<std::size_t>(engine() % (hi - lo + 1));
}

template <typename Container>
std::string_view pick(std::mt19937_64& engine, const Container& words) {
  return words[static_cast<std::size_t>(engine() % words.size())];
}

std::string render(std::vector<std::string_view> words, std::mt19937_64& engine) {
  for (std::size_t i = words.size(); i > 1; --i) {
    std::swap(words[i - 1], words[static_cast<std::size_t>(engine() % i)]);
  }
  std::string text;
  for (auto word : words) {
    if (!text.empty()) text += ' ';
    text += word;
  }
  text[0] = static_cast<char>(text[0] - 'a' + 'A');
  text += '.';
  return text;
}

}  // namespace

DatasetSplit make_synthetic_corpus(const SyntheticConfig& config, std::string name) {
  if (config.min_sentences == 0 || config.min_sentences > config.max_sentences ||
      config.min_summary == 0 || config.min_summary > config.max_summary ||
      config.max_summary > kRoleWords.size() || config.max_summary > config.min_sentences ||
      config.min_filler == 0 || config.min_filler > config.max_filler) {
    throw Error("invalid synthetic corpus configuration");
  }
  std::mt19937_64 engine(config.seed);
  DatasetSplit split;
  split.name = std::move(name);
  split.documents.reserve(config.documents);

  for (std::size_t doc_index = 0; doc_index < config.documents; ++doc_index) {
    const std::size_t n = uniform(engine, config.min_sentences, config.max_sentences);
    const std::size_t m = uniform(engine, config.min_summary, config.max_summary);

    // Distinct roles for the salient sentences, kept ascending.
    std::vector<std::size_t> roles(kRoleWords.size());
    std::iota(roles.begin(), roles.end(), 0);
    for (std::size_t i = roles.size(); i > 1; --i) {
      std::swap(roles[i - 1], roles[static_cast<std::size_t>(engine() % i)]);
    }
    roles.resize(m);
    std::sort(roles.begin(), roles.end());

    std::vector<std::size_t> positions(n);
    std::iota(positions.begin(), positions.end(), 0);
    for (std::size_t i = n; i > 1; --i) {
      std::swap(positions[i - 1], positions[static_cast<std::size_t>(engine() % i)]);
    }
    positions.resize(m);

    std::vector<std::string> sentences(n);
    std::set<std::string> used;
    auto unique_sentence = [&](auto make) {
      std::string text;
      do {
        text = make();
      } while (!used.insert(text).second);
      return text;
    };

    std::vector<std::string> salient(m);
    for (std::size_t s = 0; s < m; ++s) {
      salient[s] = unique_sentence([&] {
        std::vector<std::string_view> words;
        words.push_back(pick(engine, kRoleWords[roles[s]]));
        words.push_back(pick(engine, kSalienceWords));
        words.push_back(pick(engine, kSalienceWords));
        const std::size_t filler = uniform(engine, config.min_filler, config.max_filler);
        for (std::size_t f = 0; f < filler; ++f) words.push_back(pick(engine, kFillerWords));
        return render(std::move(words), engine);
      });
      sentences[positions[s]] = salient[s];
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (!sentences[i].empty()) continue;
      sentences[i] = unique_sentence([&] {
        std::vector<std::string_view> words;
        words.push_back(pick(engine, kRoleWords[static_cast<std::size_t>(engine() % kRoleWords.size())]));
        const std::size_t filler = uniform(engine, config.min_filler, config.max_filler) + 2;
        for (std::size_t f = 0; f < filler; ++f) words.push_back(pick(engine, kFillerWords));
        return render(std::move(words), engine);
      });
    }

    split.documents.push_back(
        make_document(split.name + "-" + std::to_string(doc_index), sentences, salient));
  }
  return split;
}

}  // namespace ordersum
