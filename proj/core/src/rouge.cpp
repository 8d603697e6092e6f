#include "ordersum/rouge.hpp"

#include <cctype>
#include <map>
#include <stdexcept>
#include <utility>

#include "ordersum/error.hpp"

namespace ordersum {
namespace {

using NGramCounts = std::map<std::pair<std::string_view, std::string_view>, std::size_t>;

NGramCounts count_ngrams(const TokenSequence& tokens, int n) {
  NGramCounts counts;
  if (tokens.size() < static_cast<std::size_t>(n)) return counts;
  for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
    std::string_view second = n == 2 ? std::string_view(tokens[i + 1]) : std::string_view();
    ++counts[{tokens[i], second}];
  }
  return counts;
}

std::size_t token_count(std::span<const TokenSequence> sentences) {
  std::size_t total = 0;
  for (const auto& s : sentences) total += s.size();
  return total;
}

}  // namespace

RougeScore RougeScore::from_counts(double matches, double candidate_total,
                                   double reference_total) {
  RougeScore score;
  score.precision = candidate_total > 0 ? matches / candidate_total : 0.0;
  score.recall = reference_total > 0 ? matches / reference_total : 0.0;
  const double sum = score.precision + score.recall;
  score.f1 = sum > 0 ? 2.0 * score.precision * score.recall / sum : 0.0;
  return score;
}

TokenSequence normalize(std::string_view text, bool stemming) {
  TokenSequence tokens;
  std::string current;
  auto flush = [&] {
    if (current.empty()) return;
    if (stemming && current.size() > 3) current = porter_stem(current);
    tokens.push_back(std::move(current));
    current.clear();
  };
  for (char raw : text) {
    const auto ch = static_cast<unsigned char>(raw);
    if (ch < 0x80 && std::isalnum(ch)) {
      current.push_back(static_cast<char>(std::tolower(ch)));
    } else {
      flush();
    }
  }
  flush();
  return tokens;
}

std::vector<TokenSequence> normalize_all(std::span<const std::string> sentences, bool stemming) {
  std::vector<TokenSequence> out;
  out.reserve(sentences.size());
  for (const auto& s : sentences) out.push_back(normalize(s, stemming));
  return out;
}

TokenSequence flatten(std::span<const TokenSequence> sentences) {
  TokenSequence out;
  out.reserve(token_count(sentences));
  for (const auto& s : sentences) out.insert(out.end(), s.begin(), s.end());
  return out;
}

RougeScore rouge_n(const TokenSequence& reference, const TokenSequence& candidate, int n) {
  if (n != 1 && n != 2) throw Error("rouge_n supports n = 1 or n = 2, got " + std::to_string(n));
  const NGramCounts ref = count_ngrams(reference, n);
  const NGramCounts cand = count_ngrams(candidate, n);
  std::size_t matches = 0;
  for (const auto& [gram, count] : cand) {
    if (auto it = ref.find(gram); it != ref.end()) matches += std::min(count, it->second);
  }
  const auto grams = [n](const TokenSequence& t) {
    return t.size() >= static_cast<std::size_t>(n) ? static_cast<double>(t.size() - n + 1) : 0.0;
  };
  return RougeScore::from_counts(static_cast<double>(matches), grams(candidate), grams(reference));
}

std::size_t lcs_length(const TokenSequence& a, const TokenSequence& b) {
  return lcs_length<std::string>(std::span<const std::string>(a), std::span<const std::string>(b));
}

RougeScore rouge_l_full(std::span<const TokenSequence> reference,
                        std::span<const TokenSequence> candidate) {
  const TokenSequence ref = flatten(reference);
  const TokenSequence cand = flatten(candidate);
  const auto lcs = static_cast<double>(lcs_length(ref, cand));
  return RougeScore::from_counts(lcs, static_cast<double>(cand.size()),
                                 static_cast<double>(ref.size()));
}

RougeScore rouge_l_norm(std::span<const TokenSequence> reference,
                        std::span<const TokenSequence> candidate) {
  std::size_t numerator = 0;
  for (const auto& ref_sentence : reference) {
    std::size_t best = 0;
    for (const auto& cand_sentence : candidate) {
      best = std::max(best, lcs_length(ref_sentence, cand_sentence));
    }
    numerator += best;
  }
  return RougeScore::from_counts(static_cast<double>(numerator),
                                 static_cast<double>(token_count(candidate)),
                                 static_cast<double>(token_count(reference)));
}

RougeReport rouge_report(std::span<const TokenSequence> reference,
                         std::span<const TokenSequence> candidate) {
  const TokenSequence ref = flatten(reference);
  const TokenSequence cand = flatten(candidate);
  RougeReport report;
  report.r1 = rouge_n(ref, cand, 1);
  report.r2 = rouge_n(ref, cand, 2);
  report.rl_full = RougeScore::from_counts(static_cast<double>(lcs_length(ref, cand)),
                                           static_cast<double>(cand.size()),
                                           static_cast<double>(ref.size()));
  report.rl_norm = rouge_l_norm(reference, candidate);
  return report;
}

}  // namespace ordersum
