#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "ordersum/candidates.hpp"
#include "ordersum/corpus.hpp"

namespace ordersum {

using Vector = std::vector<double>;

/// Base sentence vectors and a document vector sharing one channel size.
struct EmbeddingSet {
  std::string document_id;
  std::size_t d = 0;
  std::vector<Vector> sentence_vectors;
  Vector doc_vector;

  /// Throws on a length mismatch or a non-finite entry.
  void validate() const;
};

using EmbeddingMap = std::map<std::string, EmbeddingSet, std::less<>>;

/// Feature-hashed bag of tokens: each normalized token adds +-1 to one of
/// `d` buckets (bucket and sign both from a seeded 64-bit FNV-1a hash); the
/// sum is L2-normalized. The document vector is the normalized mean of the
/// sentence vectors.
EmbeddingSet toy_embed(const Document& doc, std::size_t d, std::uint64_t seed);
EmbeddingMap toy_embed_all(const DatasetSplit& split, std::size_t d, std::uint64_t seed);

/// Unit-length mean of the rows; zero when the mean vanishes.
Vector normalized_mean(std::span<const Vector> rows);

/// Reads the embedding JSONL format:
/// {"id": str, "d": int, "sentences": [[float]], "doc": [float]} with "doc"
/// optional. Every document of `split` must be present.
EmbeddingMap load_embeddings(const std::string& path, const DatasetSplit& split);
EmbeddingMap load_embeddings(std::istream& in, const DatasetSplit& split);

void write_embeddings_jsonl(const EmbeddingMap& embeddings, std::ostream& out);

/// Concatenates the candidate's sentence vectors in candidate order.
Vector concat_candidate(std::span<const Vector> sentence_vectors,
                        const CandidateSummary& candidate);
Vector concat_candidate(const EmbeddingSet& set, const CandidateSummary& candidate);

/// Sentence-number pooling: output[j] is the mean of
/// intermediate[r*j .. r*j + r - 1] for j in [0, d). Windows cross sentence
/// boundaries whenever r does not divide d.
Vector pool_candidate(std::span<const double> intermediate, std::size_t r, std::size_t d);

/// concat_candidate followed by pool_candidate.
Vector embed_candidate(std::span<const Vector> sentence_vectors,
                       const CandidateSummary& candidate);

double cosine(std::span<const double> a, std::span<const double> b);

}  // namespace ordersum
