#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace ordersum {

struct Sentence {
  std::size_t index = 0;
  std::string text;
};

/// A source document with pre-split sentences and its reference summary.
///
/// Sentence indices are always 0..n-1 in order; every sentence and every
/// reference sentence has at least one token after ROUGE normalization.
struct Document {
  std::string id;
  std::vector<Sentence> sentences;
  std::vector<std::string> reference;

  std::size_t size() const { return sentences.size(); }
  std::vector<std::string> sentence_texts() const;
};

struct DatasetSplit {
  std::string name;
  std::vector<Document> documents;

  std::size_t size() const { return documents.size(); }
  const Document* find(std::string_view id) const;
};

struct IngestOptions {
  /// 0 keeps every document.
  std::size_t max_docs = 0;
  /// Receives one line per dropped sentence; nullptr silences warnings.
  std::ostream* warnings = nullptr;
};

/// Reads one document per line: {"id": str, "sentences": [str], "reference": [str]}.
DatasetSplit ingest_jsonl(const std::string& path, std::string split_name = "test",
                          const IngestOptions& options = {});
DatasetSplit ingest_jsonl(std::istream& in, std::string split_name = "test",
                          const IngestOptions& options = {});

void write_jsonl(const DatasetSplit& split, std::ostream& out);
void write_jsonl(const DatasetSplit& split, const std::string& path);

/// Builds a validated document from raw fields, dropping sentences that are
/// empty after normalization.
Document make_document(std::string id, const std::vector<std::string>& sentences,
                       const std::vector<std::string>& reference,
                       std::ostream* warnings = nullptr);

/// Rule-based fallback splitter for raw text.
///
/// A boundary is placed after a run of terminal punctuation (`.`, `!`, `?`),
/// optionally followed by closing quotes or brackets, when the next
/// non-space character is an uppercase ASCII letter, a digit, or an opening
/// quote. No boundary is placed when the word ending in `.` is a listed
/// abbreviation (Dr, Mr, Mrs, Ms, Prof, St, Jr, Sr, vs, etc, e.g, i.e, No,
/// Gen, Gov, Sen, Rep, Inc, Ltd, Co, Corp, Mt, Ft) or a single uppercase
/// initial such as the "J" in "J. Smith".
std::vector<std::string> split_sentences(std::string_view raw_text);

struct SplitStats {
  std::size_t documents = 0;
  double mean_sentences = 0.0;
  double mean_document_tokens = 0.0;
  double mean_reference_tokens = 0.0;
};

SplitStats compute_stats(const DatasetSplit& split);

}  // namespace ordersum
