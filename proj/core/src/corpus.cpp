#include "ordersum/corpus.hpp"

#include <cctype>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>

#include <json.hpp>

#include "ordersum/error.hpp"
#include "ordersum/rouge.hpp"

namespace ordersum {
namespace {

using nlohmann::json;

std::vector<std::string> string_array(const json& record, const char* field, std::size_t line) {
  if (!record.contains(field)) {
    throw Error(std::string("missing field ") + field + " at line " + std::to_string(line));
  }
  const json& value = record.at(field);
  if (!value.is_array()) {
    throw Error(std::string("field ") + field + " must be an array at line " + std::to_string(line));
  }
  std::vector<std::string> out;
  out.reserve(value.size());
  for (const auto& item : value) {
    if (!item.is_string()) {
      throw Error(std::string("field ") + field + " must hold strings at line " +
                  std::to_string(line));
    }
    out.push_back(item.get<std::string>());
  }
  return out;
}

bool is_closing(char ch) {
  return ch == '"' || ch == '\'' || ch == ')' || ch == ']';
}

bool is_opening_quote(char ch) { return ch == '"' || ch == '\'' || ch == '('; }

bool is_space(char ch) { return std::isspace(static_cast<unsigned char>(ch)) != 0; }

// Word that ends right before `end` (exclusive), without leading punctuation.
std::string_view word_before(std::string_view text, std::size_t end) {
  std::size_t begin = end;
  while (begin > 0 && !is_space(text[begin - 1])) --begin;
  while (begin < end && is_opening_quote(text[begin])) ++begin;
  return text.substr(begin, end - begin);
}

bool is_abbreviation(std::string_view word) {
  static const std::set<std::string_view> kAbbreviations = {
      "Dr", "Mr", "Mrs", "Ms", "Prof", "St", "Jr", "Sr", "vs", "etc", "e.g", "i.e",
      "No", "Gen", "Gov", "Sen", "Rep", "Inc", "Ltd", "Co", "Corp", "Mt", "Ft"};
  if (kAbbreviations.contains(word)) return true;
  return word.size() == 1 && std::isupper(static_cast<unsigned char>(word[0]));
}

std::string trim(std::string_view text) {
  std::size_t begin = 0;
  std::size_t end = text.size();
  while (begin < end && is_space(text[begin])) ++begin;
  while (end > begin && is_space(text[end - 1])) --end;
  return std::string(text.substr(begin, end - begin));
}

}  // namespace

std::vector<std::string> Document::sentence_texts() const {
  std::vector<std::string> out;
  out.reserve(sentences.size());
  for (const auto& s : sentences) out.push_back(s.text);
  return out;
}

const Document* DatasetSplit::find(std::string_view id) const {
  for (const auto& doc : documents) {
    if (doc.id == id) return &doc;
  }
  return nullptr;
}

Document make_document(std::string id, const std::vector<std::string>& sentences,
                       const std::vector<std::string>& reference, std::ostream* warnings) {
  Document doc;
  doc.id = std::move(id);
  for (std::size_t i = 0; i < sentences.size(); ++i) {
    if (normalize(sentences[i]).empty()) {
      if (warnings) {
        *warnings << "warning: document " << doc.id << ": dropped sentence " << i
                  << " (no tokens after normalization)\n";
      }
      continue;
    }
    doc.sentences.push_back({doc.sentences.size(), sentences[i]});
  }
  for (const auto& s : reference) {
    if (!normalize(s).empty()) doc.reference.push_back(s);
  }
  if (doc.sentences.empty()) throw Error("document " + doc.id + " has no valid sentences");
  if (doc.reference.empty()) throw Error("document " + doc.id + " has no valid reference sentences");
  return doc;
}

DatasetSplit ingest_jsonl(std::istream& in, std::string split_name, const IngestOptions& options) {
  DatasetSplit split;
  split.name = std::move(split_name);
  std::set<std::string, std::less<>> seen;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (trim(line).empty()) continue;
    if (options.max_docs > 0 && split.documents.size() >= options.max_docs) break;
    json record;
    try {
      record = json::parse(line);
    } catch (const json::parse_error& e) {
      throw Error("malformed JSON at line " + std::to_string(line_number) + ": " + e.what());
    }
    if (!record.is_object()) throw Error("expected a JSON object at line " + std::to_string(line_number));
    if (!record.contains("id") || !record.at("id").is_string()) {
      throw Error("missing field id at line " + std::to_string(line_number));
    }
    auto id = record.at("id").get<std::string>();
    auto sentences = string_array(record, "sentences", line_number);
    auto reference = string_array(record, "reference", line_number);
    if (seen.contains(id)) {
      throw Error("duplicate id " + id + " at line " + std::to_string(line_number));
    }
    seen.insert(id);
    split.documents.push_back(make_document(std::move(id), sentences, reference, options.warnings));
  }
  return split;
}

DatasetSplit ingest_jsonl(const std::string& path, std::string split_name,
                          const IngestOptions& options) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open corpus file " + path);
  return ingest_jsonl(in, std::move(split_name), options);
}

void write_jsonl(const DatasetSplit& split, std::ostream& out) {
  for (const auto& doc : split.documents) {
    json record;
    record["id"] = doc.id;
    record["sentences"] = doc.sentence_texts();
    record["reference"] = doc.reference;
    out << record.dump() << '\n';
  }
}

void write_jsonl(const DatasetSplit& split, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  write_jsonl(split, out);
}

std::vector<std::string> split_sentences(std::string_view raw_text) {
  std::vector<std::string> out;
  std::size_t start = 0;
  std::size_t i = 0;
  const std::size_t n = raw_text.size();
  while (i < n) {
    const char ch = raw_text[i];
    if (ch != '.' && ch != '!' && ch != '?') {
      ++i;
      continue;
    }
    std::size_t end = i;
    while (end < n && (raw_text[end] == '.' || raw_text[end] == '!' || raw_text[end] == '?')) ++end;
    while (end < n && is_closing(raw_text[end])) ++end;
    std::size_t next = end;
    while (next < n && is_space(raw_text[next])) ++next;
    const bool has_space = next > end;
    const bool opens = next < n && (std::isupper(static_cast<unsigned char>(raw_text[next])) ||
                                    std::isdigit(static_cast<unsigned char>(raw_text[next])) ||
                                    is_opening_quote(raw_text[next]));
    const bool abbreviation = ch == '.' && end == i + 1 && is_abbreviation(word_before(raw_text, i));
    if (has_space && opens && !abbreviation) {
      out.push_back(trim(raw_text.substr(start, end - start)));
      start = next;
    }
    i = end;
  }
  std::string tail = trim(raw_text.substr(start));
  if (!tail.empty()) out.push_back(std::move(tail));
  return out;
}

SplitStats compute_stats(const DatasetSplit& split) {
  SplitStats stats;
  stats.documents = split.size();
  if (split.documents.empty()) return stats;
  double sentences = 0;
  double doc_tokens = 0;
  double ref_tokens = 0;
  for (const auto& doc : split.documents) {
    sentences += static_cast<double>(doc.size());
    for (const auto& s : doc.sentences) doc_tokens += static_cast<double>(normalize(s.text).size());
    for (const auto& s : doc.reference) ref_tokens += static_cast<double>(normalize(s).size());
  }
  const auto count = static_cast<double>(split.size());
  stats.mean_sentences = sentences / count;
  stats.mean_document_tokens = doc_tokens / count;
  stats.mean_reference_tokens = ref_tokens / count;
  return stats;
}

}  // namespace ordersum
