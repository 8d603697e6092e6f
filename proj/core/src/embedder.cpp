#include "ordersum/embedder.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <limits>
#include <optional>
#include <ostream>
#include <set>
#include <string_view>

#include <json.hpp>

#include "ordersum/error.hpp"
#include "ordersum/rouge.hpp"

namespace ordersum {
namespace {

using nlohmann::json;

constexpr std::uint64_t kFnvOffset = 0xcbf29ce484222325ULL;
constexpr std::uint64_t kFnvPrime = 0x100000001b3ULL;

std::uint64_t fnv1a(std::string_view token, std::uint64_t seed) {
  std::uint64_t h = kFnvOffset;
  for (int shift = 0; shift < 64; shift += 8) {
    h ^= (seed >> shift) & 0xffU;
    h *= kFnvPrime;
  }
  for (char ch : token) {
    h ^= static_cast<unsigned char>(ch);
    h *= kFnvPrime;
  }
  // Final avalanche so low bits depend on every input byte.
  h ^= h >> 33;
  h *= 0xff51afd7ed558ccdULL;
  h ^= h >> 33;
  return h;
}

double norm(std::span<const double> v) {
  double sum = 0.0;
  for (double x : v) sum += x * x;
  return std::sqrt(sum);
}

void normalize_in_place(Vector& v) {
  const double n = norm(v);
  if (n > 0) {
    for (double& x : v) x /= n;
  }
}

Vector read_vector(const json& value, const std::string& id) {
  if (!value.is_array()) throw Error("document " + id + ": embedding vector must be an array");
  Vector out;
  out.reserve(value.size());
  for (const auto& item : value) {
    if (item.is_null()) {
      out.push_back(std::numeric_limits<double>::quiet_NaN());
      continue;
    }
    if (!item.is_number()) throw Error("document " + id + ": non-numeric embedding entry");
    out.push_back(item.get<double>());
  }
  return out;
}

// Writers such as Python's json module emit bare NaN / Infinity, which are
// not JSON, and overflowing literals like 1e999 fail to parse. Outside of
// strings both become null so the record still parses and validation can
// name the offending document.
std::string null_out_nonfinite(const std::string& line) {
  std::string out;
  out.reserve(line.size());
  bool in_string = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (in_string) {
      out += c;
      if (c == '\\' && i + 1 < line.size()) {
        out += line[++i];
      } else if (c == '"') {
        in_string = false;
      }
      continue;
    }
    if (c == '"') in_string = true;
    bool replaced = false;
    for (std::string_view literal : {"-Infinity", "Infinity", "NaN"}) {
      if (line.compare(i, literal.size(), literal) == 0) {
        out += "null";
        i += literal.size() - 1;
        replaced = true;
        break;
      }
    }
    if (!replaced && (c == '-' || std::isdigit(static_cast<unsigned char>(c)))) {
      const std::size_t end = line.find_first_of(",]} \t\r", i);
      const std::string token = line.substr(i, end == std::string::npos ? end : end - i);
      char* stop = nullptr;
      const double value = std::strtod(token.c_str(), &stop);
      if (*stop == '\0' && std::isinf(value)) {
        out += "null";
        i += token.size() - 1;
        replaced = true;
      }
    }
    if (!replaced) out += c;
  }
  return out;
}

}  // namespace

void EmbeddingSet::validate() const {
  if (d == 0) throw Error("document " + document_id + ": channel size must be positive");
  auto check = [&](const Vector& v) {
    if (v.size() != d) throw Error("document " + document_id + ": inconsistent channel size");
    for (double x : v) {
      if (!std::isfinite(x)) throw Error("document " + document_id + ": non-finite embedding entry");
    }
  };
  for (const auto& v : sentence_vectors) check(v);
  check(doc_vector);
}

Vector normalized_mean(std::span<const Vector> rows) {
  if (rows.empty()) return {};
  Vector mean(rows.front().size(), 0.0);
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < mean.size(); ++i) mean[i] += row[i];
  }
  for (double& x : mean) x /= static_cast<double>(rows.size());
  normalize_in_place(mean);
  return mean;
}

EmbeddingSet toy_embed(const Document& doc, std::size_t d, std::uint64_t seed) {
  if (d < 2) throw Error("toy embedder needs d >= 2");
  EmbeddingSet set;
  set.document_id = doc.id;
  set.d = d;
  set.sentence_vectors.reserve(doc.size());
  for (const auto& sentence : doc.sentences) {
    Vector v(d, 0.0);
    for (const auto& token : normalize(sentence.text)) {
      const std::uint64_t h = fnv1a(token, seed);
      const std::size_t bucket = static_cast<std::size_t>(h % d);
      v[bucket] += (h >> 63) != 0 ? -1.0 : 1.0;
    }
    normalize_in_place(v);
    set.sentence_vectors.push_back(std::move(v));
  }
  set.doc_vector = normalized_mean(set.sentence_vectors);
  return set;
}

EmbeddingMap toy_embed_all(const DatasetSplit& split, std::size_t d, std::uint64_t seed) {
  EmbeddingMap out;
  for (const auto& doc : split.documents) out.emplace(doc.id, toy_embed(doc, d, seed));
  return out;
}

EmbeddingMap load_embeddings(std::istream& in, const DatasetSplit& split) {
  EmbeddingMap out;
  std::optional<std::size_t> channel;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json record = json::parse(line, nullptr, false);
    if (record.is_discarded()) record = json::parse(null_out_nonfinite(line), nullptr, false);
    if (record.is_discarded()) {
      throw Error("malformed embedding JSON at line " + std::to_string(line_number));
    }
    if (!record.contains("id") || !record.contains("d") || !record.contains("sentences")) {
      throw Error("embedding record at line " + std::to_string(line_number) +
                  " needs id, d, and sentences");
    }
    EmbeddingSet set;
    set.document_id = record.at("id").get<std::string>();
    set.d = record.at("d").get<std::size_t>();
    if (channel && *channel != set.d) {
      throw Error("inconsistent channel size: document " + set.document_id + " has d=" +
                  std::to_string(set.d) + ", expected d=" + std::to_string(*channel));
    }
    channel = set.d;
    for (const auto& row : record.at("sentences")) {
      set.sentence_vectors.push_back(read_vector(row, set.document_id));
    }
    if (record.contains("doc") && !record.at("doc").is_null()) {
      set.doc_vector = read_vector(record.at("doc"), set.document_id);
    } else {
      set.doc_vector = normalized_mean(set.sentence_vectors);
      if (set.doc_vector.empty()) set.doc_vector.assign(set.d, 0.0);
    }
    set.validate();
    if (out.contains(set.document_id)) throw Error("duplicate embedding id " + set.document_id);
    out.emplace(set.document_id, std::move(set));
  }

  std::vector<std::string> missing;
  for (const auto& doc : split.documents) {
    auto it = out.find(doc.id);
    if (it == out.end()) {
      missing.push_back(doc.id);
    } else if (it->second.sentence_vectors.size() != doc.size()) {
      throw Error("document " + doc.id + ": " + std::to_string(it->second.sentence_vectors.size()) +
                  " sentence vectors for " + std::to_string(doc.size()) + " sentences");
    }
  }
  if (!missing.empty()) {
    std::string message = "embeddings missing for ids:";
    for (const auto& id : missing) message += " " + id;
    throw Error(message);
  }
  return out;
}

EmbeddingMap load_embeddings(const std::string& path, const DatasetSplit& split) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open embedding file " + path);
  return load_embeddings(in, split);
}

void write_embeddings_jsonl(const EmbeddingMap& embeddings, std::ostream& out) {
  for (const auto& [id, set] : embeddings) {
    json record;
    record["id"] = id;
    record["d"] = set.d;
    json rows = json::array();
    for (const auto& v : set.sentence_vectors) {
      json row = json::array();
      for (double x : v) row.push_back(static_cast<float>(x));
      rows.push_back(std::move(row));
    }
    record["sentences"] = std::move(rows);
    json doc = json::array();
    for (double x : set.doc_vector) doc.push_back(static_cast<float>(x));
    record["doc"] = std::move(doc);
    out << record.dump() << '\n';
  }
}

Vector concat_candidate(std::span<const Vector> sentence_vectors,
                        const CandidateSummary& candidate) {
  Vector out;
  for (std::size_t index : candidate.indices) {
    if (index >= sentence_vectors.size()) {
      throw Error("candidate index " + std::to_string(index) + " out of range for " +
                  std::to_string(sentence_vectors.size()) + " sentences");
    }
    const Vector& v = sentence_vectors[index];
    out.insert(out.end(), v.begin(), v.end());
  }
  return out;
}

Vector concat_candidate(const EmbeddingSet& set, const CandidateSummary& candidate) {
  return concat_candidate(set.sentence_vectors, candidate);
}

Vector pool_candidate(std::span<const double> intermediate, std::size_t r, std::size_t d) {
  if (r == 0 || intermediate.size() != r * d) {
    throw Error("pooling expects " + std::to_string(r) + " x " + std::to_string(d) +
                " values, got " + std::to_string(intermediate.size()));
  }
  Vector out(d, 0.0);
  const double scale = 1.0 / static_cast<double>(r);
  for (std::size_t delta = 0; delta < d; ++delta) {
    double sum = 0.0;
    for (std::size_t gamma = 0; gamma < r; ++gamma) sum += intermediate[r * delta + gamma];
    out[delta] = sum * scale;
  }
  return out;
}

Vector embed_candidate(std::span<const Vector> sentence_vectors,
                       const CandidateSummary& candidate) {
  if (candidate.indices.empty()) throw Error("cannot embed an empty candidate");
  const std::size_t d = sentence_vectors.empty() ? 0 : sentence_vectors.front().size();
  return pool_candidate(concat_candidate(sentence_vectors, candidate), candidate.size(), d);
}

double cosine(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw Error("cosine of vectors with different lengths");
  double dot = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) dot += a[i] * b[i];
  const double na = norm(a);
  const double nb = norm(b);
  if (na == 0.0 || nb == 0.0) throw Error("degenerate embedding: cosine of a zero-norm vector");
  return dot / (na * nb);
}

}  // namespace ordersum
