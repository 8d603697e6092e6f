#include "ordersum/corpus.hpp"

#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "ordersum/error.hpp"

namespace ordersum {
namespace {

DatasetSplit ingest_text(const std::string& text, IngestOptions options = {}) {
  std::istringstream in(text);
  return ingest_jsonl(in, "test", options);
}

std::string error_of(const std::string& text) {
  try {
    ingest_text(text);
  } catch (const Error& e) {
    return e.what();
  }
  return {};
}

TEST(Ingest, MapsFields) {
  const auto split = ingest_text(R"({"id":"a","sentences":["X y.","Z w."],"reference":["X y."]})");
  ASSERT_EQ(split.size(), 1u);
  const Document& doc = split.documents[0];
  EXPECT_EQ(doc.id, "a");
  ASSERT_EQ(doc.size(), 2u);
  EXPECT_EQ(doc.sentences[1].index, 1u);
  EXPECT_EQ(doc.sentences[1].text, "Z w.");
  EXPECT_EQ(doc.reference, std::vector<std::string>{"X y."});
}

TEST(Ingest, MissingFieldNamesLine) {
  const std::string text =
      "{\"id\":\"a\",\"sentences\":[\"A b.\"],\"reference\":[\"A b.\"]}\n"
      "{\"id\":\"b\",\"sentences\":[\"A b.\"]}\n";
  EXPECT_NE(error_of(text).find("missing field reference at line 2"), std::string::npos);
}

TEST(Ingest, DuplicateId) {
  const std::string line = "{\"id\":\"a\",\"sentences\":[\"A b.\"],\"reference\":[\"A b.\"]}\n";
  const std::string other = "{\"id\":\"b\",\"sentences\":[\"A b.\"],\"reference\":[\"A b.\"]}\n";
  EXPECT_NE(error_of(line + other + line).find("duplicate id"), std::string::npos);
}

TEST(Ingest, MalformedJsonNamesLine) {
  const std::string text =
      "{\"id\":\"a\",\"sentences\":[\"A b.\"],\"reference\":[\"A b.\"]}\n{not json\n";
  EXPECT_NE(error_of(text).find("line 2"), std::string::npos);
}

TEST(Ingest, DropsEmptySentencesAndReindexes) {
  std::ostringstream warnings;
  IngestOptions options;
  options.warnings = &warnings;
  const auto split =
      ingest_text(R"({"id":"a","sentences":["One two.","...","Three."],"reference":["One."]})",
                  options);
  const Document& doc = split.documents[0];
  ASSERT_EQ(doc.size(), 2u);
  EXPECT_EQ(doc.sentences[1].index, 1u);
  EXPECT_EQ(doc.sentences[1].text, "Three.");
  EXPECT_NE(warnings.str().find("dropped sentence 1"), std::string::npos);
}

TEST(Ingest, NoValidSentencesNamesDocument) {
  const std::string message = error_of(R"({"id":"empty","sentences":["!!"],"reference":["A."]})");
  EXPECT_NE(message.find("empty"), std::string::npos);
  EXPECT_NE(message.find("no valid sentences"), std::string::npos);
}

TEST(Ingest, MaxDocsTruncates) {
  std::string text;
  for (int i = 0; i < 10; ++i) {
    text += "{\"id\":\"d" + std::to_string(i) +
            "\",\"sentences\":[\"A b.\"],\"reference\":[\"A b.\"]}\n";
  }
  IngestOptions options;
  options.max_docs = 5;
  EXPECT_EQ(ingest_text(text, options).size(), 5u);
  EXPECT_EQ(ingest_text(text).size(), 10u);
}

TEST(Ingest, RoundTrip) {
  const std::string text =
      "{\"id\":\"a\",\"sentences\":[\"First one.\",\"Second \\\"quoted\\\" one.\"],"
      "\"reference\":[\"First.\"]}\n"
      "{\"id\":\"b\",\"sentences\":[\"Only.\"],\"reference\":[\"Only.\",\"Again.\"]}\n";
  const auto split = ingest_text(text);
  std::ostringstream out;
  write_jsonl(split, out);
  const auto again = ingest_text(out.str());
  ASSERT_EQ(again.size(), split.size());
  for (std::size_t i = 0; i < split.size(); ++i) {
    EXPECT_EQ(again.documents[i].id, split.documents[i].id);
    EXPECT_EQ(again.documents[i].sentence_texts(), split.documents[i].sentence_texts());
    EXPECT_EQ(again.documents[i].reference, split.documents[i].reference);
  }
}

TEST(Split, Find) {
  const auto split = ingest_text(
      "{\"id\":\"a\",\"sentences\":[\"A.\"],\"reference\":[\"A.\"]}\n"
      "{\"id\":\"b\",\"sentences\":[\"B.\"],\"reference\":[\"B.\"]}\n");
  ASSERT_NE(split.find("b"), nullptr);
  EXPECT_EQ(split.find("b")->sentences[0].text, "B.");
  EXPECT_EQ(split.find("c"), nullptr);
}

TEST(Stats, Means) {
  const auto split = ingest_text(
      "{\"id\":\"a\",\"sentences\":[\"A b.\",\"C.\"],\"reference\":[\"A.\"]}\n"
      "{\"id\":\"b\",\"sentences\":[\"D e f.\",\"G.\",\"H.\",\"I.\"],\"reference\":[\"B c.\"]}\n");
  const SplitStats stats = compute_stats(split);
  EXPECT_EQ(stats.documents, 2u);
  EXPECT_DOUBLE_EQ(stats.mean_sentences, 3.0);
  EXPECT_DOUBLE_EQ(stats.mean_document_tokens, (3.0 + 6.0) / 2.0);
  EXPECT_DOUBLE_EQ(stats.mean_reference_tokens, 1.5);
}

TEST(SplitSentences, TwoPeriods) {
  EXPECT_EQ(split_sentences("A b. C d."), (std::vector<std::string>{"A b.", "C d."}));
}

TEST(SplitSentences, NoPunctuation) {
  EXPECT_EQ(split_sentences("no punctuation"), std::vector<std::string>{"no punctuation"});
}

TEST(SplitSentences, RuleTable) {
  // Listed abbreviations and single initials never end a sentence.
  EXPECT_EQ(split_sentences("Dr. Smith left."), std::vector<std::string>{"Dr. Smith left."});
  EXPECT_EQ(split_sentences("We met J. Smith today."),
            std::vector<std::string>{"We met J. Smith today."});
  // Lowercase continuation is not a boundary.
  EXPECT_EQ(split_sentences("It cost 3.5 dollars. e.g. not split."),
            std::vector<std::string>{"It cost 3.5 dollars. e.g. not split."});
  // Digits and opening quotes after the gap start a new sentence.
  EXPECT_EQ(split_sentences("Done! 42 came. \"Yes,\" he said."),
            (std::vector<std::string>{"Done!", "42 came.", "\"Yes,\" he said."}));
  // Closing quotes stay with the sentence they end.
  EXPECT_EQ(split_sentences("He said \"stop.\" Then left?! Fine."),
            (std::vector<std::string>{"He said \"stop.\"", "Then left?!", "Fine."}));
}

TEST(SplitSentences, ConcatenationReproducesInput) {
  const std::string text = "First part.  Second one!\nThird?   Mr. Jones agreed. 9 more.";
  std::string joined;
  for (const auto& s : split_sentences(text)) joined += s;
  std::string squeezed;
  for (char c : text) {
    if (!std::isspace(static_cast<unsigned char>(c))) squeezed += c;
  }
  std::string joined_squeezed;
  for (char c : joined) {
    if (!std::isspace(static_cast<unsigned char>(c))) joined_squeezed += c;
  }
  EXPECT_EQ(joined_squeezed, squeezed);
  EXPECT_EQ(split_sentences(text), split_sentences(text));
  EXPECT_EQ(split_sentences(text).size(), 5u);
}

}  // namespace
}  // namespace ordersum
