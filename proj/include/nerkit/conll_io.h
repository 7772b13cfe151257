#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nerkit/corpus.h"

namespace nerkit {

struct ColumnSpec {
  // Index of the NER tag column; defaults to the last column.
  std::optional<std::size_t> ner_column;
  // Expected number of columns per row; defaults to the first row's width.
  std::optional<std::size_t> column_count;
};

struct ParseOptions {
  ColumnSpec columns;
  // Forces the encoding instead of detecting it.
  std::optional<EncodingScheme> encoding;
};

struct TokenLocation {
  std::size_t doc_index = 0;
  std::size_t sentence_index = 0;
  std::size_t token_index = 0;
  std::size_t source_line = 0;
  auto operator<=>(const TokenLocation&) const = default;
};

struct TransitionViolation {
  TokenLocation location;
  Label prev_label;
  Label cur_label;
  bool operator==(const TransitionViolation&) const = default;
};

struct ParseReport {
  std::size_t token_count = 0;
  std::size_t sentence_count = 0;
  std::size_t document_count = 0;
  EncodingScheme detected_encoding = EncodingScheme::kBIO;
  // Neither scheme had evidence (e.g. all-O or single-token mentions only).
  bool encoding_ambiguous = false;
  std::vector<TransitionViolation> violations;
};

struct ParseResult {
  Corpus corpus;
  ParseReport report;
};

// Reads CoNLL-03 column text. Rows are split on runs of spaces/tabs; blank
// lines end sentences; -DOCSTART- rows start documents. Throws
// Error(kRaggedRow) or Error(kMalformedLabel) with the offending line number.
ParseResult parse_corpus(std::istream& in, const ParseOptions& options = {});
ParseResult parse_corpus_string(std::string_view text, const ParseOptions& options = {});
ParseResult parse_corpus_file(const std::filesystem::path& path, const ParseOptions& options = {});

// File-global encoding detection over the labels of a corpus.
struct EncodingGuess {
  EncodingScheme scheme = EncodingScheme::kBIO;
  bool ambiguous = true;
};
EncodingGuess detect_encoding(const Corpus& corpus);

// Canonical serialization: single-space separators, one -DOCSTART- row per
// document, a blank line after the -DOCSTART- row and after every sentence.
void serialize_corpus(const Corpus& corpus, std::ostream& out);
std::string serialize_corpus(const Corpus& corpus);
// Converts to `encoding` first when it differs from corpus.encoding.
std::string serialize_corpus(const Corpus& corpus, EncodingScheme encoding);
void write_corpus_file(const Corpus& corpus, const std::filesystem::path& path);

// Relabels so that the mention sets are unchanged under the new scheme.
// Throws Error(kInvalidSequence) when the corpus is not valid under `from`.
Corpus convert_encoding(const Corpus& corpus, EncodingScheme from, EncodingScheme to);
Corpus convert_encoding(const Corpus& corpus, EncodingScheme to);

// Every illegal adjacent label pair, sentence starts included (the virtual
// previous label there is O).
std::vector<TransitionViolation> validate_transitions(const Corpus& corpus,
                                                      EncodingScheme encoding);
std::vector<TransitionViolation> validate_transitions(const Corpus& corpus);

// conlleval-style repair: each illegal continuation becomes a mention start
// (BIO: I-X -> B-X; IOB1: B-X -> I-X). Returns the number of labels changed.
std::size_t repair_transitions(Corpus& corpus);

// Per-sentence BIO labels for any corpus, reading illegal continuations the
// way repair_transitions does. Never throws.
std::vector<Label> normalized_bio_labels(const Sentence& sentence, EncodingScheme scheme);

// Throws Error(kTokenizationMismatch) naming the first differing position.
void check_same_tokenization(const Corpus& a, const Corpus& b);

std::string describe(const TransitionViolation& v);

}  // namespace nerkit
