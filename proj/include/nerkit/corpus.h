#pragma once

#include <compare>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace nerkit {

// Entity type tag such as PER, ORG, LOC or MISC. Any non-empty tag without
// whitespace or hyphens is accepted so that other tag inventories work too.
class EntityType {
 public:
  EntityType() = default;
  explicit EntityType(std::string name);

  const std::string& str() const { return name_; }
  bool empty() const { return name_.empty(); }

  auto operator<=>(const EntityType&) const = default;
  bool operator==(const EntityType&) const = default;

 private:
  std::string name_;
};

enum class LabelKind { kOutside, kBegin, kInside };

struct Label {
  LabelKind kind = LabelKind::kOutside;
  EntityType type;  // empty iff kind == kOutside

  static Label outside() { return {}; }
  static Label begin(EntityType t) { return {LabelKind::kBegin, std::move(t)}; }
  static Label inside(EntityType t) { return {LabelKind::kInside, std::move(t)}; }

  bool is_outside() const { return kind == LabelKind::kOutside; }
  std::string str() const;

  auto operator<=>(const Label&) const = default;
  bool operator==(const Label&) const = default;
};

// Parses "O", "B-TYPE" or "I-TYPE". Throws Error(kMalformedLabel).
Label parse_label(std::string_view text);

enum class EncodingScheme { kIOB1, kBIO };

std::string_view encoding_name(EncodingScheme scheme);
EncodingScheme parse_encoding(std::string_view name);

// Whether `cur` may follow `prev` under `scheme`. At sentence start `prev` is O.
bool is_legal_transition(const Label& prev, const Label& cur, EncodingScheme scheme);

// Whether `cur` opens a new mention given `prev`. Meaningful for any sequence,
// legal or not.
bool starts_mention(const Label& prev, const Label& cur, EncodingScheme scheme);

struct Token {
  std::string surface;
  std::vector<std::string> extra_columns;  // POS, chunk, ... carried verbatim
  Label label;
  std::size_t source_line = 0;  // 1-based; 0 for tokens not read from a file
};

struct Sentence {
  std::vector<Token> tokens;
};

enum class Domain { kUnknown, kSports, kEconomy, kWorldEvents };
enum class Format { kUnknown, kTextArticle, kDataReport, kHybrid };

std::string_view domain_key(Domain d);     // "sports", "economy", ...
std::string_view format_key(Format f);     // "text_article", ...
std::string_view domain_title(Domain d);   // "Sports", "World Events", ...
std::string_view format_title(Format f);   // "Text Article", ...
std::optional<Domain> parse_domain(std::string_view key);
std::optional<Format> parse_format(std::string_view key);

struct DocMetadata {
  Domain domain = Domain::kUnknown;
  Format format = Format::kUnknown;

  // World events documents are all prose; a known world-events data report
  // or hybrid is suspicious but not an error.
  bool is_suspicious() const {
    return domain == Domain::kWorldEvents &&
           (format == Format::kDataReport || format == Format::kHybrid);
  }
  bool operator==(const DocMetadata&) const = default;
};

struct Document {
  std::size_t doc_index = 0;
  std::vector<Sentence> sentences;
  DocMetadata metadata;
  // False only for tokens that precede the first -DOCSTART- row of a file.
  bool has_docstart = true;
  // Tag columns of the -DOCSTART- row as read; empty means O-filled.
  std::vector<std::string> docstart_columns;

  std::size_t token_count() const;
};

// Column layout of a CoNLL file. Column 0 is always the surface form.
struct ColumnLayout {
  std::size_t column_count = 2;
  std::size_t ner_column = 1;
  bool operator==(const ColumnLayout&) const = default;
};

struct Corpus {
  std::vector<Document> documents;
  EncodingScheme encoding = EncodingScheme::kBIO;
  ColumnLayout layout;

  std::size_t token_count() const;
  std::size_t sentence_count() const;
};

struct Mention {
  std::size_t doc_index = 0;
  std::size_t sentence_index = 0;
  std::size_t start_token = 0;  // inclusive
  std::size_t end_token = 0;    // exclusive
  EntityType type;
  std::string surface;  // space-joined token surfaces

  std::size_t length() const { return end_token - start_token; }
  // Location and type only; the surface is derived from the tokens.
  bool same_span(const Mention& o) const {
    return doc_index == o.doc_index && sentence_index == o.sentence_index &&
           start_token == o.start_token && end_token == o.end_token;
  }
  auto operator<=>(const Mention&) const = default;
  bool operator==(const Mention&) const = default;
};

// Maximal typed spans of a sentence. Throws Error(kInvalidSequence) when the
// label sequence violates `scheme`.
std::vector<Mention> extract_mentions(const Sentence& sentence, EncodingScheme scheme,
                                      std::size_t doc_index = 0,
                                      std::size_t sentence_index = 0);

// Same as extract_mentions but never throws: an illegal continuation is
// read as the start of a new mention.
std::vector<Mention> extract_mentions_lenient(const Sentence& sentence, EncodingScheme scheme,
                                              std::size_t doc_index = 0,
                                              std::size_t sentence_index = 0);

// All mentions of a corpus in (doc, sentence, start) order, using corpus.encoding.
std::vector<Mention> corpus_mentions(const Corpus& corpus);

// Inverse of extract_mentions: labels of a sentence of `length` tokens holding
// the given non-overlapping spans.
std::vector<Label> encode_mentions(const std::vector<Mention>& mentions, std::size_t length,
                                   EncodingScheme scheme);

std::string join_surfaces(const Sentence& sentence, std::size_t begin, std::size_t end);

}  // namespace nerkit
