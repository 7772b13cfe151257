#include "nerkit/corpus.h"

#include <algorithm>
#include <cctype>

#include "nerkit/error.h"

namespace nerkit {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidSequence: return "InvalidSequence";
    case ErrorCode::kMalformedLabel: return "MalformedLabel";
    case ErrorCode::kRaggedRow: return "RaggedRow";
    case ErrorCode::kTokenizationMismatch: return "TokenizationMismatch";
    case ErrorCode::kEncodingInvalid: return "EncodingInvalid";
    case ErrorCode::kMetadata: return "MetadataError";
    case ErrorCode::kDocumentCountMismatch: return "DocumentCountMismatch";
    case ErrorCode::kUnknownDiffId: return "UnknownDiffId";
    case ErrorCode::kWouldCreateInvalidTransition: return "WouldCreateInvalidTransition";
    case ErrorCode::kBadLocation: return "BadLocation";
    case ErrorCode::kSurfaceMismatch: return "SurfaceMismatch";
    case ErrorCode::kBadPage: return "BadPage";
    case ErrorCode::kFormat: return "FormatError";
    case ErrorCode::kIo: return "IoError";
    case ErrorCode::kInvariantBreach: return "InvariantBreach";
  }
  return "Error";
}

namespace {

bool valid_type_char(char c) {
  return c != '-' && !std::isspace(static_cast<unsigned char>(c));
}

}  // namespace

EntityType::EntityType(std::string name) : name_(std::move(name)) {
  if (name_.empty() || !std::all_of(name_.begin(), name_.end(), valid_type_char)) {
    throw Error(ErrorCode::kMalformedLabel, "invalid entity type '" + name_ + "'");
  }
}

std::string Label::str() const {
  switch (kind) {
    case LabelKind::kOutside: return "O";
    case LabelKind::kBegin: return "B-" + type.str();
    case LabelKind::kInside: return "I-" + type.str();
  }
  return "O";
}

Label parse_label(std::string_view text) {
  if (text == "O") return Label::outside();
  if (text.size() < 3 || text[1] != '-' || (text[0] != 'B' && text[0] != 'I')) {
    throw Error(ErrorCode::kMalformedLabel, "malformed label '" + std::string(text) + "'");
  }
  EntityType type{std::string(text.substr(2))};
  return text[0] == 'B' ? Label::begin(std::move(type)) : Label::inside(std::move(type));
}

std::string_view encoding_name(EncodingScheme scheme) {
  return scheme == EncodingScheme::kIOB1 ? "IOB1" : "BIO";
}

EncodingScheme parse_encoding(std::string_view name) {
  std::string upper(name);
  std::transform(upper.begin(), upper.end(), upper.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  if (upper == "IOB1") return EncodingScheme::kIOB1;
  if (upper == "BIO" || upper == "IOB2") return EncodingScheme::kBIO;
  throw Error(ErrorCode::kFormat, "unknown encoding '" + std::string(name) + "'");
}

bool is_legal_transition(const Label& prev, const Label& cur, EncodingScheme scheme) {
  const bool continues = !prev.is_outside() && prev.type == cur.type;
  if (scheme == EncodingScheme::kBIO) {
    return cur.kind != LabelKind::kInside || continues;
  }
  // IOB1: B-X only separates two adjacent X mentions.
  return cur.kind != LabelKind::kBegin || continues;
}

bool starts_mention(const Label& prev, const Label& cur, EncodingScheme scheme) {
  (void)scheme;
  if (cur.is_outside()) return false;
  if (cur.kind == LabelKind::kBegin) return true;
  // I-X continues only a preceding X token; the same rule holds for both
  // schemes, so an illegal BIO I-X is read the way conlleval reads it.
  return prev.is_outside() || prev.type != cur.type;
}

std::string_view domain_key(Domain d) {
  switch (d) {
    case Domain::kSports: return "sports";
    case Domain::kEconomy: return "economy";
    case Domain::kWorldEvents: return "world_events";
    case Domain::kUnknown: break;
  }
  return "unknown";
}

std::string_view format_key(Format f) {
  switch (f) {
    case Format::kTextArticle: return "text_article";
    case Format::kDataReport: return "data_report";
    case Format::kHybrid: return "hybrid";
    case Format::kUnknown: break;
  }
  return "unknown";
}

std::string_view domain_title(Domain d) {
  switch (d) {
    case Domain::kSports: return "Sports";
    case Domain::kEconomy: return "Economy";
    case Domain::kWorldEvents: return "World Events";
    case Domain::kUnknown: break;
  }
  return "Unknown";
}

std::string_view format_title(Format f) {
  switch (f) {
    case Format::kTextArticle: return "Text Article";
    case Format::kDataReport: return "Data Report";
    case Format::kHybrid: return "Hybrid";
    case Format::kUnknown: break;
  }
  return "Unknown";
}

std::optional<Domain> parse_domain(std::string_view key) {
  for (Domain d : {Domain::kUnknown, Domain::kSports, Domain::kEconomy, Domain::kWorldEvents}) {
    if (domain_key(d) == key) return d;
  }
  return std::nullopt;
}

std::optional<Format> parse_format(std::string_view key) {
  for (Format f : {Format::kUnknown, Format::kTextArticle, Format::kDataReport, Format::kHybrid}) {
    if (format_key(f) == key) return f;
  }
  return std::nullopt;
}

std::size_t Document::token_count() const {
  std::size_t n = 0;
  for (const auto& s : sentences) n += s.tokens.size();
  return n;
}

std::size_t Corpus::token_count() const {
  std::size_t n = 0;
  for (const auto& d : documents) n += d.token_count();
  return n;
}

std::size_t Corpus::sentence_count() const {
  std::size_t n = 0;
  for (const auto& d : documents) n += d.sentences.size();
  return n;
}

std::string join_surfaces(const Sentence& sentence, std::size_t begin, std::size_t end) {
  std::string out;
  for (std::size_t i = begin; i < end; ++i) {
    if (i > begin) out += ' ';
    out += sentence.tokens[i].surface;
  }
  return out;
}

namespace {

std::vector<Mention> extract(const Sentence& sentence, EncodingScheme scheme,
                             std::size_t doc_index, std::size_t sentence_index, bool strict) {
  std::vector<Mention> mentions;
  Label prev = Label::outside();
  const auto& tokens = sentence.tokens;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const Label& cur = tokens[i].label;
    if (strict && !is_legal_transition(prev, cur, scheme)) {
      throw Error(ErrorCode::kInvalidSequence,
                  "invalid transition " + prev.str() + " -> " + cur.str() + " at document " +
                      std::to_string(doc_index) + ", sentence " +
                      std::to_string(sentence_index) + ", token " + std::to_string(i));
    }
    if (starts_mention(prev, cur, scheme)) {
      mentions.push_back({doc_index, sentence_index, i, i + 1, cur.type, {}});
    } else if (!cur.is_outside()) {
      mentions.back().end_token = i + 1;
    }
    prev = cur;
  }
  for (auto& m : mentions) m.surface = join_surfaces(sentence, m.start_token, m.end_token);
  return mentions;
}

}  // namespace

std::vector<Mention> extract_mentions(const Sentence& sentence, EncodingScheme scheme,
                                      std::size_t doc_index, std::size_t sentence_index) {
  return extract(sentence, scheme, doc_index, sentence_index, true);
}

std::vector<Mention> extract_mentions_lenient(const Sentence& sentence, EncodingScheme scheme,
                                              std::size_t doc_index,
                                              std::size_t sentence_index) {
  return extract(sentence, scheme, doc_index, sentence_index, false);
}

std::vector<Mention> corpus_mentions(const Corpus& corpus) {
  std::vector<Mention> all;
  for (const auto& doc : corpus.documents) {
    for (std::size_t s = 0; s < doc.sentences.size(); ++s) {
      auto ms = extract_mentions(doc.sentences[s], corpus.encoding, doc.doc_index, s);
      all.insert(all.end(), std::make_move_iterator(ms.begin()), std::make_move_iterator(ms.end()));
    }
  }
  return all;
}

std::vector<Label> encode_mentions(const std::vector<Mention>& mentions, std::size_t length,
                                   EncodingScheme scheme) {
  std::vector<Label> labels(length);
  std::vector<const Mention*> sorted;
  for (const auto& m : mentions) sorted.push_back(&m);
  std::sort(sorted.begin(), sorted.end(),
            [](const Mention* a, const Mention* b) { return a->start_token < b->start_token; });
  std::size_t prev_end = 0;
  const EntityType* prev_type = nullptr;
  for (const Mention* m : sorted) {
    if (m->start_token >= m->end_token || m->end_token > length || m->start_token < prev_end) {
      throw Error(ErrorCode::kInvalidSequence, "overlapping or out-of-range mention span");
    }
    const bool adjacent_same_type =
        prev_type != nullptr && prev_end == m->start_token && *prev_type == m->type;
    for (std::size_t i = m->start_token; i < m->end_token; ++i) labels[i] = Label::inside(m->type);
    if (scheme == EncodingScheme::kBIO || adjacent_same_type) {
      labels[m->start_token] = Label::begin(m->type);
    }
    prev_end = m->end_token;
    prev_type = &m->type;
  }
  return labels;
}

}  // namespace nerkit
