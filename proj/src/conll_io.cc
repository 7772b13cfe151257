#include "nerkit/conll_io.h"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "nerkit/error.h"

namespace nerkit {

namespace {

constexpr std::string_view kDocStart = "-DOCSTART-";

std::vector<std::string> split_columns(std::string_view line) {
  std::vector<std::string> cols;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t') ++j;
    if (j > i) cols.emplace_back(line.substr(i, j - i));
    i = j;
  }
  return cols;
}

std::string at_line(std::size_t line) { return "line " + std::to_string(line) + ": "; }

class CorpusBuilder {
 public:
  explicit CorpusBuilder(Corpus& corpus) : corpus_(corpus) {}

  void start_document(std::vector<std::string> tag_columns) {
    end_sentence();
    Document doc;
    doc.doc_index = corpus_.documents.size();
    doc.docstart_columns = std::move(tag_columns);
    corpus_.documents.push_back(std::move(doc));
  }

  void add_token(Token token) {
    if (corpus_.documents.empty()) {
      Document doc;
      doc.has_docstart = false;
      corpus_.documents.push_back(std::move(doc));
    }
    sentence_.tokens.push_back(std::move(token));
  }

  void end_sentence() {
    if (sentence_.tokens.empty()) return;
    corpus_.documents.back().sentences.push_back(std::move(sentence_));
    sentence_ = Sentence{};
  }

 private:
  Corpus& corpus_;
  Sentence sentence_;
};

bool all_o(const std::vector<std::string>& cols) {
  for (const auto& c : cols) {
    if (c != "O") return false;
  }
  return true;
}

}  // namespace

ParseResult parse_corpus(std::istream& in, const ParseOptions& options) {
  ParseResult result;
  Corpus& corpus = result.corpus;
  CorpusBuilder builder(corpus);

  std::optional<std::size_t> width = options.columns.column_count;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto cols = split_columns(line);
    if (cols.empty()) {
      builder.end_sentence();
      continue;
    }
    if (!width) width = cols.size();
    if (cols.size() != *width) {
      throw Error(ErrorCode::kRaggedRow, at_line(line_no) + "expected " + std::to_string(*width) +
                                             " columns, found " + std::to_string(cols.size()));
    }
    if (*width < 2) {
      throw Error(ErrorCode::kRaggedRow, at_line(line_no) + "rows need at least 2 columns");
    }
    const std::size_t ner = options.columns.ner_column.value_or(*width - 1);
    if (ner == 0 || ner >= *width) {
      throw Error(ErrorCode::kRaggedRow,
                  at_line(line_no) + "NER column " + std::to_string(ner) + " out of range");
    }
    if (cols[0] == kDocStart) {
      std::vector<std::string> tags(cols.begin() + 1, cols.end());
      builder.start_document(all_o(tags) ? std::vector<std::string>{} : std::move(tags));
      continue;
    }
    Token token;
    try {
      token.label = parse_label(cols[ner]);
    } catch (const Error& e) {
      throw Error(e.code(), at_line(line_no) + e.what());
    }
    token.surface = std::move(cols[0]);
    for (std::size_t c = 1; c < cols.size(); ++c) {
      if (c != ner) token.extra_columns.push_back(std::move(cols[c]));
    }
    token.source_line = line_no;
    builder.add_token(std::move(token));
  }
  if (in.bad()) throw Error(ErrorCode::kIo, "read error");
  builder.end_sentence();

  if (width) {
    corpus.layout.column_count = *width;
    corpus.layout.ner_column = options.columns.ner_column.value_or(*width - 1);
  }

  const EncodingGuess guess = detect_encoding(corpus);
  corpus.encoding = options.encoding.value_or(guess.scheme);

  auto& report = result.report;
  report.document_count = corpus.documents.size();
  report.sentence_count = corpus.sentence_count();
  report.token_count = corpus.token_count();
  report.detected_encoding = guess.scheme;
  report.encoding_ambiguous = guess.ambiguous;
  report.violations = validate_transitions(corpus);
  return result;
}

ParseResult parse_corpus_string(std::string_view text, const ParseOptions& options) {
  std::istringstream in{std::string(text)};
  return parse_corpus(in, options);
}

ParseResult parse_corpus_file(const std::filesystem::path& path, const ParseOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  try {
    return parse_corpus(in, options);
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.what());
  }
}

EncodingGuess detect_encoding(const Corpus& corpus) {
  bool iob1_evidence = false;       // I-X opening a mention
  bool iob1_contradiction = false;  // B-X not separating two X mentions
  for (const auto& doc : corpus.documents) {
    for (const auto& sentence : doc.sentences) {
      Label prev = Label::outside();
      for (const auto& token : sentence.tokens) {
        const Label& cur = token.label;
        const bool continues = !prev.is_outside() && prev.type == cur.type;
        if (cur.kind == LabelKind::kInside && !continues) iob1_evidence = true;
        if (cur.kind == LabelKind::kBegin && !continues) iob1_contradiction = true;
        prev = cur;
      }
    }
  }
  EncodingGuess guess;
  guess.scheme = iob1_evidence && !iob1_contradiction ? EncodingScheme::kIOB1
                                                      : EncodingScheme::kBIO;
  guess.ambiguous = !iob1_evidence && !iob1_contradiction;
  return guess;
}

void serialize_corpus(const Corpus& corpus, std::ostream& out) {
  const ColumnLayout& layout = corpus.layout;
  for (const auto& doc : corpus.documents) {
    if (doc.has_docstart) {
      out << kDocStart;
      for (std::size_t c = 1; c < layout.column_count; ++c) {
        out << ' ';
        if (doc.docstart_columns.size() == layout.column_count - 1) {
          out << doc.docstart_columns[c - 1];
        } else {
          out << 'O';
        }
      }
      out << "\n\n";
    }
    for (const auto& sentence : doc.sentences) {
      for (const auto& token : sentence.tokens) {
        out << token.surface;
        std::size_t extra = 0;
        for (std::size_t c = 1; c < layout.column_count; ++c) {
          out << ' ';
          if (c == layout.ner_column) {
            out << token.label.str();
          } else if (extra < token.extra_columns.size()) {
            out << token.extra_columns[extra++];
          } else {
            throw Error(ErrorCode::kInvariantBreach,
                        "token '" + token.surface + "' has too few columns for the layout");
          }
        }
        out << '\n';
      }
      out << '\n';
    }
  }
}

std::string serialize_corpus(const Corpus& corpus) {
  std::ostringstream out;
  serialize_corpus(corpus, out);
  return out.str();
}

std::string serialize_corpus(const Corpus& corpus, EncodingScheme encoding) {
  if (encoding == corpus.encoding) return serialize_corpus(corpus);
  return serialize_corpus(convert_encoding(corpus, encoding));
}

void write_corpus_file(const Corpus& corpus, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  serialize_corpus(corpus, out);
  if (!out) throw Error(ErrorCode::kIo, "write failed for " + path.string());
}

Corpus convert_encoding(const Corpus& corpus, EncodingScheme from, EncodingScheme to) {
  Corpus out = corpus;
  for (auto& doc : out.documents) {
    for (std::size_t s = 0; s < doc.sentences.size(); ++s) {
      auto& sentence = doc.sentences[s];
      const auto mentions = extract_mentions(sentence, from, doc.doc_index, s);
      const auto labels = encode_mentions(mentions, sentence.tokens.size(), to);
      for (std::size_t i = 0; i < labels.size(); ++i) sentence.tokens[i].label = labels[i];
    }
  }
  out.encoding = to;
  return out;
}

Corpus convert_encoding(const Corpus& corpus, EncodingScheme to) {
  return convert_encoding(corpus, corpus.encoding, to);
}

std::vector<TransitionViolation> validate_transitions(const Corpus& corpus,
                                                      EncodingScheme encoding) {
  std::vector<TransitionViolation> violations;
  for (const auto& doc : corpus.documents) {
    for (std::size_t s = 0; s < doc.sentences.size(); ++s) {
      Label prev = Label::outside();
      const auto& tokens = doc.sentences[s].tokens;
      for (std::size_t i = 0; i < tokens.size(); ++i) {
        if (!is_legal_transition(prev, tokens[i].label, encoding)) {
          violations.push_back({{doc.doc_index, s, i, tokens[i].source_line}, prev, tokens[i].label});
        }
        prev = tokens[i].label;
      }
    }
  }
  return violations;
}

std::vector<TransitionViolation> validate_transitions(const Corpus& corpus) {
  return validate_transitions(corpus, corpus.encoding);
}

std::size_t repair_transitions(Corpus& corpus) {
  std::size_t changed = 0;
  for (auto& doc : corpus.documents) {
    for (auto& sentence : doc.sentences) {
      Label prev = Label::outside();
      for (auto& token : sentence.tokens) {
        const Label original = token.label;
        if (!is_legal_transition(prev, token.label, corpus.encoding)) {
          token.label.kind = corpus.encoding == EncodingScheme::kBIO ? LabelKind::kBegin
                                                                     : LabelKind::kInside;
          ++changed;
        }
        prev = original;
      }
    }
  }
  return changed;
}

std::vector<Label> normalized_bio_labels(const Sentence& sentence, EncodingScheme scheme) {
  std::vector<Label> labels;
  labels.reserve(sentence.tokens.size());
  Label prev = Label::outside();
  for (const auto& token : sentence.tokens) {
    Label cur = token.label;
    if (!cur.is_outside()) {
      cur.kind = starts_mention(prev, token.label, scheme) ? LabelKind::kBegin : LabelKind::kInside;
    }
    labels.push_back(std::move(cur));
    prev = token.label;
  }
  return labels;
}

void check_same_tokenization(const Corpus& a, const Corpus& b) {
  auto mismatch = [](const std::string& where) {
    throw Error(ErrorCode::kTokenizationMismatch, "tokenization differs at " + where);
  };
  if (a.documents.size() != b.documents.size()) {
    mismatch("document count (" + std::to_string(a.documents.size()) + " vs " +
             std::to_string(b.documents.size()) + ")");
  }
  for (std::size_t d = 0; d < a.documents.size(); ++d) {
    const auto& da = a.documents[d];
    const auto& db = b.documents[d];
    if (da.sentences.size() != db.sentences.size()) {
      mismatch("document " + std::to_string(d) + " sentence count");
    }
    for (std::size_t s = 0; s < da.sentences.size(); ++s) {
      const auto& ta = da.sentences[s].tokens;
      const auto& tb = db.sentences[s].tokens;
      const std::size_t n = std::min(ta.size(), tb.size());
      for (std::size_t i = 0; i < n; ++i) {
        if (ta[i].surface != tb[i].surface) {
          mismatch("document " + std::to_string(d) + ", sentence " + std::to_string(s) +
                   ", token " + std::to_string(i) + " ('" + ta[i].surface + "' vs '" +
                   tb[i].surface + "')");
        }
      }
      if (ta.size() != tb.size()) {
        mismatch("document " + std::to_string(d) + ", sentence " + std::to_string(s) +
                 ", token " + std::to_string(n) + " (sentence length)");
      }
    }
  }
}

std::string describe(const TransitionViolation& v) {
  std::ostringstream out;
  out << "doc " << v.location.doc_index << " sentence " << v.location.sentence_index << " token "
      << v.location.token_index;
  if (v.location.source_line > 0) out << " (line " << v.location.source_line << ")";
  out << ": " << v.prev_label.str() << " -> " << v.cur_label.str();
  return out.str();
}

}  // namespace nerkit
