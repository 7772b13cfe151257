#include <fstream>
#include <sstream>

#include "doctest.h"
#include "nerkit/conll_io.h"
#include "nerkit/error.h"
#include "oracle.h"

using namespace nerkit;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string fixture(const char* name) { return std::string(NERKIT_FIXTURES) + "/" + name; }

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error thrown");
  return ErrorCode::kInvariantBreach;
}

}  // namespace

TEST_CASE("Chelsea snippet parses as one BIO document") {
  const auto r = parse_corpus_file(fixture("chelsea.conll"));
  CHECK(r.corpus.documents.size() == 1);
  CHECK_FALSE(r.corpus.documents[0].has_docstart);
  CHECK(r.report.token_count == 8);
  CHECK(r.report.detected_encoding == EncodingScheme::kBIO);
  CHECK(corpus_mentions(r.corpus).size() == 4);
}

TEST_CASE("four-column IOB1 file") {
  const auto r = parse_corpus_file(fixture("conll03_iob1_4col.conll"));
  CHECK(r.corpus.encoding == EncodingScheme::kIOB1);
  CHECK_FALSE(r.report.encoding_ambiguous);
  CHECK(r.corpus.layout.column_count == 4);
  CHECK(r.corpus.layout.ner_column == 3);
  CHECK(r.corpus.documents.size() == 2);
  CHECK(r.report.violations.empty());
  const auto ms = corpus_mentions(r.corpus);
  // EU, German, British, Peter Blackburn, BRUSSELS, JAPAN, CHINA, Hapoel Haifa, Maccabi Tel Aviv
  CHECK(ms.size() == 9);
  CHECK(ms.back().surface == "Maccabi Tel Aviv");
  CHECK(r.corpus.documents[0].sentences[0].tokens[0].extra_columns ==
        std::vector<std::string>{"NNP", "I-NP"});
}

TEST_CASE("canonical fixtures round trip byte for byte") {
  for (const char* name : {"conll03_iob1_4col.conll", "bio_2col.conll", "table1.conll",
                           "diff3_a.conll"}) {
    CAPTURE(name);
    const std::string text = slurp(fixture(name));
    CHECK(serialize_corpus(parse_corpus_string(text).corpus) == text);
  }
}

TEST_CASE("random corpora survive serialize then parse") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 200; ++i) {
    const bool iob1 = i % 2;
    const Corpus c = oracle::random_corpus(rng, iob1);
    ParseOptions o;
    o.encoding = c.encoding;
    const Corpus back = parse_corpus_string(serialize_corpus(c), o).corpus;
    CHECK(serialize_corpus(back) == serialize_corpus(c));
    CHECK(oracle::corpus_spans(back) == oracle::corpus_spans(c));
  }
}

TEST_CASE("ragged rows name their line") {
  const std::string text = "-DOCSTART- O\n\nEU B-ORG\nrejects VBZ O\n";
  try {
    parse_corpus_string(text);
    FAIL("expected a ragged row error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kRaggedRow);
    CHECK(std::string(e.what()).find("4") != std::string::npos);
  }
}

TEST_CASE("malformed labels are rejected") {
  CHECK(code_of([] { parse_corpus_string("EU B_ORG\n"); }) == ErrorCode::kMalformedLabel);
}

TEST_CASE("O then I-PER is exactly one violation") {
  const auto r = parse_corpus_string("Some O\nPeter I-PER\n", ParseOptions{{}, EncodingScheme::kBIO});
  REQUIRE(r.report.violations.size() == 1);
  CHECK(r.report.violations[0].location.token_index == 1);
  CHECK(r.report.violations[0].location.source_line == 2);
  CHECK(describe(r.report.violations[0]).find("I-PER") != std::string::npos);
}

TEST_CASE("encoding detection") {
  CHECK(parse_corpus_string("a I-PER\nb O\n").report.detected_encoding == EncodingScheme::kIOB1);
  CHECK(parse_corpus_string("a B-PER\nb O\n").report.detected_encoding == EncodingScheme::kBIO);
  const auto amb = parse_corpus_string("a O\nb O\n").report;
  CHECK(amb.encoding_ambiguous);
  CHECK(amb.detected_encoding == EncodingScheme::kBIO);
  // I-X evidence and a contradicting B-X after O: not IOB1.
  const auto mixed = parse_corpus_string("a I-PER\nb O\nc B-LOC\n").report;
  CHECK(mixed.detected_encoding == EncodingScheme::kBIO);
}

TEST_CASE("IOB1 to BIO and back") {
  const auto r = parse_corpus_file(fixture("conll03_iob1_4col.conll"));
  const Corpus bio = convert_encoding(r.corpus, EncodingScheme::kBIO);
  CHECK(bio.encoding == EncodingScheme::kBIO);
  CHECK(validate_transitions(bio).empty());
  CHECK(corpus_mentions(bio) == corpus_mentions(r.corpus));
  const Corpus back = convert_encoding(bio, EncodingScheme::kIOB1);
  CHECK(serialize_corpus(back) == serialize_corpus(r.corpus));
}

TEST_CASE("converting an invalid corpus fails") {
  const auto c = oracle::single_sentence_corpus({"O", "I-PER"}, EncodingScheme::kBIO);
  CHECK(code_of([&] { convert_encoding(c, EncodingScheme::kIOB1); }) == ErrorCode::kInvalidSequence);
}

TEST_CASE("conlleval repair") {
  auto c = oracle::single_sentence_corpus({"O", "I-PER", "I-PER", "I-LOC"}, EncodingScheme::kBIO);
  CHECK(repair_transitions(c) == 2);
  CHECK(oracle::labels_of(c.documents[0].sentences[0]) ==
        oracle::Labels{"O", "B-PER", "I-PER", "B-LOC"});
  CHECK(validate_transitions(c).empty());
}

TEST_CASE("tokenization mismatch names the position") {
  const auto a = oracle::single_sentence_corpus({"O", "O"}, EncodingScheme::kBIO, {"a", "b"});
  const auto b = oracle::single_sentence_corpus({"O", "O"}, EncodingScheme::kBIO, {"a", "c"});
  try {
    check_same_tokenization(a, b);
    FAIL("expected mismatch");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kTokenizationMismatch);
    CHECK(std::string(e.what()).find("token 1") != std::string::npos);
  }
  CHECK_NOTHROW(check_same_tokenization(a, a));
}

TEST_CASE("explicit NER column") {
  ParseOptions o;
  o.columns.ner_column = 1;
  const auto r = parse_corpus_string("EU B-ORG NNP\nsaid O VBD\n", o);
  CHECK(r.corpus.layout.ner_column == 1);
  CHECK(corpus_mentions(r.corpus).size() == 1);
  CHECK(serialize_corpus(r.corpus) == "EU B-ORG NNP\nsaid O VBD\n\n");
}
