#include "doctest.h"
#include "nerkit/scoring.h"
#include "nerkit/taxonomy.h"
#include "oracle.h"

using namespace nerkit;

namespace {

Mention m(std::size_t b, std::size_t e, const char* type, std::size_t doc = 0) {
  Mention x;
  x.doc_index = doc;
  x.start_token = b;
  x.end_token = e;
  x.type = EntityType(type);
  return x;
}

Corpus bio(const oracle::Labels& ls, const std::vector<std::string>& surfaces = {}) {
  return oracle::single_sentence_corpus(ls, EncodingScheme::kBIO, surfaces);
}

}  // namespace

TEST_CASE("spec examples") {
  SUBCASE("left off 1993") {
    const auto r = classify_sentence_errors({m(0, 3, "MISC")}, {m(1, 3, "MISC")});
    REQUIRE(r.size() == 1);
    CHECK(r[0].category == ErrorCategory::kBoundaryError);
  }
  SUBCASE("Chicago LOC as ORG") {
    const auto r = classify_sentence_errors({m(5, 6, "LOC")}, {m(5, 6, "ORG")});
    REQUIRE(r.size() == 1);
    CHECK(r[0].category == ErrorCategory::kTypeError);
    REQUIRE(r[0].confusion.has_value());
    CHECK(r[0].confusion->first.str() == "LOC");
    CHECK(r[0].confusion->second.str() == "ORG");
  }
  SUBCASE("identity") {
    CHECK(classify_sentence_errors({m(0, 1, "PER")}, {m(0, 1, "PER")}).empty());
  }
  SUBCASE("greedy pairing") {
    const auto r = classify_sentence_errors({m(0, 2, "ORG")}, {m(1, 4, "PER"), m(5, 6, "LOC")});
    REQUIRE(r.size() == 2);
    std::multiset<ErrorCategory> cats = {r[0].category, r[1].category};
    CHECK(cats == std::multiset<ErrorCategory>{ErrorCategory::kSpurious, ErrorCategory::kBoundaryError});
    for (const auto& e : r) {
      if (e.category == ErrorCategory::kBoundaryError) {
        CHECK(e.gold->start_token == 0);
        CHECK(e.pred->start_token == 1);
      } else {
        CHECK(e.pred->start_token == 5);
      }
    }
  }
}

TEST_CASE("greedy prefers larger overlap, then earlier starts") {
  // gold [0,4) overlaps pred [0,1) by 1 and pred [1,4) by 3.
  const auto r = classify_sentence_errors({m(0, 4, "PER")}, {m(0, 1, "PER"), m(1, 4, "PER")});
  REQUIRE(r.size() == 2);
  for (const auto& e : r) {
    if (e.category == ErrorCategory::kBoundaryError) CHECK(e.pred->start_token == 1);
    else CHECK(e.category == ErrorCategory::kSpurious);
  }
}

TEST_CASE("partition identities hold on random pairs") {
  std::mt19937_64 rng(99);
  for (int i = 0; i < 300; ++i) {
    const Corpus g = oracle::random_corpus(rng, false);
    const Corpus p = oracle::relabel(g, rng);
    const auto counts = score(g, p).totals;
    const auto records = classify_errors(g, p);
    std::size_t missed = 0, spurious = 0, be = 0, te = 0;
    for (const auto& r : records) {
      switch (r.category) {
        case ErrorCategory::kMissed: ++missed; break;
        case ErrorCategory::kSpurious: ++spurious; break;
        case ErrorCategory::kBoundaryError: ++be; break;
        case ErrorCategory::kTypeError: ++te; break;
      }
    }
    CHECK(missed + be + te == counts.fn);
    CHECK(spurious + be + te == counts.fp);
  }
}

TEST_CASE("error summary") {
  MetadataTable meta;
  meta.entries[0] = {Domain::kEconomy, Format::kTextArticle};
  meta.entries[1] = {Domain::kSports, Format::kDataReport};
  std::vector<ErrorRecord> records(3);
  records[0].category = ErrorCategory::kMissed;
  records[1].category = ErrorCategory::kMissed;
  records[2].category = ErrorCategory::kTypeError;
  records[2].doc_index = 1;
  const auto s = error_summary(records, ErrorGrouping::kDomain, meta);
  CHECK(s.total == 3);
  std::size_t economy = 0, sports = 0;
  for (std::size_t i = 0; i < s.groups.size(); ++i) {
    if (s.groups[i] == "Economy") economy = i;
    if (s.groups[i] == "Sports") sports = i;
  }
  CHECK(s.at(economy, ErrorCategory::kMissed) == 2);
  CHECK(s.at(sports, ErrorCategory::kTypeError) == 1);
  CHECK(s.at(sports, ErrorCategory::kMissed) == 0);

  const auto empty = error_summary({}, ErrorGrouping::kCategory, meta);
  CHECK(empty.total == 0);
}

TEST_CASE("frequent mention errors") {
  SUBCASE("Chicago three times") {
    const std::vector<std::string> s = {"Chicago", "and", "Chicago", "and", "Chicago"};
    const auto g = bio({"B-LOC", "O", "B-LOC", "O", "B-LOC"}, s);
    const auto p = bio({"B-ORG", "O", "B-ORG", "O", "B-ORG"}, s);
    const auto rows = count_mention_errors(g, p);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].count == 3);
    CHECK(rows[0].polarity == Polarity::kFP);
    CHECK(rows[0].type.str() == "ORG");
    CHECK(rows[0].surface == "Chicago");
    CHECK(rows[1].polarity == Polarity::kFN);
    CHECK(rows[1].type.str() == "LOC");
    CHECK(render_tsv(rows).rfind("count\tpolarity\ttype\tsurface\n", 0) == 0);
  }
  SUBCASE("identity") {
    const auto g = bio({"B-LOC"}, {"Chicago"});
    CHECK(count_mention_errors(g, g).empty());
  }
  SUBCASE("ACCESS") {
    const auto g = bio({"B-MISC", "O", "O"}, {"ACCESS", "x", "ACCESS"});
    const auto p = bio({"O", "O", "B-ORG"}, {"ACCESS", "x", "ACCESS"});
    const auto rows = count_mention_errors(g, p);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].count == 1);
    CHECK(rows[1].count == 1);
  }
  SUBCASE("document filter") {
    Corpus g = bio({"B-LOC"}, {"Chicago"});
    g.documents.push_back(g.documents[0]);
    g.documents[1].doc_index = 1;
    Corpus p = g;
    for (auto& d : p.documents) d.sentences[0].tokens[0].label = parse_label("O");
    MetadataTable meta;
    meta.entries[1] = {Domain::kSports, Format::kHybrid};
    DocFilter f;
    f.domain = Domain::kSports;
    const auto rows = count_mention_errors(g, p, f, meta);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].count == 1);
    CHECK(count_mention_errors(g, p).at(0).count == 2);
  }
}
