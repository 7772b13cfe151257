#include <sstream>

#include "doctest.h"
#include "nerkit/conll_io.h"
#include "nerkit/error.h"
#include "nerkit/metadata.h"

using namespace nerkit;

namespace {

MetadataTable parse(const std::string& text) {
  std::istringstream in(text);
  return parse_metadata(in);
}

}  // namespace

TEST_CASE("metadata sidecar") {
  const auto t = parse("doc_index\tdomain\tformat\n0\tsports\tdata_report\n2\teconomy\thybrid\n");
  CHECK(t.lookup(0) == DocMetadata{Domain::kSports, Format::kDataReport});
  CHECK(t.lookup(1) == DocMetadata{});
  CHECK(t.warnings.empty());
  std::ostringstream out;
  write_metadata(t, out);
  CHECK(parse(out.str()).entries == t.entries);
}

TEST_CASE("metadata errors") {
  CHECK_THROWS_AS(parse("doc\tdomain\tformat\n"), Error);
  CHECK_THROWS_AS(parse("doc_index\tdomain\tformat\n0\tpolitics\thybrid\n"), Error);
  CHECK_THROWS_AS(parse("doc_index\tdomain\tformat\n0\tsports\thybrid\n0\tsports\thybrid\n"), Error);
  CHECK_THROWS_AS(parse("doc_index\tdomain\tformat\nx\tsports\thybrid\n"), Error);
}

TEST_CASE("world events data reports are only a warning") {
  const auto t = parse("doc_index\tdomain\tformat\n0\tworld_events\tdata_report\n");
  CHECK(t.warnings.size() == 1);
}

TEST_CASE("census counts documents per cell") {
  const auto c = parse_corpus_file(std::string(NERKIT_FIXTURES) + "/table1.conll").corpus;
  const auto t = parse_metadata_file(std::string(NERKIT_FIXTURES) + "/table1_meta.tsv");
  const auto s = census(c, t);
  CHECK(s.documents == 231);
  CHECK(s.count(Domain::kWorldEvents, std::nullopt) == 63);
  CHECK(s.count(std::nullopt, Format::kHybrid) == 19);
  CHECK(s.count(Domain::kSports, Format::kDataReport) == 59);
  CHECK(s.count(Domain::kWorldEvents, Format::kDataReport) == 0);
}

TEST_CASE("attach metadata warns about missing documents") {
  auto c = parse_corpus_string("-DOCSTART- O\n\na O\n\n").corpus;
  const auto t = parse("doc_index\tdomain\tformat\n0\tsports\thybrid\n4\teconomy\thybrid\n");
  const auto w = attach_metadata(c, t);
  CHECK(w.size() == 1);
  CHECK(c.documents[0].metadata.domain == Domain::kSports);
}
