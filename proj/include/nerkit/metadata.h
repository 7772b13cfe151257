#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "nerkit/corpus.h"

namespace nerkit {

// Per-document domain/format annotations read from a TSV sidecar with the
// header `doc_index<TAB>domain<TAB>format`. Documents without a row are Unknown.
struct MetadataTable {
  std::map<std::size_t, DocMetadata> entries;
  std::vector<std::string> warnings;

  DocMetadata lookup(std::size_t doc_index) const;
};

MetadataTable parse_metadata(std::istream& in);
MetadataTable parse_metadata_file(const std::filesystem::path& path);
void write_metadata(const MetadataTable& table, std::ostream& out);

// Copies metadata onto the documents; returns warnings for rows that name
// documents the corpus does not have and for suspicious combinations.
std::vector<std::string> attach_metadata(Corpus& corpus, const MetadataTable& table);

// Document counts per (domain, format), plus sentence and token totals.
struct DocumentCensus {
  std::map<std::pair<Domain, Format>, std::size_t> cells;
  std::size_t documents = 0;
  std::size_t sentences = 0;
  std::size_t tokens = 0;

  std::size_t count(std::optional<Domain> d, std::optional<Format> f) const;
};

DocumentCensus census(const Corpus& corpus, const MetadataTable& metadata);

}  // namespace nerkit
