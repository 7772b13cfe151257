#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "nerkit/conll_io.h"
#include "nerkit/corpus.h"
#include "nerkit/metadata.h"

namespace nerkit {

// Token positions are flat indices within a document (sentences concatenated),
// so that versions with different sentence boundaries still align.
struct DocAlignment {
  std::vector<std::vector<std::size_t>> tuples;     // one index per version
  std::vector<std::vector<std::size_t>> unaligned;  // per version, ascending
};

struct TokenAlignment {
  std::vector<DocAlignment> documents;

  std::size_t aligned_count() const;
  std::size_t unaligned_count(std::size_t version) const;
};

// Longest-common-subsequence alignment of token surfaces, each version
// against the first, intersected. Throws Error(kDocumentCountMismatch).
TokenAlignment align(std::span<const Corpus> versions);

// Order-preserving LCS matching of two surface sequences; exposed for tests.
std::vector<std::pair<std::size_t, std::size_t>> lcs_pairs(
    const std::vector<std::string_view>& a, const std::vector<std::string_view>& b);

struct ContextToken {
  int offset = 0;  // relative to the disputed token
  std::string surface;
  std::vector<std::string> labels;  // per version
};

struct DiffRecord {
  std::string diff_id;
  // Location in the first-listed version.
  std::size_t doc_index = 0;
  std::size_t sentence_index = 0;
  std::size_t token_index = 0;
  std::vector<std::string> surfaces;  // per version
  std::vector<std::string> labels;    // per version, at least two distinct
  std::string pattern;                // agreement pattern, e.g. "A+B|C"
  std::vector<ContextToken> context;
  std::optional<DocMetadata> metadata;
};

struct DiffOptions {
  // Compare labels as written instead of normalizing both sides to BIO.
  bool raw_labels = false;
  std::size_t context_window = 3;
  // When set, records carry the document's domain/format.
  const MetadataTable* metadata = nullptr;
};

struct DiffResult {
  std::vector<std::string> versions;  // version names
  std::vector<DiffRecord> records;
  std::size_t aligned_count = 0;
  std::vector<std::size_t> unaligned_counts;  // per version

  std::size_t count() const { return records.size(); }
};

// Positions where at least two versions disagree on the label, over fully
// aligned token tuples. Unaligned (retokenized) positions are excluded and
// reported in unaligned_counts.
DiffResult diff_versions(std::span<const Corpus> versions, std::vector<std::string> names,
                         const DiffOptions& options = {});
DiffResult diff_pair(const Corpus& a, const Corpus& b, const DiffOptions& options = {});

// A set partition of the versions by label equality, as a restricted growth
// string: {0,0,1} means versions 0 and 1 agree and version 2 differs.
using PartitionKey = std::vector<int>;

struct AgreementPartition {
  std::vector<std::string> versions;
  std::vector<std::pair<PartitionKey, std::size_t>> buckets;  // display order
  std::size_t aligned_count = 0;

  std::size_t count(const PartitionKey& key) const;
};

std::string pattern_name(const PartitionKey& key, const std::vector<std::string>& names);
std::vector<PartitionKey> all_partitions(std::size_t n);

AgreementPartition agreement(std::span<const Corpus> versions, std::vector<std::string> names,
                             const DiffOptions& options = {});

std::string make_diff_id(std::size_t doc, std::size_t sentence, std::size_t token,
                         const std::vector<std::string>& surfaces);

// Disagreement file: one JSON object per line.
nlohmann::json to_json(const DiffRecord& record, const std::vector<std::string>& versions,
                       std::size_t context_window = SIZE_MAX);
void export_disagreements(const DiffResult& result, std::size_t context_window, std::ostream& out);

struct DisagreementSet {
  std::vector<std::string> versions;
  std::vector<DiffRecord> records;
};
DisagreementSet read_disagreements(std::istream& in);
DisagreementSet read_disagreements_file(const std::filesystem::path& path);

struct Decision {
  std::string diff_id;
  std::string chosen_label;
  std::string chooser;
  std::string timestamp;  // RFC 3339
  std::optional<std::string> note;
};

nlohmann::json to_json(const Decision& d);
Decision decision_from_json(const nlohmann::json& j);
void write_decisions(const std::vector<Decision>& decisions, std::ostream& out);
std::vector<Decision> read_decisions(std::istream& in);
std::vector<Decision> read_decisions_file(const std::filesystem::path& path);

// Replaces the decided labels (interpreted as BIO, like the records) in
// `base`, which must be tokenized like the first version of the records. For
// repeated diff_ids the last decision wins. Throws Error(kUnknownDiffId),
// Error(kMalformedLabel), Error(kSurfaceMismatch) or
// Error(kWouldCreateInvalidTransition); on error `base` is untouched.
Corpus apply_decisions(const Corpus& base, const std::vector<Decision>& decisions,
                       const std::vector<DiffRecord>& records);

std::string render_text(const DiffResult& result);
std::string render_text(const AgreementPartition& partition);
nlohmann::json to_json(const DiffResult& result);
nlohmann::json to_json(const AgreementPartition& partition);

}  // namespace nerkit
