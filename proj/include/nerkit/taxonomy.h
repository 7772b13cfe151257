#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"
#include "nerkit/corpus.h"
#include "nerkit/metadata.h"

namespace nerkit {

// MUC-style error categories. Order is the reporting order.
enum class ErrorCategory { kMissed, kSpurious, kBoundaryError, kTypeError };
inline constexpr std::array<ErrorCategory, 4> kErrorCategories = {
    ErrorCategory::kMissed, ErrorCategory::kSpurious, ErrorCategory::kBoundaryError,
    ErrorCategory::kTypeError};

std::string_view category_name(ErrorCategory c);   // "Missed", "Boundary Error", ...
std::string_view category_key(ErrorCategory c);    // "missed", "boundary_error", ...

struct ErrorRecord {
  ErrorCategory category = ErrorCategory::kMissed;
  std::optional<Mention> gold;
  std::optional<Mention> pred;
  // (gold type, pred type); present only for type errors.
  std::optional<std::pair<EntityType, EntityType>> confusion;
  std::size_t doc_index = 0;
  std::size_t sentence_index = 0;
};

// Every gold/pred mention that is not an exact match, classified as Missed,
// Spurious, BoundaryError or TypeError.
//
// Within a sentence, leftover gold and predicted mentions are paired greedily
// by decreasing token overlap. Ties go to the earlier gold start, then the
// earlier pred start, then the longer pred. Each mention joins at most one
// pair. A pair with identical boundaries is a type error; any other
// overlapping pair is a boundary error whether or not the types agree.
std::vector<ErrorRecord> classify_errors(const Corpus& gold, const Corpus& pred);

// Same pairing applied to the mentions of one sentence.
std::vector<ErrorRecord> classify_sentence_errors(const std::vector<Mention>& gold,
                                                  const std::vector<Mention>& pred);

enum class ErrorGrouping { kDomain, kFormat, kCategory };

struct ErrorSummary {
  ErrorGrouping grouping = ErrorGrouping::kCategory;
  std::vector<std::string> groups;                        // column titles
  std::vector<std::array<std::size_t, 4>> counts;         // per group, per category
  std::size_t total = 0;

  std::size_t at(std::size_t group, ErrorCategory c) const {
    return counts[group][static_cast<std::size_t>(c)];
  }
};

ErrorSummary error_summary(const std::vector<ErrorRecord>& records, ErrorGrouping grouping,
                           const MetadataTable& metadata);

enum class Polarity { kFP, kFN };

struct ErrorCountRow {
  std::size_t count = 0;
  Polarity polarity = Polarity::kFP;
  EntityType type;
  std::string surface;
};

struct DocFilter {
  std::optional<Domain> domain;
  std::optional<Format> format;

  bool matches(const DocMetadata& m) const {
    return (!domain || m.domain == *domain) && (!format || m.format == *format);
  }
};

// Most frequent false positive / false negative mentions by (type, surface),
// sorted by descending count, then FP before FN, then surface.
std::vector<ErrorCountRow> count_mention_errors(const Corpus& gold, const Corpus& pred,
                                                const DocFilter& filter = {},
                                                const MetadataTable& metadata = {});

nlohmann::json to_json(const ErrorRecord& record);
nlohmann::json to_json(const std::vector<ErrorRecord>& records);
nlohmann::json to_json(const ErrorSummary& summary);
nlohmann::json to_json(const std::vector<ErrorCountRow>& rows);

std::string render_text(const ErrorSummary& summary);
std::string render_tsv(const ErrorSummary& summary);
std::string render_tsv(const std::vector<ErrorCountRow>& rows);
std::string render_records_tsv(const std::vector<ErrorRecord>& records);

}  // namespace nerkit
