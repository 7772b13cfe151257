#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "nerkit/corpus.h"
#include "nerkit/metadata.h"

namespace nerkit {

// An exact ratio shown as a percentage. Rounding (half-up, 2 decimals) only
// happens when it is rendered.
struct Percent {
  std::uint64_t numerator = 0;
  std::uint64_t denominator = 0;

  bool undefined() const { return denominator == 0; }
  // Percentage in hundredths, rounded half-up; 0 when undefined.
  std::uint64_t hundredths() const;
  double value() const { return static_cast<double>(hundredths()) / 100.0; }
  std::string str() const;  // "75.00"
};

struct Counts {
  std::uint64_t tp = 0;
  std::uint64_t fp = 0;
  std::uint64_t fn = 0;

  Percent precision() const { return {tp, tp + fp}; }
  Percent recall() const { return {tp, tp + fn}; }
  Percent f1() const { return {2 * tp, 2 * tp + fp + fn}; }

  Counts& operator+=(const Counts& o) {
    tp += o.tp;
    fp += o.fp;
    fn += o.fn;
    return *this;
  }
  bool operator==(const Counts&) const = default;
};

// A (domain, format) cell; nullopt on an axis means "all".
struct Stratum {
  std::optional<Domain> domain;
  std::optional<Format> format;

  std::string name() const;
  bool operator==(const Stratum&) const = default;
};

struct ScoreReport {
  Counts totals;
  std::map<EntityType, Counts> per_type;
  std::optional<Stratum> stratum;
  std::size_t documents = 0;

  void add(const ScoreReport& other);
};

// Exact-match (boundaries + type) micro-averaged span scoring. Requires
// identical tokenization; throws Error(kTokenizationMismatch) or
// Error(kEncodingInvalid).
ScoreReport score(const Corpus& gold, const Corpus& pred);

// Per-document reports in document order.
std::vector<ScoreReport> score_documents(const Corpus& gold, const Corpus& pred);

struct StratifiedReport {
  std::vector<ScoreReport> cells;             // non-empty (domain, format) cells
  std::vector<ScoreReport> domain_marginals;  // format = all
  std::vector<ScoreReport> format_marginals;  // domain = all
  ScoreReport global;

  const ScoreReport* find(const Stratum& stratum) const;
};

// Documents missing from `metadata` are scored under Unknown.
StratifiedReport score_stratified(const Corpus& gold, const Corpus& pred,
                                  const MetadataTable& metadata);

struct SeenOptions {
  bool case_sensitive = true;
  bool type_aware = false;
};

struct SeenSplit {
  std::uint64_t seen_gold_count = 0;
  std::uint64_t unseen_gold_count = 0;
  std::uint64_t seen_tp = 0;
  std::uint64_t unseen_tp = 0;

  Percent seen_recall() const { return {seen_tp, seen_gold_count}; }
  Percent unseen_recall() const { return {unseen_tp, unseen_gold_count}; }
  Percent overall_recall() const {
    return {seen_tp + unseen_tp, seen_gold_count + unseen_gold_count};
  }
};

// A gold test mention is seen iff its surface occurs as the surface of some
// gold training mention.
SeenSplit seen_unseen_recall(const Corpus& gold_test, const Corpus& pred_test,
                             const Corpus& gold_train, const SeenOptions& options = {});

nlohmann::json percent_json(const Percent& p);
nlohmann::json to_json(const ScoreReport& report);
nlohmann::json to_json(const StratifiedReport& report);
nlohmann::json to_json(const SeenSplit& split);

std::string render_text(const ScoreReport& report);
// Domains as columns, formats as rows, F1 in each cell and `-` where a cell
// has no documents.
std::string render_f1_grid(const StratifiedReport& report);
std::string render_text(const StratifiedReport& report);
std::string render_text(const SeenSplit& split);

}  // namespace nerkit
