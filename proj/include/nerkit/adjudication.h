#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include "json.hpp"
#include "nerkit/diff.h"
#include "nerkit/scoring.h"

namespace nerkit {

struct Progress {
  std::size_t total = 0;
  std::size_t decided = 0;
  std::size_t remaining = 0;
  bool operator==(const Progress&) const = default;
};

struct VersionWins {
  std::string version;
  Percent share;  // wins / decided
};

struct AdjudicationStats {
  std::vector<VersionWins> versions;
  Percent neither;  // decided records whose label matches no version
  std::size_t decided = 0;
};

struct ListFilter {
  bool undecided_only = false;
  std::optional<Domain> domain;
  std::optional<Format> format;
  std::optional<std::string> pattern;  // agreement pattern such as "A|B"
};

struct Page {
  std::size_t total = 0;  // records matching the filter
  std::size_t page = 0;
  std::size_t page_size = 0;
  std::size_t pages = 0;
  nlohmann::json items = nlohmann::json::array();
};

inline constexpr std::size_t kMaxPageSize = 500;

// One adjudicator working through a disagreement set. Decisions go to an
// append-only JSON-lines log that is flushed to disk before record_decision
// returns; reopening the session replays it. Later decisions for a diff_id
// supersede earlier ones, and all of them stay in the log.
//
// Reads may run concurrently; writes are serialized.
class AdjudicationSession {
 public:
  AdjudicationSession(DisagreementSet disagreements, std::filesystem::path log_path);
  ~AdjudicationSession();

  AdjudicationSession(const AdjudicationSession&) = delete;
  AdjudicationSession& operator=(const AdjudicationSession&) = delete;

  // Throws Error(kBadPage) for page_size outside [1, 500].
  Page list_disagreements(const ListFilter& filter, std::size_t page, std::size_t page_size) const;
  std::optional<nlohmann::json> get(const std::string& diff_id) const;

  // Throws Error(kUnknownDiffId) or Error(kMalformedLabel). The timestamp
  // defaults to the current UTC time.
  Progress record_decision(const std::string& diff_id, const std::string& chosen_label,
                           const std::string& chooser, std::optional<std::string> note,
                           std::optional<std::string> timestamp = std::nullopt);

  Progress progress() const;
  AdjudicationStats stats() const;
  // Latest decision per diff_id, in record order.
  std::vector<Decision> export_decisions() const;
  std::vector<Decision> log() const;
  const std::vector<std::string>& versions() const { return set_.versions; }
  const std::vector<DiffRecord>& records() const { return set_.records; }
  const std::vector<std::string>& load_warnings() const { return warnings_; }

 private:
  Progress progress_locked() const;
  nlohmann::json item_json(std::size_t index) const;
  void append_to_log(const Decision& d);

  DisagreementSet set_;
  std::map<std::string, std::size_t> index_;
  std::vector<Decision> log_;
  std::map<std::string, std::size_t> latest_;  // diff_id -> log position
  std::vector<std::string> warnings_;
  std::filesystem::path log_path_;
  int log_fd_ = -1;
  mutable std::shared_mutex mutex_;
};

AdjudicationStats adjudication_stats(const std::vector<DiffRecord>& records,
                                     const std::vector<std::string>& versions,
                                     const std::vector<Decision>& latest_decisions);

nlohmann::json to_json(const Progress& p);
nlohmann::json to_json(const AdjudicationStats& s);
std::string render_text(const AdjudicationStats& s);

std::string rfc3339_now();

}  // namespace nerkit
