#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"
#include "nerkit/corpus.h"
#include "nerkit/metadata.h"

namespace nerkit {

enum class RepairKind { kSentenceMerge, kSentenceSplit, kTokenSplit, kHyphenSplit, kLabelFix };
inline constexpr std::array<RepairKind, 5> kRepairKinds = {
    RepairKind::kSentenceMerge, RepairKind::kSentenceSplit, RepairKind::kTokenSplit,
    RepairKind::kHyphenSplit, RepairKind::kLabelFix};

std::string_view repair_kind_key(RepairKind k);  // "sentence_merge", ...
std::optional<RepairKind> parse_repair_kind(std::string_view key);

// One declarative edit. Locations refer to the corpus as it stands when the
// op's turn comes; ops run in patch order.
//
//   sentence_merge  merges sentence_index with its successor; expected_surface
//                   is checked against the successor's first token
//   sentence_split  starts a new sentence at split_at (defaults to token_index)
//   token_split     replaces the token with `surfaces` / `labels`
//   hyphen_split    replaces `A-B` with `A`, `-`, `B` labeled by `labels`
//   label_fix       sets `new_label`; expected_label guards against reapplying
struct RepairOp {
  RepairKind kind = RepairKind::kLabelFix;
  std::size_t doc_index = 0;
  std::size_t sentence_index = 0;
  std::size_t token_index = 0;
  std::optional<std::string> expected_surface;
  std::vector<std::string> surfaces;
  std::vector<std::string> labels;
  std::optional<std::string> new_label;
  std::optional<std::string> expected_label;
  std::optional<std::size_t> split_at;
  std::optional<std::size_t> hyphen_offset;  // byte offset of the hyphen
};

struct RepairStats {
  std::array<std::size_t, 5> applied_by_kind{};
  std::array<std::size_t, 5> submitted_by_kind{};
  std::size_t applied = 0;
  std::vector<std::pair<std::size_t, std::string>> skipped;  // (op index, reason)
  std::ptrdiff_t token_delta = 0;
  std::ptrdiff_t sentence_delta = 0;

  std::size_t submitted() const { return applied + skipped.size(); }
  std::size_t applied_count(RepairKind k) const { return applied_by_kind[static_cast<std::size_t>(k)]; }
  std::size_t submitted_count(RepairKind k) const {
    return submitted_by_kind[static_cast<std::size_t>(k)];
  }
};

struct PatchResult {
  Corpus corpus;
  RepairStats stats;
};

// Applies the ops in order. The patch is atomic: any failure throws
// (kBadLocation, kSurfaceMismatch, kMalformedLabel,
// kWouldCreateInvalidTransition) and nothing is returned. Label fixes that
// leave the label unchanged are counted as skipped.
PatchResult apply_patch(const Corpus& corpus, const std::vector<RepairOp>& patch);

// Per-kind counts of a patch without applying it.
RepairStats patch_stats(const std::vector<RepairOp>& patch);

// Token and sentence count change implied by the op kinds alone.
std::pair<std::ptrdiff_t, std::ptrdiff_t> analytic_delta(const std::vector<RepairOp>& patch);

nlohmann::json to_json(const RepairOp& op);
RepairOp repair_op_from_json(const nlohmann::json& j);
std::vector<RepairOp> read_patch(std::istream& in);
std::vector<RepairOp> read_patch_file(const std::filesystem::path& path);
void write_patch(const std::vector<RepairOp>& patch, std::ostream& out);

nlohmann::json to_json(const RepairStats& stats);
std::string render_text(const RepairStats& stats);

struct CandidateLocation {
  std::size_t doc_index = 0;
  std::size_t sentence_index = 0;
  std::size_t token_index = 0;
  std::string surface;  // token or sentence text that triggered the candidate
  std::string reason;
};

struct HeadlineWindow {
  std::size_t min_chars = 16;
  std::size_t max_chars = 20;
};

// Sports data reports whose first sentence ends after [16, 20] characters
// (surfaces plus single spaces) while the next sentence carries on in capitals.
std::vector<CandidateLocation> detect_headline_boundary_candidates(
    const Corpus& corpus, const MetadataTable& metadata, const HeadlineWindow& window = {});

// Upper-case `A-B` tokens (both sides alphabetic, at least 2 letters) in the
// first sentence of a document.
std::vector<CandidateLocation> detect_hyphen_candidates(const Corpus& corpus);

nlohmann::json to_json(const std::vector<CandidateLocation>& candidates);

}  // namespace nerkit
