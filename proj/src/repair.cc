#include "nerkit/repair.h"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "nerkit/conll_io.h"
#include "nerkit/error.h"
#include "table.h"

namespace nerkit {

std::string_view repair_kind_key(RepairKind k) {
  switch (k) {
    case RepairKind::kSentenceMerge: return "sentence_merge";
    case RepairKind::kSentenceSplit: return "sentence_split";
    case RepairKind::kTokenSplit: return "token_split";
    case RepairKind::kHyphenSplit: return "hyphen_split";
    case RepairKind::kLabelFix: return "label_fix";
  }
  return "";
}

std::optional<RepairKind> parse_repair_kind(std::string_view key) {
  for (RepairKind k : kRepairKinds) {
    if (repair_kind_key(k) == key) return k;
  }
  return std::nullopt;
}

namespace {

std::size_t kind_index(RepairKind k) { return static_cast<std::size_t>(k); }

std::string op_name(std::size_t index, const RepairOp& op) {
  return "op " + std::to_string(index) + " (" + std::string(repair_kind_key(op.kind)) + " doc " +
         std::to_string(op.doc_index) + " sentence " + std::to_string(op.sentence_index) +
         " token " + std::to_string(op.token_index) + ")";
}

class PatchApplier {
 public:
  explicit PatchApplier(Corpus& corpus) : corpus_(corpus) {}

  // Returns a skip reason, or empty when the op changed the corpus.
  std::string apply(std::size_t index, const RepairOp& op) {
    where_ = op_name(index, op);
    switch (op.kind) {
      case RepairKind::kSentenceMerge: return merge(op);
      case RepairKind::kSentenceSplit: return split_sentence(op);
      case RepairKind::kTokenSplit: return split_token(op);
      case RepairKind::kHyphenSplit: return split_hyphen(op);
      case RepairKind::kLabelFix: return fix_label(op);
    }
    return {};
  }

 private:
  [[noreturn]] void fail(ErrorCode code, const std::string& what) const {
    throw Error(code, where_ + ": " + what);
  }

  Document& document(const RepairOp& op) {
    if (op.doc_index >= corpus_.documents.size()) fail(ErrorCode::kBadLocation, "no such document");
    return corpus_.documents[op.doc_index];
  }

  Sentence& sentence(const RepairOp& op, std::size_t offset = 0) {
    Document& doc = document(op);
    const std::size_t s = op.sentence_index + offset;
    if (s >= doc.sentences.size()) fail(ErrorCode::kBadLocation, "no sentence " + std::to_string(s));
    return doc.sentences[s];
  }

  Token& token(Sentence& s, std::size_t index) {
    if (index >= s.tokens.size()) fail(ErrorCode::kBadLocation, "no token " + std::to_string(index));
    return s.tokens[index];
  }

  void check_surface(const RepairOp& op, const Token& t) const {
    if (op.expected_surface && *op.expected_surface != t.surface) {
      fail(ErrorCode::kSurfaceMismatch,
           "expected '" + *op.expected_surface + "', found '" + t.surface + "'");
    }
  }

  std::vector<Label> labels(const RepairOp& op, std::size_t count) const {
    if (op.labels.size() != count) {
      fail(ErrorCode::kBadLocation, "expected " + std::to_string(count) + " labels, got " +
                                        std::to_string(op.labels.size()));
    }
    std::vector<Label> out;
    for (const auto& l : op.labels) out.push_back(parse_label(l));
    return out;
  }

  void replace_token(Sentence& s, std::size_t index, const std::vector<std::string>& surfaces,
                     const std::vector<Label>& new_labels) {
    const Token original = s.tokens[index];
    std::vector<Token> parts;
    for (std::size_t k = 0; k < surfaces.size(); ++k) {
      Token t = original;
      t.surface = surfaces[k];
      t.label = new_labels[k];
      parts.push_back(std::move(t));
    }
    auto it = s.tokens.erase(s.tokens.begin() + static_cast<std::ptrdiff_t>(index));
    s.tokens.insert(it, parts.begin(), parts.end());
  }

  std::string merge(const RepairOp& op) {
    Sentence& first = sentence(op);
    Sentence& second = sentence(op, 1);
    check_surface(op, token(second, 0));
    first.tokens.insert(first.tokens.end(), second.tokens.begin(), second.tokens.end());
    auto& sentences = document(op).sentences;
    sentences.erase(sentences.begin() + static_cast<std::ptrdiff_t>(op.sentence_index) + 1);
    return {};
  }

  std::string split_sentence(const RepairOp& op) {
    Sentence& s = sentence(op);
    const std::size_t at = op.split_at.value_or(op.token_index);
    if (at == 0 || at >= s.tokens.size()) {
      fail(ErrorCode::kBadLocation, "split point " + std::to_string(at) + " is not interior");
    }
    check_surface(op, s.tokens[at]);
    Sentence tail;
    tail.tokens.assign(s.tokens.begin() + static_cast<std::ptrdiff_t>(at), s.tokens.end());
    s.tokens.resize(at);
    auto& sentences = document(op).sentences;
    sentences.insert(sentences.begin() + static_cast<std::ptrdiff_t>(op.sentence_index) + 1,
                     std::move(tail));
    return {};
  }

  std::string split_token(const RepairOp& op) {
    Sentence& s = sentence(op);
    const Token& t = token(s, op.token_index);
    check_surface(op, t);
    if (op.surfaces.size() < 2) fail(ErrorCode::kBadLocation, "token_split needs at least 2 surfaces");
    std::string joined;
    for (const auto& part : op.surfaces) {
      if (part.empty() || part.find_first_of(" \t\n") != std::string::npos) {
        fail(ErrorCode::kBadLocation, "bad surface '" + part + "'");
      }
      joined += part;
    }
    if (joined != t.surface) {
      fail(ErrorCode::kSurfaceMismatch, "parts '" + joined + "' do not spell '" + t.surface + "'");
    }
    replace_token(s, op.token_index, op.surfaces, labels(op, op.surfaces.size()));
    return {};
  }

  std::string split_hyphen(const RepairOp& op) {
    Sentence& s = sentence(op);
    const Token& t = token(s, op.token_index);
    check_surface(op, t);
    const std::string& surface = t.surface;
    const std::size_t hyphen = surface.find('-');
    if (hyphen == std::string::npos || surface.find('-', hyphen + 1) != std::string::npos ||
        hyphen == 0 || hyphen + 1 == surface.size()) {
      fail(ErrorCode::kSurfaceMismatch, "'" + surface + "' does not have exactly one interior hyphen");
    }
    if (op.hyphen_offset && *op.hyphen_offset != hyphen) {
      fail(ErrorCode::kSurfaceMismatch, "hyphen of '" + surface + "' is at offset " +
                                            std::to_string(hyphen) + ", not " +
                                            std::to_string(*op.hyphen_offset));
    }
    const std::vector<std::string> parts = {surface.substr(0, hyphen), "-", surface.substr(hyphen + 1)};
    replace_token(s, op.token_index, parts, labels(op, 3));
    return {};
  }

  std::string fix_label(const RepairOp& op) {
    Sentence& s = sentence(op);
    Token& t = token(s, op.token_index);
    check_surface(op, t);
    if (!op.new_label) fail(ErrorCode::kMalformedLabel, "label_fix without new_label");
    if (op.expected_label && *op.expected_label != t.label.str()) {
      fail(ErrorCode::kSurfaceMismatch,
           "expected label " + *op.expected_label + ", found " + t.label.str());
    }
    Label next = parse_label(*op.new_label);
    if (next == t.label) return "label already " + next.str();
    t.label = std::move(next);
    return {};
  }

  Corpus& corpus_;
  std::string where_;
};

}  // namespace

PatchResult apply_patch(const Corpus& corpus, const std::vector<RepairOp>& patch) {
  PatchResult result{corpus, {}};
  RepairStats& stats = result.stats;
  PatchApplier applier(result.corpus);
  for (std::size_t i = 0; i < patch.size(); ++i) {
    const RepairOp& op = patch[i];
    ++stats.submitted_by_kind[kind_index(op.kind)];
    try {
      std::string skipped = applier.apply(i, op);
      if (skipped.empty()) {
        ++stats.applied;
        ++stats.applied_by_kind[kind_index(op.kind)];
      } else {
        stats.skipped.emplace_back(i, std::move(skipped));
      }
    } catch (const Error& e) {
      if (e.code() == ErrorCode::kMalformedLabel) {
        throw Error(e.code(), op_name(i, op) + ": " + e.what());
      }
      throw;
    }
  }
  const auto violations = validate_transitions(result.corpus);
  if (!violations.empty()) {
    std::string msg = "patched corpus would contain invalid transitions:";
    for (std::size_t k = 0; k < violations.size() && k < 10; ++k) msg += " [" + describe(violations[k]) + "]";
    if (violations.size() > 10) msg += " ...";
    throw Error(ErrorCode::kWouldCreateInvalidTransition, msg);
  }
  stats.token_delta = static_cast<std::ptrdiff_t>(result.corpus.token_count()) -
                      static_cast<std::ptrdiff_t>(corpus.token_count());
  stats.sentence_delta = static_cast<std::ptrdiff_t>(result.corpus.sentence_count()) -
                         static_cast<std::ptrdiff_t>(corpus.sentence_count());
  return result;
}

RepairStats patch_stats(const std::vector<RepairOp>& patch) {
  RepairStats stats;
  for (const auto& op : patch) ++stats.submitted_by_kind[kind_index(op.kind)];
  std::tie(stats.token_delta, stats.sentence_delta) = analytic_delta(patch);
  return stats;
}

std::pair<std::ptrdiff_t, std::ptrdiff_t> analytic_delta(const std::vector<RepairOp>& patch) {
  std::ptrdiff_t tokens = 0;
  std::ptrdiff_t sentences = 0;
  for (const auto& op : patch) {
    switch (op.kind) {
      case RepairKind::kSentenceMerge: --sentences; break;
      case RepairKind::kSentenceSplit: ++sentences; break;
      case RepairKind::kTokenSplit: tokens += static_cast<std::ptrdiff_t>(op.surfaces.size()) - 1; break;
      case RepairKind::kHyphenSplit: tokens += 2; break;
      case RepairKind::kLabelFix: break;
    }
  }
  return {tokens, sentences};
}

nlohmann::json to_json(const RepairOp& op) {
  nlohmann::json j = {{"kind", repair_kind_key(op.kind)},
                      {"doc_index", op.doc_index},
                      {"sentence_index", op.sentence_index},
                      {"token_index", op.token_index}};
  if (op.expected_surface) j["expected_surface"] = *op.expected_surface;
  if (!op.surfaces.empty()) j["surfaces"] = op.surfaces;
  if (!op.labels.empty()) j["labels"] = op.labels;
  if (op.new_label) j["new_label"] = *op.new_label;
  if (op.expected_label) j["expected_label"] = *op.expected_label;
  if (op.split_at) j["split_at"] = *op.split_at;
  if (op.hyphen_offset) j["hyphen_offset"] = *op.hyphen_offset;
  return j;
}

RepairOp repair_op_from_json(const nlohmann::json& j) {
  RepairOp op;
  const auto kind = j.at("kind").get<std::string>();
  auto k = parse_repair_kind(kind);
  if (!k) throw Error(ErrorCode::kFormat, "unknown repair kind '" + kind + "'");
  op.kind = *k;
  op.doc_index = j.at("doc_index").get<std::size_t>();
  op.sentence_index = j.at("sentence_index").get<std::size_t>();
  op.token_index = j.value("token_index", std::size_t{0});
  auto opt_string = [&](const char* key) -> std::optional<std::string> {
    if (!j.contains(key) || j[key].is_null()) return std::nullopt;
    return j[key].get<std::string>();
  };
  auto opt_size = [&](const char* key) -> std::optional<std::size_t> {
    if (!j.contains(key) || j[key].is_null()) return std::nullopt;
    return j[key].get<std::size_t>();
  };
  op.expected_surface = opt_string("expected_surface");
  op.new_label = opt_string("new_label");
  op.expected_label = opt_string("expected_label");
  op.split_at = opt_size("split_at");
  op.hyphen_offset = opt_size("hyphen_offset");
  if (j.contains("surfaces")) op.surfaces = j["surfaces"].get<std::vector<std::string>>();
  if (j.contains("labels")) op.labels = j["labels"].get<std::vector<std::string>>();
  return op;
}

std::vector<RepairOp> read_patch(std::istream& in) {
  std::vector<RepairOp> patch;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    try {
      patch.push_back(repair_op_from_json(nlohmann::json::parse(line)));
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::kFormat, "patch line " + std::to_string(line_no) + ": " + e.what());
    } catch (const Error& e) {
      throw Error(e.code(), "patch line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return patch;
}

std::vector<RepairOp> read_patch_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  return read_patch(in);
}

void write_patch(const std::vector<RepairOp>& patch, std::ostream& out) {
  for (const auto& op : patch) out << to_json(op).dump() << '\n';
}

nlohmann::json to_json(const RepairStats& stats) {
  nlohmann::json by_kind = nlohmann::json::object();
  nlohmann::json submitted = nlohmann::json::object();
  for (RepairKind k : kRepairKinds) {
    by_kind[std::string(repair_kind_key(k))] = stats.applied_count(k);
    submitted[std::string(repair_kind_key(k))] = stats.submitted_count(k);
  }
  nlohmann::json skipped = nlohmann::json::array();
  for (const auto& [index, reason] : stats.skipped) skipped.push_back({{"op", index}, {"reason", reason}});
  return {{"applied", stats.applied},
          {"applied_by_kind", std::move(by_kind)},
          {"submitted", stats.submitted()},
          {"submitted_by_kind", std::move(submitted)},
          {"skipped", std::move(skipped)},
          {"token_delta", stats.token_delta},
          {"sentence_delta", stats.sentence_delta}};
}

std::string render_text(const RepairStats& stats) {
  detail::TextTable t({"fix", "submitted", "applied"});
  auto row = [&](const std::string& name, std::size_t submitted, std::size_t applied) {
    t.add_row({name, std::to_string(submitted), std::to_string(applied)});
  };
  row("Token splits", stats.submitted_count(RepairKind::kTokenSplit),
      stats.applied_count(RepairKind::kTokenSplit));
  row("Bad hyphen fixes", stats.submitted_count(RepairKind::kHyphenSplit),
      stats.applied_count(RepairKind::kHyphenSplit));
  row("Sentence boundary fixes",
      stats.submitted_count(RepairKind::kSentenceMerge) + stats.submitted_count(RepairKind::kSentenceSplit),
      stats.applied_count(RepairKind::kSentenceMerge) + stats.applied_count(RepairKind::kSentenceSplit));
  row("Label fixes", stats.submitted_count(RepairKind::kLabelFix), stats.applied_count(RepairKind::kLabelFix));
  std::ostringstream out;
  out << t.render();
  out << "token delta: " << stats.token_delta << "\nsentence delta: " << stats.sentence_delta << "\n";
  for (const auto& [index, reason] : stats.skipped) out << "skipped op " << index << ": " << reason << "\n";
  return out.str();
}

namespace {

bool is_upper_word(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) {
    return std::isupper(c) != 0;
  });
}

// Starts in capitals: at least one letter and no lower-case letters.
bool is_caps_token(std::string_view s) {
  bool letter = false;
  for (unsigned char c : s) {
    if (std::islower(c)) return false;
    if (std::isalpha(c)) letter = true;
  }
  return letter;
}

}  // namespace

std::vector<CandidateLocation> detect_headline_boundary_candidates(const Corpus& corpus,
                                                                   const MetadataTable& metadata,
                                                                   const HeadlineWindow& window) {
  std::vector<CandidateLocation> out;
  for (const auto& doc : corpus.documents) {
    const DocMetadata m = metadata.lookup(doc.doc_index);
    if (m.domain != Domain::kSports || m.format != Format::kDataReport) continue;
    if (doc.sentences.size() < 2) continue;
    const Sentence& first = doc.sentences[0];
    const Sentence& second = doc.sentences[1];
    const std::string text = join_surfaces(first, 0, first.tokens.size());
    if (text.size() < window.min_chars || text.size() > window.max_chars) continue;
    if (second.tokens.empty() || !is_caps_token(second.tokens[0].surface)) continue;
    out.push_back({doc.doc_index, 0, first.tokens.size() - 1, text,
                   "headline breaks after " + std::to_string(text.size()) + " characters"});
  }
  return out;
}

std::vector<CandidateLocation> detect_hyphen_candidates(const Corpus& corpus) {
  std::vector<CandidateLocation> out;
  for (const auto& doc : corpus.documents) {
    if (doc.sentences.empty()) continue;
    const auto& tokens = doc.sentences[0].tokens;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      const std::string& s = tokens[i].surface;
      const std::size_t hyphen = s.find('-');
      if (hyphen == std::string::npos || s.find('-', hyphen + 1) != std::string::npos) continue;
      const std::string_view left = std::string_view(s).substr(0, hyphen);
      const std::string_view right = std::string_view(s).substr(hyphen + 1);
      if (left.size() < 2 || right.size() < 2 || !is_upper_word(left) || !is_upper_word(right)) continue;
      out.push_back({doc.doc_index, 0, i, s, "upper-case hyphenated headline token"});
    }
  }
  return out;
}

nlohmann::json to_json(const std::vector<CandidateLocation>& candidates) {
  nlohmann::json a = nlohmann::json::array();
  for (const auto& c : candidates) {
    a.push_back({{"doc_index", c.doc_index},
                 {"sentence_index", c.sentence_index},
                 {"token_index", c.token_index},
                 {"surface", c.surface},
                 {"reason", c.reason}});
  }
  return a;
}

}  // namespace nerkit
