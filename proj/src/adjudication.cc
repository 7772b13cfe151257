#include "nerkit/adjudication.h"

#include <fcntl.h>
#include <unistd.h>

#include <cerrno>
#include <chrono>
#include <cstring>
#include <ctime>
#include <fstream>
#include <mutex>
#include <sstream>

#include "nerkit/error.h"
#include "table.h"

namespace nerkit {

std::string rfc3339_now() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

AdjudicationSession::AdjudicationSession(DisagreementSet disagreements,
                                         std::filesystem::path log_path)
    : set_(std::move(disagreements)), log_path_(std::move(log_path)) {
  for (std::size_t i = 0; i < set_.records.size(); ++i) index_[set_.records[i].diff_id] = i;

  bool needs_newline = false;
  if (std::filesystem::exists(log_path_)) {
    std::ifstream in(log_path_, std::ios::binary);
    if (!in) throw Error(ErrorCode::kIo, "cannot read " + log_path_.string());
    std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    std::size_t pos = 0;
    std::size_t line_no = 0;
    std::optional<std::size_t> torn_at;
    while (pos < content.size()) {
      const std::size_t line_start = pos;
      const std::size_t nl = content.find('\n', pos);
      const bool complete = nl != std::string::npos;
      const std::string line = content.substr(pos, complete ? nl - pos : std::string::npos);
      pos = complete ? nl + 1 : content.size();
      ++line_no;
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      Decision d;
      try {
        d = decision_from_json(nlohmann::json::parse(line));
      } catch (const nlohmann::json::exception& e) {
        // A torn final write was never acknowledged.
        if (!complete) {
          warnings_.push_back("ignoring incomplete last line of " + log_path_.string());
          torn_at = line_start;
          continue;
        }
        throw Error(ErrorCode::kFormat,
                    log_path_.string() + " line " + std::to_string(line_no) + ": " + e.what());
      }
      if (!index_.count(d.diff_id)) {
        warnings_.push_back("log entry for unknown diff_id " + d.diff_id + " ignored");
        continue;
      }
      latest_[d.diff_id] = log_.size();
      log_.push_back(std::move(d));
    }
    // Drop the torn tail so the next append starts on a fresh line.
    in.close();
    if (torn_at) {
      std::filesystem::resize_file(log_path_, *torn_at);
    } else {
      needs_newline = !content.empty() && content.back() != '\n';
    }
  }
  log_fd_ = ::open(log_path_.c_str(), O_WRONLY | O_CREAT | O_APPEND | O_CLOEXEC, 0644);
  if (log_fd_ < 0) {
    throw Error(ErrorCode::kIo, "cannot open " + log_path_.string() + ": " + std::strerror(errno));
  }
  if (needs_newline && ::write(log_fd_, "\n", 1) != 1) {
    throw Error(ErrorCode::kIo, "cannot write " + log_path_.string() + ": " + std::strerror(errno));
  }
}

AdjudicationSession::~AdjudicationSession() {
  if (log_fd_ >= 0) ::close(log_fd_);
}

void AdjudicationSession::append_to_log(const Decision& d) {
  const std::string line = to_json(d).dump() + "\n";
  std::size_t written = 0;
  while (written < line.size()) {
    const ssize_t n = ::write(log_fd_, line.data() + written, line.size() - written);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw Error(ErrorCode::kIo, "decision log write failed: " + std::string(std::strerror(errno)));
    }
    written += static_cast<std::size_t>(n);
  }
  if (::fsync(log_fd_) != 0) {
    throw Error(ErrorCode::kIo, "decision log fsync failed: " + std::string(std::strerror(errno)));
  }
}

Progress AdjudicationSession::progress_locked() const {
  Progress p;
  p.total = set_.records.size();
  p.decided = latest_.size();
  p.remaining = p.total - p.decided;
  return p;
}

Progress AdjudicationSession::progress() const {
  std::shared_lock lock(mutex_);
  return progress_locked();
}

nlohmann::json AdjudicationSession::item_json(std::size_t index) const {
  const DiffRecord& r = set_.records[index];
  nlohmann::json j = to_json(r, set_.versions);
  auto it = latest_.find(r.diff_id);
  j["decision"] = it == latest_.end() ? nlohmann::json(nullptr) : to_json(log_[it->second]);
  return j;
}

Page AdjudicationSession::list_disagreements(const ListFilter& filter, std::size_t page,
                                             std::size_t page_size) const {
  if (page_size == 0 || page_size > kMaxPageSize) {
    throw Error(ErrorCode::kBadPage, "page_size must be between 1 and " + std::to_string(kMaxPageSize));
  }
  std::shared_lock lock(mutex_);
  std::vector<std::size_t> matching;
  for (std::size_t i = 0; i < set_.records.size(); ++i) {
    const DiffRecord& r = set_.records[i];
    if (filter.undecided_only && latest_.count(r.diff_id)) continue;
    const DocMetadata m = r.metadata.value_or(DocMetadata{});
    if (filter.domain && m.domain != *filter.domain) continue;
    if (filter.format && m.format != *filter.format) continue;
    if (filter.pattern && r.pattern != *filter.pattern) continue;
    matching.push_back(i);
  }
  // Records are kept in (doc, sentence, token) order from the export.
  std::stable_sort(matching.begin(), matching.end(), [&](std::size_t a, std::size_t b) {
    const DiffRecord& x = set_.records[a];
    const DiffRecord& y = set_.records[b];
    return std::tie(x.doc_index, x.sentence_index, x.token_index) <
           std::tie(y.doc_index, y.sentence_index, y.token_index);
  });
  Page out;
  out.total = matching.size();
  out.page = page;
  out.page_size = page_size;
  out.pages = (matching.size() + page_size - 1) / page_size;
  for (std::size_t k = page * page_size; k < matching.size() && k < (page + 1) * page_size; ++k) {
    out.items.push_back(item_json(matching[k]));
  }
  return out;
}

std::optional<nlohmann::json> AdjudicationSession::get(const std::string& diff_id) const {
  std::shared_lock lock(mutex_);
  auto it = index_.find(diff_id);
  if (it == index_.end()) return std::nullopt;
  return item_json(it->second);
}

Progress AdjudicationSession::record_decision(const std::string& diff_id,
                                              const std::string& chosen_label,
                                              const std::string& chooser,
                                              std::optional<std::string> note,
                                              std::optional<std::string> timestamp) {
  parse_label(chosen_label);
  std::unique_lock lock(mutex_);
  if (!index_.count(diff_id)) throw Error(ErrorCode::kUnknownDiffId, "unknown diff_id " + diff_id);
  Decision d{diff_id, chosen_label, chooser, timestamp.value_or(rfc3339_now()), std::move(note)};
  append_to_log(d);
  latest_[diff_id] = log_.size();
  log_.push_back(std::move(d));
  return progress_locked();
}

std::vector<Decision> AdjudicationSession::export_decisions() const {
  std::shared_lock lock(mutex_);
  std::vector<Decision> out;
  for (const auto& r : set_.records) {
    auto it = latest_.find(r.diff_id);
    if (it != latest_.end()) out.push_back(log_[it->second]);
  }
  return out;
}

std::vector<Decision> AdjudicationSession::log() const {
  std::shared_lock lock(mutex_);
  return log_;
}

AdjudicationStats AdjudicationSession::stats() const {
  const auto latest = export_decisions();
  std::shared_lock lock(mutex_);
  return adjudication_stats(set_.records, set_.versions, latest);
}

AdjudicationStats adjudication_stats(const std::vector<DiffRecord>& records,
                                     const std::vector<std::string>& versions,
                                     const std::vector<Decision>& latest_decisions) {
  std::map<std::string, const DiffRecord*> by_id;
  for (const auto& r : records) by_id[r.diff_id] = &r;
  std::vector<std::uint64_t> wins(versions.size(), 0);
  std::uint64_t neither = 0;
  std::uint64_t decided = 0;
  for (const auto& d : latest_decisions) {
    auto it = by_id.find(d.diff_id);
    if (it == by_id.end()) continue;
    ++decided;
    bool any = false;
    for (std::size_t v = 0; v < versions.size(); ++v) {
      if (it->second->labels.at(v) == d.chosen_label) {
        ++wins[v];
        any = true;
      }
    }
    if (!any) ++neither;
  }
  AdjudicationStats s;
  s.decided = decided;
  for (std::size_t v = 0; v < versions.size(); ++v) s.versions.push_back({versions[v], {wins[v], decided}});
  s.neither = {neither, decided};
  return s;
}

nlohmann::json to_json(const Progress& p) {
  return {{"total", p.total}, {"decided", p.decided}, {"remaining", p.remaining}};
}

nlohmann::json to_json(const AdjudicationStats& s) {
  nlohmann::json versions = nlohmann::json::array();
  for (const auto& v : s.versions) {
    versions.push_back({{"version", v.version}, {"wins", v.share.numerator}, {"percent", percent_json(v.share)}});
  }
  return {{"decided", s.decided},
          {"versions", std::move(versions)},
          {"neither", {{"count", s.neither.numerator}, {"percent", percent_json(s.neither)}}}};
}

std::string render_text(const AdjudicationStats& s) {
  detail::TextTable t({"version", "wins", "percent"});
  for (const auto& v : s.versions) t.add_row({v.version, std::to_string(v.share.numerator), v.share.str()});
  t.add_row({"neither", std::to_string(s.neither.numerator), s.neither.str()});
  return t.render() + "decided: " + std::to_string(s.decided) + "\n";
}

}  // namespace nerkit
