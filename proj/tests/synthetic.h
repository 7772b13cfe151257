#pragma once

// Small synthetic inputs shared by the unit and acceptance tests.

#include <filesystem>
#include <random>
#include <string>
#include <unistd.h>

#include "nerkit/diff.h"

namespace synthetic {

// n two-version records; version A says LOC and version B says ORG.
inline nerkit::DisagreementSet disagreements(std::size_t n) {
  nerkit::DisagreementSet set;
  set.versions = {"A", "B"};
  for (std::size_t i = 0; i < n; ++i) {
    nerkit::DiffRecord r;
    r.doc_index = i / 10;
    r.sentence_index = i % 10;
    r.token_index = 0;
    const std::string surface = "Place" + std::to_string(i);
    r.surfaces = {surface, surface};
    r.labels = {"B-LOC", "B-ORG"};
    r.pattern = "A|B";
    r.diff_id = nerkit::make_diff_id(r.doc_index, r.sentence_index, 0, r.surfaces);
    r.context = {{0, surface, {"B-LOC", "B-ORG"}}};
    r.metadata = nerkit::DocMetadata{i % 2 ? nerkit::Domain::kSports : nerkit::Domain::kEconomy,
                                     nerkit::Format::kTextArticle};
    set.records.push_back(std::move(r));
  }
  return set;
}

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir() {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("nerkit-test-" + std::to_string(::getpid()) + "-" + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

}  // namespace synthetic
