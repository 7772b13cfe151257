#pragma once

#include <algorithm>
#include <string>
#include <vector>

namespace nerkit::detail {

// Plain-text table. Numeric columns are right-aligned, text columns and the
// first column left-aligned.
class TextTable {
 public:
  explicit TextTable(std::vector<std::string> header) : header_(std::move(header)) {}

  void add_row(std::vector<std::string> row) {
    row.resize(header_.size());
    rows_.push_back(std::move(row));
  }

  std::string render() const {
    std::vector<std::size_t> width(header_.size(), 0);
    auto measure = [&](const std::vector<std::string>& r) {
      for (std::size_t c = 0; c < r.size(); ++c) width[c] = std::max(width[c], r[c].size());
    };
    measure(header_);
    for (const auto& r : rows_) measure(r);
    std::vector<bool> numeric(header_.size(), true);
    numeric[0] = false;
    for (const auto& r : rows_) {
      for (std::size_t c = 1; c < r.size(); ++c) {
        numeric[c] = numeric[c] && r[c].find_first_not_of("0123456789.-*%") == std::string::npos;
      }
    }
    std::string out;
    auto emit = [&](const std::vector<std::string>& r) {
      std::string line;
      for (std::size_t c = 0; c < r.size(); ++c) {
        if (c > 0) line += "  ";
        const std::string pad(width[c] - r[c].size(), ' ');
        line += numeric[c] ? pad + r[c] : r[c] + pad;
      }
      while (!line.empty() && line.back() == ' ') line.pop_back();
      out += line + '\n';
    };
    emit(header_);
    for (const auto& r : rows_) emit(r);
    return out;
  }

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

}  // namespace nerkit::detail
