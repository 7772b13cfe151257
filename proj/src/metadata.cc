#include "nerkit/metadata.h"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>

#include "nerkit/error.h"

namespace nerkit {

namespace {

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  for (;;) {
    const std::size_t tab = line.find('\t', start);
    fields.push_back(line.substr(start, tab - start));
    if (tab == std::string::npos) break;
    start = tab + 1;
  }
  return fields;
}

std::string suspicious_warning(std::size_t doc_index) {
  return "document " + std::to_string(doc_index) +
         ": world_events documents are expected to be text articles";
}

}  // namespace

DocMetadata MetadataTable::lookup(std::size_t doc_index) const {
  auto it = entries.find(doc_index);
  return it == entries.end() ? DocMetadata{} : it->second;
}

MetadataTable parse_metadata(std::istream& in) {
  MetadataTable table;
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto fields = split_tabs(line);
    if (!header_seen) {
      if (fields != std::vector<std::string>{"doc_index", "domain", "format"}) {
        throw Error(ErrorCode::kMetadata, "metadata line 1: expected header doc_index, domain, format");
      }
      header_seen = true;
      continue;
    }
    const std::string where = "metadata line " + std::to_string(line_no) + ": ";
    if (fields.size() != 3) throw Error(ErrorCode::kMetadata, where + "expected 3 fields");
    std::size_t doc_index = 0;
    const auto& idx = fields[0];
    auto [ptr, ec] = std::from_chars(idx.data(), idx.data() + idx.size(), doc_index);
    if (ec != std::errc{} || ptr != idx.data() + idx.size()) {
      throw Error(ErrorCode::kMetadata, where + "bad doc_index '" + idx + "'");
    }
    auto domain = parse_domain(fields[1]);
    auto format = parse_format(fields[2]);
    if (!domain) throw Error(ErrorCode::kMetadata, where + "unknown domain '" + fields[1] + "'");
    if (!format) throw Error(ErrorCode::kMetadata, where + "unknown format '" + fields[2] + "'");
    if (!table.entries.emplace(doc_index, DocMetadata{*domain, *format}).second) {
      throw Error(ErrorCode::kMetadata, where + "duplicate doc_index " + idx);
    }
    if (table.entries[doc_index].is_suspicious()) {
      table.warnings.push_back(suspicious_warning(doc_index));
    }
  }
  if (in.bad()) throw Error(ErrorCode::kIo, "metadata read error");
  return table;
}

MetadataTable parse_metadata_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  return parse_metadata(in);
}

void write_metadata(const MetadataTable& table, std::ostream& out) {
  out << "doc_index\tdomain\tformat\n";
  for (const auto& [doc, meta] : table.entries) {
    out << doc << '\t' << domain_key(meta.domain) << '\t' << format_key(meta.format) << '\n';
  }
}

std::vector<std::string> attach_metadata(Corpus& corpus, const MetadataTable& table) {
  std::vector<std::string> warnings;
  for (auto& doc : corpus.documents) doc.metadata = table.lookup(doc.doc_index);
  for (const auto& [doc_index, meta] : table.entries) {
    if (doc_index >= corpus.documents.size()) {
      warnings.push_back("metadata names document " + std::to_string(doc_index) +
                         " but the corpus has " + std::to_string(corpus.documents.size()));
    } else if (meta.is_suspicious()) {
      warnings.push_back(suspicious_warning(doc_index));
    }
  }
  return warnings;
}

std::size_t DocumentCensus::count(std::optional<Domain> d, std::optional<Format> f) const {
  std::size_t n = 0;
  for (const auto& [key, c] : cells) {
    if ((!d || key.first == *d) && (!f || key.second == *f)) n += c;
  }
  return n;
}

DocumentCensus census(const Corpus& corpus, const MetadataTable& metadata) {
  DocumentCensus out;
  for (const auto& doc : corpus.documents) {
    const DocMetadata m = metadata.lookup(doc.doc_index);
    ++out.cells[{m.domain, m.format}];
    ++out.documents;
    out.sentences += doc.sentences.size();
    out.tokens += doc.token_count();
  }
  return out;
}

}  // namespace nerkit
