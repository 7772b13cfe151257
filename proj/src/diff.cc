#include "nerkit/diff.h"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include "nerkit/error.h"
#include "table.h"

namespace nerkit {

namespace {

struct FlatToken {
  std::size_t sentence = 0;
  std::size_t token = 0;
  const Token* tok = nullptr;
  std::string label;
};

std::vector<FlatToken> flatten(const Document& doc, EncodingScheme scheme, bool raw) {
  std::vector<FlatToken> flat;
  for (std::size_t s = 0; s < doc.sentences.size(); ++s) {
    const auto& sentence = doc.sentences[s];
    const auto normalized = normalized_bio_labels(sentence, scheme);
    for (std::size_t i = 0; i < sentence.tokens.size(); ++i) {
      const Token& t = sentence.tokens[i];
      flat.push_back({s, i, &t, raw ? t.label.str() : normalized[i].str()});
    }
  }
  return flat;
}

DocAlignment align_flat(const std::vector<std::vector<FlatToken>>& flats) {
  DocAlignment out;
  const std::size_t n = flats.size();
  const auto& pivot = flats[0];
  std::vector<std::string_view> pivot_surfaces;
  for (const auto& t : pivot) pivot_surfaces.push_back(t.tok->surface);

  // pivot index -> index in version v, or npos
  constexpr std::size_t npos = static_cast<std::size_t>(-1);
  std::vector<std::vector<std::size_t>> maps(n, std::vector<std::size_t>(pivot.size(), npos));
  for (std::size_t i = 0; i < pivot.size(); ++i) maps[0][i] = i;
  for (std::size_t v = 1; v < n; ++v) {
    std::vector<std::string_view> surfaces;
    for (const auto& t : flats[v]) surfaces.push_back(t.tok->surface);
    for (auto [i, j] : lcs_pairs(pivot_surfaces, surfaces)) maps[v][i] = j;
  }
  std::vector<std::vector<bool>> used(n);
  for (std::size_t v = 0; v < n; ++v) used[v].assign(flats[v].size(), false);
  for (std::size_t i = 0; i < pivot.size(); ++i) {
    std::vector<std::size_t> tuple(n);
    bool full = true;
    for (std::size_t v = 0; v < n && full; ++v) {
      tuple[v] = maps[v][i];
      full = tuple[v] != npos;
    }
    if (!full) continue;
    for (std::size_t v = 0; v < n; ++v) used[v][tuple[v]] = true;
    out.tuples.push_back(std::move(tuple));
  }
  out.unaligned.resize(n);
  for (std::size_t v = 0; v < n; ++v) {
    for (std::size_t k = 0; k < used[v].size(); ++k) {
      if (!used[v][k]) out.unaligned[v].push_back(k);
    }
  }
  return out;
}

void check_versions(std::span<const Corpus> versions) {
  if (versions.size() < 2) {
    throw Error(ErrorCode::kDocumentCountMismatch, "at least two versions are required");
  }
  for (std::size_t v = 1; v < versions.size(); ++v) {
    if (versions[v].documents.size() != versions[0].documents.size()) {
      throw Error(ErrorCode::kDocumentCountMismatch,
                  "version " + std::to_string(v) + " has " +
                      std::to_string(versions[v].documents.size()) + " documents, expected " +
                      std::to_string(versions[0].documents.size()));
    }
  }
}

PartitionKey partition_of(const std::vector<std::string>& labels) {
  PartitionKey key;
  std::vector<const std::string*> seen;
  for (const auto& l : labels) {
    auto it = std::find_if(seen.begin(), seen.end(), [&](const std::string* s) { return *s == l; });
    if (it == seen.end()) {
      key.push_back(static_cast<int>(seen.size()));
      seen.push_back(&l);
    } else {
      key.push_back(static_cast<int>(it - seen.begin()));
    }
  }
  return key;
}

std::vector<std::string> default_names(std::size_t n, std::vector<std::string> names) {
  for (std::size_t v = names.size(); v < n; ++v) {
    names.push_back(v < 26 ? std::string(1, static_cast<char>('A' + v)) : "V" + std::to_string(v));
  }
  names.resize(n);
  return names;
}

// Walks every fully aligned tuple of every document.
template <typename Visit>
TokenAlignment walk_aligned(std::span<const Corpus> versions, bool raw, Visit&& visit) {
  check_versions(versions);
  TokenAlignment alignment;
  for (std::size_t d = 0; d < versions[0].documents.size(); ++d) {
    std::vector<std::vector<FlatToken>> flats;
    for (const auto& c : versions) flats.push_back(flatten(c.documents[d], c.encoding, raw));
    alignment.documents.push_back(align_flat(flats));
    const auto& tuples = alignment.documents.back().tuples;
    for (std::size_t t = 0; t < tuples.size(); ++t) visit(d, flats, tuples, t);
  }
  return alignment;
}

}  // namespace

std::size_t TokenAlignment::aligned_count() const {
  std::size_t n = 0;
  for (const auto& d : documents) n += d.tuples.size();
  return n;
}

std::size_t TokenAlignment::unaligned_count(std::size_t version) const {
  std::size_t n = 0;
  for (const auto& d : documents) n += d.unaligned.at(version).size();
  return n;
}

std::vector<std::pair<std::size_t, std::size_t>> lcs_pairs(
    const std::vector<std::string_view>& a, const std::vector<std::string_view>& b) {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  std::size_t prefix = 0;
  while (prefix < a.size() && prefix < b.size() && a[prefix] == b[prefix]) {
    pairs.emplace_back(prefix, prefix);
    ++prefix;
  }
  std::size_t suffix = 0;
  while (suffix < a.size() - prefix && suffix < b.size() - prefix &&
         a[a.size() - 1 - suffix] == b[b.size() - 1 - suffix]) {
    ++suffix;
  }
  const std::size_t n = a.size() - prefix - suffix;
  const std::size_t m = b.size() - prefix - suffix;
  if (n > 0 && m > 0) {
    // table[i][j] = LCS length of a[prefix+i..] and b[prefix+j..] (middle only)
    std::vector<std::uint32_t> table((n + 1) * (m + 1), 0);
    auto at = [&](std::size_t i, std::size_t j) -> std::uint32_t& { return table[i * (m + 1) + j]; };
    for (std::size_t i = n; i-- > 0;) {
      for (std::size_t j = m; j-- > 0;) {
        at(i, j) = a[prefix + i] == b[prefix + j] ? at(i + 1, j + 1) + 1
                                                  : std::max(at(i + 1, j), at(i, j + 1));
      }
    }
    std::size_t i = 0, j = 0;
    while (i < n && j < m) {
      if (a[prefix + i] == b[prefix + j]) {
        pairs.emplace_back(prefix + i, prefix + j);
        ++i;
        ++j;
      } else if (at(i + 1, j) >= at(i, j + 1)) {
        ++i;
      } else {
        ++j;
      }
    }
  }
  for (std::size_t k = suffix; k-- > 0;) {
    pairs.emplace_back(a.size() - 1 - k, b.size() - 1 - k);
  }
  return pairs;
}

TokenAlignment align(std::span<const Corpus> versions) {
  return walk_aligned(versions, true, [](auto&&...) {});
}

std::string make_diff_id(std::size_t doc, std::size_t sentence, std::size_t token,
                         const std::vector<std::string>& surfaces) {
  std::string key = std::to_string(doc) + ":" + std::to_string(sentence) + ":" +
                    std::to_string(token);
  for (const auto& s : surfaces) key += "|" + s;
  std::uint64_t hash = 0xcbf29ce484222325ULL;  // FNV-1a
  for (unsigned char c : key) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash));
  return buf;
}

DiffResult diff_versions(std::span<const Corpus> versions, std::vector<std::string> names,
                         const DiffOptions& options) {
  DiffResult result;
  result.versions = default_names(versions.size(), std::move(names));
  const auto w = static_cast<std::ptrdiff_t>(options.context_window);
  auto alignment = walk_aligned(
      versions, options.raw_labels,
      [&](std::size_t d, const std::vector<std::vector<FlatToken>>& flats,
          const std::vector<std::vector<std::size_t>>& tuples, std::size_t t) {
        std::vector<std::string> labels;
        for (std::size_t v = 0; v < flats.size(); ++v) labels.push_back(flats[v][tuples[t][v]].label);
        if (std::all_of(labels.begin(), labels.end(), [&](const auto& l) { return l == labels[0]; })) {
          return;
        }
        const FlatToken& head = flats[0][tuples[t][0]];
        DiffRecord r;
        r.doc_index = versions[0].documents[d].doc_index;
        r.sentence_index = head.sentence;
        r.token_index = head.token;
        for (std::size_t v = 0; v < flats.size(); ++v) r.surfaces.push_back(flats[v][tuples[t][v]].tok->surface);
        r.labels = std::move(labels);
        r.pattern = pattern_name(partition_of(r.labels), result.versions);
        r.diff_id = make_diff_id(r.doc_index, r.sentence_index, r.token_index, r.surfaces);
        if (options.metadata) r.metadata = options.metadata->lookup(r.doc_index);
        const auto ti = static_cast<std::ptrdiff_t>(t);
        const auto lo = std::max<std::ptrdiff_t>(0, ti - w);
        const auto hi = std::min<std::ptrdiff_t>(static_cast<std::ptrdiff_t>(tuples.size()) - 1, ti + w);
        for (auto k = lo; k <= hi; ++k) {
          const FlatToken& ft = flats[0][tuples[k][0]];
          if (ft.sentence != head.sentence) continue;
          ContextToken c;
          c.offset = static_cast<int>(k - ti);
          c.surface = ft.tok->surface;
          for (std::size_t v = 0; v < flats.size(); ++v) c.labels.push_back(flats[v][tuples[k][v]].label);
          r.context.push_back(std::move(c));
        }
        result.records.push_back(std::move(r));
      });
  result.aligned_count = alignment.aligned_count();
  for (std::size_t v = 0; v < versions.size(); ++v) {
    result.unaligned_counts.push_back(alignment.unaligned_count(v));
  }
  return result;
}

DiffResult diff_pair(const Corpus& a, const Corpus& b, const DiffOptions& options) {
  const std::vector<Corpus> both = {a, b};
  return diff_versions(both, {}, options);
}

std::size_t AgreementPartition::count(const PartitionKey& key) const {
  for (const auto& [k, n] : buckets) {
    if (k == key) return n;
  }
  return 0;
}

std::string pattern_name(const PartitionKey& key, const std::vector<std::string>& names) {
  std::vector<std::string> blocks;
  for (std::size_t v = 0; v < key.size(); ++v) {
    const auto b = static_cast<std::size_t>(key[v]);
    if (b >= blocks.size()) blocks.resize(b + 1);
    if (!blocks[b].empty()) blocks[b] += "+";
    blocks[b] += names[v];
  }
  std::string out;
  for (std::size_t b = 0; b < blocks.size(); ++b) out += (b ? "|" : "") + blocks[b];
  return out;
}

std::vector<PartitionKey> all_partitions(std::size_t n) {
  std::vector<PartitionKey> out;
  if (n == 0) return out;
  PartitionKey key(n, 0);
  // Enumerate restricted growth strings in lexicographic order.
  auto rec = [&](auto&& self, std::size_t pos, int max_block) -> void {
    if (pos == n) {
      out.push_back(key);
      return;
    }
    for (int b = 0; b <= max_block + 1; ++b) {
      key[pos] = b;
      self(self, pos + 1, std::max(max_block, b));
    }
  };
  rec(rec, 1, 0);
  return out;
}

AgreementPartition agreement(std::span<const Corpus> versions, std::vector<std::string> names,
                             const DiffOptions& options) {
  AgreementPartition out;
  out.versions = default_names(versions.size(), std::move(names));
  std::map<PartitionKey, std::size_t> counts;
  auto alignment = walk_aligned(
      versions, options.raw_labels,
      [&](std::size_t, const std::vector<std::vector<FlatToken>>& flats,
          const std::vector<std::vector<std::size_t>>& tuples, std::size_t t) {
        std::vector<std::string> labels;
        for (std::size_t v = 0; v < flats.size(); ++v) labels.push_back(flats[v][tuples[t][v]].label);
        ++counts[partition_of(labels)];
      });
  out.aligned_count = alignment.aligned_count();

  const std::size_t n = versions.size();
  std::vector<PartitionKey> order;
  if (n <= 6) {
    order = all_partitions(n);
  } else {
    for (const auto& [k, c] : counts) order.push_back(k);
  }
  PartitionKey all_agree(n, 0);
  PartitionKey all_disagree(n);
  for (std::size_t v = 0; v < n; ++v) all_disagree[v] = static_cast<int>(v);
  auto rank = [&](const PartitionKey& k) {
    if (k == all_agree) return 0;
    if (k == all_disagree) return 1;
    if (n == 3) {
      // pairs in the order: first two agree, last two agree, outer two agree
      if (k == PartitionKey{0, 0, 1}) return 2;
      if (k == PartitionKey{0, 1, 1}) return 3;
      return 4;
    }
    return 2;
  };
  std::stable_sort(order.begin(), order.end(),
                   [&](const PartitionKey& a, const PartitionKey& b) { return rank(a) < rank(b); });
  for (const auto& k : order) {
    auto it = counts.find(k);
    out.buckets.emplace_back(k, it == counts.end() ? 0 : it->second);
  }
  return out;
}

nlohmann::json to_json(const DiffRecord& r, const std::vector<std::string>& versions,
                       std::size_t context_window) {
  nlohmann::json labels = nlohmann::json::object();
  nlohmann::json surfaces = nlohmann::json::object();
  for (std::size_t v = 0; v < versions.size(); ++v) {
    labels[versions[v]] = r.labels.at(v);
    surfaces[versions[v]] = r.surfaces.at(v);
  }
  nlohmann::json context = nlohmann::json::array();
  for (const auto& c : r.context) {
    if (static_cast<std::size_t>(std::abs(c.offset)) > context_window) continue;
    nlohmann::json cl = nlohmann::json::object();
    for (std::size_t v = 0; v < versions.size(); ++v) cl[versions[v]] = c.labels.at(v);
    context.push_back({{"offset", c.offset}, {"surface", c.surface}, {"labels", std::move(cl)}});
  }
  nlohmann::json j = {{"diff_id", r.diff_id},
                      {"doc_index", r.doc_index},
                      {"sentence_index", r.sentence_index},
                      {"token_index", r.token_index},
                      {"surface", r.surfaces.at(0)},
                      {"surfaces", std::move(surfaces)},
                      {"labels", std::move(labels)},
                      {"versions", versions},
                      {"pattern", r.pattern},
                      {"context", std::move(context)}};
  if (r.metadata) {
    j["domain"] = domain_key(r.metadata->domain);
    j["format"] = format_key(r.metadata->format);
  }
  return j;
}

void export_disagreements(const DiffResult& result, std::size_t context_window, std::ostream& out) {
  for (const auto& r : result.records) out << to_json(r, result.versions, context_window).dump() << '\n';
}

namespace {

template <typename Fn>
void for_each_json_line(std::istream& in, const char* what, Fn&& fn) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    try {
      fn(nlohmann::json::parse(line));
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::kFormat,
                  std::string(what) + " line " + std::to_string(line_no) + ": " + e.what());
    } catch (const Error& e) {
      throw Error(e.code(), std::string(what) + " line " + std::to_string(line_no) + ": " + e.what());
    }
  }
}

}  // namespace

DisagreementSet read_disagreements(std::istream& in) {
  DisagreementSet set;
  for_each_json_line(in, "disagreements", [&](const nlohmann::json& j) {
    auto versions = j.at("versions").get<std::vector<std::string>>();
    if (set.versions.empty()) {
      set.versions = versions;
    } else if (versions != set.versions) {
      throw Error(ErrorCode::kFormat, "records name different versions");
    }
    DiffRecord r;
    r.diff_id = j.at("diff_id").get<std::string>();
    r.doc_index = j.at("doc_index").get<std::size_t>();
    r.sentence_index = j.at("sentence_index").get<std::size_t>();
    r.token_index = j.at("token_index").get<std::size_t>();
    r.pattern = j.value("pattern", "");
    for (const auto& v : versions) {
      r.labels.push_back(j.at("labels").at(v).get<std::string>());
      r.surfaces.push_back(j.contains("surfaces") ? j["surfaces"].at(v).get<std::string>()
                                                  : j.at("surface").get<std::string>());
    }
    for (const auto& c : j.value("context", nlohmann::json::array())) {
      ContextToken ct;
      ct.offset = c.value("offset", 0);
      ct.surface = c.at("surface").get<std::string>();
      for (const auto& v : versions) ct.labels.push_back(c.at("labels").at(v).get<std::string>());
      r.context.push_back(std::move(ct));
    }
    if (j.contains("domain") || j.contains("format")) {
      DocMetadata m;
      m.domain = parse_domain(j.value("domain", "unknown")).value_or(Domain::kUnknown);
      m.format = parse_format(j.value("format", "unknown")).value_or(Format::kUnknown);
      r.metadata = m;
    }
    set.records.push_back(std::move(r));
  });
  return set;
}

DisagreementSet read_disagreements_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  return read_disagreements(in);
}

nlohmann::json to_json(const Decision& d) {
  return {{"diff_id", d.diff_id},
          {"chosen_label", d.chosen_label},
          {"chooser", d.chooser},
          {"timestamp", d.timestamp},
          {"note", d.note ? nlohmann::json(*d.note) : nlohmann::json(nullptr)}};
}

Decision decision_from_json(const nlohmann::json& j) {
  Decision d;
  d.diff_id = j.at("diff_id").get<std::string>();
  d.chosen_label = j.at("chosen_label").get<std::string>();
  d.chooser = j.value("chooser", "");
  d.timestamp = j.value("timestamp", "");
  if (j.contains("note") && !j["note"].is_null()) d.note = j["note"].get<std::string>();
  return d;
}

void write_decisions(const std::vector<Decision>& decisions, std::ostream& out) {
  for (const auto& d : decisions) out << to_json(d).dump() << '\n';
}

std::vector<Decision> read_decisions(std::istream& in) {
  std::vector<Decision> out;
  for_each_json_line(in, "decisions", [&](const nlohmann::json& j) {
    out.push_back(decision_from_json(j));
  });
  return out;
}

std::vector<Decision> read_decisions_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  return read_decisions(in);
}

namespace {

// Relabels every sentence from `from` to `to`, reading illegal continuations
// as mention starts.
void relabel(Corpus& corpus, EncodingScheme from, EncodingScheme to) {
  for (auto& doc : corpus.documents) {
    for (auto& sentence : doc.sentences) {
      const auto mentions = extract_mentions_lenient(sentence, from);
      const auto labels = encode_mentions(mentions, sentence.tokens.size(), to);
      for (std::size_t i = 0; i < labels.size(); ++i) sentence.tokens[i].label = labels[i];
    }
  }
  corpus.encoding = to;
}

}  // namespace

Corpus apply_decisions(const Corpus& base, const std::vector<Decision>& decisions,
                       const std::vector<DiffRecord>& records) {
  std::map<std::string, const DiffRecord*> by_id;
  for (const auto& r : records) by_id[r.diff_id] = &r;
  std::map<std::string, Label> chosen;  // latest wins
  for (const auto& d : decisions) {
    if (!by_id.count(d.diff_id)) {
      throw Error(ErrorCode::kUnknownDiffId, "unknown diff_id " + d.diff_id);
    }
    chosen[d.diff_id] = parse_label(d.chosen_label);
  }

  Corpus work = base;
  const EncodingScheme original = base.encoding;
  if (original != EncodingScheme::kBIO) relabel(work, original, EncodingScheme::kBIO);
  std::set<TokenLocation> before;
  for (const auto& v : validate_transitions(work)) before.insert(v.location);

  for (const auto& [id, label] : chosen) {
    const DiffRecord& r = *by_id[id];
    if (r.doc_index >= work.documents.size() ||
        r.sentence_index >= work.documents[r.doc_index].sentences.size() ||
        r.token_index >= work.documents[r.doc_index].sentences[r.sentence_index].tokens.size()) {
      throw Error(ErrorCode::kBadLocation, "diff " + id + " points outside the base corpus");
    }
    Token& tok = work.documents[r.doc_index].sentences[r.sentence_index].tokens[r.token_index];
    if (tok.surface != r.surfaces.at(0)) {
      throw Error(ErrorCode::kSurfaceMismatch, "diff " + id + ": expected '" + r.surfaces.at(0) +
                                                   "', base has '" + tok.surface + "'");
    }
    tok.label = label;
  }

  std::vector<std::string> created;
  for (const auto& v : validate_transitions(work)) {
    if (!before.count(v.location)) created.push_back(describe(v));
  }
  if (!created.empty()) {
    std::string msg = "decisions would create invalid transitions:";
    for (const auto& c : created) msg += " [" + c + "]";
    throw Error(ErrorCode::kWouldCreateInvalidTransition, msg);
  }
  if (original != EncodingScheme::kBIO) relabel(work, EncodingScheme::kBIO, original);
  return work;
}

std::string render_text(const DiffResult& result) {
  std::ostringstream out;
  out << "label differences: " << result.count() << "\n";
  out << "aligned tokens: " << result.aligned_count << "\n";
  for (std::size_t v = 0; v < result.versions.size(); ++v) {
    out << "unaligned tokens in " << result.versions[v] << ": " << result.unaligned_counts[v] << "\n";
  }
  if (!result.records.empty()) {
    std::vector<std::string> header = {"doc", "sentence", "token", "surface"};
    header.insert(header.end(), result.versions.begin(), result.versions.end());
    detail::TextTable t(header);
    for (const auto& r : result.records) {
      std::vector<std::string> row = {std::to_string(r.doc_index), std::to_string(r.sentence_index),
                                      std::to_string(r.token_index), r.surfaces[0]};
      row.insert(row.end(), r.labels.begin(), r.labels.end());
      t.add_row(row);
    }
    out << t.render();
  }
  return out.str();
}

std::string render_text(const AgreementPartition& p) {
  detail::TextTable t({"agreed", "disagreed", "count"});
  for (const auto& [key, count] : p.buckets) {
    std::vector<std::size_t> block_size;
    for (int b : key) {
      if (static_cast<std::size_t>(b) >= block_size.size()) block_size.resize(b + 1, 0);
      ++block_size[b];
    }
    std::string agreed, disagreed;
    if (block_size.size() == 1 || p.versions.size() <= 3) {
      for (std::size_t v = 0; v < key.size(); ++v) {
        std::string& dst = block_size[key[v]] > 1 ? agreed : disagreed;
        if (!dst.empty()) dst += ", ";
        dst += p.versions[v];
      }
    } else {
      agreed = pattern_name(key, p.versions);
    }
    t.add_row({agreed.empty() ? "-" : agreed, disagreed.empty() ? "-" : disagreed,
               std::to_string(count)});
  }
  return t.render() + "aligned tokens: " + std::to_string(p.aligned_count) + "\n";
}

nlohmann::json to_json(const DiffResult& result) {
  nlohmann::json records = nlohmann::json::array();
  for (const auto& r : result.records) records.push_back(to_json(r, result.versions));
  return {{"versions", result.versions},
          {"count", result.count()},
          {"aligned_count", result.aligned_count},
          {"unaligned_counts", result.unaligned_counts},
          {"records", std::move(records)}};
}

nlohmann::json to_json(const AgreementPartition& p) {
  nlohmann::json buckets = nlohmann::json::array();
  for (const auto& [key, count] : p.buckets) {
    buckets.push_back({{"pattern", pattern_name(key, p.versions)}, {"key", key}, {"count", count}});
  }
  return {{"versions", p.versions}, {"aligned_count", p.aligned_count}, {"buckets", std::move(buckets)}};
}

}  // namespace nerkit
