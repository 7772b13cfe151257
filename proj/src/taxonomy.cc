#include "nerkit/taxonomy.h"

#include <algorithm>
#include <map>
#include <set>
#include <tuple>

#include "nerkit/conll_io.h"
#include "nerkit/error.h"
#include "table.h"

namespace nerkit {

std::string_view category_name(ErrorCategory c) {
  switch (c) {
    case ErrorCategory::kMissed: return "Missed";
    case ErrorCategory::kSpurious: return "Spurious";
    case ErrorCategory::kBoundaryError: return "Boundary Error";
    case ErrorCategory::kTypeError: return "Type Error";
  }
  return "";
}

std::string_view category_key(ErrorCategory c) {
  switch (c) {
    case ErrorCategory::kMissed: return "missed";
    case ErrorCategory::kSpurious: return "spurious";
    case ErrorCategory::kBoundaryError: return "boundary_error";
    case ErrorCategory::kTypeError: return "type_error";
  }
  return "";
}

namespace {

std::size_t overlap(const Mention& a, const Mention& b) {
  const std::size_t lo = std::max(a.start_token, b.start_token);
  const std::size_t hi = std::min(a.end_token, b.end_token);
  return hi > lo ? hi - lo : 0;
}

bool exact(const Mention& a, const Mention& b) { return a.same_span(b) && a.type == b.type; }

std::size_t record_start(const ErrorRecord& r) {
  std::size_t s = r.gold ? r.gold->start_token : r.pred->start_token;
  if (r.pred) s = std::min(s, r.pred->start_token);
  return s;
}

}  // namespace

std::vector<ErrorRecord> classify_sentence_errors(const std::vector<Mention>& gold,
                                                  const std::vector<Mention>& pred) {
  std::vector<const Mention*> g_left;
  std::vector<const Mention*> p_left;
  for (const auto& g : gold) {
    if (std::none_of(pred.begin(), pred.end(), [&](const Mention& p) { return exact(g, p); })) {
      g_left.push_back(&g);
    }
  }
  for (const auto& p : pred) {
    if (std::none_of(gold.begin(), gold.end(), [&](const Mention& g) { return exact(g, p); })) {
      p_left.push_back(&p);
    }
  }

  struct Candidate {
    std::size_t overlap, gi, pi;
  };
  std::vector<Candidate> candidates;
  for (std::size_t gi = 0; gi < g_left.size(); ++gi) {
    for (std::size_t pi = 0; pi < p_left.size(); ++pi) {
      if (auto o = overlap(*g_left[gi], *p_left[pi]); o > 0) candidates.push_back({o, gi, pi});
    }
  }
  std::sort(candidates.begin(), candidates.end(), [&](const Candidate& a, const Candidate& b) {
    const Mention& ga = *g_left[a.gi];
    const Mention& gb = *g_left[b.gi];
    const Mention& pa = *p_left[a.pi];
    const Mention& pb = *p_left[b.pi];
    return std::make_tuple(b.overlap, ga.start_token, pa.start_token, pb.length(), a.gi, a.pi) <
           std::make_tuple(a.overlap, gb.start_token, pb.start_token, pa.length(), b.gi, b.pi);
  });

  std::vector<bool> g_used(g_left.size(), false);
  std::vector<bool> p_used(p_left.size(), false);
  std::vector<ErrorRecord> records;
  for (const auto& c : candidates) {
    if (g_used[c.gi] || p_used[c.pi]) continue;
    g_used[c.gi] = p_used[c.pi] = true;
    const Mention& g = *g_left[c.gi];
    const Mention& p = *p_left[c.pi];
    ErrorRecord r;
    r.gold = g;
    r.pred = p;
    if (g.same_span(p)) {
      r.category = ErrorCategory::kTypeError;
      r.confusion = std::make_pair(g.type, p.type);
    } else {
      r.category = ErrorCategory::kBoundaryError;
    }
    records.push_back(std::move(r));
  }
  for (std::size_t gi = 0; gi < g_left.size(); ++gi) {
    if (g_used[gi]) continue;
    ErrorRecord r;
    r.category = ErrorCategory::kMissed;
    r.gold = *g_left[gi];
    records.push_back(std::move(r));
  }
  for (std::size_t pi = 0; pi < p_left.size(); ++pi) {
    if (p_used[pi]) continue;
    ErrorRecord r;
    r.category = ErrorCategory::kSpurious;
    r.pred = *p_left[pi];
    records.push_back(std::move(r));
  }
  for (auto& r : records) {
    const Mention& any = r.gold ? *r.gold : *r.pred;
    r.doc_index = any.doc_index;
    r.sentence_index = any.sentence_index;
  }
  std::stable_sort(records.begin(), records.end(), [](const ErrorRecord& a, const ErrorRecord& b) {
    return std::make_tuple(record_start(a), a.category) < std::make_tuple(record_start(b), b.category);
  });
  return records;
}

namespace {

std::vector<Mention> sentence_mentions(const Document& doc, std::size_t s, EncodingScheme scheme,
                                       const char* side) {
  try {
    return extract_mentions(doc.sentences[s], scheme, doc.doc_index, s);
  } catch (const Error& e) {
    throw Error(ErrorCode::kEncodingInvalid, std::string(side) + ": " + e.what());
  }
}

}  // namespace

std::vector<ErrorRecord> classify_errors(const Corpus& gold, const Corpus& pred) {
  check_same_tokenization(gold, pred);
  std::vector<ErrorRecord> records;
  for (std::size_t d = 0; d < gold.documents.size(); ++d) {
    const auto& gd = gold.documents[d];
    const auto& pd = pred.documents[d];
    for (std::size_t s = 0; s < gd.sentences.size(); ++s) {
      auto rs = classify_sentence_errors(sentence_mentions(gd, s, gold.encoding, "gold"),
                                         sentence_mentions(pd, s, pred.encoding, "pred"));
      records.insert(records.end(), rs.begin(), rs.end());
    }
  }
  return records;
}

ErrorSummary error_summary(const std::vector<ErrorRecord>& records, ErrorGrouping grouping,
                           const MetadataTable& metadata) {
  ErrorSummary summary;
  summary.grouping = grouping;
  std::vector<int> keys;  // enum value per group
  switch (grouping) {
    case ErrorGrouping::kCategory:
      summary.groups = {"All"};
      keys = {0};
      break;
    case ErrorGrouping::kDomain:
      for (Domain d : {Domain::kSports, Domain::kWorldEvents, Domain::kEconomy}) {
        summary.groups.emplace_back(domain_title(d));
        keys.push_back(static_cast<int>(d));
      }
      break;
    case ErrorGrouping::kFormat:
      for (Format f : {Format::kTextArticle, Format::kDataReport, Format::kHybrid}) {
        summary.groups.emplace_back(format_title(f));
        keys.push_back(static_cast<int>(f));
      }
      break;
  }
  summary.counts.assign(summary.groups.size(), {});
  auto group_of = [&](const ErrorRecord& r) -> std::size_t {
    if (grouping == ErrorGrouping::kCategory) return 0;
    const DocMetadata m = metadata.lookup(r.doc_index);
    const int key = grouping == ErrorGrouping::kDomain ? static_cast<int>(m.domain)
                                                       : static_cast<int>(m.format);
    auto it = std::find(keys.begin(), keys.end(), key);
    if (it != keys.end()) return static_cast<std::size_t>(it - keys.begin());
    // Unknown documents get their own trailing column on first use.
    keys.push_back(key);
    summary.groups.emplace_back("Unknown");
    summary.counts.push_back({});
    return keys.size() - 1;
  };
  for (const auto& r : records) {
    ++summary.counts[group_of(r)][static_cast<std::size_t>(r.category)];
    ++summary.total;
  }
  return summary;
}

std::vector<ErrorCountRow> count_mention_errors(const Corpus& gold, const Corpus& pred,
                                                const DocFilter& filter,
                                                const MetadataTable& metadata) {
  check_same_tokenization(gold, pred);
  std::map<std::tuple<Polarity, EntityType, std::string>, std::size_t> counts;
  for (std::size_t d = 0; d < gold.documents.size(); ++d) {
    const auto& gd = gold.documents[d];
    const auto& pd = pred.documents[d];
    if (!filter.matches(metadata.lookup(gd.doc_index))) continue;
    for (std::size_t s = 0; s < gd.sentences.size(); ++s) {
      const auto gm = sentence_mentions(gd, s, gold.encoding, "gold");
      const auto pm = sentence_mentions(pd, s, pred.encoding, "pred");
      for (const auto& g : gm) {
        if (std::none_of(pm.begin(), pm.end(), [&](const Mention& p) { return exact(g, p); })) {
          ++counts[{Polarity::kFN, g.type, g.surface}];
        }
      }
      for (const auto& p : pm) {
        if (std::none_of(gm.begin(), gm.end(), [&](const Mention& g) { return exact(g, p); })) {
          ++counts[{Polarity::kFP, p.type, p.surface}];
        }
      }
    }
  }
  std::vector<ErrorCountRow> rows;
  for (const auto& [key, n] : counts) {
    rows.push_back({n, std::get<0>(key), std::get<1>(key), std::get<2>(key)});
  }
  std::stable_sort(rows.begin(), rows.end(), [](const ErrorCountRow& a, const ErrorCountRow& b) {
    if (a.count != b.count) return a.count > b.count;
    return std::tie(a.polarity, a.surface, a.type) < std::tie(b.polarity, b.surface, b.type);
  });
  return rows;
}

namespace {

nlohmann::json mention_json(const std::optional<Mention>& m) {
  if (!m) return nullptr;
  return {{"start", m->start_token},
          {"end", m->end_token},
          {"type", m->type.str()},
          {"surface", m->surface}};
}

std::string_view polarity_name(Polarity p) { return p == Polarity::kFP ? "FP" : "FN"; }

std::string mention_cell(const std::optional<Mention>& m) {
  if (!m) return "-";
  return "[" + std::to_string(m->start_token) + "," + std::to_string(m->end_token) + ") " +
         m->type.str() + " " + m->surface;
}

}  // namespace

nlohmann::json to_json(const ErrorRecord& r) {
  nlohmann::json j = {{"category", category_key(r.category)},
                      {"doc_index", r.doc_index},
                      {"sentence_index", r.sentence_index},
                      {"gold", mention_json(r.gold)},
                      {"pred", mention_json(r.pred)}};
  if (r.confusion) {
    j["confusion"] = {r.confusion->first.str(), r.confusion->second.str()};
  } else {
    j["confusion"] = nullptr;
  }
  return j;
}

nlohmann::json to_json(const std::vector<ErrorRecord>& records) {
  nlohmann::json a = nlohmann::json::array();
  for (const auto& r : records) a.push_back(to_json(r));
  return a;
}

nlohmann::json to_json(const ErrorSummary& s) {
  nlohmann::json j;
  j["groups"] = s.groups;
  nlohmann::json rows = nlohmann::json::object();
  for (ErrorCategory c : kErrorCategories) {
    nlohmann::json row = nlohmann::json::object();
    for (std::size_t g = 0; g < s.groups.size(); ++g) row[s.groups[g]] = s.at(g, c);
    rows[std::string(category_key(c))] = std::move(row);
  }
  j["counts"] = std::move(rows);
  j["total"] = s.total;
  return j;
}

nlohmann::json to_json(const std::vector<ErrorCountRow>& rows) {
  nlohmann::json a = nlohmann::json::array();
  for (const auto& r : rows) {
    a.push_back({{"count", r.count},
                 {"polarity", polarity_name(r.polarity)},
                 {"type", r.type.str()},
                 {"surface", r.surface}});
  }
  return a;
}

std::string render_text(const ErrorSummary& s) {
  std::vector<std::string> header = {"Error type"};
  header.insert(header.end(), s.groups.begin(), s.groups.end());
  if (s.groups.size() > 1) header.emplace_back("Total");
  detail::TextTable t(header);
  for (ErrorCategory c : kErrorCategories) {
    std::vector<std::string> row = {std::string(category_name(c))};
    std::size_t sum = 0;
    for (std::size_t g = 0; g < s.groups.size(); ++g) {
      row.push_back(std::to_string(s.at(g, c)));
      sum += s.at(g, c);
    }
    if (s.groups.size() > 1) row.push_back(std::to_string(sum));
    t.add_row(row);
  }
  return t.render();
}

std::string render_tsv(const ErrorSummary& s) {
  std::string out = "category";
  for (const auto& g : s.groups) out += "\t" + g;
  out += "\n";
  for (ErrorCategory c : kErrorCategories) {
    out += std::string(category_key(c));
    for (std::size_t g = 0; g < s.groups.size(); ++g) out += "\t" + std::to_string(s.at(g, c));
    out += "\n";
  }
  return out;
}

std::string render_tsv(const std::vector<ErrorCountRow>& rows) {
  std::string out = "count\tpolarity\ttype\tsurface\n";
  for (const auto& r : rows) {
    out += std::to_string(r.count) + "\t" + std::string(polarity_name(r.polarity)) + "\t" +
           r.type.str() + "\t" + r.surface + "\n";
  }
  return out;
}

std::string render_records_tsv(const std::vector<ErrorRecord>& records) {
  std::string out = "doc_index\tsentence_index\tcategory\tgold\tpred\n";
  for (const auto& r : records) {
    out += std::to_string(r.doc_index) + "\t" + std::to_string(r.sentence_index) + "\t" +
           std::string(category_key(r.category)) + "\t" + mention_cell(r.gold) + "\t" +
           mention_cell(r.pred) + "\n";
  }
  return out;
}

}  // namespace nerkit
