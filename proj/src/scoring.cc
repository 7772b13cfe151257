#include "nerkit/scoring.h"

#include <algorithm>
#include <cctype>
#include <iomanip>
#include <set>
#include <sstream>
#include <tuple>

#include "nerkit/conll_io.h"
#include "nerkit/error.h"
#include "table.h"

namespace nerkit {

std::uint64_t Percent::hundredths() const {
  if (denominator == 0) return 0;
  return (20000 * numerator + denominator) / (2 * denominator);
}

std::string Percent::str() const {
  const auto h = hundredths();
  std::ostringstream out;
  out << h / 100 << '.' << std::setw(2) << std::setfill('0') << h % 100;
  return out.str();
}

std::string Stratum::name() const {
  std::string d = domain ? std::string(domain_title(*domain)) : "All Domains";
  std::string f = format ? std::string(format_title(*format)) : "All Formats";
  return d + " / " + f;
}

void ScoreReport::add(const ScoreReport& other) {
  totals += other.totals;
  for (const auto& [type, counts] : other.per_type) per_type[type] += counts;
  documents += other.documents;
}

namespace {

using SpanKey = std::tuple<std::size_t, std::size_t, std::size_t, EntityType>;

std::vector<Mention> document_mentions(const Document& doc, EncodingScheme scheme,
                                       const char* side) {
  std::vector<Mention> out;
  for (std::size_t s = 0; s < doc.sentences.size(); ++s) {
    try {
      auto ms = extract_mentions(doc.sentences[s], scheme, doc.doc_index, s);
      out.insert(out.end(), ms.begin(), ms.end());
    } catch (const Error& e) {
      throw Error(ErrorCode::kEncodingInvalid, std::string(side) + ": " + e.what());
    }
  }
  return out;
}

std::set<SpanKey> span_keys(const std::vector<Mention>& mentions) {
  std::set<SpanKey> keys;
  for (const auto& m : mentions) keys.emplace(m.sentence_index, m.start_token, m.end_token, m.type);
  return keys;
}

}  // namespace

std::vector<ScoreReport> score_documents(const Corpus& gold, const Corpus& pred) {
  check_same_tokenization(gold, pred);
  std::vector<ScoreReport> reports(gold.documents.size());
  for (std::size_t d = 0; d < gold.documents.size(); ++d) {
    const auto gold_keys = span_keys(document_mentions(gold.documents[d], gold.encoding, "gold"));
    const auto pred_keys = span_keys(document_mentions(pred.documents[d], pred.encoding, "pred"));
    ScoreReport& r = reports[d];
    r.documents = 1;
    for (const auto& key : gold_keys) {
      auto& c = r.per_type[std::get<3>(key)];
      if (pred_keys.count(key)) {
        ++c.tp;
      } else {
        ++c.fn;
      }
    }
    for (const auto& key : pred_keys) {
      if (!gold_keys.count(key)) ++r.per_type[std::get<3>(key)].fp;
    }
    for (const auto& [type, c] : r.per_type) r.totals += c;
  }
  return reports;
}

ScoreReport score(const Corpus& gold, const Corpus& pred) {
  ScoreReport total;
  for (const auto& r : score_documents(gold, pred)) total.add(r);
  return total;
}

const ScoreReport* StratifiedReport::find(const Stratum& stratum) const {
  for (const auto* list : {&cells, &domain_marginals, &format_marginals}) {
    for (const auto& r : *list) {
      if (r.stratum == stratum) return &r;
    }
  }
  return global.stratum == stratum ? &global : nullptr;
}

StratifiedReport score_stratified(const Corpus& gold, const Corpus& pred,
                                  const MetadataTable& metadata) {
  const auto per_doc = score_documents(gold, pred);
  constexpr Domain kDomains[] = {Domain::kSports, Domain::kWorldEvents, Domain::kEconomy,
                                 Domain::kUnknown};
  constexpr Format kFormats[] = {Format::kTextArticle, Format::kDataReport, Format::kHybrid,
                                 Format::kUnknown};

  StratifiedReport out;
  out.global.stratum = Stratum{};
  auto accumulate = [&](const Stratum& stratum, auto&& member) {
    ScoreReport r;
    r.stratum = stratum;
    for (std::size_t d = 0; d < per_doc.size(); ++d) {
      if (member(metadata.lookup(gold.documents[d].doc_index))) r.add(per_doc[d]);
    }
    return r;
  };
  for (Domain dom : kDomains) {
    for (Format fmt : kFormats) {
      auto r = accumulate(Stratum{dom, fmt}, [&](const DocMetadata& m) {
        return m.domain == dom && m.format == fmt;
      });
      if (r.documents > 0) out.cells.push_back(std::move(r));
    }
  }
  for (Domain dom : kDomains) {
    auto r = accumulate(Stratum{dom, std::nullopt},
                        [&](const DocMetadata& m) { return m.domain == dom; });
    if (r.documents > 0) out.domain_marginals.push_back(std::move(r));
  }
  for (Format fmt : kFormats) {
    auto r = accumulate(Stratum{std::nullopt, fmt},
                        [&](const DocMetadata& m) { return m.format == fmt; });
    if (r.documents > 0) out.format_marginals.push_back(std::move(r));
  }
  for (const auto& r : per_doc) out.global.add(r);
  return out;
}

namespace {

std::string fold_case(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

}  // namespace

SeenSplit seen_unseen_recall(const Corpus& gold_test, const Corpus& pred_test,
                             const Corpus& gold_train, const SeenOptions& options) {
  check_same_tokenization(gold_test, pred_test);
  auto key_of = [&](const Mention& m) {
    std::string k = options.case_sensitive ? m.surface : fold_case(m.surface);
    if (options.type_aware) k = m.type.str() + '\t' + k;
    return k;
  };
  std::set<std::string> train_keys;
  for (const auto& doc : gold_train.documents) {
    for (const auto& m : document_mentions(doc, gold_train.encoding, "train")) {
      train_keys.insert(key_of(m));
    }
  }
  SeenSplit split;
  for (std::size_t d = 0; d < gold_test.documents.size(); ++d) {
    const auto gold = document_mentions(gold_test.documents[d], gold_test.encoding, "gold");
    const auto pred_keys =
        span_keys(document_mentions(pred_test.documents[d], pred_test.encoding, "pred"));
    for (const auto& m : gold) {
      const bool hit = pred_keys.count({m.sentence_index, m.start_token, m.end_token, m.type}) > 0;
      if (train_keys.count(key_of(m))) {
        ++split.seen_gold_count;
        split.seen_tp += hit;
      } else {
        ++split.unseen_gold_count;
        split.unseen_tp += hit;
      }
    }
  }
  return split;
}

nlohmann::json percent_json(const Percent& p) { return p.value(); }

namespace {

void put_counts(nlohmann::json& j, const Counts& c) {
  j["tp"] = c.tp;
  j["fp"] = c.fp;
  j["fn"] = c.fn;
  j["precision"] = percent_json(c.precision());
  j["recall"] = percent_json(c.recall());
  j["f1"] = percent_json(c.f1());
  j["precision_undefined"] = c.precision().undefined();
  j["recall_undefined"] = c.recall().undefined();
  j["f1_undefined"] = c.f1().undefined();
}

nlohmann::json stratum_json(const std::optional<Stratum>& s) {
  if (!s) return nullptr;
  return {{"domain", s->domain ? nlohmann::json(domain_key(*s->domain)) : nlohmann::json("all")},
          {"format", s->format ? nlohmann::json(format_key(*s->format)) : nlohmann::json("all")}};
}

}  // namespace

nlohmann::json to_json(const ScoreReport& report) {
  nlohmann::json j;
  put_counts(j, report.totals);
  j["stratum"] = stratum_json(report.stratum);
  j["documents"] = report.documents;
  nlohmann::json types = nlohmann::json::object();
  for (const auto& [type, c] : report.per_type) put_counts(types[type.str()], c);
  j["per_type"] = std::move(types);
  return j;
}

nlohmann::json to_json(const StratifiedReport& report) {
  nlohmann::json j;
  auto list = [](const std::vector<ScoreReport>& rs) {
    nlohmann::json a = nlohmann::json::array();
    for (const auto& r : rs) a.push_back(to_json(r));
    return a;
  };
  j["cells"] = list(report.cells);
  j["domains"] = list(report.domain_marginals);
  j["formats"] = list(report.format_marginals);
  j["global"] = to_json(report.global);
  return j;
}

nlohmann::json to_json(const SeenSplit& split) {
  return {{"seen_recall", percent_json(split.seen_recall())},
          {"unseen_recall", percent_json(split.unseen_recall())},
          {"overall_recall", percent_json(split.overall_recall())},
          {"seen_gold_count", split.seen_gold_count},
          {"unseen_gold_count", split.unseen_gold_count},
          {"seen_tp", split.seen_tp},
          {"unseen_tp", split.unseen_tp},
          {"seen_recall_undefined", split.seen_recall().undefined()},
          {"unseen_recall_undefined", split.unseen_recall().undefined()}};
}

namespace {

std::string pct(const Percent& p) { return p.undefined() ? p.str() + "*" : p.str(); }

void counts_row(detail::TextTable& t, const std::string& name, const Counts& c) {
  t.add_row({name, std::to_string(c.tp), std::to_string(c.fp), std::to_string(c.fn),
             pct(c.precision()), pct(c.recall()), pct(c.f1())});
}

}  // namespace

std::string render_text(const ScoreReport& report) {
  detail::TextTable t({"type", "tp", "fp", "fn", "precision", "recall", "f1"});
  for (const auto& [type, c] : report.per_type) counts_row(t, type.str(), c);
  counts_row(t, "ALL", report.totals);
  std::string out;
  if (report.stratum) out += report.stratum->name() + "\n";
  out += t.render();
  if (report.totals.precision().undefined() || report.totals.recall().undefined()) {
    out += "* undefined (zero denominator), reported as 0.00\n";
  }
  return out;
}

std::string render_f1_grid(const StratifiedReport& report) {
  std::vector<Domain> domains = {Domain::kSports, Domain::kWorldEvents, Domain::kEconomy};
  std::vector<Format> formats = {Format::kTextArticle, Format::kDataReport, Format::kHybrid};
  auto has_unknown = [&](auto pred) {
    return std::any_of(report.cells.begin(), report.cells.end(), pred);
  };
  if (has_unknown([](const ScoreReport& r) { return r.stratum->domain == Domain::kUnknown; })) {
    domains.push_back(Domain::kUnknown);
  }
  if (has_unknown([](const ScoreReport& r) { return r.stratum->format == Format::kUnknown; })) {
    formats.push_back(Format::kUnknown);
  }
  std::vector<std::string> header = {""};
  for (Domain d : domains) header.emplace_back(domain_title(d));
  header.emplace_back("All Domains");
  detail::TextTable t(header);
  auto cell = [&](std::optional<Domain> d, std::optional<Format> f) -> std::string {
    const ScoreReport* r = report.find(Stratum{d, f});
    return r ? r->totals.f1().str() : "-";
  };
  auto row = [&](const std::string& title, std::optional<Format> f) {
    std::vector<std::string> cells = {title};
    for (Domain d : domains) cells.push_back(cell(d, f));
    cells.push_back(cell(std::nullopt, f));
    t.add_row(cells);
  };
  for (Format f : formats) row(std::string(format_title(f)), f);
  row("All Formats", std::nullopt);
  return t.render();
}

std::string render_text(const StratifiedReport& report) {
  std::string out = "F1 by format and domain\n" + render_f1_grid(report) + "\n";
  out += render_text(report.global);
  return out;
}

std::string render_text(const SeenSplit& split) {
  detail::TextTable t({"partition", "gold", "tp", "recall"});
  t.add_row({"seen", std::to_string(split.seen_gold_count), std::to_string(split.seen_tp),
             pct(split.seen_recall())});
  t.add_row({"unseen", std::to_string(split.unseen_gold_count), std::to_string(split.unseen_tp),
             pct(split.unseen_recall())});
  t.add_row({"all", std::to_string(split.seen_gold_count + split.unseen_gold_count),
             std::to_string(split.seen_tp + split.unseen_tp), pct(split.overall_recall())});
  return t.render();
}

}  // namespace nerkit
