// Acceptance checks. One line per criterion: PASS, FAIL or SKIP.

#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include "httplib.h"
#include "nerkit/adjudication.h"
#include "nerkit/cli.h"
#include "nerkit/conll_io.h"
#include "nerkit/diff.h"
#include "nerkit/error.h"
#include "nerkit/repair.h"
#include "nerkit/scoring.h"
#include "nerkit/taxonomy.h"
#include "oracle.h"
#include "synthetic.h"

using namespace nerkit;

namespace {

enum class Outcome { kPass, kFail, kSkip };

struct Result {
  Outcome outcome = Outcome::kPass;
  std::string detail;
};

struct Failure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void expect(bool ok, const std::string& what) {
  if (!ok) throw Failure(what);
}

template <typename A, typename B>
void expect_eq(const A& a, const B& b, const std::string& what) {
  if (!(a == b)) {
    std::ostringstream s;
    s << what << ": got " << a << ", want " << b;
    throw Failure(s.str());
  }
}

std::string fixture(const std::string& name) { return std::string(NERKIT_FIXTURES) + "/" + name; }

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

bool same_corpus(const Corpus& a, const Corpus& b) {
  if (a.encoding != b.encoding || a.layout != b.layout || a.documents.size() != b.documents.size()) {
    return false;
  }
  for (std::size_t d = 0; d < a.documents.size(); ++d) {
    const auto& da = a.documents[d];
    const auto& db = b.documents[d];
    if (da.sentences.size() != db.sentences.size() || da.has_docstart != db.has_docstart) return false;
    for (std::size_t s = 0; s < da.sentences.size(); ++s) {
      const auto& ta = da.sentences[s].tokens;
      const auto& tb = db.sentences[s].tokens;
      if (ta.size() != tb.size()) return false;
      for (std::size_t i = 0; i < ta.size(); ++i) {
        if (ta[i].surface != tb[i].surface || ta[i].label != tb[i].label ||
            ta[i].extra_columns != tb[i].extra_columns) {
          return false;
        }
      }
    }
  }
  return true;
}

// ---------------------------------------------------------------------------

Result scorer_oracle() {
  std::mt19937_64 rng(20240101);
  const auto start = std::chrono::steady_clock::now();
  for (int i = 0; i < 1000; ++i) {
    const Corpus g = oracle::random_corpus(rng, i % 2 == 1);
    const Corpus p = oracle::relabel(g, rng);
    const auto want = oracle::score(g, p);
    const auto got = score(g, p).totals;
    expect(got.tp == want.tp && got.fp == want.fp && got.fn == want.fn,
           "pair " + std::to_string(i) + " differs from the oracle");
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  expect(secs < 10.0, "took longer than 10 s");
  char buf[64];
  std::snprintf(buf, sizeof buf, "1000 pairs, %.2f s", secs);
  return {Outcome::kPass, buf};
}

Result taxonomy_partition() {
  std::mt19937_64 rng(424242);
  for (int i = 0; i < 1000; ++i) {
    const Corpus g = oracle::random_corpus(rng, false);
    const Corpus p = oracle::relabel(g, rng);
    const auto gold = oracle::corpus_spans(g);
    const auto pred = oracle::corpus_spans(p);
    std::map<oracle::Span, int> gold_hits, pred_hits;
    auto key = [](const Mention& m) {
      return oracle::Span{m.doc_index, m.sentence_index, m.start_token, m.end_token, m.type.str()};
    };
    std::size_t missed = 0, spurious = 0, be = 0, te = 0;
    for (const auto& r : classify_errors(g, p)) {
      if (r.gold) {
        expect(r.category != ErrorCategory::kSpurious, "spurious record with a gold mention");
        ++gold_hits[key(*r.gold)];
      }
      if (r.pred) {
        expect(r.category != ErrorCategory::kMissed, "missed record with a predicted mention");
        ++pred_hits[key(*r.pred)];
      }
      switch (r.category) {
        case ErrorCategory::kMissed: ++missed; break;
        case ErrorCategory::kSpurious: ++spurious; break;
        case ErrorCategory::kBoundaryError: ++be; break;
        case ErrorCategory::kTypeError: ++te; break;
      }
    }
    for (const auto& s : gold) {
      const int want = pred.count(s) ? 0 : 1;
      expect(gold_hits[s] == want, "gold mention not classified exactly once in pair " + std::to_string(i));
    }
    for (const auto& s : pred) {
      const int want = gold.count(s) ? 0 : 1;
      expect(pred_hits[s] == want, "prediction not classified exactly once in pair " + std::to_string(i));
    }
    const auto counts = oracle::score(g, p);
    expect(missed + be + te == counts.fn, "Missed+BE+TE != FN");
    expect(spurious + be + te == counts.fp, "Spurious+BE+TE != FP");
  }
  return {Outcome::kPass, "1000 pairs"};
}

Result encoding_round_trip() {
  const oracle::Labels alphabet = {"O", "B-X", "I-X", "B-Y", "I-Y"};
  std::size_t checked = 0;
  for (std::size_t n = 0; n <= 4; ++n) {
    for (const auto& seq : oracle::all_sequences(n, alphabet)) {
      if (!oracle::valid(seq, true)) continue;
      const Corpus c = oracle::single_sentence_corpus(seq, EncodingScheme::kIOB1);
      const Corpus bio = convert_encoding(c, EncodingScheme::kBIO);
      const Corpus back = convert_encoding(bio, EncodingScheme::kIOB1);
      expect(oracle::labels_of(back.documents[0].sentences[0]) == seq, "IOB1->BIO->IOB1 changed a sequence");
      ++checked;
    }
  }
  std::mt19937_64 rng(77);
  for (int i = 0; i < 1000; ++i) {
    const bool iob1 = i % 2 == 0;
    const Corpus c = oracle::random_corpus(rng, iob1);
    const Corpus other = convert_encoding(c, iob1 ? EncodingScheme::kBIO : EncodingScheme::kIOB1);
    expect(oracle::corpus_spans(other) == oracle::corpus_spans(c), "conversion changed the mention set");
    expect(corpus_mentions(other) == corpus_mentions(c), "conversion changed extracted mentions");
  }
  return {Outcome::kPass, std::to_string(checked) + " valid IOB1 sequences, 1000 corpora"};
}

Result io_round_trip() {
  for (const char* name : {"conll03_iob1_4col.conll", "bio_2col.conll", "table1.conll", "diff3_a.conll",
                           "diff3_b.conll"}) {
    const std::string text = slurp(fixture(name));
    expect(serialize_corpus(parse_corpus_string(text).corpus) == text,
           std::string(name) + " is not byte-identical after a round trip");
  }
  std::mt19937_64 rng(31337);
  for (int i = 0; i < 1000; ++i) {
    Corpus c = oracle::random_corpus(rng, i % 2 == 1);
    if (i % 3 == 0) {
      c.layout = {4, 3};
      for (auto& d : c.documents) {
        for (auto& s : d.sentences) {
          for (auto& t : s.tokens) t.extra_columns = {"NNP", "I-NP"};
        }
      }
    }
    ParseOptions o;
    o.encoding = c.encoding;
    expect(same_corpus(parse_corpus_string(serialize_corpus(c), o).corpus, c),
           "parse(serialize(c)) != c for random corpus " + std::to_string(i));
  }
  return {Outcome::kPass, "5 fixtures, 1000 random corpora"};
}

Result validation() {
  const Corpus c = oracle::single_sentence_corpus({"O", "I-PER"}, EncodingScheme::kBIO);
  expect_eq(validate_transitions(c).size(), 1u, "violations for O, I-PER");
  const auto parsed = parse_corpus_string("a O\nb I-PER\n", ParseOptions{{}, EncodingScheme::kBIO});
  expect_eq(parsed.report.violations.size(), 1u, "parse report violations for O, I-PER");

  const oracle::Labels alphabet = {"O", "B-X", "I-X", "B-Y", "I-Y"};
  std::size_t outputs = 0;
  for (std::size_t n = 1; n <= 4; ++n) {
    for (const auto& seq : oracle::all_sequences(n, alphabet)) {
      for (bool iob1 : {false, true}) {
        if (!oracle::valid(seq, iob1)) continue;
        const auto from = iob1 ? EncodingScheme::kIOB1 : EncodingScheme::kBIO;
        const Corpus src = oracle::single_sentence_corpus(seq, from);
        for (auto to : {EncodingScheme::kIOB1, EncodingScheme::kBIO}) {
          expect(validate_transitions(convert_encoding(src, to)).empty(), "conversion output has violations");
          ++outputs;
        }
      }
    }
  }
  std::mt19937_64 rng(5);
  for (int i = 0; i < 1000; ++i) {
    const Corpus src = oracle::random_corpus(rng, i % 2 == 0);
    for (auto to : {EncodingScheme::kIOB1, EncodingScheme::kBIO}) {
      expect(validate_transitions(convert_encoding(src, to)).empty(), "conversion output has violations");
      ++outputs;
    }
  }
  return {Outcome::kPass, "O, I-PER -> 1 violation; " + std::to_string(outputs) + " conversions clean"};
}

Result diff_laws() {
  const Corpus a = parse_corpus_file(fixture("diff3_a.conll")).corpus;
  const Corpus b = parse_corpus_file(fixture("diff3_b.conll")).corpus;
  expect_eq(diff_pair(a, a).count(), 0u, "diff(a, a)");
  expect_eq(diff_pair(a, b).count(), 3u, "3-change fixture");
  expect_eq(diff_pair(b, a).count(), 3u, "3-change fixture reversed");
  std::mt19937_64 rng(8);
  for (int i = 0; i < 200; ++i) {
    const Corpus x = oracle::random_corpus(rng, i % 2 == 0);
    const Corpus y = oracle::relabel(x, rng);
    expect_eq(diff_pair(x, x).count(), 0u, "diff(x, x)");
    expect_eq(diff_pair(x, y).count(), diff_pair(y, x).count(), "diff symmetry");
  }
  const std::vector<Corpus> three = {a, a, a};
  const auto p = agreement(three, {"A", "B", "C"});
  expect_eq(p.count({0, 0, 0}), a.token_count(), "all-agree bucket");
  expect_eq(p.aligned_count, a.token_count(), "aligned tokens");
  return {Outcome::kPass, "self 0, symmetric, fixture 3, identical triple 100% all-agree"};
}

Result repair_arithmetic() {
  // SKIING-WORLD from the paper's hyphen-fix example.
  const Corpus ski = parse_corpus_string("ALPINE O\nSKIING-WORLD B-MISC\nCUP I-MISC\n").corpus;
  RepairOp hyphen;
  hyphen.kind = RepairKind::kHyphenSplit;
  hyphen.token_index = 1;
  hyphen.expected_surface = "SKIING-WORLD";
  hyphen.labels = {"O", "O", "B-MISC"};
  const auto split = apply_patch(ski, {hyphen});
  expect_eq(serialize_corpus(split.corpus), std::string("ALPINE O\nSKIING O\n- O\nWORLD B-MISC\nCUP I-MISC\n\n"),
            "SKIING-WORLD split");

  // Random structural patches over all-O corpora.
  std::mt19937_64 rng(99);
  for (int i = 0; i < 200; ++i) {
    Corpus c = oracle::random_corpus(rng, false);
    for (auto& d : c.documents) {
      for (auto& s : d.sentences) {
        for (auto& t : s.tokens) t.label = Label::outside();
      }
    }
    // Put a splittable token and a hyphenated token at the start of document 0.
    auto& first = c.documents[0].sentences[0].tokens;
    first.insert(first.begin(), Token{"UK-US", {}, Label::outside(), 0});
    first.insert(first.begin(), Token{"JosepGuardiola", {}, Label::outside(), 0});
    std::vector<RepairOp> patch;
    RepairOp ts;
    ts.kind = RepairKind::kTokenSplit;
    ts.expected_surface = "JosepGuardiola";
    ts.surfaces = {"Josep", "Guardiola"};
    ts.labels = {"O", "O"};
    patch.push_back(ts);
    RepairOp hs;
    hs.kind = RepairKind::kHyphenSplit;
    hs.token_index = 2;
    hs.expected_surface = "UK-US";
    hs.labels = {"O", "O", "O"};
    patch.push_back(hs);
    // Split sentence 0 of each document after its first token, then merge it back
    // in half of the cases.
    for (std::size_t d = 0; d < c.documents.size(); ++d) {
      const std::size_t len = c.documents[d].sentences[0].tokens.size() + (d == 0 ? 3 : 0);
      if (len < 2) continue;
      RepairOp ss;
      ss.kind = RepairKind::kSentenceSplit;
      ss.doc_index = d;
      ss.split_at = 1;
      patch.push_back(ss);
      if (rng() % 2) {
        RepairOp sm;
        sm.kind = RepairKind::kSentenceMerge;
        sm.doc_index = d;
        patch.push_back(sm);
      }
    }
    if (c.documents.back().sentences.size() >= 2) {
      RepairOp sm;
      sm.kind = RepairKind::kSentenceMerge;
      sm.doc_index = c.documents.size() - 1;
      sm.sentence_index = c.documents.back().sentences.size() - 2;
      patch.push_back(sm);
    }
    const auto r = apply_patch(c, patch);
    const auto [dt, ds] = analytic_delta(patch);
    expect_eq(r.stats.token_delta, dt, "token delta");
    expect_eq(r.stats.sentence_delta, ds, "sentence delta");
    expect_eq(static_cast<std::ptrdiff_t>(r.corpus.token_count()) - static_cast<std::ptrdiff_t>(c.token_count()),
              dt, "token count change");
    expect_eq(static_cast<std::ptrdiff_t>(r.corpus.sentence_count()) -
                  static_cast<std::ptrdiff_t>(c.sentence_count()),
              ds, "sentence count change");
    // The same patch against its own output is stale.
    try {
      apply_patch(r.corpus, patch);
      throw Failure("re-applying a patch did not fail");
    } catch (const Error& e) {
      expect(e.code() == ErrorCode::kSurfaceMismatch, std::string("stale patch failed with ") +
                                                          std::string(error_code_name(e.code())));
    }
  }
  return {Outcome::kPass, "SKIING-WORLD exact; 200 patches match analytic delta; stale -> SurfaceMismatch"};
}

Result stats_census() {
  std::vector<std::string> args = {"nerkit", "stats", "--corpus", fixture("table1.conll"), "--metadata",
                                   fixture("table1_meta.tsv"), "--format", "json"};
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  expect_eq(code, 0, "stats exit code");
  const auto j = nlohmann::json::parse(out.str());
  expect_eq(j["by_format"]["text_article"].get<int>(), 139, "text articles");
  expect_eq(j["by_format"]["data_report"].get<int>(), 73, "data reports");
  expect_eq(j["by_format"]["hybrid"].get<int>(), 19, "hybrids");
  expect_eq(j["by_domain"]["world_events"].get<int>(), 63, "world events");
  expect_eq(j["by_domain"]["economy"].get<int>(), 67, "economy");
  expect_eq(j["by_domain"]["sports"].get<int>(), 101, "sports");
  expect_eq(j["documents"].get<int>(), 231, "documents");
  return {Outcome::kPass, "139/73/19, 63/67/101, 231"};
}

// Licensed corpora, read from $NERKIT_DATA_DIR when present.
Result published_tables() {
  const char* dir = std::getenv("NERKIT_DATA_DIR");
  const std::vector<std::string> names = {"conll03.conll",    "conllpp.conll", "reconll.conll",
                                          "conllsharp.conll", "codait.conll",  "cleanconll.conll",
                                          "conllsharp_patch.jsonl"};
  std::string missing;
  for (const auto& n : names) {
    if (!dir || !std::filesystem::exists(std::filesystem::path(dir) / n)) missing += (missing.empty() ? "" : ", ") + n;
  }
  if (!missing.empty()) {
    return {Outcome::kSkip, std::string("licensed data not found (set NERKIT_DATA_DIR; missing: ") + missing + ")"};
  }
  auto load = [&](const std::string& n) { return parse_corpus_file(std::filesystem::path(dir) / n).corpus; };
  const Corpus c03 = load("conll03.conll"), cpp = load("conllpp.conll"), re = load("reconll.conll"),
               sharp = load("conllsharp.conll"), codait = load("codait.conll"), clean = load("cleanconll.conll");
  expect_eq(diff_pair(c03, cpp).count(), 309u, "CoNLL-03 vs CoNLL++");
  expect_eq(diff_pair(c03, re).count(), 105u, "CoNLL-03 vs ReCoNLL");
  expect_eq(diff_pair(c03, sharp).count(), 457u, "CoNLL-03 vs CoNLL#");
  expect_eq(diff_pair(cpp, re).count(), 276u, "CoNLL++ vs ReCoNLL");
  const std::vector<Corpus> three = {codait, clean, sharp};
  const auto p = agreement(three, {"CODAIT", "CleanCoNLL", "CoNLL#"});
  expect_eq(p.count({0, 0, 0}), 49593u, "all agree");
  expect_eq(p.count({0, 1, 2}), 15u, "all disagree");
  expect_eq(p.count({0, 0, 1}), 291u, "CODAIT+CleanCoNLL|CoNLL#");
  expect_eq(p.count({0, 1, 1}), 180u, "CODAIT|CleanCoNLL+CoNLL#");
  expect_eq(p.count({0, 1, 0}), 316u, "CODAIT+CoNLL#|CleanCoNLL");
  const auto st = patch_stats(read_patch_file(std::filesystem::path(dir) / "conllsharp_patch.jsonl"));
  expect_eq(st.submitted_count(RepairKind::kTokenSplit), 5u, "token splits");
  expect_eq(st.submitted_count(RepairKind::kHyphenSplit), 27u, "hyphen fixes");
  expect_eq(st.submitted_count(RepairKind::kSentenceMerge) + st.submitted_count(RepairKind::kSentenceSplit), 63u,
            "sentence boundary fixes");
  expect_eq(st.submitted_count(RepairKind::kLabelFix), 457u, "label fixes");
  return {Outcome::kPass, "Tables 3, 4 and 5 reproduced"};
}

// Child process running `nerkit serve`; stdout is piped so the port can be read.
struct Server {
  pid_t pid = -1;
  int port = 0;
};

Server start_server(const std::filesystem::path& disagreements, const std::filesystem::path& log) {
  int fds[2];
  if (::pipe(fds) != 0) throw Failure("pipe failed");
  const pid_t pid = ::fork();
  if (pid < 0) throw Failure("fork failed");
  if (pid == 0) {
    ::dup2(fds[1], STDOUT_FILENO);
    ::close(fds[0]);
    ::close(fds[1]);
    const std::string d = disagreements.string(), l = log.string();
    ::execl(NERKIT_CLI_PATH, "nerkit", "serve", "--port", "0", "--disagreements", d.c_str(), "--log", l.c_str(),
            static_cast<char*>(nullptr));
    ::_exit(127);
  }
  ::close(fds[1]);
  std::string line;
  char ch;
  while (::read(fds[0], &ch, 1) == 1 && ch != '\n') line += ch;
  ::close(fds[0]);
  const auto colon = line.rfind(':');
  const auto slash = line.find("/api", colon);
  if (colon == std::string::npos || slash == std::string::npos) {
    ::kill(pid, SIGKILL);
    ::waitpid(pid, nullptr, 0);
    throw Failure("server did not report a port: '" + line + "'");
  }
  return {pid, std::stoi(line.substr(colon + 1, slash - colon - 1))};
}

Result adjudication_durability() {
  synthetic::TempDir dir;
  const auto set = synthetic::disagreements(40);
  const auto dis = dir / "disagreements.jsonl";
  {
    std::ofstream out(dis);
    DiffResult r;
    r.versions = set.versions;
    r.records = set.records;
    export_disagreements(r, 3, out);
  }
  const auto log = dir / "decisions.jsonl";
  std::map<std::string, std::string> acknowledged;
  for (int round = 0; round < 2; ++round) {
    Server s = start_server(dis, log);
    httplib::Client cli("127.0.0.1", s.port);
    for (std::size_t i = round * 20; i < round * 20 + 17; ++i) {
      const std::string label = i % 3 ? "B-LOC" : "B-ORG";
      const nlohmann::json body = {{"diff_id", set.records[i].diff_id}, {"chosen_label", label}, {"chooser", "ann"}};
      auto res = cli.Post("/api/v1/decisions", body.dump(), "application/json");
      expect(res && res->status == 200, "decision not acknowledged");
      acknowledged[set.records[i].diff_id] = label;
    }
    // Killed right after the last acknowledgment, with no chance to shut down.
    ::kill(s.pid, SIGKILL);
    ::waitpid(s.pid, nullptr, 0);
  }
  Server s = start_server(dis, log);
  httplib::Client cli("127.0.0.1", s.port);
  auto res = cli.Get("/api/v1/export");
  auto progress = cli.Get("/api/v1/progress");
  ::kill(s.pid, SIGKILL);
  ::waitpid(s.pid, nullptr, 0);
  expect(res && res->status == 200 && progress && progress->status == 200, "export after restart failed");
  std::map<std::string, std::string> recovered;
  std::istringstream in(res->body);
  for (const auto& d : read_decisions(in)) recovered[d.diff_id] = d.chosen_label;
  expect(recovered == acknowledged, "recovered decisions differ from acknowledged ones");
  expect_eq(nlohmann::json::parse(progress->body)["decided"].get<std::size_t>(), acknowledged.size(),
            "decided after restart");

  const auto big = synthetic::disagreements(276);
  std::vector<Decision> ds;
  for (std::size_t i = 0; i < 276; ++i) {
    ds.push_back({big.records[i].diff_id, i < 190 ? "B-LOC" : "B-ORG", "ann", "t", std::nullopt});
  }
  const auto st = adjudication_stats(big.records, big.versions, ds);
  expect_eq(st.versions[0].share.str(), std::string("68.84"), "190 of 276");
  return {Outcome::kPass, std::to_string(acknowledged.size()) + " acknowledged decisions survived SIGKILL; 190/276 = " +
                              st.versions[0].share.str() + "%"};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Result()>>> criteria = {
      {"scorer oracle equivalence", scorer_oracle},
      {"taxonomy partition", taxonomy_partition},
      {"encoding round trip", encoding_round_trip},
      {"I/O round trip", io_round_trip},
      {"validation", validation},
      {"diff laws", diff_laws},
      {"repair arithmetic", repair_arithmetic},
      {"stats census", stats_census},
      {"published tables (data-contingent)", published_tables},
      {"adjudication durability", adjudication_durability},
  };
  int failed = 0;
  for (const auto& [name, check] : criteria) {
    Result r;
    try {
      r = check();
    } catch (const std::exception& e) {
      r = {Outcome::kFail, e.what()};
    }
    const char* tag = r.outcome == Outcome::kPass ? "PASS" : r.outcome == Outcome::kSkip ? "SKIP" : "FAIL";
    std::cout << tag << "  " << name << "  (" << r.detail << ")" << std::endl;
    failed += r.outcome == Outcome::kFail;
  }
  std::cout << (failed ? std::to_string(failed) + " criterion(s) failed" : "all criteria passed or skipped")
            << std::endl;
  return failed ? 1 : 0;
}
