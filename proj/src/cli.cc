#include "nerkit/cli.h"

#include <unistd.h>

#include <csignal>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "nerkit/adjudication.h"
#include "nerkit/conll_io.h"
#include "nerkit/diff.h"
#include "nerkit/error.h"
#include "nerkit/metadata.h"
#include "nerkit/repair.h"
#include "nerkit/scoring.h"
#include "nerkit/server.h"
#include "nerkit/taxonomy.h"
#include "table.h"

namespace nerkit {

namespace {

struct InputOptions {
  std::string encoding = "auto";
  std::optional<std::size_t> ner_column;
  std::optional<std::size_t> columns;

  ParseOptions parse_options() const {
    ParseOptions o;
    o.columns.ner_column = ner_column;
    o.columns.column_count = columns;
    if (encoding != "auto") o.encoding = parse_encoding(encoding);
    return o;
  }
};

struct OutputOptions {
  std::string format = "text";
  std::string path;
};

class Output {
 public:
  Output(const OutputOptions& options, std::ostream& fallback) : fallback_(fallback) {
    if (!options.path.empty()) {
      file_.open(options.path, std::ios::binary);
      if (!file_) throw Error(ErrorCode::kIo, "cannot write " + options.path);
      to_file_ = true;
    }
  }
  std::ostream& stream() { return to_file_ ? file_ : fallback_; }
  void finish() {
    if (to_file_) {
      file_.close();
      if (!file_) throw Error(ErrorCode::kIo, "write failed");
    }
  }

 private:
  std::ostream& fallback_;
  std::ofstream file_;
  bool to_file_ = false;
};

void add_input_options(CLI::App* app, InputOptions& in) {
  app->add_option("--encoding", in.encoding, "Label encoding of the inputs")
      ->check(CLI::IsMember({"auto", "BIO", "IOB2", "IOB1", "bio", "iob2", "iob1"}));
  app->add_option("--ner-column", in.ner_column, "Index of the NER tag column (default: last)");
  app->add_option("--columns", in.columns, "Expected number of columns (default: first row)");
}

void add_output_options(CLI::App* app, OutputOptions& out, std::vector<std::string> formats) {
  app->add_option("--format", out.format, "Output format")->check(CLI::IsMember(formats));
  app->add_option("-o,--output", out.path, "Write to this file instead of standard output");
}

void print_json(std::ostream& out, const nlohmann::json& j) { out << j.dump(2) << '\n'; }

std::vector<std::string> version_names(const std::vector<std::string>& paths,
                                       const std::vector<std::string>& explicit_names) {
  if (!explicit_names.empty()) {
    if (explicit_names.size() != paths.size()) {
      throw CLI::ValidationError("--names", "needs one name per input");
    }
    return explicit_names;
  }
  std::vector<std::string> names;
  std::set<std::string> seen;
  bool unique = true;
  for (const auto& p : paths) {
    names.push_back(std::filesystem::path(p).stem().string());
    unique = unique && seen.insert(names.back()).second;
  }
  if (!unique) {
    for (std::size_t i = 0; i < names.size(); ++i) {
      names[i] = i < 26 ? std::string(1, static_cast<char>('A' + i)) : "V" + std::to_string(i);
    }
  }
  return names;
}

std::string violation_lines(const std::vector<TransitionViolation>& vs) {
  std::string out;
  for (const auto& v : vs) out += "  " + describe(v) + "\n";
  return out;
}

nlohmann::json violations_json(const std::vector<TransitionViolation>& vs) {
  nlohmann::json a = nlohmann::json::array();
  for (const auto& v : vs) {
    a.push_back({{"doc_index", v.location.doc_index},
                 {"sentence_index", v.location.sentence_index},
                 {"token_index", v.location.token_index},
                 {"source_line", v.location.source_line},
                 {"prev_label", v.prev_label.str()},
                 {"cur_label", v.cur_label.str()}});
  }
  return a;
}

MetadataTable load_metadata(const std::string& path) {
  return path.empty() ? MetadataTable{} : parse_metadata_file(path);
}

bool color_enabled(const std::ostream& out) {
  return &out == &std::cout && std::getenv("NO_COLOR") == nullptr && ::isatty(STDOUT_FILENO);
}

std::string paint(bool color, const char* code, const std::string& text) {
  return color ? std::string("\033[") + code + "m" + text + "\033[0m" : text;
}

AdjudicationServer* g_server = nullptr;

extern "C" void handle_stop_signal(int) {
  if (g_server) g_server->stop();
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Audit, score, diff, repair and adjudicate CoNLL-03 style NER corpora", "nerkit"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for all subcommands");

  InputOptions input;
  OutputOptions output;
  std::string metadata_path;
  std::string repair_mode;

  // validate
  auto* validate = app.add_subcommand("validate", "Parse a corpus and report invalid label transitions");
  std::string validate_path;
  bool strict = false;
  validate->add_option("corpus", validate_path, "CoNLL file")->required();
  validate->add_flag("--strict", strict, "Exit 1 when violations are found");
  validate->add_option("--repair", repair_mode, "Repair mode (writes the corpus to --output)")
      ->check(CLI::IsMember({"conlleval"}));
  add_input_options(validate, input);
  add_output_options(validate, output, {"text", "json"});

  // score
  auto* score_cmd = app.add_subcommand("score", "Span-level precision/recall/F1");
  std::string gold_path, pred_path, train_path;
  score_cmd->add_option("--gold", gold_path, "Gold corpus")->required();
  score_cmd->add_option("--pred", pred_path, "Predicted corpus")->required();
  score_cmd->add_option("--metadata", metadata_path, "Domain/format sidecar TSV");
  score_cmd->add_option("--repair", repair_mode, "Repair invalid prediction transitions first")
      ->check(CLI::IsMember({"conlleval"}));
  add_input_options(score_cmd, input);
  add_output_options(score_cmd, output, {"text", "json", "tsv"});

  // errors
  auto* errors_cmd = app.add_subcommand("errors", "Classify errors and count frequent FP/FN mentions");
  std::string group_by = "domain";
  std::string doc_domain, doc_format;
  std::size_t top = 20;
  errors_cmd->add_option("--gold", gold_path, "Gold corpus")->required();
  errors_cmd->add_option("--pred", pred_path, "Predicted corpus")->required();
  errors_cmd->add_option("--metadata", metadata_path, "Domain/format sidecar TSV");
  errors_cmd->add_option("--group-by", group_by, "Summary grouping")
      ->check(CLI::IsMember({"domain", "format", "category"}));
  errors_cmd->add_option("--doc-domain", doc_domain, "Only count errors in this domain");
  errors_cmd->add_option("--doc-format", doc_format, "Only count errors in this format");
  errors_cmd->add_option("--top", top, "Rows of the frequent-error table (0 = all)");
  errors_cmd->add_option("--repair", repair_mode, "Repair invalid prediction transitions first")
      ->check(CLI::IsMember({"conlleval"}));
  add_input_options(errors_cmd, input);
  add_output_options(errors_cmd, output, {"text", "json", "tsv"});

  // recall-split
  auto* recall_cmd = app.add_subcommand("recall-split", "Recall on seen vs unseen mentions");
  bool ignore_case = false;
  bool type_aware = false;
  recall_cmd->add_option("--gold", gold_path, "Gold test corpus")->required();
  recall_cmd->add_option("--pred", pred_path, "Predicted test corpus")->required();
  recall_cmd->add_option("--train", train_path, "Gold training corpus")->required();
  recall_cmd->add_flag("--ignore-case", ignore_case, "Match surfaces case-insensitively");
  recall_cmd->add_flag("--type-aware", type_aware, "Require the entity type to match as well");
  recall_cmd->add_option("--repair", repair_mode, "Repair invalid prediction transitions first")
      ->check(CLI::IsMember({"conlleval"}));
  add_input_options(recall_cmd, input);
  add_output_options(recall_cmd, output, {"text", "json"});

  // diff / agree / export-disagreements
  std::vector<std::string> version_paths;
  std::vector<std::string> names;
  bool raw_labels = false;
  std::size_t window = 3;
  auto* diff_cmd = app.add_subcommand("diff", "Token label differences between two versions");
  diff_cmd->add_option("versions", version_paths, "Two corpus versions")->required()->expected(2);
  diff_cmd->add_option("--names", names, "Version names")->delimiter(',');
  diff_cmd->add_flag("--raw-labels", raw_labels, "Compare labels without normalizing to BIO");
  add_input_options(diff_cmd, input);
  add_output_options(diff_cmd, output, {"text", "json"});

  auto* agree_cmd = app.add_subcommand("agree", "Agreement partition across three or more versions");
  agree_cmd->add_option("versions", version_paths, "Corpus versions")->required()->expected(3, 64);
  agree_cmd->add_option("--names", names, "Version names")->delimiter(',');
  agree_cmd->add_flag("--raw-labels", raw_labels, "Compare labels without normalizing to BIO");
  add_input_options(agree_cmd, input);
  add_output_options(agree_cmd, output, {"text", "json"});

  auto* export_cmd = app.add_subcommand("export-disagreements", "Write the disagreement file");
  export_cmd->add_option("versions", version_paths, "Corpus versions")->required()->expected(2, 64);
  export_cmd->add_option("--names", names, "Version names")->delimiter(',');
  export_cmd->add_option("--window", window, "Context tokens on each side");
  export_cmd->add_option("--metadata", metadata_path, "Domain/format sidecar TSV");
  export_cmd->add_flag("--raw-labels", raw_labels, "Compare labels without normalizing to BIO");
  add_input_options(export_cmd, input);
  std::string export_format = "jsonl";
  export_cmd->add_option("--format", export_format, "JSON lines, or one JSON array")
      ->check(CLI::IsMember({"jsonl", "json"}));
  export_cmd->add_option("-o,--output", output.path, "Write to this file instead of standard output");

  // apply-decisions
  auto* apply_cmd = app.add_subcommand("apply-decisions", "Apply adjudication decisions to a corpus");
  std::string base_path, disagreements_path, decisions_path;
  apply_cmd->add_option("--base", base_path, "Corpus tokenized like the first version")->required();
  apply_cmd->add_option("--disagreements", disagreements_path, "Disagreement file")->required();
  apply_cmd->add_option("--decisions", decisions_path, "Decision file")->required();
  add_input_options(apply_cmd, input);
  apply_cmd->add_option("-o,--output", output.path, "Write to this file instead of standard output");

  // adjudication-stats
  auto* adj_stats_cmd = app.add_subcommand("adjudication-stats", "Per-version win rates of decisions");
  adj_stats_cmd->add_option("--disagreements", disagreements_path, "Disagreement file")->required();
  adj_stats_cmd->add_option("--decisions", decisions_path, "Decision file or log")->required();
  add_output_options(adj_stats_cmd, output, {"text", "json"});

  // repair / patch-stats
  auto* repair_cmd = app.add_subcommand("repair", "Apply a patch file to a corpus");
  std::string corpus_path, patch_path, stats_path;
  repair_cmd->add_option("--corpus", corpus_path, "Corpus to repair")->required();
  repair_cmd->add_option("--patch", patch_path, "Patch file (JSON lines)")->required();
  repair_cmd->add_option("--stats", stats_path, "Also write statistics to this file");
  add_input_options(repair_cmd, input);
  add_output_options(repair_cmd, output, {"text", "json"});

  auto* patch_stats_cmd = app.add_subcommand("patch-stats", "Count the fixes in a patch by kind");
  patch_stats_cmd->add_option("patch", patch_path, "Patch file")->required();
  add_output_options(patch_stats_cmd, output, {"text", "json"});

  // detect
  auto* detect_cmd = app.add_subcommand("detect", "List headline boundary and hyphen repair candidates");
  std::string detect_kind = "all";
  std::size_t window_min = 16, window_max = 20;
  detect_cmd->add_option("--corpus", corpus_path, "Corpus")->required();
  detect_cmd->add_option("--metadata", metadata_path, "Domain/format sidecar TSV");
  detect_cmd->add_option("--kind", detect_kind, "Detector")->check(CLI::IsMember({"all", "headline", "hyphen"}));
  detect_cmd->add_option("--window-min", window_min, "Headline window start (characters)");
  detect_cmd->add_option("--window-max", window_max, "Headline window end (characters)");
  add_input_options(detect_cmd, input);
  add_output_options(detect_cmd, output, {"text", "json"});

  // serve
  auto* serve_cmd = app.add_subcommand("serve", "Run the adjudication HTTP service");
  ServerOptions server_options;
  std::string log_path, static_dir;
  serve_cmd->add_option("--port", server_options.port, "Port (0 picks a free one)");
  serve_cmd->add_option("--host", server_options.host, "Address to bind");
  serve_cmd->add_option("--disagreements", disagreements_path, "Disagreement file")->required();
  serve_cmd->add_option("--log", log_path, "Decision log (created if missing)")->required();
  serve_cmd->add_option("--static-dir", static_dir, "UI assets to serve at /");

  // stats
  auto* stats_cmd = app.add_subcommand("stats", "Document census by domain and format");
  stats_cmd->add_option("--corpus", corpus_path, "Corpus")->required();
  stats_cmd->add_option("--metadata", metadata_path, "Domain/format sidecar TSV");
  add_input_options(stats_cmd, input);
  add_output_options(stats_cmd, output, {"text", "json", "tsv"});

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, err, err);
    return kExitUsage;
  }

  auto load = [&](const std::string& path) { return parse_corpus_file(path, input.parse_options()); };
  auto load_pred = [&](const std::string& path, std::vector<TransitionViolation>* repaired) {
    auto parsed = load(path);
    if (repair_mode == "conlleval") {
      if (repaired) *repaired = parsed.report.violations;
      repair_transitions(parsed.corpus);
    }
    return std::move(parsed.corpus);
  };

  try {
    if (*validate) {
      auto parsed = load(validate_path);
      const auto& report = parsed.report;
      std::size_t repaired = 0;
      if (repair_mode == "conlleval") {
        repaired = repair_transitions(parsed.corpus);
        if (output.path.empty()) {
          throw CLI::ValidationError("--repair", "needs --output for the repaired corpus");
        }
        write_corpus_file(parsed.corpus, output.path);
      }
      std::ostream& o = out;
      if (output.format == "json") {
        print_json(o, {{"tokens", report.token_count},
                       {"sentences", report.sentence_count},
                       {"documents", report.document_count},
                       {"detected_encoding", encoding_name(report.detected_encoding)},
                       {"encoding", encoding_name(parsed.corpus.encoding)},
                       {"encoding_ambiguous", report.encoding_ambiguous},
                       {"violations", violations_json(report.violations)},
                       {"repaired", repaired}});
      } else {
        const bool color = color_enabled(o);
        o << "documents: " << report.document_count << "\n"
          << "sentences: " << report.sentence_count << "\n"
          << "tokens: " << report.token_count << "\n"
          << "detected encoding: " << encoding_name(report.detected_encoding)
          << (report.encoding_ambiguous ? " (ambiguous, defaulted)" : "") << "\n";
        if (report.violations.empty()) {
          o << paint(color, "32", "no invalid transitions") << "\n";
        } else {
          o << paint(color, "31", std::to_string(report.violations.size()) + " invalid transition(s)")
            << ":\n"
            << violation_lines(report.violations);
        }
        if (repaired) o << "repaired " << repaired << " label(s)\n";
      }
      return strict && !report.violations.empty() ? kExitFindings : kExitOk;
    }

    if (*score_cmd) {
      const Corpus gold = load(gold_path).corpus;
      const Corpus pred = load_pred(pred_path, nullptr);
      Output sink(output, out);
      std::ostream& o = sink.stream();
      if (!metadata_path.empty()) {
        const auto report = score_stratified(gold, pred, load_metadata(metadata_path));
        if (output.format == "json") {
          print_json(o, to_json(report));
        } else if (output.format == "tsv") {
          o << "stratum\ttp\tfp\tfn\tprecision\trecall\tf1\n";
          auto row = [&](const ScoreReport& r) {
            const auto& c = r.totals;
            o << r.stratum->name() << '\t' << c.tp << '\t' << c.fp << '\t' << c.fn << '\t'
              << c.precision().str() << '\t' << c.recall().str() << '\t' << c.f1().str() << '\n';
          };
          for (const auto& r : report.cells) row(r);
          for (const auto& r : report.domain_marginals) row(r);
          for (const auto& r : report.format_marginals) row(r);
          row(report.global);
        } else {
          o << render_text(report);
        }
      } else {
        const auto report = score(gold, pred);
        if (output.format == "json") {
          print_json(o, to_json(report));
        } else if (output.format == "tsv") {
          o << "type\ttp\tfp\tfn\tprecision\trecall\tf1\n";
          auto row = [&](const std::string& name, const Counts& c) {
            o << name << '\t' << c.tp << '\t' << c.fp << '\t' << c.fn << '\t' << c.precision().str()
              << '\t' << c.recall().str() << '\t' << c.f1().str() << '\n';
          };
          for (const auto& [type, c] : report.per_type) row(type.str(), c);
          row("ALL", report.totals);
        } else {
          o << render_text(report);
        }
      }
      sink.finish();
      return kExitOk;
    }

    if (*errors_cmd) {
      const Corpus gold = load(gold_path).corpus;
      std::vector<TransitionViolation> pred_violations;
      const Corpus pred = load_pred(pred_path, &pred_violations);
      const MetadataTable metadata = load_metadata(metadata_path);
      DocFilter filter;
      if (!doc_domain.empty()) {
        filter.domain = parse_domain(doc_domain);
        if (!filter.domain) throw CLI::ValidationError("--doc-domain", "unknown domain " + doc_domain);
      }
      if (!doc_format.empty()) {
        filter.format = parse_format(doc_format);
        if (!filter.format) throw CLI::ValidationError("--doc-format", "unknown format " + doc_format);
      }
      const auto records = classify_errors(gold, pred);
      const ErrorGrouping grouping = group_by == "format"   ? ErrorGrouping::kFormat
                                     : group_by == "domain" ? ErrorGrouping::kDomain
                                                            : ErrorGrouping::kCategory;
      const auto summary = error_summary(records, grouping, metadata);
      auto counts = count_mention_errors(gold, pred, filter, metadata);
      Output sink(output, out);
      std::ostream& o = sink.stream();
      if (output.format == "json") {
        print_json(o, {{"records", to_json(records)},
                       {"summary", to_json(summary)},
                       {"counts", to_json(counts)},
                       {"pred_violations", violations_json(pred_violations)}});
      } else if (output.format == "tsv") {
        if (top > 0 && counts.size() > top) counts.resize(top);
        o << render_tsv(counts);
      } else {
        o << "Error types\n" << render_text(summary) << "\n";
        if (top > 0 && counts.size() > top) counts.resize(top);
        o << "Most frequent errors\n";
        detail::TextTable t({"count", "polarity", "type", "surface"});
        for (const auto& r : counts) {
          t.add_row({std::to_string(r.count), r.polarity == Polarity::kFP ? "FP" : "FN", r.type.str(),
                     r.surface});
        }
        o << t.render();
        if (!pred_violations.empty()) {
          o << "\n" << pred_violations.size() << " invalid prediction transition(s), repaired:\n"
            << violation_lines(pred_violations);
        }
      }
      sink.finish();
      return kExitOk;
    }

    if (*recall_cmd) {
      const Corpus gold = load(gold_path).corpus;
      const Corpus pred = load_pred(pred_path, nullptr);
      const Corpus train = load(train_path).corpus;
      SeenOptions options;
      options.case_sensitive = !ignore_case;
      options.type_aware = type_aware;
      const auto split = seen_unseen_recall(gold, pred, train, options);
      Output sink(output, out);
      if (output.format == "json") {
        print_json(sink.stream(), to_json(split));
      } else {
        sink.stream() << render_text(split);
      }
      sink.finish();
      return kExitOk;
    }

    auto load_versions = [&] {
      std::vector<Corpus> versions;
      for (const auto& p : version_paths) versions.push_back(load(p).corpus);
      return versions;
    };

    if (*diff_cmd) {
      const auto versions = load_versions();
      DiffOptions options;
      options.raw_labels = raw_labels;
      const auto result = diff_versions(versions, version_names(version_paths, names), options);
      Output sink(output, out);
      if (output.format == "json") {
        print_json(sink.stream(), to_json(result));
      } else {
        sink.stream() << render_text(result);
      }
      sink.finish();
      return kExitOk;
    }

    if (*agree_cmd) {
      const auto versions = load_versions();
      DiffOptions options;
      options.raw_labels = raw_labels;
      const auto partition = agreement(versions, version_names(version_paths, names), options);
      Output sink(output, out);
      if (output.format == "json") {
        print_json(sink.stream(), to_json(partition));
      } else {
        sink.stream() << render_text(partition);
      }
      sink.finish();
      return kExitOk;
    }

    if (*export_cmd) {
      const auto versions = load_versions();
      const MetadataTable metadata = load_metadata(metadata_path);
      DiffOptions options;
      options.raw_labels = raw_labels;
      options.context_window = window;
      if (!metadata_path.empty()) options.metadata = &metadata;
      const auto result = diff_versions(versions, version_names(version_paths, names), options);
      Output sink(output, out);
      if (export_format == "json") {
        nlohmann::json all = nlohmann::json::array();
        for (const auto& r : result.records) all.push_back(to_json(r, result.versions, window));
        print_json(sink.stream(), all);
      } else {
        export_disagreements(result, window, sink.stream());
      }
      sink.finish();
      err << "exported " << result.count() << " disagreement(s)\n";
      return kExitOk;
    }

    if (*apply_cmd) {
      const Corpus base = load(base_path).corpus;
      const auto set = read_disagreements_file(disagreements_path);
      const auto decisions = read_decisions_file(decisions_path);
      const Corpus result = apply_decisions(base, decisions, set.records);
      Output sink(output, out);
      serialize_corpus(result, sink.stream());
      sink.finish();
      return kExitOk;
    }

    if (*adj_stats_cmd) {
      const auto set = read_disagreements_file(disagreements_path);
      std::vector<Decision> latest;
      {
        std::map<std::string, Decision> by_id;
        for (auto& d : read_decisions_file(decisions_path)) by_id[d.diff_id] = std::move(d);
        for (const auto& r : set.records) {
          if (auto it = by_id.find(r.diff_id); it != by_id.end()) latest.push_back(it->second);
        }
      }
      const auto stats = adjudication_stats(set.records, set.versions, latest);
      Output sink(output, out);
      if (output.format == "json") {
        print_json(sink.stream(), to_json(stats));
      } else {
        sink.stream() << render_text(stats);
      }
      sink.finish();
      return kExitOk;
    }

    if (*repair_cmd) {
      if (output.format == "json" && output.path.empty()) {
        throw CLI::ValidationError("--format json", "needs --output for the repaired corpus");
      }
      const Corpus corpus = load(corpus_path).corpus;
      const auto patch = read_patch_file(patch_path);
      const auto result = apply_patch(corpus, patch);
      // The corpus goes to --output (or stdout); statistics to stdout when the
      // corpus went to a file, otherwise to stderr.
      if (output.path.empty()) {
        serialize_corpus(result.corpus, out);
      } else {
        write_corpus_file(result.corpus, output.path);
      }
      std::ostream& stats_out = output.path.empty() ? err : out;
      if (output.format == "json") {
        print_json(stats_out, to_json(result.stats));
      } else {
        stats_out << render_text(result.stats);
      }
      if (!stats_path.empty()) {
        std::ofstream f(stats_path);
        if (!f) throw Error(ErrorCode::kIo, "cannot write " + stats_path);
        print_json(f, to_json(result.stats));
      }
      return kExitOk;
    }

    if (*patch_stats_cmd) {
      const auto stats = patch_stats(read_patch_file(patch_path));
      Output sink(output, out);
      if (output.format == "json") {
        print_json(sink.stream(), to_json(stats));
      } else {
        sink.stream() << render_text(stats);
      }
      sink.finish();
      return kExitOk;
    }

    if (*detect_cmd) {
      const Corpus corpus = load(corpus_path).corpus;
      const MetadataTable metadata = load_metadata(metadata_path);
      std::vector<CandidateLocation> headline, hyphen;
      if (detect_kind != "hyphen") {
        if (metadata_path.empty()) {
          err << "note: no --metadata given; the headline detector needs sports data reports\n";
        }
        headline = detect_headline_boundary_candidates(corpus, metadata, {window_min, window_max});
      }
      if (detect_kind != "headline") hyphen = detect_hyphen_candidates(corpus);
      Output sink(output, out);
      std::ostream& o = sink.stream();
      if (output.format == "json") {
        print_json(o, {{"headline_boundary", to_json(headline)}, {"hyphen", to_json(hyphen)}});
      } else {
        auto section = [&](const char* title, const std::vector<CandidateLocation>& cs) {
          o << title << ": " << cs.size() << "\n";
          for (const auto& c : cs) {
            o << "  doc " << c.doc_index << " sentence " << c.sentence_index << " token "
              << c.token_index << "  " << c.surface << "  (" << c.reason << ")\n";
          }
        };
        if (detect_kind != "hyphen") section("headline boundary candidates", headline);
        if (detect_kind != "headline") section("hyphen candidates", hyphen);
      }
      sink.finish();
      return kExitOk;
    }

    if (*serve_cmd) {
      if (!static_dir.empty()) server_options.static_dir = static_dir;
      AdjudicationSession session(read_disagreements_file(disagreements_path), log_path);
      for (const auto& w : session.load_warnings()) err << "warning: " << w << "\n";
      AdjudicationServer server(session, server_options);
      const int port = server.bind();
      const Progress p = session.progress();
      out << "listening on http://" << server_options.host << ":" << port << "/api/v1 (" << p.decided
          << "/" << p.total << " decided)" << std::endl;
      g_server = &server;
      std::signal(SIGINT, handle_stop_signal);
      std::signal(SIGTERM, handle_stop_signal);
      server.serve();
      g_server = nullptr;
      return kExitOk;
    }

    if (*stats_cmd) {
      const auto parsed = load(corpus_path);
      const MetadataTable metadata = load_metadata(metadata_path);
      const auto c = census(parsed.corpus, metadata);
      const std::vector<Domain> domains = {Domain::kWorldEvents, Domain::kEconomy, Domain::kSports,
                                           Domain::kUnknown};
      const std::vector<Format> formats = {Format::kTextArticle, Format::kDataReport, Format::kHybrid,
                                           Format::kUnknown};
      auto present_d = [&](Domain d) { return d != Domain::kUnknown || c.count(d, std::nullopt) > 0; };
      auto present_f = [&](Format f) { return f != Format::kUnknown || c.count(std::nullopt, f) > 0; };
      Output sink(output, out);
      std::ostream& o = sink.stream();
      if (output.format == "json") {
        nlohmann::json by_domain = nlohmann::json::object();
        nlohmann::json by_format = nlohmann::json::object();
        nlohmann::json cells = nlohmann::json::object();
        for (Domain d : domains) {
          if (!present_d(d)) continue;
          by_domain[std::string(domain_key(d))] = c.count(d, std::nullopt);
          for (Format f : formats) {
            if (present_f(f)) cells[std::string(domain_key(d))][std::string(format_key(f))] = c.count(d, f);
          }
        }
        for (Format f : formats) {
          if (present_f(f)) by_format[std::string(format_key(f))] = c.count(std::nullopt, f);
        }
        print_json(o, {{"documents", c.documents},
                       {"sentences", c.sentences},
                       {"tokens", c.tokens},
                       {"by_domain", by_domain},
                       {"by_format", by_format},
                       {"cells", cells}});
      } else {
        std::vector<std::string> header = {"Format"};
        for (Domain d : domains) {
          if (present_d(d)) header.emplace_back(domain_title(d));
        }
        header.emplace_back("Total");
        std::vector<std::vector<std::string>> rows;
        for (Format f : formats) {
          if (!present_f(f)) continue;
          std::vector<std::string> row = {std::string(format_title(f))};
          for (Domain d : domains) {
            if (present_d(d)) row.push_back(std::to_string(c.count(d, f)));
          }
          row.push_back(std::to_string(c.count(std::nullopt, f)));
          rows.push_back(std::move(row));
        }
        std::vector<std::string> total = {"Total"};
        for (Domain d : domains) {
          if (present_d(d)) total.push_back(std::to_string(c.count(d, std::nullopt)));
        }
        total.push_back(std::to_string(c.documents));
        rows.push_back(std::move(total));
        if (output.format == "tsv") {
          auto emit = [&](const std::vector<std::string>& r) {
            for (std::size_t i = 0; i < r.size(); ++i) o << (i ? "\t" : "") << r[i];
            o << '\n';
          };
          emit(header);
          for (const auto& r : rows) emit(r);
        } else {
          detail::TextTable t(header);
          for (auto& r : rows) t.add_row(r);
          o << t.render() << "sentences: " << c.sentences << "\ntokens: " << c.tokens << "\n";
        }
      }
      sink.finish();
      return kExitOk;
    }
  } catch (const CLI::ParseError& e) {
    err << "nerkit: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    err << "nerkit: " << error_code_name(e.code()) << ": " << e.what() << "\n";
    switch (e.code()) {
      case ErrorCode::kIo: return kExitIo;
      case ErrorCode::kInvariantBreach: return kExitInternal;
      default: return kExitFindings;
    }
  } catch (const std::exception& e) {
    err << "nerkit: internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitUsage;
}

}  // namespace nerkit
