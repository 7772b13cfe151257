#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "nerkit/cli.h"
#include "nerkit/conll_io.h"
#include "nerkit/diff.h"
#include "nerkit/error.h"
#include "nerkit/repair.h"
#include "nerkit/scoring.h"
#include "nerkit/taxonomy.h"

namespace py = pybind11;
using namespace nerkit;

namespace {

// JSON values cross the boundary as Python objects via the json module.
py::object to_python(const nlohmann::json& j) {
  return py::module_::import("json").attr("loads")(j.dump());
}

nlohmann::json from_python(const py::handle& obj) {
  py::object dumped = py::module_::import("json").attr("dumps")(obj);
  return nlohmann::json::parse(dumped.cast<std::string>());
}

ParseOptions options(std::optional<std::string> encoding, std::optional<std::size_t> ner_column) {
  ParseOptions o;
  if (encoding) o.encoding = parse_encoding(*encoding);
  o.columns.ner_column = ner_column;
  return o;
}

py::list mentions_list(const Corpus& c) {
  py::list out;
  for (const auto& m : corpus_mentions(c)) {
    py::dict d;
    d["doc_index"] = m.doc_index;
    d["sentence_index"] = m.sentence_index;
    d["start"] = m.start_token;
    d["end"] = m.end_token;
    d["type"] = m.type.str();
    d["surface"] = m.surface;
    out.append(d);
  }
  return out;
}

py::list violations_list(const std::vector<TransitionViolation>& vs) {
  py::list out;
  for (const auto& v : vs) {
    py::dict d;
    d["doc_index"] = v.location.doc_index;
    d["sentence_index"] = v.location.sentence_index;
    d["token_index"] = v.location.token_index;
    d["source_line"] = v.location.source_line;
    d["prev_label"] = v.prev_label.str();
    d["label"] = v.cur_label.str();
    d["message"] = describe(v);
    out.append(d);
  }
  return out;
}

DiffOptions diff_options(bool raw_labels, std::size_t window) {
  DiffOptions o;
  o.raw_labels = raw_labels;
  o.context_window = window;
  return o;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "CoNLL-03 style NER corpus auditing";

  // The module keeps the exception type alive; a plain handle avoids a
  // static destructor running after the interpreter is gone.
  static PyObject* error = py::exception<Error>(m, "NerkitError").ptr();
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::set_error(py::handle(error), (std::string(error_code_name(e.code())) + ": " + e.what()).c_str());
    }
  });

  py::class_<Corpus>(m, "Corpus")
      .def_property_readonly("encoding", [](const Corpus& c) { return std::string(encoding_name(c.encoding)); })
      .def_property_readonly("document_count", [](const Corpus& c) { return c.documents.size(); })
      .def_property_readonly("sentence_count", &Corpus::sentence_count)
      .def_property_readonly("token_count", &Corpus::token_count)
      .def("mentions", &mentions_list, "Mentions in document order.")
      .def("violations", [](const Corpus& c) { return violations_list(validate_transitions(c)); })
      .def("serialize", [](const Corpus& c) { return serialize_corpus(c); })
      .def("__repr__", [](const Corpus& c) {
        return "<Corpus " + std::to_string(c.documents.size()) + " documents, " +
               std::to_string(c.token_count()) + " tokens, " + std::string(encoding_name(c.encoding)) + ">";
      });

  m.def("parse", [](const std::string& text, std::optional<std::string> encoding,
                    std::optional<std::size_t> ner_column) {
          return parse_corpus_string(text, options(encoding, ner_column)).corpus;
        },
        py::arg("text"), py::arg("encoding") = py::none(), py::arg("ner_column") = py::none());
  m.def("read", [](const std::string& path, std::optional<std::string> encoding,
                   std::optional<std::size_t> ner_column) {
          return parse_corpus_file(path, options(encoding, ner_column)).corpus;
        },
        py::arg("path"), py::arg("encoding") = py::none(), py::arg("ner_column") = py::none());
  m.def("convert", [](const Corpus& c, const std::string& to) { return convert_encoding(c, parse_encoding(to)); },
        py::arg("corpus"), py::arg("encoding"));
  m.def("repair_transitions", [](const Corpus& c) {
    Corpus out = c;
    const std::size_t n = repair_transitions(out);
    return py::make_tuple(out, n);
  });

  m.def("score", [](const Corpus& g, const Corpus& p) { return to_python(to_json(score(g, p))); },
        py::arg("gold"), py::arg("pred"));
  m.def("classify_errors", [](const Corpus& g, const Corpus& p) { return to_python(to_json(classify_errors(g, p))); },
        py::arg("gold"), py::arg("pred"));
  m.def("count_mention_errors",
        [](const Corpus& g, const Corpus& p) { return to_python(to_json(count_mention_errors(g, p))); },
        py::arg("gold"), py::arg("pred"));

  m.def("diff", [](const std::vector<Corpus>& versions, std::vector<std::string> names, bool raw_labels,
                   std::size_t window) {
          return to_python(to_json(diff_versions(versions, std::move(names), diff_options(raw_labels, window))));
        },
        py::arg("versions"), py::arg("names") = std::vector<std::string>{}, py::arg("raw_labels") = false,
        py::arg("context_window") = 3);
  m.def("agreement", [](const std::vector<Corpus>& versions, std::vector<std::string> names, bool raw_labels) {
          return to_python(to_json(agreement(versions, std::move(names), diff_options(raw_labels, 3))));
        },
        py::arg("versions"), py::arg("names") = std::vector<std::string>{}, py::arg("raw_labels") = false);

  m.def("apply_patch", [](const Corpus& c, const py::list& ops) {
          std::vector<RepairOp> patch;
          for (const auto& op : ops) patch.push_back(repair_op_from_json(from_python(op)));
          auto r = apply_patch(c, patch);
          return py::make_tuple(std::move(r.corpus), to_python(to_json(r.stats)));
        },
        py::arg("corpus"), py::arg("patch"));

  m.def("run_cli", [](std::vector<std::string> args) {
          args.insert(args.begin(), "nerkit");
          std::ostringstream out, err;
          int code;
          {
            py::gil_scoped_release release;
            code = run_cli(args, out, err);
          }
          return py::make_tuple(code, out.str(), err.str());
        },
        py::arg("args"), "Runs a nerkit subcommand; returns (exit_code, stdout, stderr).");
}
