#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "hopadv/attack.hpp"
#include "hopadv/builtin_annotator.hpp"
#include "hopadv/cli.hpp"
#include "hopadv/corpus.hpp"
#include "hopadv/errors.hpp"
#include "hopadv/evaluate.hpp"
#include "hopadv/fixture_store.hpp"

namespace py = pybind11;
using namespace hopadv;

namespace {

py::dict annotate_text(const std::string& textstr, const std::string& resources_dir) {
  Lexicons lexicons;
  if (!resources_dir.empty())
    lexicons = Lexicons::load(resources_dir + "/pos_lexicon.json",
                              resources_dir + "/ner_lexicon.json");
  BuiltinAnnotator annotator(lexicons);
  TextAnnotations ann = annotator.annotate(textstr);

  py::dict out;
  py::list tokens;
  for (const auto& t : ann.tokens) {
    py::dict tok;
    tok["surface"] = t.surface;
    tok["start"] = t.char_start;
    tok["end"] = t.char_end;
    tok["pos"] = t.pos;
    tok["lemma"] = t.lemma;
    tokens.append(tok);
  }
  py::list entities;
  for (const auto& m : ann.entities) {
    py::dict ent;
    ent["surface"] = m.surface;
    ent["ner"] = m.ner_type;
    ent["first"] = m.first_token;
    ent["last"] = m.last_token;
    entities.append(ent);
  }
  py::list triples;
  for (const auto& t : ann.triples) {
    py::dict triple;
    triple["subject"] = t.subject.surface;
    triple["relation"] = t.relation.surface;
    triple["object"] = t.object.surface;
    triples.append(triple);
  }
  out["tokens"] = tokens;
  out["entities"] = entities;
  out["parse"] = tree_to_bracketed(ann.tree, ann.tokens);
  out["triples"] = triples;
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Reasoning-chain adversarial attack toolkit for multi-hop QA datasets";

  py::class_<Paragraph>(m, "Paragraph")
      .def(py::init<>())
      .def_readwrite("title", &Paragraph::title)
      .def_readwrite("sentences", &Paragraph::sentences);

  py::class_<Example>(m, "Example")
      .def(py::init<>())
      .def_readwrite("id", &Example::id)
      .def_readwrite("question", &Example::question)
      .def_readwrite("answer", &Example::answer)
      .def_readwrite("context", &Example::context)
      .def_readwrite("supporting_facts", &Example::supporting_facts)
      .def_readwrite("type_tag", &Example::type_tag)
      .def_readwrite("level_tag", &Example::level_tag)
      .def("__repr__",
           [](const Example& ex) { return "<Example id=" + ex.id + ">"; });

  m.def("load_dataset", &load_dataset, py::arg("path"));
  m.def("write_dataset", &write_dataset, py::arg("examples"), py::arg("path"));
  m.def("validate_example", &validate_example, py::arg("example"));
  m.def("normalize_answer", &normalize_answer, py::arg("text"));

  m.def(
      "answer_metrics",
      [](const std::string& pred, const std::string& gold) {
        AnswerScore s = answer_metrics(pred, gold);
        return py::make_tuple(s.em, s.f1);
      },
      py::arg("prediction"), py::arg("gold"));
  m.def(
      "supporting_metrics",
      [](const std::vector<SupportingFact>& pred, const std::vector<SupportingFact>& gold) {
        AnswerScore s = supporting_metrics(pred, gold);
        return py::make_tuple(s.em, s.f1);
      },
      py::arg("prediction"), py::arg("gold"));
  m.def(
      "evaluate_files",
      [](const std::string& pred_path, const std::string& gold_path) {
        MetricBlock b = evaluate_predictions(PredictionFile::load(pred_path),
                                             load_dataset(gold_path));
        py::dict out;
        out["ans_em"] = b.ans_em;
        out["ans_f1"] = b.ans_f1;
        out["supp_em"] = b.supp_em;
        out["supp_f1"] = b.supp_f1;
        out["joint_em"] = b.joint_em;
        out["joint_f1"] = b.joint_f1;
        return out;
      },
      py::arg("predictions"), py::arg("gold"));

  m.def("annotate_text", &annotate_text, py::arg("text"), py::arg("resources_dir") = "");

  m.def(
      "run_cli", [](const std::vector<std::string>& args) { return run_command(args); },
      py::arg("args"), "Run a CLI subcommand in-process; returns the exit code.");

  m.def(
      "mix_datasets",
      [](const std::string& original, const std::string& adversarial, double fraction,
         uint64_t seed, const std::string& out, bool include_original) {
        auto mixed = mix_retraining_set(load_dataset(original), load_dataset(adversarial),
                                        fraction, seed, include_original);
        write_dataset(mixed, out);
        return mixed.size();
      },
      py::arg("original"), py::arg("adversarial"), py::arg("fraction"), py::arg("seed"),
      py::arg("out"), py::arg("include_original") = true);

  py::register_exception<ConfigError>(m, "ConfigError");
  py::register_exception<DataError>(m, "DataError");
}
