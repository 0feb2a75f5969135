#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "demod/frontend.hpp"
#include "demod/parse.hpp"
#include "demod/print.hpp"

namespace py = pybind11;
using namespace demod;

namespace {

struct Theory {
  TheoryFile file;
  std::string source;
};

py::object to_py(const nlohmann::json& j) {
  return py::module_::import("json").attr("loads")(j.dump());
}

RuleSystem make_system(const Theory& t, const std::string& system) {
  if (system == "modulo") return RuleSystem::make(SystemKind::Modulo, t.file.system);
  if (system == "foldunfold") return RuleSystem::make(SystemKind::FoldUnfold, t.file.system);
  if (system == "supernatural")
    return RuleSystem::make(SystemKind::SuperNatural, t.file.system);
  throw Error("unknown rule system: " + system);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "proof kernel and cut-elimination workbench for deduction modulo";

  py::register_exception<Error>(m, "KernelInputError");

  py::class_<Theory>(m, "Theory")
      .def(py::init([](const std::string& text) {
             return Theory{parse_theory(text), text};
           }),
           py::arg("text"))
      .def_property_readonly("source", [](const Theory& t) { return t.source; })
      .def("__repr__", [](const Theory& t) {
        return "<Theory with " + std::to_string(t.file.system.rules.size()) + " rules>";
      });

  m.def("load_theory", [](const std::string& path) {
    return Theory{parse_theory(read_file(path)), path};
  });

  m.def(
      "typecheck",
      [](const Theory& t, const std::string& sequent, const std::string& proof,
         const std::string& system) {
        RuleSystem sys = make_system(t, system);
        Sequent seq = parse_sequent(sequent, t.file.system);
        ProofPtr p = parse_proof(proof, t.file.system);
        CheckResult r = typecheck(p, seq.ctx, seq.goal, sys, t.file.budgets);
        nlohmann::json j;
        j["ok"] = derivation_ok(r);
        j["sequent"] = print_sequent(seq);
        if (!derivation_ok(r)) j["rejection"] = rejection_to_json(rejection_of(r));
        return to_py(j);
      },
      py::arg("theory"), py::arg("sequent"), py::arg("proof"), py::arg("system") = "modulo");

  m.def(
      "normalize_proof",
      [](const Theory& t, const std::string& proof, std::size_t fuel) {
        ProofPtr p = parse_proof(proof, t.file.system);
        ReductionTrace tr = normalize_proof(p, fuel ? fuel : t.file.budgets.fuel);
        nlohmann::json j;
        j["steps"] = tr.steps.size();
        j["final"] = print_proof(tr.final);
        j["outcome"] = tr.outcome == TraceOutcome::Normal
                           ? "normal"
                           : (tr.outcome == TraceOutcome::Cycle ? "cycle" : "fuel-exhausted");
        if (tr.outcome == TraceOutcome::Cycle) j["first_seen"] = tr.cycle_index;
        return to_py(j);
      },
      py::arg("theory"), py::arg("proof"), py::arg("fuel") = 0);

  m.def(
      "normalize_prop",
      [](const Theory& t, const std::string& prop, std::size_t fuel) {
        auto r = normalize(parse_prop(prop, t.file.system), t.file.system,
                           fuel ? fuel : t.file.budgets.fuel);
        nlohmann::json j;
        j["value"] = print_prop(r.value);
        j["steps"] = r.steps.size();
        j["normal"] = r.status == NormalizeStatus::NormalForm;
        return to_py(j);
      },
      py::arg("theory"), py::arg("prop"), py::arg("fuel") = 0);

  m.def(
      "strongly_normalizing",
      [](const Theory& t, const std::string& proof, std::size_t fuel) {
        SnResult r = strongly_normalizing(parse_proof(proof, t.file.system),
                                          fuel ? fuel : t.file.budgets.sn_fuel);
        nlohmann::json j;
        j["status"] = r.status == SnStatus::SN ? "sn"
                                               : (r.status == SnStatus::NotSN ? "not-sn"
                                                                              : "unknown");
        j["visited"] = r.visited;
        return to_py(j);
      },
      py::arg("theory"), py::arg("proof"), py::arg("fuel") = 0);

  m.def(
      "search",
      [](const Theory& t, const std::string& sequent, std::size_t depth,
         const std::string& system) -> py::object {
        RuleSystem sys = make_system(t, system);
        Sequent seq = parse_sequent(sequent, t.file.system);
        auto proof = search_cutfree(seq, sys, depth ? depth : t.file.budgets.search_depth,
                                    t.file.budgets);
        if (!proof) return py::none();
        return py::str(print_proof(*proof));
      },
      py::arg("theory"), py::arg("sequent"), py::arg("depth") = 0,
      py::arg("system") = "modulo");

  m.def(
      "derive_rules",
      [](const Theory& t, const std::string& rule_name) {
        const RewriteRule* rule = t.file.system.find(rule_name);
        if (!rule) throw Error("unknown rule: " + rule_name);
        nlohmann::json j;
        FoldUnfoldRules fu = derive_fold_unfold(*rule);
        j["fold"] = print_derived_rule(fu.fold);
        j["unfold"] = print_derived_rule(fu.unfold);
        SuperDerived sd = derive_supernatural(*rule);
        j["intro"] = print_derived_rule(sd.intro);
        nlohmann::json elims = nlohmann::json::array();
        for (const auto& e : sd.elims) elims.push_back(print_derived_rule(e));
        j["elims"] = elims;
        return to_py(j);
      },
      py::arg("theory"), py::arg("rule"));

  m.def("tva_laws", [](const std::string& algebra) {
    return to_py(law_report_to_json(check_laws(*make_algebra(algebra))));
  });

  m.def(
      "find_model",
      [](const Theory& t, const std::string& algebra, std::size_t size) -> py::object {
        auto M = find_model(t.file.system, make_algebra(algebra), size);
        if (!M) return py::none();
        return to_py(model_to_json(*M));
      },
      py::arg("theory"), py::arg("algebra"), py::arg("size") = 1);

  m.def(
      "super_consistency",
      [](const Theory& t, std::size_t size) {
        auto rep = super_consistency_report(t.file.system, default_battery(), size,
                                            t.file.budgets);
        nlohmann::json j;
        j["all_found"] = rep.all_found;
        nlohmann::json entries = nlohmann::json::array();
        for (const auto& e : rep.entries)
          entries.push_back(
              nlohmann::json{{"algebra", e.algebra}, {"model_found", e.model_found}});
        j["entries"] = entries;
        j["not_sn"] = rep.not_sn.has_value();
        if (rep.not_sn) j["loop_witness"] = print_proof(rep.not_sn->witness);
        return to_py(j);
      },
      py::arg("theory"), py::arg("size") = 1);

  m.def(
      "context_check",
      [](const Theory& t, const std::string& goal, std::size_t depth) {
        RuleSystem sys = RuleSystem::make(SystemKind::Modulo, t.file.system);
        SharpenedReport r = sharpened_completeness_check(
            parse_sequent(goal, t.file.system), sys,
            depth ? depth : t.file.budgets.search_depth, {}, t.file.budgets);
        nlohmann::json j;
        j["contexts"] = r.contexts;
        j["formulas"] = r.formulas;
        j["carrier"] = r.carrier;
        j["failures"] = r.failures.size();
        j["heyting_ok"] = r.laws.heyting_ok;
        j["goal_valid"] = r.goal_valid;
        return to_py(j);
      },
      py::arg("theory"), py::arg("goal"), py::arg("depth") = 0);

  m.def(
      "agree",
      [](const Theory& t, const std::vector<std::string>& formulas, std::size_t hyps,
         std::size_t depth) {
        std::vector<PropPtr> props;
        for (const auto& f : formulas) props.push_back(parse_prop(f, t.file.system));
        AgreementReport r = three_formalism_agreement(t.file.system, props, hyps, depth,
                                                      t.file.budgets);
        nlohmann::json j;
        j["sequents"] = r.rows.size();
        j["disagreements"] = r.disagreements;
        return to_py(j);
      },
      py::arg("theory"), py::arg("formulas"), py::arg("hyps") = 2, py::arg("depth") = 6);

  m.def("run", [](const std::vector<std::string>& args) {
    CommandResult r = run_command(args);
    nlohmann::json j;
    j["exit_code"] = r.exit_code;
    j["text"] = r.text;
    j["report"] = r.report;
    return to_py(j);
  });
}
