#include "demod/frontend.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "demod/parse.hpp"
#include "demod/print.hpp"

namespace demod {

using nlohmann::json;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open file: " + path);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

json model_to_json(const Model& M) {
  json j;
  j["algebra"] = M.algebra->name();
  json domains = json::object();
  for (const auto& [sort, dom] : M.domains) {
    domains[sort] = json{{"size", dom.elems.size()}, {"truncated_nat", dom.truncated_nat}};
  }
  j["domains"] = domains;
  auto tuple_key = [](const std::vector<std::size_t>& t) {
    std::string k = "(";
    for (std::size_t i = 0; i < t.size(); ++i) k += (i ? "," : "") + std::to_string(t[i]);
    return k + ")";
  };
  json preds = json::object();
  for (const auto& [name, interp] : M.preds) {
    json entries = json::object();
    for (const auto& [t, v] : interp.table) entries[tuple_key(t)] = M.algebra->elem_name(v);
    preds[name] = entries;
  }
  j["predicates"] = preds;
  json funcs = json::object();
  for (const auto& [name, interp] : M.funcs) {
    json entries = json::object();
    for (const auto& [t, v] : interp.table)
      entries[tuple_key(t)] = v ? json(*v) : json("overflow");
    funcs[name] = entries;
  }
  j["functions"] = funcs;
  return j;
}

json law_report_to_json(const LawReport& rep) {
  json laws = json::array();
  for (const auto& l : rep.laws)
    laws.push_back(json{{"law", l.law}, {"pass", l.pass}, {"counterexample", l.counterexample}});
  return json{{"algebra", rep.algebra},
              {"laws", laws},
              {"tva_ok", rep.tva_ok},
              {"antisymmetry", rep.antisymmetry},
              {"heyting_ok", rep.heyting_ok}};
}

json rejection_to_json(const Rejection& r) {
  return json{{"reason", reject_reason_name(r.reason)}, {"path", r.path}, {"message", r.message}};
}

namespace {

std::string model_to_text(const Model& M) {
  std::string out;
  for (const auto& [name, interp] : M.preds) {
    for (const auto& [t, v] : interp.table) {
      out += "  " + name;
      if (!t.empty()) {
        out += "(";
        for (std::size_t i = 0; i < t.size(); ++i)
          out += (i ? "," : "") + std::to_string(t[i]);
        out += ")";
      }
      out += " = " + M.algebra->elem_name(v) + "\n";
    }
  }
  for (const auto& [name, interp] : M.funcs) {
    for (const auto& [t, v] : interp.table) {
      out += "  " + name;
      if (!t.empty()) {
        out += "(";
        for (std::size_t i = 0; i < t.size(); ++i)
          out += (i ? "," : "") + std::to_string(t[i]);
        out += ")";
      }
      out += " = " + (v ? std::to_string(*v) : std::string("overflow")) + "\n";
    }
  }
  return out;
}

SystemKind parse_system_name(const std::string& name) {
  if (name == "modulo") return SystemKind::Modulo;
  if (name == "foldunfold") return SystemKind::FoldUnfold;
  if (name == "supernatural") return SystemKind::SuperNatural;
  throw CLI::ValidationError("--system", "unknown rule system: " + name);
}

struct CommonOpts {
  std::string theory_path;
  bool json_out = false;
  std::vector<std::string> budget_overrides;
};

Budgets effective_budgets(const TheoryFile& tf, const std::vector<std::string>& overrides) {
  Budgets b = tf.budgets;
  for (const auto& o : overrides) {
    auto eq = o.find('=');
    if (eq == std::string::npos) throw Error("budget override must look like fuel=1000: " + o);
    b.apply_override(o.substr(0, eq), std::stoul(o.substr(eq + 1)));
  }
  return b;
}

struct ProofSelection {
  std::vector<ProofEntry> proofs;
  SystemKind system;
};

ProofSelection load_proofs(const RewriteSystem& theory, const std::string& proof_path,
                           const std::string& system_flag, const std::string& name_filter) {
  ProofFile pf = parse_proof_file(read_file(proof_path), theory);
  ProofSelection sel;
  sel.system = SystemKind::Modulo;
  if (pf.system) sel.system = *pf.system;
  if (!system_flag.empty()) sel.system = parse_system_name(system_flag);
  for (auto& e : pf.proofs)
    if (name_filter.empty() || e.name == name_filter) sel.proofs.push_back(std::move(e));
  if (sel.proofs.empty())
    throw Error(name_filter.empty() ? "proof file contains no proofs"
                                    : "no proof named " + name_filter);
  return sel;
}

}  // namespace

CommandResult run_command(const std::vector<std::string>& args) {
  CLI::App app{"deduction-modulo proof kernel and cut-elimination workbench"};
  app.require_subcommand(1);

  CommonOpts common;
  std::string proof_path, system_flag, name_filter, goal_text, algebra_name, lattice_path;
  std::string formulas_text, battery_name = "default", rule_name, kind = "both";
  std::string prop_text, term_text;
  std::size_t depth_flag = 0, fuel_flag = 0, size_flag = 1, hyps_flag = 2;
  bool have_depth = false, have_fuel = false;

  auto add_common = [&](CLI::App* cmd, bool needs_theory = true) {
    if (needs_theory)
      cmd->add_option("--theory", common.theory_path, "theory file (.dmt)")->required();
    cmd->add_flag("--json", common.json_out, "machine-readable report");
    cmd->add_option("--budget", common.budget_overrides,
                    "budget override key=value (repeatable)");
  };

  CLI::App* check = app.add_subcommand("check", "typecheck proofs against their sequents");
  add_common(check);
  check->add_option("--proof", proof_path, "proof file (.prf)")->required();
  check->add_option("--system", system_flag, "modulo | foldunfold | supernatural");
  check->add_option("--name", name_filter, "check a single named proof");

  CLI::App* norm = app.add_subcommand("normalize", "reduce proofs (or a proposition/term)");
  add_common(norm);
  norm->add_option("--proof", proof_path, "proof file (.prf)");
  norm->add_option("--name", name_filter, "normalize a single named proof");
  norm->add_option("--prop", prop_text, "proposition text to rewrite-normalize");
  norm->add_option("--term", term_text, "term text to rewrite-normalize");
  norm->add_option("--fuel", fuel_flag, "step budget")->capture_default_str();
  norm->callback([&] { have_fuel = norm->count("--fuel") > 0; });

  CLI::App* sn = app.add_subcommand("sn", "probe strong normalization of proofs");
  add_common(sn);
  sn->add_option("--proof", proof_path, "proof file (.prf)")->required();
  sn->add_option("--name", name_filter, "probe a single named proof");
  sn->add_option("--fuel", fuel_flag, "exploration budget");
  sn->callback([&] { have_fuel = sn->count("--fuel") > 0; });

  CLI::App* search = app.add_subcommand("search", "bounded cut-free proof search");
  add_common(search);
  search->add_option("--goal", goal_text, "sequent, e.g. \"p : P |- R\"")->required();
  search->add_option("--system", system_flag, "modulo | foldunfold | supernatural");
  search->add_option("--depth", depth_flag, "search depth");
  search->callback([&] { have_depth = search->count("--depth") > 0; });

  CLI::App* derive = app.add_subcommand("derive-rules", "fold/unfold and supernatural rules");
  add_common(derive);
  derive->add_option("--rule", rule_name, "derive for one rule only");
  derive->add_option("--kind", kind, "foldunfold | supernatural | both")
      ->check(CLI::IsMember({"foldunfold", "supernatural", "both"}));

  CLI::App* laws = app.add_subcommand("tva-laws", "truth values algebra law report");
  add_common(laws, false);
  laws->add_option("--algebra", algebra_name, "bool2 | chain3 | diamond4 | doubled_top");
  laws->add_option("--lattice", lattice_path, "lattice file (.lat)");

  CLI::App* mf = app.add_subcommand("model-find", "exhaustive model search");
  add_common(mf);
  mf->add_option("--algebra", algebra_name, "algebra name or .lat file")->required();
  mf->add_option("--size", size_flag, "domain size")->capture_default_str();

  CLI::App* sc = app.add_subcommand("super-consistency", "model battery report");
  add_common(sc);
  sc->add_option("--battery", battery_name, "battery name (default)");
  sc->add_option("--size", size_flag, "domain size")->capture_default_str();

  CLI::App* cmctx = app.add_subcommand("context-model", "context-set model and sharpened check");
  add_common(cmctx);
  cmctx->add_option("--goal", goal_text, "goal sequent")->required();
  cmctx->add_option("--depth", depth_flag, "search depth");
  cmctx->callback([&] { have_depth = cmctx->count("--depth") > 0; });

  CLI::App* agree = app.add_subcommand("agree", "three-formalism provability agreement");
  add_common(agree);
  agree->add_option("--formulas", formulas_text, "semicolon-separated conclusions")->required();
  agree->add_option("--hyps", hyps_flag, "max hypotheses per context")->capture_default_str();
  agree->add_option("--depth", depth_flag, "search depth");
  agree->callback([&] { have_depth = agree->count("--depth") > 0; });

  CommandResult res;
  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    std::ostringstream out;
    res.exit_code = (app.exit(e, out, out) == 0) ? 0 : 2;
    res.text = out.str();
    return res;
  }

  try {
    json rep;
    std::string text;
    int exit_code = 0;

    TheoryFile tf;
    Budgets budgets = Budgets::from_env();
    if (!common.theory_path.empty()) {
      tf = parse_theory(read_file(common.theory_path));
      budgets = effective_budgets(tf, common.budget_overrides);
    } else {
      for (const auto& o : common.budget_overrides) {
        auto eq = o.find('=');
        if (eq == std::string::npos) throw Error("bad budget override: " + o);
        budgets.apply_override(o.substr(0, eq), std::stoul(o.substr(eq + 1)));
      }
    }

    if (*check) {
      auto sel = load_proofs(tf.system, proof_path, system_flag, name_filter);
      RuleSystem system = RuleSystem::make(sel.system, tf.system);
      rep["command"] = "check";
      rep["system"] = system_name(system.kind);
      json rows = json::array();
      bool all_ok = true;
      for (const auto& e : sel.proofs) {
        CheckResult r = typecheck(e.proof, e.seq.ctx, e.seq.goal, system, budgets);
        json row{{"name", e.name}, {"sequent", print_sequent(e.seq)}};
        row["ok"] = derivation_ok(r);
        if (!derivation_ok(r)) {
          row["rejection"] = rejection_to_json(rejection_of(r));
          all_ok = false;
          text += e.name + ": REJECTED (" + rejection_of(r).message + ")\n";
        } else {
          text += e.name + ": ok  " + print_sequent(e.seq) + "\n";
        }
        rows.push_back(std::move(row));
      }
      rep["proofs"] = rows;
      rep["ok"] = all_ok;
      exit_code = all_ok ? 0 : 1;
    } else if (*norm) {
      std::size_t fuel = have_fuel ? fuel_flag : budgets.fuel;
      rep["command"] = "normalize";
      if (!prop_text.empty() || !term_text.empty()) {
        if (!prop_text.empty()) {
          auto r = normalize(parse_prop(prop_text, tf.system), tf.system, fuel);
          rep["input"] = prop_text;
          rep["status"] = r.status == NormalizeStatus::NormalForm ? "normal" : "fuel-exhausted";
          rep["steps"] = r.steps.size();
          rep["value"] = print_prop(r.value);
          text += print_prop(r.value) + "\n";
          exit_code = 0;
        } else {
          auto r = normalize(parse_term(term_text, tf.system), tf.system, fuel);
          rep["input"] = term_text;
          rep["status"] = r.status == NormalizeStatus::NormalForm ? "normal" : "fuel-exhausted";
          rep["steps"] = r.steps.size();
          rep["value"] = print_term(r.value);
          text += print_term(r.value) + "\n";
          exit_code = 0;
        }
      } else {
        if (proof_path.empty()) throw Error("normalize needs --proof, --prop or --term");
        auto sel = load_proofs(tf.system, proof_path, "", name_filter);
        json rows = json::array();
        bool all_normal = true;
        for (const auto& e : sel.proofs) {
          ReductionTrace t = normalize_proof(e.proof, fuel);
          json row{{"name", e.name}, {"steps", t.steps.size()}};
          switch (t.outcome) {
            case TraceOutcome::Normal:
              row["outcome"] = "normal";
              row["final"] = print_proof(t.final);
              text += e.name + ": normal after " + std::to_string(t.steps.size()) +
                      " steps: " + print_proof(t.final) + "\n";
              break;
            case TraceOutcome::Cycle:
              row["outcome"] = "cycle";
              row["cycle_at_step"] = t.steps.size();
              row["first_seen"] = t.cycle_index;
              all_normal = false;
              text += e.name + ": cycle at step " + std::to_string(t.steps.size()) +
                      " (repeats the proof first seen at index " +
                      std::to_string(t.cycle_index) + ")\n";
              break;
            case TraceOutcome::FuelExhausted:
              row["outcome"] = "fuel-exhausted";
              all_normal = false;
              text += e.name + ": fuel exhausted after " + std::to_string(t.steps.size()) +
                      " steps\n";
              break;
          }
          rows.push_back(std::move(row));
        }
        rep["proofs"] = rows;
        exit_code = all_normal ? 0 : 1;
      }
    } else if (*sn) {
      std::size_t fuel = have_fuel ? fuel_flag : budgets.sn_fuel;
      auto sel = load_proofs(tf.system, proof_path, "", name_filter);
      rep["command"] = "sn";
      json rows = json::array();
      bool all_sn = true;
      for (const auto& e : sel.proofs) {
        SnResult r = strongly_normalizing(e.proof, fuel);
        json row{{"name", e.name}, {"visited", r.visited}};
        if (r.status == SnStatus::SN) {
          row["status"] = "sn";
          text += e.name + ": strongly normalizing (" + std::to_string(r.visited) +
                  " proofs explored)\n";
        } else if (r.status == SnStatus::NotSN) {
          row["status"] = "not-sn";
          json loop = json::array();
          for (const auto& q : r.loop_prefix) loop.push_back(print_proof(q));
          row["loop"] = loop;
          all_sn = false;
          text += e.name + ": NOT strongly normalizing (reduction loop of length " +
                  std::to_string(r.loop_prefix.size()) + ")\n";
        } else {
          row["status"] = "unknown";
          all_sn = false;
          text += e.name + ": unknown within fuel\n";
        }
        rows.push_back(std::move(row));
      }
      rep["proofs"] = rows;
      exit_code = all_sn ? 0 : 1;
    } else if (*search) {
      std::size_t depth = have_depth ? depth_flag : budgets.search_depth;
      Sequent seq = parse_sequent(goal_text, tf.system);
      SystemKind k = system_flag.empty() ? SystemKind::Modulo : parse_system_name(system_flag);
      RuleSystem system = RuleSystem::make(k, tf.system);
      auto proof = search_cutfree(seq, system, depth, budgets);
      rep["command"] = "search";
      rep["sequent"] = print_sequent(seq);
      rep["depth"] = depth;
      rep["system"] = system_name(k);
      rep["found"] = proof.has_value();
      if (proof) {
        rep["proof"] = print_proof(*proof);
        text += print_proof(*proof) + "\n";
        exit_code = 0;
      } else {
        text += "no cut-free proof within depth " + std::to_string(depth) + "\n";
        exit_code = 1;
      }
    } else if (*derive) {
      rep["command"] = "derive-rules";
      json rows = json::array();
      for (const auto& r : tf.system.rules) {
        if (!rule_name.empty() && r.name != rule_name) continue;
        if (r.kind != RuleKind::PropRule)
          throw Error("rule " + r.name + " is a term rule; derived rules exist only for "
                      "proposition rules");
        json row{{"rule", r.name}};
        text += "rule " + r.name + ":\n";
        if (kind != "supernatural") {
          FoldUnfoldRules fu = derive_fold_unfold(r);
          row["fold"] = print_derived_rule(fu.fold);
          row["unfold"] = print_derived_rule(fu.unfold);
          text += "\n" + print_derived_rule(fu.fold) + "\n" + print_derived_rule(fu.unfold);
        }
        if (kind != "foldunfold") {
          SuperDerived sd = derive_supernatural(r);
          row["intro"] = print_derived_rule(sd.intro);
          text += "\n" + print_derived_rule(sd.intro);
          json elims = json::array();
          for (const auto& e : sd.elims) {
            elims.push_back(print_derived_rule(e));
            text += "\n" + print_derived_rule(e);
          }
          row["elims"] = elims;
        }
        rows.push_back(std::move(row));
      }
      if (rows.empty()) throw Error("no matching proposition rule");
      rep["rules"] = rows;
      exit_code = 0;
    } else if (*laws) {
      TvaPtr B;
      if (!lattice_path.empty())
        B = make_algebra(parse_lattice(read_file(lattice_path)));
      else if (!algebra_name.empty())
        B = make_algebra(algebra_name);
      else
        throw Error("tva-laws needs --algebra or --lattice");
      LawReport r = check_laws(*B);
      rep["command"] = "tva-laws";
      rep.update(law_report_to_json(r));
      for (const auto& l : r.laws)
        text += l.law + ": " + (l.pass ? "pass" : "FAIL (" + l.counterexample + ")") + "\n";
      text += std::string("truth values algebra: ") + (r.tva_ok ? "yes" : "NO") + "\n";
      text += std::string("heyting algebra: ") + (r.heyting_ok ? "yes" : "no") + "\n";
      exit_code = r.tva_ok ? 0 : 1;
    } else if (*mf) {
      TvaPtr B = algebra_name.size() > 4 && algebra_name.substr(algebra_name.size() - 4) == ".lat"
                     ? make_algebra(parse_lattice(read_file(algebra_name)))
                     : make_algebra(algebra_name);
      auto M = find_model(tf.system, B, size_flag);
      rep["command"] = "model-find";
      rep["algebra"] = B->name();
      rep["domain_size"] = size_flag;
      rep["found"] = M.has_value();
      if (M) {
        rep["model"] = model_to_json(*M);
        text += "model found in " + B->name() + ":\n" + model_to_text(*M);
        exit_code = 0;
      } else {
        text += "no model in " + B->name() + " at domain size " + std::to_string(size_flag) +
                "\n";
        exit_code = 1;
      }
    } else if (*sc) {
      if (battery_name != "default") throw Error("unknown battery: " + battery_name);
      auto report = super_consistency_report(tf.system, default_battery(), size_flag, budgets);
      rep["command"] = "super-consistency";
      json entries = json::array();
      for (const auto& e : report.entries) {
        json row{{"algebra", e.algebra}, {"model_found", e.model_found}};
        if (e.model) row["model"] = model_to_json(*e.model);
        entries.push_back(std::move(row));
        text += e.algebra + ": " + (e.model_found ? "model found" : "NO MODEL") + "\n";
      }
      rep["entries"] = entries;
      rep["all_found"] = report.all_found;
      rep["note"] =
          "finite-algebra models are necessary-condition checks only; the candidates algebra "
          "is not exhaustively searchable";
      if (report.not_sn) {
        rep["not_sn"] = json{{"rule", report.not_sn->rule},
                             {"witness", print_proof(report.not_sn->witness)},
                             {"proves", print_prop(report.not_sn->proved)},
                             {"loop_length", report.not_sn->loop_prefix.size()}};
        text += "negative evidence: proof reduction loops on " +
                print_proof(report.not_sn->witness) + " (rule " + report.not_sn->rule + ")\n";
      }
      text += std::to_string(std::count_if(report.entries.begin(), report.entries.end(),
                                           [](const SuperConsistencyEntry& e) {
                                             return e.model_found;
                                           })) +
              "/" + std::to_string(report.entries.size()) + " algebras with models\n";
      exit_code = report.all_found ? 0 : 1;
    } else if (*cmctx) {
      std::size_t depth = have_depth ? depth_flag : budgets.search_depth;
      Sequent goal = parse_sequent(goal_text, tf.system);
      RuleSystem system = RuleSystem::make(SystemKind::Modulo, tf.system);
      SharpenedReport r = sharpened_completeness_check(goal, system, depth, {}, budgets);
      rep["command"] = "context-model";
      rep["contexts"] = r.contexts;
      rep["formulas"] = r.formulas;
      rep["carrier"] = r.carrier;
      rep["membership_checks"] = r.membership_checks;
      json fails = json::array();
      for (const auto& f : r.failures)
        fails.push_back(json{{"kind", f.kind}, {"context", f.context_text},
                             {"formula", f.formula_text}});
      rep["failures"] = fails;
      rep["laws"] = law_report_to_json(r.laws);
      rep["goal_valid"] = r.goal_valid;
      text += "universe: " + std::to_string(r.contexts) + " contexts over " +
              std::to_string(r.formulas) + " formulas; carrier " + std::to_string(r.carrier) +
              "\n";
      text += "membership checks: " + std::to_string(r.membership_checks) + ", failures: " +
              std::to_string(r.failures.size()) + "\n";
      text += std::string("context algebra heyting: ") + (r.laws.heyting_ok ? "yes" : "NO") +
              "\n";
      text += std::string("goal valid (empty context in its denotation): ") +
              (r.goal_valid ? "yes" : "no") + "\n";
      exit_code = (r.failures.empty() && r.laws.heyting_ok) ? 0 : 1;
    } else if (*agree) {
      std::size_t depth = have_depth ? depth_flag : 6;
      std::vector<PropPtr> formulas;
      std::istringstream in(formulas_text);
      std::string item;
      while (std::getline(in, item, ';'))
        if (!item.empty()) formulas.push_back(parse_prop(item, tf.system));
      if (formulas.empty()) throw Error("agree needs at least one formula");
      AgreementReport r = three_formalism_agreement(tf.system, formulas, hyps_flag, depth,
                                                    budgets);
      rep["command"] = "agree";
      json rows = json::array();
      for (const auto& row : r.rows) {
        rows.push_back(json{{"sequent", row.sequent_text},
                            {"modulo", row.modulo},
                            {"foldunfold", row.foldunfold},
                            {"supernatural", row.supernatural},
                            {"agree", row.agree}});
        if (!row.agree)
          text += "DISAGREE: " + row.sequent_text + " modulo=" +
                  std::to_string(row.modulo) + " foldunfold=" + std::to_string(row.foldunfold) +
                  " supernatural=" + std::to_string(row.supernatural) + "\n";
      }
      rep["rows"] = rows;
      rep["sequents"] = r.rows.size();
      rep["disagreements"] = r.disagreements;
      text += std::to_string(r.rows.size()) + " sequents, " +
              std::to_string(r.disagreements) + " disagreements\n";
      exit_code = r.disagreements == 0 ? 0 : 1;
    }

    res.exit_code = exit_code;
    res.report = std::move(rep);
    res.text = common.json_out ? res.report.dump(2) + "\n" : text;
    return res;
  } catch (const ParseError& e) {
    res.exit_code = 2;
    res.text = std::string("parse error: ") + e.what() + "\n";
    return res;
  } catch (const Error& e) {
    res.exit_code = 2;
    res.text = std::string("error: ") + e.what() + "\n";
    return res;
  } catch (const KernelError& e) {
    res.exit_code = 2;
    res.text = std::string("kernel invariant violated: ") + e.what() + "\n";
    return res;
  }
}

int run_cli(int argc, char** argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  CommandResult res = run_command(args);
  std::cout << res.text;
  return res.exit_code;
}

}  // namespace demod
