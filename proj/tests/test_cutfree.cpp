#include "helpers.hpp"

using namespace demod;

namespace {

Budgets budgets() { return Budgets::defaults(); }

}  // namespace

TEST_CASE("search finds the identity") {
  TheoryFile base = th::load_theory("base.dmt");
  RuleSystem sys = RuleSystem::make(SystemKind::Modulo, base.system);
  Sequent seq = parse_sequent("|- Q => Q", base.system);
  auto proof = search_cutfree(seq, sys, 2, budgets());
  REQUIRE(proof);
  CHECK(alpha_eq(*proof, parse_proof("fun x : Q . x", base.system)));
}

TEST_CASE("search uses the congruence to apply hypotheses") {
  TheoryFile qr = th::load_theory("qr.dmt");
  RuleSystem sys = RuleSystem::make(SystemKind::Modulo, qr.system);
  Sequent seq = parse_sequent("q : Q, p : P |- R", qr.system);
  auto proof = search_cutfree(seq, sys, 3, budgets());
  REQUIRE(proof);
  CHECK(alpha_eq(*proof, mk_papp(mk_hyp("p"), mk_hyp("q"))));
  CHECK(derivation_ok(typecheck(*proof, seq.ctx, seq.goal, sys, budgets())));
  CHECK(th::fully_normal(*proof));
}

TEST_CASE("the Crabbe atom has no cut-free proof") {
  TheoryFile crabbe = th::load_theory("crabbe.dmt");
  RuleSystem sys = RuleSystem::make(SystemKind::Modulo, crabbe.system);
  Sequent seq = parse_sequent("|- R", crabbe.system);
  CHECK_FALSE(search_cutfree(seq, sys, 8, budgets()).has_value());
}

TEST_CASE("search handles disjunction and case splits") {
  TheoryFile base = th::load_theory("base.dmt");
  RuleSystem sys = RuleSystem::make(SystemKind::Modulo, base.system);
  auto p1 = search_cutfree(parse_sequent("|- (Q => Q) \\/ R", base.system), sys, 4, budgets());
  REQUIRE(p1);
  CHECK(classify_last_rule(*p1) == NodeClass::Introduction);
  auto p2 = search_cutfree(parse_sequent("h : Q \\/ R, i : Q => R |- R", base.system), sys, 6,
                           budgets());
  REQUIRE(p2);
  CHECK(derivation_ok(typecheck(*p2, parse_sequent("h : Q \\/ R, i : Q => R |- R", base.system).ctx,
                                mk_atom("R"), sys, budgets())));
}

TEST_CASE("search instantiates quantifiers with signature terms") {
  TheoryFile base = th::load_theory("base.dmt");
  RuleSystem sys = RuleSystem::make(SystemKind::Modulo, base.system);
  auto p = search_cutfree(parse_sequent("|- exists x : i . top", base.system), sys, 3, budgets());
  REQUIRE(p);
  auto q = search_cutfree(parse_sequent("g : forall x : i . Q |- Q", base.system), sys, 4,
                          budgets());
  REQUIRE(q);
}

TEST_CASE("search produces cut-free proofs in all three systems") {
  TheoryFile qr = th::load_theory("qr.dmt");
  Sequent seq = parse_sequent("p : P, q : Q |- R", qr.system);
  for (SystemKind k :
       {SystemKind::Modulo, SystemKind::FoldUnfold, SystemKind::SuperNatural}) {
    RuleSystem sys = RuleSystem::make(k, qr.system);
    auto proof = search_cutfree(seq, sys, 6, budgets());
    INFO(system_name(k));
    REQUIRE(proof);
    CHECK(derivation_ok(typecheck(*proof, seq.ctx, seq.goal, sys, budgets())));
    CHECK(th::fully_normal(*proof));
  }
}

TEST_CASE("searched proofs are normal at every node") {
  TheoryFile base = th::load_theory("base.dmt");
  RuleSystem sys = RuleSystem::make(SystemKind::Modulo, base.system);
  for (const auto& text : {"|- Q => Q => Q", "h : Q /\\ R |- Q", "h : Q /\\ R |- R /\\ Q",
                           "h : bot |- Q", "|- top"}) {
    Sequent seq = parse_sequent(text, base.system);
    auto proof = search_cutfree(seq, sys, 6, budgets());
    INFO(text);
    REQUIRE(proof);
    CHECK(th::fully_normal(*proof));
    CHECK(derivation_ok(typecheck(*proof, seq.ctx, seq.goal, sys, budgets())));
  }
}

TEST_CASE("context model for the identity goal") {
  TheoryFile base = th::load_theory("base.dmt");
  RuleSystem sys = RuleSystem::make(SystemKind::Modulo, base.system);
  ContextModel cm = build_context_model(parse_sequent("|- Q => Q", base.system), sys, 6,
                                        budgets());
  // Formulas: Q and Q => Q; contexts: their subsets.
  CHECK(cm.universe.formulas.size() == 2);
  CHECK(cm.universe.contexts.size() == 4);
  // The empty context lies in [[Q => Q]].
  auto v = denote_prop(mk_imp(mk_atom("Q"), mk_atom("Q")), {}, cm.model);
  REQUIRE(v);
  CHECK(cm.carrier_sets[*v][0]);
  // [[Q]] contains exactly the contexts that include Q.
  auto q = denote_prop(mk_atom("Q"), {}, cm.model);
  REQUIRE(q);
  for (std::size_t ci = 0; ci < cm.universe.contexts.size(); ++ci) {
    bool has_q = false;
    for (int fi : cm.universe.contexts[ci])
      if (alpha_eq(cm.universe.formulas[fi], mk_atom("Q"))) has_q = true;
    CHECK(cm.carrier_sets[*q][ci] == has_q);
  }
}

TEST_CASE("the Crabbe goal is not valid in its context model") {
  TheoryFile crabbe = th::load_theory("crabbe.dmt");
  RuleSystem sys = RuleSystem::make(SystemKind::Modulo, crabbe.system);
  ContextModel cm = build_context_model(parse_sequent("|- R", crabbe.system), sys, 8, budgets());
  auto v = denote_prop(mk_atom("R"), {}, cm.model);
  REQUIRE(v);
  CHECK_FALSE(cm.carrier_sets[*v][0]);
}

TEST_CASE("the truth goal denotes the full universe") {
  TheoryFile base = th::load_theory("base.dmt");
  RuleSystem sys = RuleSystem::make(SystemKind::Modulo, base.system);
  ContextModel cm = build_context_model(parse_sequent("|- top", base.system), sys, 4, budgets());
  auto v = denote_prop(mk_truth(), {}, cm.model);
  REQUIRE(v);
  for (std::size_t ci = 0; ci < cm.universe.contexts.size(); ++ci)
    CHECK(cm.carrier_sets[*v][ci]);
}

TEST_CASE("context algebras are Heyting algebras") {
  TheoryFile base = th::load_theory("base.dmt");
  RuleSystem sys = RuleSystem::make(SystemKind::Modulo, base.system);
  ContextModel cm = build_context_model(parse_sequent("|- (Q => Q) \\/ R", base.system), sys, 6,
                                        budgets());
  LawReport rep = check_laws(*cm.algebra);
  CHECK(rep.heyting_ok);
  CHECK(rep.antisymmetry);
}

TEST_CASE("sharpened completeness desk checks") {
  Budgets b = budgets();
  TheoryFile qr = th::load_theory("qr.dmt");
  RuleSystem qr_sys = RuleSystem::make(SystemKind::Modulo, qr.system);
  SharpenedReport r1 = sharpened_completeness_check(parse_sequent("|- P", qr.system), qr_sys, 6,
                                                    {parse_sequent("p : P, q : Q |- R",
                                                                   qr.system)},
                                                    b);
  CHECK(r1.failures.empty());
  CHECK(r1.laws.heyting_ok);

  TheoryFile base = th::load_theory("base.dmt");
  RuleSystem base_sys = RuleSystem::make(SystemKind::Modulo, base.system);
  SharpenedReport r2 = sharpened_completeness_check(
      parse_sequent("|- (Q => Q) \\/ R", base.system), base_sys, 6, {}, b);
  CHECK(r2.failures.empty());
  CHECK(r2.goal_valid);
}

TEST_CASE("a corrupted atom denotation is caught") {
  Budgets b = budgets();
  TheoryFile crabbe = th::load_theory("crabbe.dmt");
  RuleSystem sys = RuleSystem::make(SystemKind::Modulo, crabbe.system);
  ContextModel cm = build_context_model(parse_sequent("|- R", crabbe.system), sys, 6, b);
  // Force [[R]] to the full universe; membership then promises proofs that
  // bounded search cannot deliver.
  cm.model.preds.at("R").table[{}] = cm.algebra->top();
  auto failures = membership_failures(cm, sys, 6, b);
  CHECK_FALSE(failures.empty());
  for (const auto& f : failures) CHECK(f.kind == "membership");
}

TEST_CASE("three-formalism agreement on the paper theory") {
  TheoryFile qr = th::load_theory("qr.dmt");
  std::vector<PropPtr> formulas{mk_atom("P"), mk_atom("Q"), mk_atom("R"),
                                mk_imp(mk_atom("Q"), mk_atom("R"))};
  AgreementReport rep = three_formalism_agreement(qr.system, formulas, 2, 6, budgets());
  CHECK(rep.rows.size() == 44);
  CHECK(rep.disagreements == 0);
}
