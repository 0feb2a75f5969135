#include "helpers.hpp"

using namespace demod;

namespace {

bool same_rule(const RewriteRule& a, const RewriteRule& b) {
  if (a.name != b.name || a.kind != b.kind) return false;
  if (a.kind == RuleKind::TermRule)
    return alpha_eq(a.term_lhs, b.term_lhs) && alpha_eq(a.term_rhs, b.term_rhs);
  return alpha_eq(a.prop_lhs, b.prop_lhs) && alpha_eq(a.prop_rhs, b.prop_rhs);
}

}  // namespace

TEST_CASE("theory files parse and print round-trip") {
  for (const auto& name :
       {"qr.dmt", "crabbe.dmt", "qp.dmt", "base.dmt", "nat_alpha.dmt", "ff.dmt"}) {
    TheoryFile tf = th::load_theory(name);
    TheoryFile again = parse_theory(print_theory(tf.system));
    INFO(name);
    CHECK(tf.system.sig.sorts == again.system.sig.sorts);
    CHECK(tf.system.sig.predicates == again.system.sig.predicates);
    REQUIRE(tf.system.rules.size() == again.system.rules.size());
    for (std::size_t i = 0; i < tf.system.rules.size(); ++i)
      CHECK(same_rule(tf.system.rules[i], again.system.rules[i]));
  }
}

TEST_CASE("proof files parse and print round-trip") {
  struct Pair {
    const char* theory;
    const char* proofs;
  };
  for (const auto& [theory_name, proof_name] :
       {Pair{"base.dmt", "base.prf"}, Pair{"qr.dmt", "qr_modulo.prf"},
        Pair{"qr.dmt", "qr_fold.prf"}, Pair{"qr.dmt", "qr_super.prf"},
        Pair{"nat_alpha.dmt", "nat.prf"}, Pair{"crabbe.dmt", "crabbe.prf"}}) {
    TheoryFile tf = th::load_theory(theory_name);
    ProofFile pf = th::load_proof_file(proof_name, tf.system);
    for (const auto& e : pf.proofs) {
      INFO(proof_name << "/" << e.name);
      ProofPtr again = parse_proof(print_proof(e.proof), tf.system);
      CHECK(alpha_eq(again, e.proof));
    }
  }
}

TEST_CASE("proposition print parse fixpoint on samples") {
  RewriteSystem sig = th::test_sig();
  th::Rng rng;
  for (int i = 0; i < 200; ++i) {
    // Close the sample's free variables so the standalone parser accepts it.
    PropPtr p = th::random_prop(rng, 4);
    PropPtr closed =
        mk_forall("x", "s", close_body(mk_forall("y", "s", close_body(p, "y")), "x"));
    PropPtr q = parse_prop(print_prop(closed), sig);
    CHECK(alpha_eq(closed, q));
    CHECK(print_prop(q) == print_prop(closed));
  }
}

TEST_CASE("theory parse errors carry positions") {
  try {
    parse_theory("prop P\nprop Q\nrule bad : (Q => P) --> P\n");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line == 3);
  }
  CHECK(parse_theory("").system.rules.empty());
  CHECK_THROWS_AS(parse_theory("rule r : P --> Q\n"), ParseError);
}

TEST_CASE("derived rules print in the displayed block shape") {
  TheoryFile qr = th::load_theory("qr.dmt");
  FoldUnfoldRules fu = derive_fold_unfold(qr.system.rules[0]);
  CHECK(print_derived_rule(fu.fold) ==
        "G |- Q => R\n----------- fold\nG |- P\n");
  CHECK(print_derived_rule(fu.unfold) ==
        "G |- P\n----------- unfold\nG |- Q => R\n");
  SuperDerived sd = derive_supernatural(qr.system.rules[0]);
  CHECK(print_derived_rule(sd.intro) == "G, Q |- R\n--------- r-intro\nG |- P\n");
  REQUIRE(sd.elims.size() == 1);
  CHECK(print_derived_rule(sd.elims[0]) ==
        "G |- P   G |- Q\n--------------- r-elim\nG |- R\n");
}

TEST_CASE("cli: check accepts the looping proof") {
  CommandResult r = run_command({"check", "--theory", th::corpus_path("crabbe.dmt"), "--proof",
                                 th::corpus_path("crabbe.prf")});
  CHECK(r.exit_code == 0);
}

TEST_CASE("cli: normalize reports the cycle with exit 1") {
  CommandResult r = run_command({"normalize", "--theory", th::corpus_path("crabbe.dmt"),
                                 "--proof", th::corpus_path("crabbe.prf"), "--name",
                                 "omega_omega", "--fuel", "10"});
  CHECK(r.exit_code == 1);
  CHECK(r.text.find("cycle at step 1") != std::string::npos);
}

TEST_CASE("cli: super-consistency reports four models") {
  CommandResult r = run_command({"super-consistency", "--theory", th::corpus_path("qr.dmt")});
  CHECK(r.exit_code == 0);
  CHECK(r.text.find("4/4 algebras with models") != std::string::npos);
}

TEST_CASE("cli: search exit codes") {
  CommandResult found = run_command({"search", "--theory", th::corpus_path("qr.dmt"), "--goal",
                                     "q : Q, p : P |- R", "--depth", "3"});
  CHECK(found.exit_code == 0);
  CommandResult missing = run_command({"search", "--theory", th::corpus_path("crabbe.dmt"),
                                       "--goal", "|- R", "--depth", "8"});
  CHECK(missing.exit_code == 1);
}

TEST_CASE("cli: usage errors exit 2") {
  CHECK(run_command({"bogus"}).exit_code == 2);
  CHECK(run_command({"check", "--theory", "/nonexistent.dmt", "--proof",
                     "/nonexistent.prf"})
            .exit_code == 2);
  CHECK(run_command({"derive-rules", "--theory", th::corpus_path("ff.dmt")}).exit_code == 2);
}

TEST_CASE("cli: tva-laws") {
  CHECK(run_command({"tva-laws", "--algebra", "bool2"}).exit_code == 0);
  CommandResult dt = run_command({"tva-laws", "--algebra", "doubled_top"});
  CHECK(dt.exit_code == 0);
  CHECK(dt.text.find("antisymmetry: FAIL") != std::string::npos);
  CHECK(run_command({"tva-laws", "--lattice", th::corpus_path("chain3.lat")}).exit_code == 0);
}

TEST_CASE("cli: model-find and context-model") {
  CommandResult mf = run_command({"model-find", "--theory", th::corpus_path("qr.dmt"),
                                  "--algebra", "bool2", "--size", "1"});
  CHECK(mf.exit_code == 0);
  CommandResult cm = run_command({"context-model", "--theory", th::corpus_path("qr.dmt"),
                                  "--goal", "|- P", "--depth", "6"});
  CHECK(cm.exit_code == 0);
}

TEST_CASE("cli: agree on the paper theory") {
  CommandResult r = run_command({"agree", "--theory", th::corpus_path("qr.dmt"), "--formulas",
                                 "P;Q;R;Q=>R", "--hyps", "2", "--depth", "6"});
  CHECK(r.exit_code == 0);
}

TEST_CASE("identical invocations produce byte-identical json reports") {
  std::vector<std::string> args{"check", "--theory", th::corpus_path("qr.dmt"), "--proof",
                                th::corpus_path("qr_modulo.prf"), "--json"};
  CommandResult a = run_command(args);
  CommandResult b = run_command(args);
  CHECK(a.text == b.text);
  CHECK(a.report.dump() == b.report.dump());

  std::vector<std::string> args2{"agree", "--theory", th::corpus_path("qr.dmt"), "--formulas",
                                 "P;Q;R;Q=>R", "--json"};
  CHECK(run_command(args2).text == run_command(args2).text);
}

TEST_CASE("budget overrides flow through the cli") {
  CommandResult r = run_command({"search", "--theory", th::corpus_path("base.dmt"), "--goal",
                                 "|- Q => Q", "--depth", "1"});
  CHECK(r.exit_code == 1);  // needs depth 2
  CommandResult ok = run_command({"search", "--theory", th::corpus_path("base.dmt"), "--goal",
                                  "|- Q => Q", "--depth", "2"});
  CHECK(ok.exit_code == 0);
}
