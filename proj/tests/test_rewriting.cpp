#include "helpers.hpp"

using namespace demod;

namespace {

PropPtr imp_chain(int n) {
  // P nested under n right-hand Rs: ((((P => R) => R) ...) => R
  PropPtr p = mk_atom("P");
  for (int i = 0; i < n; ++i) p = mk_imp(p, mk_atom("R"));
  return p;
}

}  // namespace

TEST_CASE("single rewrite steps") {
  RewriteSystem qr = th::load_theory("qr.dmt").system;
  PropPtr out;
  auto step = rewrite_step(mk_atom("P"), qr, &out);
  REQUIRE(step.has_value());
  CHECK(step->rule == "r");
  CHECK(alpha_eq(out, mk_imp(mk_atom("Q"), mk_atom("R"))));
  CHECK_FALSE(rewrite_step(mk_atom("Q"), qr, &out).has_value());

  RewriteSystem crabbe = th::load_theory("crabbe.dmt").system;
  REQUIRE(rewrite_step(mk_atom("P"), crabbe, &out).has_value());
  CHECK(alpha_eq(out, mk_imp(mk_atom("P"), mk_atom("R"))));
}

TEST_CASE("normalize with fuel") {
  RewriteSystem qr = th::load_theory("qr.dmt").system;
  auto r = normalize(mk_atom("P"), qr, 10);
  CHECK(r.status == NormalizeStatus::NormalForm);
  CHECK(alpha_eq(r.value, mk_imp(mk_atom("Q"), mk_atom("R"))));
  CHECK(r.steps.size() == 1);

  RewriteSystem crabbe = th::load_theory("crabbe.dmt").system;
  auto c = normalize(mk_atom("P"), crabbe, 5);
  CHECK(c.status == NormalizeStatus::FuelExhausted);
  CHECK(c.steps.size() == 5);
  CHECK(alpha_eq(c.value, imp_chain(5)));

  auto already = normalize(mk_imp(mk_atom("Q"), mk_atom("R")), qr, 0);
  CHECK(already.status == NormalizeStatus::NormalForm);
}

TEST_CASE("rewrite_step agrees with zero-fuel normalize") {
  RewriteSystem qr = th::load_theory("qr.dmt").system;
  th::Rng rng;
  for (int i = 0; i < 100; ++i) {
    PropPtr p = th::random_prop(rng, 3);
    PropPtr out;
    bool has_redex = rewrite_step(p, qr, &out).has_value();
    bool normal = normalize(p, qr, 0).status == NormalizeStatus::NormalForm;
    CHECK(has_redex == !normal);
  }
}

TEST_CASE("weak-head normalization stops at exposed connectives") {
  RewriteSystem crabbe = th::load_theory("crabbe.dmt").system;
  auto w = whnf(mk_atom("P"), crabbe, 8);
  CHECK(w.status == NormalizeStatus::NormalForm);
  CHECK(alpha_eq(w.value, mk_imp(mk_atom("P"), mk_atom("R"))));
  CHECK(w.steps.size() == 1);
}

TEST_CASE("congruence verdicts") {
  RewriteSystem qr = th::load_theory("qr.dmt").system;
  PropPtr qr_prop = mk_imp(mk_atom("Q"), mk_atom("R"));
  auto yes = congruent(mk_atom("P"), qr_prop, qr, 8);
  CHECK(yes.verdict == Congruence::Yes);
  REQUIRE(yes.witness.has_value());
  CHECK(validate_witness(mk_atom("P"), qr_prop, *yes.witness, qr));

  auto no = congruent(mk_atom("Q"), mk_atom("R"), qr, 8);
  CHECK(no.verdict == Congruence::No);

  RewriteSystem crabbe = th::load_theory("crabbe.dmt").system;
  auto one_step = congruent(mk_atom("P"), mk_imp(mk_atom("P"), mk_atom("R")), crabbe, 2);
  CHECK(one_step.verdict == Congruence::Yes);

  // Neither side normalizes and they never join: undecided within budget.
  auto unknown = congruent(mk_atom("P"), mk_atom("R"), crabbe, 4);
  CHECK(unknown.verdict == Congruence::Unknown);
}

TEST_CASE("congruence is reflexive at depth zero and symmetric") {
  RewriteSystem qr = th::load_theory("qr.dmt").system;
  th::Rng rng;
  for (int i = 0; i < 60; ++i) {
    PropPtr a = th::random_prop(rng, 3);
    CHECK(congruent(a, a, qr, 0).verdict == Congruence::Yes);
    PropPtr b = th::random_prop(rng, 3);
    auto ab = congruent(a, b, qr, 6).verdict;
    auto ba = congruent(b, a, qr, 6).verdict;
    CHECK(ab == ba);
  }
}

TEST_CASE("equal normal forms imply congruence") {
  RewriteSystem qr = th::load_theory("qr.dmt").system;
  th::Rng rng;
  for (int i = 0; i < 60; ++i) {
    PropPtr a = th::random_prop(rng, 3);
    PropPtr b = th::random_prop(rng, 3);
    auto na = normalize(a, qr, 32);
    auto nb = normalize(b, qr, 32);
    if (na.status == NormalizeStatus::NormalForm && nb.status == NormalizeStatus::NormalForm &&
        alpha_eq(na.value, nb.value)) {
      CHECK(congruent(a, b, qr, 64).verdict == Congruence::Yes);
    }
  }
}

TEST_CASE("congruence witnesses replay through the rewrite engine") {
  RewriteSystem crabbe = th::load_theory("crabbe.dmt").system;
  PropPtr a = mk_atom("P");
  PropPtr b = mk_imp(mk_imp(mk_atom("P"), mk_atom("R")), mk_atom("R"));
  auto r = congruent(a, b, crabbe, 4);
  REQUIRE(r.verdict == Congruence::Yes);
  CHECK(validate_witness(a, b, *r.witness, crabbe));
}

TEST_CASE("critical pairs") {
  RewriteSystem qr = th::load_theory("qr.dmt").system;
  CHECK(critical_pairs(qr, 8).empty());

  RewriteSystem ff = th::load_theory("ff.dmt").system;
  auto pairs = critical_pairs(ff, 8);
  REQUIRE(pairs.size() == 1);
  const auto& cp = pairs[0];
  TermPtr x = mk_var("x1", "i");
  CHECK(alpha_eq(std::get<TermPtr>(cp.peak), mk_app("f", {mk_app("f", {mk_app("f", {x})})})));
  CHECK(alpha_eq(std::get<TermPtr>(cp.left), mk_app("f", {x})));
  CHECK(alpha_eq(std::get<TermPtr>(cp.right), mk_app("f", {x})));
  CHECK(cp.joinable);

  RewriteSystem two =
      parse_theory("prop P\nprop A\nprop B\nrule r1 : P --> A\nrule r2 : P --> B\n").system;
  auto clash = critical_pairs(two, 8);
  REQUIRE(clash.size() == 1);
  CHECK_FALSE(clash[0].joinable);
}

TEST_CASE("rule validation enforces the invariants") {
  CHECK_THROWS_AS(parse_theory("prop P\nprop Q\nrule bad : (Q => P) --> P\n"), ParseError);
  // RHS variable not bound by the LHS.
  CHECK_THROWS_AS(
      parse_theory("sort s\nfun f : s -> s\npred P : s\nrule bad : P(x) --> P(f(y))\n"), Error);
}
