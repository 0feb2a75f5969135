#include "helpers.hpp"

using namespace demod;

TEST_CASE("substitution replaces free occurrences") {
  TermPtr fy = mk_app("f", {mk_var("y", "s")});
  PropPtr px = mk_atom("P", {mk_var("x", "s")});
  PropPtr result = substitute(px, "x", fy);
  CHECK(alpha_eq(result, mk_atom("P", {fy})));
}

TEST_CASE("substitution leaves bound occurrences untouched") {
  PropPtr all = mk_forall("x", "s", mk_atom("P", {mk_bound(0)}));
  PropPtr result = substitute(all, "x", mk_app("cc", {}));
  CHECK(alpha_eq(result, all));
}

TEST_CASE("capture avoidance is forced by the representation") {
  // forall y . P(x) with x := y ; the free y must not be captured.
  PropPtr e = mk_forall("y", "s", mk_atom("P", {mk_var("x", "s")}));
  PropPtr result = substitute(e, "x", mk_var("y", "s"));
  CHECK(alpha_eq(result, mk_forall("z", "s", mk_atom("P", {mk_var("y", "s")}))));
  // Display renames the binder hint away from the free variable.
  CHECK(print_prop(result) == "forall y1 : s . P(y)");
}

TEST_CASE("alpha equality ignores binder names") {
  PropPtr a = mk_forall("x", "s", mk_atom("P", {mk_bound(0)}));
  PropPtr b = mk_forall("y", "s", mk_atom("P", {mk_bound(0)}));
  CHECK(alpha_eq(a, b));
  PropPtr c = mk_forall("x", "s", mk_atom("Q", {}));
  PropPtr c2 = mk_forall("x", "s", mk_atom("R", {}));
  CHECK_FALSE(alpha_eq(c, c2));
  PropPtr qr = mk_imp(mk_atom("Q"), mk_atom("R"));
  CHECK(alpha_eq(qr, mk_imp(mk_atom("Q"), mk_atom("R"))));
}

TEST_CASE("free variables") {
  CHECK(free_vars(mk_atom("P", {mk_var("x", "s")})).count("x") == 1);
  CHECK(free_vars(mk_forall("x", "s", mk_atom("P", {mk_bound(0)}))).empty());
  PropPtr imp = mk_imp(mk_atom("P", {mk_app("f", {mk_var("x", "s")})}), mk_atom("R"));
  auto fv = free_vars(imp);
  CHECK(fv.size() == 1);
  CHECK(fv.count("x") == 1);
}

TEST_CASE("substitute by the variable itself is the identity (samples)") {
  th::Rng rng;
  for (int i = 0; i < 200; ++i) {
    PropPtr p = th::random_prop(rng, 4);
    CHECK(alpha_eq(substitute(p, "x", mk_var("x", "s")), p));
  }
}

TEST_CASE("free variable equation under substitution (samples)") {
  th::Rng rng;
  TermPtr u = mk_app("f", {mk_var("y", "s")});
  for (int i = 0; i < 200; ++i) {
    PropPtr p = th::random_prop(rng, 4);
    auto before = free_vars(p);
    if (!before.count("x")) continue;
    auto after = free_vars(substitute(p, "x", u));
    std::map<std::string, SortName> expected = before;
    expected.erase("x");
    for (const auto& [n, s] : free_vars(u)) expected.emplace(n, s);
    CHECK(after == expected);
  }
}

TEST_CASE("alpha equality is an equivalence relation on samples") {
  th::Rng rng;
  std::vector<PropPtr> props;
  for (int i = 0; i < 24; ++i) props.push_back(th::random_prop(rng, 3));
  for (const auto& a : props) CHECK(alpha_eq(a, a));
  for (const auto& a : props)
    for (const auto& b : props) CHECK(alpha_eq(a, b) == alpha_eq(b, a));
  for (const auto& a : props)
    for (const auto& b : props)
      for (const auto& c : props)
        if (alpha_eq(a, b) && alpha_eq(b, c)) CHECK(alpha_eq(a, c));
}

TEST_CASE("well-sortedness rejects arity and sort errors") {
  RewriteSystem sig = th::test_sig();
  CHECK_THROWS_AS(check_term(sig.sig, mk_app("f", {}), {}), Error);
  CHECK_THROWS_AS(check_prop(sig.sig, mk_atom("P", {})), Error);
  CHECK_THROWS_AS(check_prop(sig.sig, mk_atom("Unknown", {})), Error);
  CHECK(check_term(sig.sig, mk_app("f", {mk_app("cc", {})}), {}) == "s");
}

TEST_CASE("context invariants") {
  RewriteSystem sig = th::test_sig();
  Context ctx{{"h", mk_atom("Q")}, {"h", mk_atom("R")}};
  CHECK_THROWS_AS(validate_context(sig.sig, ctx), Error);
}

TEST_CASE("subformulas are locally closed and deduplicated") {
  PropPtr p = mk_imp(mk_forall("x", "s", mk_atom("P", {mk_bound(0)})), mk_atom("Q"));
  auto subs = subformulas(p);
  CHECK(subs.size() == 4);  // whole, forall, opened P(ξ), Q
  for (const auto& s : subs) CHECK(locally_closed(s));
}
