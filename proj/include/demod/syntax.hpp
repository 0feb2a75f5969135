#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "demod/util.hpp"

namespace demod {

using SortName = std::string;

struct FunDecl {
  std::vector<SortName> args;
  SortName result;
};

// First-order signature. Function and predicate namespaces are kept
// disjoint so the concrete syntax stays unambiguous.
struct Signature {
  std::set<SortName> sorts;
  std::map<std::string, FunDecl> functions;
  std::map<std::string, std::vector<SortName>> predicates;

  void declare_sort(const std::string& s);
  void declare_function(const std::string& name, FunDecl decl);
  void declare_predicate(const std::string& name, std::vector<SortName> args);
};

// ---------------------------------------------------------------------------
// Terms. Locally nameless: free variables are named and carry their sort,
// bound variables are de Bruijn indices into the enclosing quantifier /
// proof-level generalization binders. Terms themselves contain no binders.

struct Term;
using TermPtr = std::shared_ptr<const Term>;

struct TVar {
  std::string name;
  SortName sort;
};
struct TBound {
  int index;
};
struct TApp {
  std::string fn;
  std::vector<TermPtr> args;
};

struct Term {
  std::variant<TVar, TBound, TApp> node;
};

TermPtr mk_var(std::string name, SortName sort);
TermPtr mk_bound(int index);
TermPtr mk_app(std::string fn, std::vector<TermPtr> args);

// ---------------------------------------------------------------------------
// Propositions. Quantifier bodies bind de Bruijn index 0; the `hint` is
// only used for display.

struct Prop;
using PropPtr = std::shared_ptr<const Prop>;

struct PAtom {
  std::string pred;
  std::vector<TermPtr> args;
};
struct PTruth {};
struct PFalsity {};
struct PAnd {
  PropPtr l, r;
};
struct POr {
  PropPtr l, r;
};
struct PImp {
  PropPtr l, r;
};
struct PForall {
  std::string hint;
  SortName sort;
  PropPtr body;
};
struct PExists {
  std::string hint;
  SortName sort;
  PropPtr body;
};

struct Prop {
  std::variant<PAtom, PTruth, PFalsity, PAnd, POr, PImp, PForall, PExists> node;
};

PropPtr mk_atom(std::string pred, std::vector<TermPtr> args = {});
PropPtr mk_truth();
PropPtr mk_falsity();
PropPtr mk_and(PropPtr l, PropPtr r);
PropPtr mk_or(PropPtr l, PropPtr r);
PropPtr mk_imp(PropPtr l, PropPtr r);
PropPtr mk_forall(std::string hint, SortName sort, PropPtr body);
PropPtr mk_exists(std::string hint, SortName sort, PropPtr body);

// ---------------------------------------------------------------------------
// Structural equality up to bound-variable names (hints ignored).
bool alpha_eq(const TermPtr& a, const TermPtr& b);
bool alpha_eq(const PropPtr& a, const PropPtr& b);

// Free variables with their sorts. Throws Error if the same name occurs
// with two different sorts.
std::map<std::string, SortName> free_vars(const TermPtr& t);
std::map<std::string, SortName> free_vars(const PropPtr& p);

// Capture-avoiding substitution of free variable `name`. The replacement
// must be locally closed, which makes the operation total.
TermPtr substitute(const TermPtr& e, const std::string& name, const TermPtr& u);
PropPtr substitute(const PropPtr& e, const std::string& name, const TermPtr& u);
TermPtr substitute(const TermPtr& e, const std::map<std::string, TermPtr>& subst);
PropPtr substitute(const PropPtr& e, const std::map<std::string, TermPtr>& subst);

// Replace bound index `k` (adjusted under inner binders) by a locally
// closed term / restore it. `open_body` instantiates a quantifier body.
TermPtr open_term_at(const TermPtr& t, int k, const TermPtr& value);
PropPtr open_prop_at(const PropPtr& p, int k, const TermPtr& value);
PropPtr open_body(const PropPtr& binder_body, const TermPtr& value);
TermPtr close_term_at(const TermPtr& t, int k, const std::string& name);
PropPtr close_prop_at(const PropPtr& p, int k, const std::string& name);
PropPtr close_body(const PropPtr& p, const std::string& name);

// True when no loose bound index remains.
bool locally_closed(const TermPtr& t);
bool locally_closed(const PropPtr& p);

// Well-sortedness. check_term returns the term's sort.
SortName check_term(const Signature& sig, const TermPtr& t,
                    const std::vector<SortName>& bound = {});
void check_prop(const Signature& sig, const PropPtr& p,
                const std::vector<SortName>& bound = {});

// All subformulas of p (p included), outermost first, duplicates removed
// up to alpha-equality. Quantifier bodies contribute opened with a fresh
// variable so every entry is locally closed.
std::vector<PropPtr> subformulas(const PropPtr& p);

// ---------------------------------------------------------------------------
// Contexts and sequents.

struct Hypothesis {
  std::string name;
  PropPtr prop;
};
using Context = std::vector<Hypothesis>;

struct Sequent {
  Context ctx;
  PropPtr goal;
};

const PropPtr* lookup_hyp(const Context& ctx, const std::string& name);
void validate_context(const Signature& sig, const Context& ctx);

}  // namespace demod
