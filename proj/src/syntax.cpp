#include "demod/syntax.hpp"

#include <algorithm>

namespace demod {

void Signature::declare_sort(const std::string& s) {
  if (!sorts.insert(s).second) throw Error("duplicate sort declaration: " + s);
}

void Signature::declare_function(const std::string& name, FunDecl decl) {
  if (predicates.count(name))
    throw Error("name already declared as predicate: " + name);
  if (!sorts.count(decl.result)) throw Error("undeclared sort: " + decl.result);
  for (const auto& a : decl.args)
    if (!sorts.count(a)) throw Error("undeclared sort: " + a);
  if (!functions.emplace(name, std::move(decl)).second)
    throw Error("duplicate function declaration: " + name);
}

void Signature::declare_predicate(const std::string& name, std::vector<SortName> args) {
  if (functions.count(name))
    throw Error("name already declared as function: " + name);
  for (const auto& a : args)
    if (!sorts.count(a)) throw Error("undeclared sort: " + a);
  if (!predicates.emplace(name, std::move(args)).second)
    throw Error("duplicate predicate declaration: " + name);
}

TermPtr mk_var(std::string name, SortName sort) {
  return std::make_shared<Term>(Term{TVar{std::move(name), std::move(sort)}});
}
TermPtr mk_bound(int index) { return std::make_shared<Term>(Term{TBound{index}}); }
TermPtr mk_app(std::string fn, std::vector<TermPtr> args) {
  return std::make_shared<Term>(Term{TApp{std::move(fn), std::move(args)}});
}

PropPtr mk_atom(std::string pred, std::vector<TermPtr> args) {
  return std::make_shared<Prop>(Prop{PAtom{std::move(pred), std::move(args)}});
}
PropPtr mk_truth() { return std::make_shared<Prop>(Prop{PTruth{}}); }
PropPtr mk_falsity() { return std::make_shared<Prop>(Prop{PFalsity{}}); }
PropPtr mk_and(PropPtr l, PropPtr r) {
  return std::make_shared<Prop>(Prop{PAnd{std::move(l), std::move(r)}});
}
PropPtr mk_or(PropPtr l, PropPtr r) {
  return std::make_shared<Prop>(Prop{POr{std::move(l), std::move(r)}});
}
PropPtr mk_imp(PropPtr l, PropPtr r) {
  return std::make_shared<Prop>(Prop{PImp{std::move(l), std::move(r)}});
}
PropPtr mk_forall(std::string hint, SortName sort, PropPtr body) {
  return std::make_shared<Prop>(Prop{PForall{std::move(hint), std::move(sort), std::move(body)}});
}
PropPtr mk_exists(std::string hint, SortName sort, PropPtr body) {
  return std::make_shared<Prop>(Prop{PExists{std::move(hint), std::move(sort), std::move(body)}});
}

bool alpha_eq(const TermPtr& a, const TermPtr& b) {
  if (a.get() == b.get()) return true;
  return std::visit(
      overloaded{
          [&](const TVar& x) {
            auto* y = std::get_if<TVar>(&b->node);
            return y && y->name == x.name && y->sort == x.sort;
          },
          [&](const TBound& x) {
            auto* y = std::get_if<TBound>(&b->node);
            return y && y->index == x.index;
          },
          [&](const TApp& x) {
            auto* y = std::get_if<TApp>(&b->node);
            if (!y || y->fn != x.fn || y->args.size() != x.args.size()) return false;
            for (size_t i = 0; i < x.args.size(); ++i)
              if (!alpha_eq(x.args[i], y->args[i])) return false;
            return true;
          },
      },
      a->node);
}

bool alpha_eq(const PropPtr& a, const PropPtr& b) {
  if (a.get() == b.get()) return true;
  return std::visit(
      overloaded{
          [&](const PAtom& x) {
            auto* y = std::get_if<PAtom>(&b->node);
            if (!y || y->pred != x.pred || y->args.size() != x.args.size()) return false;
            for (size_t i = 0; i < x.args.size(); ++i)
              if (!alpha_eq(x.args[i], y->args[i])) return false;
            return true;
          },
          [&](const PTruth&) { return std::holds_alternative<PTruth>(b->node); },
          [&](const PFalsity&) { return std::holds_alternative<PFalsity>(b->node); },
          [&](const PAnd& x) {
            auto* y = std::get_if<PAnd>(&b->node);
            return y && alpha_eq(x.l, y->l) && alpha_eq(x.r, y->r);
          },
          [&](const POr& x) {
            auto* y = std::get_if<POr>(&b->node);
            return y && alpha_eq(x.l, y->l) && alpha_eq(x.r, y->r);
          },
          [&](const PImp& x) {
            auto* y = std::get_if<PImp>(&b->node);
            return y && alpha_eq(x.l, y->l) && alpha_eq(x.r, y->r);
          },
          [&](const PForall& x) {
            auto* y = std::get_if<PForall>(&b->node);
            return y && y->sort == x.sort && alpha_eq(x.body, y->body);
          },
          [&](const PExists& x) {
            auto* y = std::get_if<PExists>(&b->node);
            return y && y->sort == x.sort && alpha_eq(x.body, y->body);
          },
      },
      a->node);
}

namespace {

void collect_free(const TermPtr& t, std::map<std::string, SortName>& out) {
  std::visit(overloaded{
                 [&](const TVar& v) {
                   auto [it, inserted] = out.emplace(v.name, v.sort);
                   if (!inserted && it->second != v.sort)
                     throw Error("variable used at two sorts: " + v.name);
                 },
                 [&](const TBound&) {},
                 [&](const TApp& a) {
                   for (const auto& arg : a.args) collect_free(arg, out);
                 },
             },
             t->node);
}

void collect_free(const PropPtr& p, std::map<std::string, SortName>& out) {
  std::visit(overloaded{
                 [&](const PAtom& a) {
                   for (const auto& arg : a.args) collect_free(arg, out);
                 },
                 [&](const PTruth&) {},
                 [&](const PFalsity&) {},
                 [&](const PAnd& b) { collect_free(b.l, out); collect_free(b.r, out); },
                 [&](const POr& b) { collect_free(b.l, out); collect_free(b.r, out); },
                 [&](const PImp& b) { collect_free(b.l, out); collect_free(b.r, out); },
                 [&](const PForall& q) { collect_free(q.body, out); },
                 [&](const PExists& q) { collect_free(q.body, out); },
             },
             p->node);
}

}  // namespace

std::map<std::string, SortName> free_vars(const TermPtr& t) {
  std::map<std::string, SortName> out;
  collect_free(t, out);
  return out;
}
std::map<std::string, SortName> free_vars(const PropPtr& p) {
  std::map<std::string, SortName> out;
  collect_free(p, out);
  return out;
}

TermPtr substitute(const TermPtr& e, const std::map<std::string, TermPtr>& subst) {
  return std::visit(
      overloaded{
          [&](const TVar& v) -> TermPtr {
            auto it = subst.find(v.name);
            return it == subst.end() ? e : it->second;
          },
          [&](const TBound&) -> TermPtr { return e; },
          [&](const TApp& a) -> TermPtr {
            std::vector<TermPtr> args;
            args.reserve(a.args.size());
            for (const auto& arg : a.args) args.push_back(substitute(arg, subst));
            return mk_app(a.fn, std::move(args));
          },
      },
      e->node);
}

PropPtr substitute(const PropPtr& e, const std::map<std::string, TermPtr>& subst) {
  // Replacements are locally closed, so descending under quantifiers needs
  // no index adjustment.
  return std::visit(
      overloaded{
          [&](const PAtom& a) -> PropPtr {
            std::vector<TermPtr> args;
            args.reserve(a.args.size());
            for (const auto& arg : a.args) args.push_back(substitute(arg, subst));
            return mk_atom(a.pred, std::move(args));
          },
          [&](const PTruth&) -> PropPtr { return e; },
          [&](const PFalsity&) -> PropPtr { return e; },
          [&](const PAnd& b) -> PropPtr {
            return mk_and(substitute(b.l, subst), substitute(b.r, subst));
          },
          [&](const POr& b) -> PropPtr {
            return mk_or(substitute(b.l, subst), substitute(b.r, subst));
          },
          [&](const PImp& b) -> PropPtr {
            return mk_imp(substitute(b.l, subst), substitute(b.r, subst));
          },
          [&](const PForall& q) -> PropPtr {
            return mk_forall(q.hint, q.sort, substitute(q.body, subst));
          },
          [&](const PExists& q) -> PropPtr {
            return mk_exists(q.hint, q.sort, substitute(q.body, subst));
          },
      },
      e->node);
}

TermPtr substitute(const TermPtr& e, const std::string& name, const TermPtr& u) {
  return substitute(e, std::map<std::string, TermPtr>{{name, u}});
}
PropPtr substitute(const PropPtr& e, const std::string& name, const TermPtr& u) {
  return substitute(e, std::map<std::string, TermPtr>{{name, u}});
}

TermPtr open_term_at(const TermPtr& t, int k, const TermPtr& value) {
  return std::visit(
      overloaded{
          [&](const TVar&) -> TermPtr { return t; },
          [&](const TBound& b) -> TermPtr {
            if (b.index == k) return value;
            if (b.index > k)
              throw KernelError("loose bound index above opening target");
            return t;
          },
          [&](const TApp& a) -> TermPtr {
            std::vector<TermPtr> args;
            args.reserve(a.args.size());
            for (const auto& arg : a.args) args.push_back(open_term_at(arg, k, value));
            return mk_app(a.fn, std::move(args));
          },
      },
      t->node);
}

PropPtr open_prop_at(const PropPtr& p, int k, const TermPtr& value) {
  return std::visit(
      overloaded{
          [&](const PAtom& a) -> PropPtr {
            std::vector<TermPtr> args;
            args.reserve(a.args.size());
            for (const auto& arg : a.args) args.push_back(open_term_at(arg, k, value));
            return mk_atom(a.pred, std::move(args));
          },
          [&](const PTruth&) -> PropPtr { return p; },
          [&](const PFalsity&) -> PropPtr { return p; },
          [&](const PAnd& b) -> PropPtr {
            return mk_and(open_prop_at(b.l, k, value), open_prop_at(b.r, k, value));
          },
          [&](const POr& b) -> PropPtr {
            return mk_or(open_prop_at(b.l, k, value), open_prop_at(b.r, k, value));
          },
          [&](const PImp& b) -> PropPtr {
            return mk_imp(open_prop_at(b.l, k, value), open_prop_at(b.r, k, value));
          },
          [&](const PForall& q) -> PropPtr {
            return mk_forall(q.hint, q.sort, open_prop_at(q.body, k + 1, value));
          },
          [&](const PExists& q) -> PropPtr {
            return mk_exists(q.hint, q.sort, open_prop_at(q.body, k + 1, value));
          },
      },
      p->node);
}

PropPtr open_body(const PropPtr& binder_body, const TermPtr& value) {
  return open_prop_at(binder_body, 0, value);
}

TermPtr close_term_at(const TermPtr& t, int k, const std::string& name) {
  return std::visit(
      overloaded{
          [&](const TVar& v) -> TermPtr { return v.name == name ? mk_bound(k) : t; },
          [&](const TBound&) -> TermPtr { return t; },
          [&](const TApp& a) -> TermPtr {
            std::vector<TermPtr> args;
            args.reserve(a.args.size());
            for (const auto& arg : a.args) args.push_back(close_term_at(arg, k, name));
            return mk_app(a.fn, std::move(args));
          },
      },
      t->node);
}

PropPtr close_prop_at(const PropPtr& p, int k, const std::string& name) {
  return std::visit(
      overloaded{
          [&](const PAtom& a) -> PropPtr {
            std::vector<TermPtr> args;
            args.reserve(a.args.size());
            for (const auto& arg : a.args) args.push_back(close_term_at(arg, k, name));
            return mk_atom(a.pred, std::move(args));
          },
          [&](const PTruth&) -> PropPtr { return p; },
          [&](const PFalsity&) -> PropPtr { return p; },
          [&](const PAnd& b) -> PropPtr {
            return mk_and(close_prop_at(b.l, k, name), close_prop_at(b.r, k, name));
          },
          [&](const POr& b) -> PropPtr {
            return mk_or(close_prop_at(b.l, k, name), close_prop_at(b.r, k, name));
          },
          [&](const PImp& b) -> PropPtr {
            return mk_imp(close_prop_at(b.l, k, name), close_prop_at(b.r, k, name));
          },
          [&](const PForall& q) -> PropPtr {
            return mk_forall(q.hint, q.sort, close_prop_at(q.body, k + 1, name));
          },
          [&](const PExists& q) -> PropPtr {
            return mk_exists(q.hint, q.sort, close_prop_at(q.body, k + 1, name));
          },
      },
      p->node);
}

PropPtr close_body(const PropPtr& p, const std::string& name) {
  return close_prop_at(p, 0, name);
}

namespace {

bool lc_term(const TermPtr& t, int depth) {
  return std::visit(overloaded{
                        [&](const TVar&) { return true; },
                        [&](const TBound& b) { return b.index < depth; },
                        [&](const TApp& a) {
                          for (const auto& arg : a.args)
                            if (!lc_term(arg, depth)) return false;
                          return true;
                        },
                    },
                    t->node);
}

bool lc_prop(const PropPtr& p, int depth) {
  return std::visit(overloaded{
                        [&](const PAtom& a) {
                          for (const auto& arg : a.args)
                            if (!lc_term(arg, depth)) return false;
                          return true;
                        },
                        [&](const PTruth&) { return true; },
                        [&](const PFalsity&) { return true; },
                        [&](const PAnd& b) { return lc_prop(b.l, depth) && lc_prop(b.r, depth); },
                        [&](const POr& b) { return lc_prop(b.l, depth) && lc_prop(b.r, depth); },
                        [&](const PImp& b) { return lc_prop(b.l, depth) && lc_prop(b.r, depth); },
                        [&](const PForall& q) { return lc_prop(q.body, depth + 1); },
                        [&](const PExists& q) { return lc_prop(q.body, depth + 1); },
                    },
                    p->node);
}

}  // namespace

bool locally_closed(const TermPtr& t) { return lc_term(t, 0); }
bool locally_closed(const PropPtr& p) { return lc_prop(p, 0); }

SortName check_term(const Signature& sig, const TermPtr& t, const std::vector<SortName>& bound) {
  return std::visit(
      overloaded{
          [&](const TVar& v) -> SortName {
            if (!sig.sorts.count(v.sort)) throw Error("undeclared sort: " + v.sort);
            return v.sort;
          },
          [&](const TBound& b) -> SortName {
            // bound[i] is the sort of de Bruijn index i, innermost first.
            if (b.index < 0 || static_cast<size_t>(b.index) >= bound.size())
              throw Error("loose bound variable");
            return bound[b.index];
          },
          [&](const TApp& a) -> SortName {
            auto it = sig.functions.find(a.fn);
            if (it == sig.functions.end()) throw Error("undeclared function: " + a.fn);
            if (it->second.args.size() != a.args.size())
              throw Error("arity mismatch for " + a.fn);
            for (size_t i = 0; i < a.args.size(); ++i) {
              SortName got = check_term(sig, a.args[i], bound);
              if (got != it->second.args[i])
                throw Error("sort mismatch in argument " + std::to_string(i + 1) + " of " +
                            a.fn + ": expected " + it->second.args[i] + ", got " + got);
            }
            return it->second.result;
          },
      },
      t->node);
}

void check_prop(const Signature& sig, const PropPtr& p, const std::vector<SortName>& bound) {
  std::visit(
      overloaded{
          [&](const PAtom& a) {
            auto it = sig.predicates.find(a.pred);
            if (it == sig.predicates.end()) throw Error("undeclared predicate: " + a.pred);
            if (it->second.size() != a.args.size())
              throw Error("arity mismatch for " + a.pred);
            for (size_t i = 0; i < a.args.size(); ++i) {
              SortName got = check_term(sig, a.args[i], bound);
              if (got != it->second[i])
                throw Error("sort mismatch in argument " + std::to_string(i + 1) + " of " +
                            a.pred + ": expected " + it->second[i] + ", got " + got);
            }
          },
          [&](const PTruth&) {},
          [&](const PFalsity&) {},
          [&](const PAnd& b) { check_prop(sig, b.l, bound); check_prop(sig, b.r, bound); },
          [&](const POr& b) { check_prop(sig, b.l, bound); check_prop(sig, b.r, bound); },
          [&](const PImp& b) { check_prop(sig, b.l, bound); check_prop(sig, b.r, bound); },
          [&](const PForall& q) {
            if (!sig.sorts.count(q.sort)) throw Error("undeclared sort: " + q.sort);
            std::vector<SortName> inner{q.sort};
            inner.insert(inner.end(), bound.begin(), bound.end());
            check_prop(sig, q.body, inner);
          },
          [&](const PExists& q) {
            if (!sig.sorts.count(q.sort)) throw Error("undeclared sort: " + q.sort);
            std::vector<SortName> inner{q.sort};
            inner.insert(inner.end(), bound.begin(), bound.end());
            check_prop(sig, q.body, inner);
          },
      },
      p->node);
}

namespace {

void collect_subformulas(const PropPtr& p, std::vector<PropPtr>& out, int& fresh_counter) {
  for (const auto& q : out)
    if (alpha_eq(q, p)) return;
  out.push_back(p);
  std::visit(overloaded{
                 [&](const PAtom&) {},
                 [&](const PTruth&) {},
                 [&](const PFalsity&) {},
                 [&](const PAnd& b) {
                   collect_subformulas(b.l, out, fresh_counter);
                   collect_subformulas(b.r, out, fresh_counter);
                 },
                 [&](const POr& b) {
                   collect_subformulas(b.l, out, fresh_counter);
                   collect_subformulas(b.r, out, fresh_counter);
                 },
                 [&](const PImp& b) {
                   collect_subformulas(b.l, out, fresh_counter);
                   collect_subformulas(b.r, out, fresh_counter);
                 },
                 [&](const PForall& q) {
                   TermPtr v = mk_var("#s" + std::to_string(fresh_counter++), q.sort);
                   collect_subformulas(open_body(q.body, v), out, fresh_counter);
                 },
                 [&](const PExists& q) {
                   TermPtr v = mk_var("#s" + std::to_string(fresh_counter++), q.sort);
                   collect_subformulas(open_body(q.body, v), out, fresh_counter);
                 },
             },
             p->node);
}

}  // namespace

std::vector<PropPtr> subformulas(const PropPtr& p) {
  std::vector<PropPtr> out;
  int fresh_counter = 0;
  collect_subformulas(p, out, fresh_counter);
  return out;
}

const PropPtr* lookup_hyp(const Context& ctx, const std::string& name) {
  for (auto it = ctx.rbegin(); it != ctx.rend(); ++it)
    if (it->name == name) return &it->prop;
  return nullptr;
}

void validate_context(const Signature& sig, const Context& ctx) {
  std::set<std::string> seen;
  for (const auto& h : ctx) {
    if (!seen.insert(h.name).second) throw Error("duplicate hypothesis name: " + h.name);
    check_prop(sig, h.prop);
  }
}

}  // namespace demod
