#include "demod/rewriting.hpp"

#include <algorithm>

namespace demod {

const RewriteRule* RewriteSystem::find(const std::string& name) const {
  for (const auto& r : rules)
    if (r.name == name) return &r;
  return nullptr;
}

bool RewriteSystem::has_prop_rules() const {
  return std::any_of(rules.begin(), rules.end(),
                     [](const RewriteRule& r) { return r.kind == RuleKind::PropRule; });
}

RewriteSystem RewriteSystem::term_only() const {
  RewriteSystem out;
  out.sig = sig;
  for (const auto& r : rules)
    if (r.kind == RuleKind::TermRule) out.rules.push_back(r);
  return out;
}

void RewriteSystem::validate() const {
  std::set<std::string> names;
  for (const auto& r : rules) {
    if (!names.insert(r.name).second) throw Error("duplicate rule name: " + r.name);
    if (r.kind == RuleKind::TermRule) {
      if (!r.term_lhs || !r.term_rhs) throw Error("malformed term rule: " + r.name);
      if (!std::holds_alternative<TApp>(r.term_lhs->node))
        throw Error("term rule LHS must be a function application: " + r.name);
      SortName ls = check_term(sig, r.term_lhs);
      SortName rs = check_term(sig, r.term_rhs);
      if (ls != rs) throw Error("rule sides have different sorts: " + r.name);
      auto lv = free_vars(r.term_lhs);
      for (const auto& [v, s] : free_vars(r.term_rhs)) {
        auto it = lv.find(v);
        if (it == lv.end()) throw Error("rule RHS variable not in LHS: " + v + " in " + r.name);
        if (it->second != s) throw Error("rule variable sort mismatch: " + v + " in " + r.name);
      }
    } else {
      if (!r.prop_lhs || !r.prop_rhs) throw Error("malformed proposition rule: " + r.name);
      if (!std::holds_alternative<PAtom>(r.prop_lhs->node))
        throw Error("proposition rule LHS must be atomic: " + r.name);
      check_prop(sig, r.prop_lhs);
      check_prop(sig, r.prop_rhs);
      auto lv = free_vars(r.prop_lhs);
      for (const auto& [v, s] : free_vars(r.prop_rhs)) {
        auto it = lv.find(v);
        if (it == lv.end()) throw Error("rule RHS variable not in LHS: " + v + " in " + r.name);
        if (it->second != s) throw Error("rule variable sort mismatch: " + v + " in " + r.name);
      }
    }
  }
}

// ---------------------------------------------------------------------------
// Matching.

bool match_term(const TermPtr& pattern, const TermPtr& subject,
                std::map<std::string, TermPtr>& subst) {
  return std::visit(
      overloaded{
          [&](const TVar& v) {
            auto it = subst.find(v.name);
            if (it != subst.end()) return alpha_eq(it->second, subject);
            subst.emplace(v.name, subject);
            return true;
          },
          [&](const TBound&) -> bool {
            throw KernelError("bound variable in rewrite pattern");
          },
          [&](const TApp& a) {
            auto* s = std::get_if<TApp>(&subject->node);
            if (!s || s->fn != a.fn || s->args.size() != a.args.size()) return false;
            for (size_t i = 0; i < a.args.size(); ++i)
              if (!match_term(a.args[i], s->args[i], subst)) return false;
            return true;
          },
      },
      pattern->node);
}

bool match_atom(const PropPtr& atom_pattern, const PropPtr& subject,
                std::map<std::string, TermPtr>& subst) {
  auto* pa = std::get_if<PAtom>(&atom_pattern->node);
  auto* sa = std::get_if<PAtom>(&subject->node);
  if (!pa || !sa || pa->pred != sa->pred || pa->args.size() != sa->args.size()) return false;
  for (size_t i = 0; i < pa->args.size(); ++i)
    if (!match_term(pa->args[i], sa->args[i], subst)) return false;
  return true;
}

// ---------------------------------------------------------------------------
// One leftmost-outermost step. Quantifier bodies are traversed by opening
// them with reserved fresh variables ("#r<depth>"), so matched subterms are
// always locally closed; the binder is closed back on the way up.

namespace {

std::optional<RewriteStep> step_term(const TermPtr& e, const RewriteSystem& R,
                                     std::vector<int>& pos, TermPtr* out) {
  for (const auto& r : R.rules) {
    if (r.kind != RuleKind::TermRule) continue;
    std::map<std::string, TermPtr> subst;
    if (match_term(r.term_lhs, e, subst)) {
      *out = substitute(r.term_rhs, subst);
      return RewriteStep{pos, r.name};
    }
  }
  if (auto* a = std::get_if<TApp>(&e->node)) {
    for (size_t i = 0; i < a->args.size(); ++i) {
      pos.push_back(static_cast<int>(i));
      TermPtr child;
      if (auto s = step_term(a->args[i], R, pos, &child)) {
        std::vector<TermPtr> args = a->args;
        args[i] = child;
        *out = mk_app(a->fn, std::move(args));
        return s;
      }
      pos.pop_back();
    }
  }
  return std::nullopt;
}

std::optional<RewriteStep> step_prop(const PropPtr& e, const RewriteSystem& R,
                                     std::vector<int>& pos, int depth, PropPtr* out) {
  if (auto* atom = std::get_if<PAtom>(&e->node)) {
    for (const auto& r : R.rules) {
      if (r.kind != RuleKind::PropRule) continue;
      std::map<std::string, TermPtr> subst;
      if (match_atom(r.prop_lhs, e, subst)) {
        *out = substitute(r.prop_rhs, subst);
        return RewriteStep{pos, r.name};
      }
    }
    for (size_t i = 0; i < atom->args.size(); ++i) {
      pos.push_back(static_cast<int>(i));
      TermPtr child;
      if (auto s = step_term(atom->args[i], R, pos, &child)) {
        std::vector<TermPtr> args = atom->args;
        args[i] = child;
        *out = mk_atom(atom->pred, std::move(args));
        return s;
      }
      pos.pop_back();
    }
    return std::nullopt;
  }
  auto binary = [&](const PropPtr& l, const PropPtr& r,
                    PropPtr (*mk)(PropPtr, PropPtr)) -> std::optional<RewriteStep> {
    pos.push_back(0);
    PropPtr child;
    if (auto s = step_prop(l, R, pos, depth, &child)) {
      *out = mk(child, r);
      return s;
    }
    pos.back() = 1;
    if (auto s = step_prop(r, R, pos, depth, &child)) {
      *out = mk(l, child);
      return s;
    }
    pos.pop_back();
    return std::nullopt;
  };
  return std::visit(
      overloaded{
          [&](const PAtom&) -> std::optional<RewriteStep> { return std::nullopt; },
          [&](const PTruth&) -> std::optional<RewriteStep> { return std::nullopt; },
          [&](const PFalsity&) -> std::optional<RewriteStep> { return std::nullopt; },
          [&](const PAnd& b) { return binary(b.l, b.r, &mk_and); },
          [&](const POr& b) { return binary(b.l, b.r, &mk_or); },
          [&](const PImp& b) { return binary(b.l, b.r, &mk_imp); },
          [&](const PForall& q) -> std::optional<RewriteStep> {
            std::string fresh = "#r" + std::to_string(depth);
            pos.push_back(0);
            PropPtr child;
            if (auto s = step_prop(open_body(q.body, mk_var(fresh, q.sort)), R, pos, depth + 1,
                                   &child)) {
              *out = mk_forall(q.hint, q.sort, close_body(child, fresh));
              return s;
            }
            pos.pop_back();
            return std::nullopt;
          },
          [&](const PExists& q) -> std::optional<RewriteStep> {
            std::string fresh = "#r" + std::to_string(depth);
            pos.push_back(0);
            PropPtr child;
            if (auto s = step_prop(open_body(q.body, mk_var(fresh, q.sort)), R, pos, depth + 1,
                                   &child)) {
              *out = mk_exists(q.hint, q.sort, close_body(child, fresh));
              return s;
            }
            pos.pop_back();
            return std::nullopt;
          },
      },
      e->node);
}

}  // namespace

std::optional<RewriteStep> rewrite_step(const TermPtr& e, const RewriteSystem& R, TermPtr* out) {
  std::vector<int> pos;
  return step_term(e, R, pos, out);
}

std::optional<RewriteStep> rewrite_step(const PropPtr& e, const RewriteSystem& R, PropPtr* out) {
  std::vector<int> pos;
  return step_prop(e, R, pos, 0, out);
}

// ---------------------------------------------------------------------------

namespace {

template <class T>
T replay_impl(const T& start, const std::vector<RewriteStep>& steps, const RewriteSystem& R) {
  T cur = start;
  for (const auto& st : steps) {
    T next;
    auto got = rewrite_step(cur, R, &next);
    if (!got || got->pos != st.pos || got->rule != st.rule)
      throw KernelError("rewrite witness replay diverged at rule " + st.rule);
    cur = next;
  }
  return cur;
}

template <class T>
NormalizeResult<T> normalize_impl(const T& e, const RewriteSystem& R, std::size_t fuel) {
  NormalizeResult<T> res;
  res.value = e;
  while (true) {
    T next;
    auto st = rewrite_step(res.value, R, &next);
    if (!st) {
      res.status = NormalizeStatus::NormalForm;
      return res;
    }
    if (res.steps.size() >= fuel) {
      res.status = NormalizeStatus::FuelExhausted;
      return res;
    }
    res.value = next;
    res.steps.push_back(*st);
  }
}

template <class T>
CongruenceResult<T> congruent_impl(const T& a, const T& b, const RewriteSystem& R,
                                   std::size_t depth) {
  auto na = normalize_impl(a, R, depth);
  auto nb = normalize_impl(b, R, depth);
  // Reduction sequences along the deterministic strategy.
  std::vector<T> seq_a{a}, seq_b{b};
  seq_a.reserve(na.steps.size() + 1);
  seq_b.reserve(nb.steps.size() + 1);
  {
    T cur = a;
    for (const auto& st : na.steps) {
      T next;
      auto got = rewrite_step(cur, R, &next);
      (void)st;
      cur = next;
      seq_a.push_back(cur);
    }
    cur = b;
    for (const auto& st : nb.steps) {
      T next;
      auto got = rewrite_step(cur, R, &next);
      (void)st;
      cur = next;
      seq_b.push_back(cur);
    }
  }
  // Smallest combined number of steps first, so witnesses are minimal.
  for (size_t s = 0; s < seq_a.size() + seq_b.size() - 1; ++s) {
    for (size_t i = 0; i <= s && i < seq_a.size(); ++i) {
      size_t j = s - i;
      if (j >= seq_b.size()) continue;
      if (alpha_eq(seq_a[i], seq_b[j])) {
        JoinWitness<T> w;
        w.from_a.assign(na.steps.begin(), na.steps.begin() + i);
        w.from_b.assign(nb.steps.begin(), nb.steps.begin() + j);
        w.meet = seq_a[i];
        return {Congruence::Yes, std::move(w)};
      }
    }
  }
  if (na.status == NormalizeStatus::NormalForm && nb.status == NormalizeStatus::NormalForm)
    return {Congruence::No, std::nullopt};
  return {Congruence::Unknown, std::nullopt};
}

template <class T>
bool validate_witness_impl(const T& a, const T& b, const JoinWitness<T>& w,
                           const RewriteSystem& R) {
  try {
    T ma = replay_impl(a, w.from_a, R);
    T mb = replay_impl(b, w.from_b, R);
    return alpha_eq(ma, w.meet) && alpha_eq(mb, w.meet);
  } catch (const KernelError&) {
    return false;
  }
}

}  // namespace

TermPtr replay_steps(const TermPtr& start, const std::vector<RewriteStep>& steps,
                     const RewriteSystem& R) {
  return replay_impl(start, steps, R);
}
PropPtr replay_steps(const PropPtr& start, const std::vector<RewriteStep>& steps,
                     const RewriteSystem& R) {
  return replay_impl(start, steps, R);
}

NormalizeResult<TermPtr> normalize(const TermPtr& e, const RewriteSystem& R, std::size_t fuel) {
  return normalize_impl(e, R, fuel);
}
NormalizeResult<PropPtr> normalize(const PropPtr& e, const RewriteSystem& R, std::size_t fuel) {
  return normalize_impl(e, R, fuel);
}

NormalizeResult<PropPtr> whnf(const PropPtr& e, const RewriteSystem& R, std::size_t budget) {
  NormalizeResult<PropPtr> res;
  res.value = e;
  while (std::holds_alternative<PAtom>(res.value->node)) {
    PropPtr next;
    auto st = rewrite_step(res.value, R, &next);
    if (!st) return res;
    if (res.steps.size() >= budget) {
      res.status = NormalizeStatus::FuelExhausted;
      return res;
    }
    res.value = next;
    res.steps.push_back(*st);
  }
  return res;
}

CongruenceResult<TermPtr> congruent(const TermPtr& a, const TermPtr& b, const RewriteSystem& R,
                                    std::size_t depth) {
  return congruent_impl(a, b, R, depth);
}
CongruenceResult<PropPtr> congruent(const PropPtr& a, const PropPtr& b, const RewriteSystem& R,
                                    std::size_t depth) {
  return congruent_impl(a, b, R, depth);
}

bool validate_witness(const TermPtr& a, const TermPtr& b, const JoinWitness<TermPtr>& w,
                      const RewriteSystem& R) {
  return validate_witness_impl(a, b, w, R);
}
bool validate_witness(const PropPtr& a, const PropPtr& b, const JoinWitness<PropPtr>& w,
                      const RewriteSystem& R) {
  return validate_witness_impl(a, b, w, R);
}

// ---------------------------------------------------------------------------
// Critical pairs.

namespace {

// Resolve a term under a unification substitution, deeply.
TermPtr uwalk(const TermPtr& t, const std::map<std::string, TermPtr>& s) {
  return std::visit(overloaded{
                        [&](const TVar& v) -> TermPtr {
                          auto it = s.find(v.name);
                          return it == s.end() ? t : uwalk(it->second, s);
                        },
                        [&](const TBound&) -> TermPtr { return t; },
                        [&](const TApp& a) -> TermPtr {
                          std::vector<TermPtr> args;
                          args.reserve(a.args.size());
                          for (const auto& arg : a.args) args.push_back(uwalk(arg, s));
                          return mk_app(a.fn, std::move(args));
                        },
                    },
                    t->node);
}

bool occurs(const std::string& name, const TermPtr& t, const std::map<std::string, TermPtr>& s) {
  return std::visit(overloaded{
                        [&](const TVar& v) {
                          if (v.name == name) return true;
                          auto it = s.find(v.name);
                          return it != s.end() && occurs(name, it->second, s);
                        },
                        [&](const TBound&) { return false; },
                        [&](const TApp& a) {
                          for (const auto& arg : a.args)
                            if (occurs(name, arg, s)) return true;
                          return false;
                        },
                    },
                    t->node);
}

bool unify(const TermPtr& a0, const TermPtr& b0, std::map<std::string, TermPtr>& s) {
  TermPtr a = a0, b = b0;
  // Chase root variable bindings.
  while (auto* v = std::get_if<TVar>(&a->node)) {
    auto it = s.find(v->name);
    if (it == s.end()) break;
    a = it->second;
  }
  while (auto* v = std::get_if<TVar>(&b->node)) {
    auto it = s.find(v->name);
    if (it == s.end()) break;
    b = it->second;
  }
  if (auto* va = std::get_if<TVar>(&a->node)) {
    if (auto* vb = std::get_if<TVar>(&b->node); vb && vb->name == va->name) return true;
    if (occurs(va->name, b, s)) return false;
    s.emplace(va->name, b);
    return true;
  }
  if (std::get_if<TVar>(&b->node)) return unify(b, a, s);
  auto* fa = std::get_if<TApp>(&a->node);
  auto* fb = std::get_if<TApp>(&b->node);
  if (!fa || !fb || fa->fn != fb->fn || fa->args.size() != fb->args.size()) return false;
  for (size_t i = 0; i < fa->args.size(); ++i)
    if (!unify(fa->args[i], fb->args[i], s)) return false;
  return true;
}

TermPtr rename_apart(const TermPtr& t, const std::string& suffix) {
  std::map<std::string, TermPtr> m;
  for (const auto& [v, sort] : free_vars(t)) m.emplace(v, mk_var(v + suffix, sort));
  return substitute(t, m);
}
PropPtr rename_apart(const PropPtr& p, const std::string& suffix) {
  std::map<std::string, TermPtr> m;
  for (const auto& [v, sort] : free_vars(p)) m.emplace(v, mk_var(v + suffix, sort));
  return substitute(p, m);
}

// Non-variable subterm positions of a term, outermost first.
void nonvar_positions(const TermPtr& t, std::vector<int>& pos,
                      std::vector<std::pair<std::vector<int>, TermPtr>>& out) {
  if (std::holds_alternative<TVar>(t->node)) return;
  out.emplace_back(pos, t);
  if (auto* a = std::get_if<TApp>(&t->node)) {
    for (size_t i = 0; i < a->args.size(); ++i) {
      pos.push_back(static_cast<int>(i));
      nonvar_positions(a->args[i], pos, out);
      pos.pop_back();
    }
  }
}

TermPtr replace_at(const TermPtr& t, const std::vector<int>& pos, size_t k, const TermPtr& v) {
  if (k == pos.size()) return v;
  auto* a = std::get_if<TApp>(&t->node);
  if (!a) throw KernelError("bad replacement position");
  std::vector<TermPtr> args = a->args;
  args[pos[k]] = replace_at(args[pos[k]], pos, k + 1, v);
  return mk_app(a->fn, std::move(args));
}

void canonical_var_order(const TermPtr& t, std::vector<std::pair<std::string, SortName>>& out) {
  std::visit(overloaded{
                 [&](const TVar& v) {
                   for (const auto& [n, s] : out)
                     if (n == v.name) return;
                   out.emplace_back(v.name, v.sort);
                 },
                 [&](const TBound&) {},
                 [&](const TApp& a) {
                   for (const auto& arg : a.args) canonical_var_order(arg, out);
                 },
             },
             t->node);
}

std::map<std::string, TermPtr> canonical_renaming(const std::variant<TermPtr, PropPtr>& peak) {
  std::vector<std::pair<std::string, SortName>> order;
  if (auto* t = std::get_if<TermPtr>(&peak)) {
    canonical_var_order(*t, order);
  } else {
    const PropPtr& p = std::get<PropPtr>(peak);
    if (auto* a = std::get_if<PAtom>(&p->node))
      for (const auto& arg : a->args) canonical_var_order(arg, order);
  }
  std::map<std::string, TermPtr> m;
  int i = 1;
  for (const auto& [n, s] : order) m.emplace(n, mk_var("x" + std::to_string(i++), s));
  return m;
}

}  // namespace

std::vector<CriticalPair> critical_pairs(const RewriteSystem& R, std::size_t join_depth) {
  std::vector<CriticalPair> out;

  auto push = [&](const std::string& r1, const std::string& r2,
                  std::variant<TermPtr, PropPtr> peak, std::variant<TermPtr, PropPtr> left,
                  std::variant<TermPtr, PropPtr> right) {
    auto ren = canonical_renaming(peak);
    CriticalPair cp;
    cp.rule1 = r1;
    cp.rule2 = r2;
    auto apply = [&](std::variant<TermPtr, PropPtr>& e) {
      if (auto* t = std::get_if<TermPtr>(&e))
        e = substitute(*t, ren);
      else
        e = substitute(std::get<PropPtr>(e), ren);
    };
    cp.peak = std::move(peak);
    cp.left = std::move(left);
    cp.right = std::move(right);
    apply(cp.peak);
    apply(cp.left);
    apply(cp.right);
    if (std::holds_alternative<TermPtr>(cp.left)) {
      cp.joinable = congruent(std::get<TermPtr>(cp.left), std::get<TermPtr>(cp.right), R,
                              join_depth).verdict == Congruence::Yes;
    } else {
      cp.joinable = congruent(std::get<PropPtr>(cp.left), std::get<PropPtr>(cp.right), R,
                              join_depth).verdict == Congruence::Yes;
    }
    out.push_back(std::move(cp));
  };

  for (size_t i = 0; i < R.rules.size(); ++i) {
    const auto& r1 = R.rules[i];
    for (size_t j = 0; j < R.rules.size(); ++j) {
      const auto& r2raw = R.rules[j];
      if (r1.kind == RuleKind::TermRule && r2raw.kind == RuleKind::TermRule) {
        TermPtr l2 = rename_apart(r2raw.term_lhs, "#2");
        TermPtr rr2 = rename_apart(r2raw.term_rhs, "#2");
        std::vector<std::pair<std::vector<int>, TermPtr>> spots;
        std::vector<int> pos;
        nonvar_positions(r1.term_lhs, pos, spots);
        for (const auto& [p, sub] : spots) {
          if (p.empty() && i == j) continue;  // trivial root self-overlap
          std::map<std::string, TermPtr> s;
          if (!unify(sub, l2, s)) continue;
          TermPtr peak = uwalk(r1.term_lhs, s);
          TermPtr left = uwalk(r1.term_rhs, s);
          TermPtr right = uwalk(replace_at(r1.term_lhs, p, 0, rr2), s);
          push(r1.name, r2raw.name, peak, left, right);
        }
      } else if (r1.kind == RuleKind::PropRule && r2raw.kind == RuleKind::TermRule) {
        // Term rule rewriting inside the atom arguments of a proposition rule.
        TermPtr l2 = rename_apart(r2raw.term_lhs, "#2");
        TermPtr rr2 = rename_apart(r2raw.term_rhs, "#2");
        const auto& atom = std::get<PAtom>(r1.prop_lhs->node);
        for (size_t ai = 0; ai < atom.args.size(); ++ai) {
          std::vector<std::pair<std::vector<int>, TermPtr>> spots;
          std::vector<int> pos;
          nonvar_positions(atom.args[ai], pos, spots);
          for (const auto& [p, sub] : spots) {
            std::map<std::string, TermPtr> s;
            if (!unify(sub, l2, s)) continue;
            std::vector<TermPtr> args = atom.args;
            args[ai] = replace_at(args[ai], p, 0, rr2);
            std::map<std::string, TermPtr> deep;
            PropPtr peak = mk_atom(atom.pred, atom.args);
            // Apply the unifier by walking every argument.
            std::vector<TermPtr> peak_args, right_args;
            for (const auto& a : atom.args) peak_args.push_back(uwalk(a, s));
            for (const auto& a : args) right_args.push_back(uwalk(a, s));
            std::map<std::string, TermPtr> flat;
            for (const auto& [v, sort] : free_vars(r1.prop_rhs)) {
              flat.emplace(v, uwalk(mk_var(v, sort), s));
            }
            push(r1.name, r2raw.name, mk_atom(atom.pred, peak_args),
                 substitute(r1.prop_rhs, flat), mk_atom(atom.pred, right_args));
          }
        }
      } else if (r1.kind == RuleKind::PropRule && r2raw.kind == RuleKind::PropRule) {
        if (i >= j) continue;  // unordered pairs once; same-rule overlap is trivial
        const auto& a1 = std::get<PAtom>(r1.prop_lhs->node);
        PropPtr l2 = rename_apart(r2raw.prop_lhs, "#2");
        PropPtr rhs2 = rename_apart(r2raw.prop_rhs, "#2");
        const auto& a2 = std::get<PAtom>(l2->node);
        if (a1.pred != a2.pred || a1.args.size() != a2.args.size()) continue;
        std::map<std::string, TermPtr> s;
        bool ok = true;
        for (size_t k = 0; k < a1.args.size() && ok; ++k) ok = unify(a1.args[k], a2.args[k], s);
        if (!ok) continue;
        std::vector<TermPtr> peak_args;
        for (const auto& a : a1.args) peak_args.push_back(uwalk(a, s));
        auto flatten = [&](const PropPtr& rhs) {
          std::map<std::string, TermPtr> flat;
          for (const auto& [v, sort] : free_vars(rhs)) flat.emplace(v, uwalk(mk_var(v, sort), s));
          return substitute(rhs, flat);
        };
        push(r1.name, r2raw.name, mk_atom(a1.pred, peak_args), flatten(r1.prop_rhs),
             flatten(rhs2));
      }
    }
  }
  return out;
}

}  // namespace demod
