#include "demod/proofs.hpp"

#include "demod/print.hpp"

namespace demod {

namespace {

struct RejectEx {
  Rejection r;
};

struct Inferred {
  PropPtr prop;
  DerivationNode node;
};

struct Checker {
  const RuleSystem& sys;
  const Budgets& budgets;
  std::set<std::string> used;
  std::vector<int> path;

  [[noreturn]] void reject(RejectReason reason, const std::string& msg) {
    throw RejectEx{Rejection{reason, path, msg}};
  }

  std::string fresh(const std::string& hint) {
    std::string n = fresh_name(hint.empty() ? "h" : hint, used);
    used.insert(n);
    return n;
  }

  struct PathGuard {
    Checker& c;
    PathGuard(Checker& c_, int child) : c(c_) { c.path.push_back(child); }
    ~PathGuard() { c.path.pop_back(); }
  };

  // Weak-head exposure of a proposition via the system's congruence.
  PropPtr expose(const PropPtr& p, std::vector<CongruenceUse>& uses) {
    auto r = whnf(p, sys.congruence, budgets.congruence_depth);
    if (r.status == NormalizeStatus::FuelExhausted)
      reject(RejectReason::Budget, "weak-head normalization budget exhausted on " + print_key(p));
    if (!r.steps.empty())
      uses.push_back(CongruenceUse{"expose", p, r.value, r.steps, {}});
    return r.value;
  }

  // Records a congruence comparison; rejects on No (mismatch) and on
  // Unknown (budget), keeping the two cases distinct.
  void compare(const PropPtr& got, const PropPtr& want, std::vector<CongruenceUse>& uses) {
    auto r = congruent(got, want, sys.congruence, budgets.congruence_depth);
    if (r.verdict == Congruence::Yes) {
      if (!r.witness->from_a.empty() || !r.witness->from_b.empty())
        uses.push_back(
            CongruenceUse{"compare", got, want, r.witness->from_a, r.witness->from_b});
      return;
    }
    if (r.verdict == Congruence::No)
      reject(RejectReason::Mismatch,
             "proposition mismatch: " + print_key(got) + " vs " + print_key(want));
    reject(RejectReason::Budget,
           "congruence undecided within budget: " + print_key(got) + " vs " + print_key(want));
  }

  static std::string print_key(const PropPtr& p) { return canonical_key(p); }

  void check_sorted_prop(const PropPtr& p) {
    try {
      check_prop(sys.theory.sig, p);
    } catch (const Error& e) {
      reject(RejectReason::Sort, e.what());
    }
  }

  SortName sorted_term(const TermPtr& t) {
    try {
      return check_term(sys.theory.sig, t);
    } catch (const Error& e) {
      reject(RejectReason::Sort, e.what());
    }
  }

  const RewriteRule& prop_rule(const std::string& name) {
    const RewriteRule* r = sys.theory.find(name);
    if (!r || r->kind != RuleKind::PropRule)
      reject(RejectReason::UnknownRule, "unknown proposition rule: " + name);
    return *r;
  }

  // Matches `pattern` against `subject` after term-normalizing the subject's
  // arguments, so fold/unfold targets may differ by term rewriting.
  bool match_modulo(const PropPtr& pattern, const PropPtr& subject,
                    std::map<std::string, TermPtr>& subst) {
    if (match_atom(pattern, subject, subst)) return true;
    auto n = normalize(subject, sys.congruence, budgets.congruence_depth);
    subst.clear();
    return match_atom(pattern, n.value, subst);
  }

  // ---------------------------------------------------------------------

  DerivationNode check(const ProofPtr& p, const Context& ctx, const PropPtr& goal) {
    DerivationNode node;
    node.seq = Sequent{ctx, goal};
    bool handled = std::visit(
        overloaded{
            [&](const PrLam& x) {
              node.rule = "imp-intro";
              check_sorted_prop(x.ann);
              PropPtr g = expose(goal, node.congruences);
              auto* imp = std::get_if<PImp>(&g->node);
              if (!imp) reject(RejectReason::Mismatch, "proof is an implication introduction");
              compare(x.ann, imp->l, node.congruences);
              std::string h = fresh(x.hint);
              Context ctx2 = ctx;
              ctx2.push_back(Hypothesis{h, x.ann});
              PathGuard g0(*this, 0);
              node.children.push_back(check(open_hyp_at(x.body, 0, mk_hyp(h)), ctx2, imp->r));
              return true;
            },
            [&](const PrPair& x) {
              node.rule = "and-intro";
              PropPtr g = expose(goal, node.congruences);
              auto* conj = std::get_if<PAnd>(&g->node);
              if (!conj) reject(RejectReason::Mismatch, "proof is a conjunction introduction");
              {
                PathGuard g0(*this, 0);
                node.children.push_back(check(x.l, ctx, conj->l));
              }
              PathGuard g1(*this, 1);
              node.children.push_back(check(x.r, ctx, conj->r));
              return true;
            },
            [&](const PrInj& x) {
              node.rule = x.right ? "or-intro-2" : "or-intro-1";
              PropPtr g = expose(goal, node.congruences);
              auto* o = std::get_if<POr>(&g->node);
              if (!o) reject(RejectReason::Mismatch, "proof is a disjunction introduction");
              PathGuard g0(*this, 0);
              node.children.push_back(check(x.p, ctx, x.right ? o->r : o->l));
              return true;
            },
            [&](const PrGen& x) {
              node.rule = "forall-intro";
              PropPtr g = expose(goal, node.congruences);
              auto* q = std::get_if<PForall>(&g->node);
              if (!q) reject(RejectReason::Mismatch, "proof is a universal introduction");
              if (q->sort != x.sort)
                reject(RejectReason::Sort, "generalization sort differs from goal sort");
              std::string v = fresh(x.hint.empty() ? "x" : x.hint);
              TermPtr var = mk_var(v, x.sort);
              PathGuard g0(*this, 0);
              node.children.push_back(
                  check(open_pvar_at(x.body, 0, var), ctx, open_body(q->body, var)));
              return true;
            },
            [&](const PrPack& x) {
              node.rule = "exists-intro";
              PropPtr g = expose(goal, node.congruences);
              auto* q = std::get_if<PExists>(&g->node);
              if (!q) reject(RejectReason::Mismatch, "proof is an existential introduction");
              if (sorted_term(x.witness) != q->sort)
                reject(RejectReason::Sort, "witness sort differs from quantifier sort");
              PathGuard g0(*this, 0);
              node.children.push_back(check(x.p, ctx, open_body(q->body, x.witness)));
              return true;
            },
            [&](const PrUnit&) {
              node.rule = "truth-intro";
              PropPtr g = expose(goal, node.congruences);
              if (!std::holds_alternative<PTruth>(g->node))
                reject(RejectReason::Mismatch, "tt proves only top");
              return true;
            },
            [&](const PrMatch& x) {
              node.rule = "or-elim";
              Inferred s;
              {
                PathGuard g0(*this, 0);
                s = infer(x.scrut, ctx);
              }
              PropPtr sp = expose(s.prop, node.congruences);
              auto* o = std::get_if<POr>(&sp->node);
              if (!o) reject(RejectReason::Mismatch, "case scrutinee is not a disjunction");
              node.children.push_back(std::move(s.node));
              {
                std::string h = fresh(x.lhint);
                Context ctx2 = ctx;
                ctx2.push_back(Hypothesis{h, o->l});
                PathGuard g1(*this, 1);
                node.children.push_back(check(open_hyp_at(x.lbody, 0, mk_hyp(h)), ctx2, goal));
              }
              std::string h = fresh(x.rhint);
              Context ctx2 = ctx;
              ctx2.push_back(Hypothesis{h, o->r});
              PathGuard g2(*this, 2);
              node.children.push_back(check(open_hyp_at(x.rbody, 0, mk_hyp(h)), ctx2, goal));
              return true;
            },
            [&](const PrUnpack& x) {
              node.rule = "exists-elim";
              Inferred s;
              {
                PathGuard g0(*this, 0);
                s = infer(x.scrut, ctx);
              }
              PropPtr sp = expose(s.prop, node.congruences);
              auto* q = std::get_if<PExists>(&sp->node);
              if (!q) reject(RejectReason::Mismatch, "unpack scrutinee is not an existential");
              node.children.push_back(std::move(s.node));
              std::string v = fresh(x.vhint.empty() ? "x" : x.vhint);
              std::string h = fresh(x.hhint);
              TermPtr var = mk_var(v, q->sort);
              Context ctx2 = ctx;
              ctx2.push_back(Hypothesis{h, open_body(q->body, var)});
              ProofPtr body = open_hyp_at(open_pvar_at(x.body, 0, var), 0, mk_hyp(h));
              PathGuard g1(*this, 1);
              node.children.push_back(check(body, ctx2, goal));
              return true;
            },
            [&](const PrFold& x) {
              if (sys.kind != SystemKind::FoldUnfold)
                reject(RejectReason::IllegalNode,
                       "fold nodes are only legal in the fold/unfold system");
              node.rule = "fold";
              const RewriteRule& r = prop_rule(x.rule);
              PropPtr g = expose(goal, node.congruences);
              std::map<std::string, TermPtr> subst;
              if (!match_modulo(r.prop_lhs, g, subst))
                reject(RejectReason::Mismatch, "fold target does not match rule " + x.rule);
              PathGuard g0(*this, 0);
              node.children.push_back(check(x.p, ctx, substitute(r.prop_rhs, subst)));
              return true;
            },
            [&](const PrSuperIntro& x) {
              if (sys.kind != SystemKind::SuperNatural)
                reject(RejectReason::IllegalNode,
                       "sintro nodes are only legal in the supernatural system");
              node.rule = "super-intro";
              PropPtr g = expose(goal, node.congruences);
              std::map<std::string, TermPtr> subst;
              auto it = sys.super.find(x.rule);
              if (it == sys.super.end())
                reject(RejectReason::UnknownRule, "unknown supernatural rule: " + x.rule);
              if (!match_modulo(it->second.lhs, g, subst))
                reject(RejectReason::Mismatch, "sintro target does not match rule " + x.rule);
              check_super_intro(x, it->second, subst, ctx, node);
              return true;
            },
            [&](const auto&) { return false; },
        },
        p->node);
    if (!handled) {
      Inferred i = infer(p, ctx);
      compare(i.prop, goal, i.node.congruences);
      i.node.seq = Sequent{ctx, goal};
      return std::move(i.node);
    }
    return node;
  }

  void check_super_intro(const PrSuperIntro& x, const SuperRuleInfo& info,
                         const std::map<std::string, TermPtr>& subst, const Context& ctx,
                         DerivationNode& node) {
    if (x.subs.size() != info.leaves.size())
      reject(RejectReason::Mismatch, "sintro expects " + std::to_string(info.leaves.size()) +
                                         " premises, got " + std::to_string(x.subs.size()));
    for (size_t i = 0; i < x.subs.size(); ++i) {
      const SuperLeaf& leaf = info.leaves[i];
      const SuperSub& sub = x.subs[i];
      if (sub.binders.size() != leaf.path.size())
        reject(RejectReason::Mismatch, "premise " + std::to_string(i + 1) + " expects " +
                                           std::to_string(leaf.path.size()) + " binders");
      for (size_t j = 0; j < leaf.path.size(); ++j)
        if (sub.binders[j].is_var != leaf.path[j].is_var)
          reject(RejectReason::Mismatch,
                 "premise binder kinds do not match the rule decomposition");
      std::map<std::string, TermPtr> inst = subst;
      Context ctx2 = ctx;
      ProofPtr body = sub.body;
      int hyps_left = 0, vars_left = 0;
      for (const auto& b : leaf.path) (b.is_var ? vars_left : hyps_left)++;
      for (size_t j = 0; j < leaf.path.size(); ++j) {
        const auto& b = leaf.path[j];
        if (b.is_var) {
          std::string v = fresh(sub.binders[j].name.empty() ? b.name : sub.binders[j].name);
          TermPtr var = mk_var(v, b.sort);
          body = open_pvar_at(body, --vars_left, var);
          inst[b.name] = var;
        } else {
          std::string h = fresh(sub.binders[j].name.empty() ? "h" : sub.binders[j].name);
          body = open_hyp_at(body, --hyps_left, mk_hyp(h));
          ctx2.push_back(Hypothesis{h, substitute(b.hyp, inst)});
        }
      }
      PathGuard g0(*this, static_cast<int>(i));
      node.children.push_back(check(body, ctx2, substitute(leaf.concl, inst)));
    }
  }

  Inferred infer(const ProofPtr& p, const Context& ctx) {
    Inferred out;
    out.node.seq.ctx = ctx;
    std::visit(
        overloaded{
            [&](const PrHyp& h) {
              out.node.rule = "hyp";
              const PropPtr* prop = lookup_hyp(ctx, h.name);
              if (!prop) reject(RejectReason::Scope, "unknown hypothesis: " + h.name);
              out.prop = *prop;
            },
            [&](const PrBoundHyp&) {
              reject(RejectReason::Scope, "unbound hypothesis index");
            },
            [&](const PrLam& x) {
              out.node.rule = "imp-intro";
              check_sorted_prop(x.ann);
              std::string h = fresh(x.hint);
              Context ctx2 = ctx;
              ctx2.push_back(Hypothesis{h, x.ann});
              PathGuard g0(*this, 0);
              Inferred body = infer(open_hyp_at(x.body, 0, mk_hyp(h)), ctx2);
              out.node.children.push_back(std::move(body.node));
              out.prop = mk_imp(x.ann, body.prop);
            },
            [&](const PrApp& x) {
              out.node.rule = "imp-elim";
              Inferred f;
              {
                PathGuard g0(*this, 0);
                f = infer(x.fn, ctx);
              }
              PropPtr fp = expose(f.prop, out.node.congruences);
              auto* imp = std::get_if<PImp>(&fp->node);
              if (!imp) reject(RejectReason::Mismatch, "applied proof is not an implication");
              out.node.children.push_back(std::move(f.node));
              PathGuard g1(*this, 1);
              out.node.children.push_back(check(x.arg, ctx, imp->l));
              out.prop = imp->r;
            },
            [&](const PrPair& x) {
              out.node.rule = "and-intro";
              Inferred l, r;
              {
                PathGuard g0(*this, 0);
                l = infer(x.l, ctx);
              }
              {
                PathGuard g1(*this, 1);
                r = infer(x.r, ctx);
              }
              out.node.children.push_back(std::move(l.node));
              out.node.children.push_back(std::move(r.node));
              out.prop = mk_and(l.prop, r.prop);
            },
            [&](const PrProj& x) {
              out.node.rule = x.second ? "and-elim-2" : "and-elim-1";
              Inferred q;
              {
                PathGuard g0(*this, 0);
                q = infer(x.p, ctx);
              }
              PropPtr qp = expose(q.prop, out.node.congruences);
              auto* a = std::get_if<PAnd>(&qp->node);
              if (!a) reject(RejectReason::Mismatch, "projection from a non-conjunction");
              out.node.children.push_back(std::move(q.node));
              out.prop = x.second ? a->r : a->l;
            },
            [&](const PrInj&) {
              reject(RejectReason::CannotInfer,
                     "disjunction introduction needs a checking goal");
            },
            [&](const PrMatch& x) {
              out.node.rule = "or-elim";
              Inferred s;
              {
                PathGuard g0(*this, 0);
                s = infer(x.scrut, ctx);
              }
              PropPtr sp = expose(s.prop, out.node.congruences);
              auto* o = std::get_if<POr>(&sp->node);
              if (!o) reject(RejectReason::Mismatch, "case scrutinee is not a disjunction");
              out.node.children.push_back(std::move(s.node));
              Inferred l, r;
              {
                std::string h = fresh(x.lhint);
                Context ctx2 = ctx;
                ctx2.push_back(Hypothesis{h, o->l});
                PathGuard g1(*this, 1);
                l = infer(open_hyp_at(x.lbody, 0, mk_hyp(h)), ctx2);
              }
              {
                std::string h = fresh(x.rhint);
                Context ctx2 = ctx;
                ctx2.push_back(Hypothesis{h, o->r});
                PathGuard g2(*this, 2);
                r = infer(open_hyp_at(x.rbody, 0, mk_hyp(h)), ctx2);
              }
              compare(r.prop, l.prop, out.node.congruences);
              out.node.children.push_back(std::move(l.node));
              out.node.children.push_back(std::move(r.node));
              out.prop = l.prop;
            },
            [&](const PrGen& x) {
              out.node.rule = "forall-intro";
              if (!sys.theory.sig.sorts.count(x.sort))
                reject(RejectReason::Sort, "undeclared sort: " + x.sort);
              std::string v = fresh(x.hint.empty() ? "x" : x.hint);
              TermPtr var = mk_var(v, x.sort);
              PathGuard g0(*this, 0);
              Inferred body = infer(open_pvar_at(x.body, 0, var), ctx);
              out.node.children.push_back(std::move(body.node));
              out.prop = mk_forall(x.hint, x.sort, close_body(body.prop, v));
            },
            [&](const PrInst& x) {
              out.node.rule = "forall-elim";
              Inferred q;
              {
                PathGuard g0(*this, 0);
                q = infer(x.p, ctx);
              }
              PropPtr qp = expose(q.prop, out.node.congruences);
              auto* f = std::get_if<PForall>(&qp->node);
              if (!f) reject(RejectReason::Mismatch, "instantiation of a non-universal");
              if (sorted_term(x.witness) != f->sort)
                reject(RejectReason::Sort, "instantiation term sort differs");
              out.node.children.push_back(std::move(q.node));
              out.prop = open_body(f->body, x.witness);
            },
            [&](const PrPack&) {
              reject(RejectReason::CannotInfer,
                     "existential introduction needs a checking goal");
            },
            [&](const PrUnpack& x) {
              out.node.rule = "exists-elim";
              Inferred s;
              {
                PathGuard g0(*this, 0);
                s = infer(x.scrut, ctx);
              }
              PropPtr sp = expose(s.prop, out.node.congruences);
              auto* q = std::get_if<PExists>(&sp->node);
              if (!q) reject(RejectReason::Mismatch, "unpack scrutinee is not an existential");
              out.node.children.push_back(std::move(s.node));
              std::string v = fresh(x.vhint.empty() ? "x" : x.vhint);
              std::string h = fresh(x.hhint);
              TermPtr var = mk_var(v, q->sort);
              Context ctx2 = ctx;
              ctx2.push_back(Hypothesis{h, open_body(q->body, var)});
              PathGuard g1(*this, 1);
              Inferred body = infer(open_hyp_at(open_pvar_at(x.body, 0, var), 0, mk_hyp(h)), ctx2);
              if (free_vars(body.prop).count(v))
                reject(RejectReason::Mismatch, "existential witness variable escapes its scope");
              out.node.children.push_back(std::move(body.node));
              out.prop = body.prop;
            },
            [&](const PrUnit&) {
              out.node.rule = "truth-intro";
              out.prop = mk_truth();
            },
            [&](const PrAbsurd& x) {
              out.node.rule = "falsity-elim";
              check_sorted_prop(x.goal);
              PathGuard g0(*this, 0);
              out.node.children.push_back(check(x.p, ctx, mk_falsity()));
              out.prop = x.goal;
            },
            [&](const PrFold& x) {
              if (sys.kind != SystemKind::FoldUnfold)
                reject(RejectReason::IllegalNode,
                       "fold nodes are only legal in the fold/unfold system");
              out.node.rule = "fold";
              const RewriteRule& r = prop_rule(x.rule);
              Inferred q;
              {
                PathGuard g0(*this, 0);
                q = infer(x.p, ctx);
              }
              // Inference is possible only when matching the RHS pattern
              // determines every rule variable.
              std::map<std::string, TermPtr> subst;
              if (!match_prop_pattern(r.prop_rhs, q.prop, subst))
                reject(RejectReason::Mismatch,
                       "folded proposition does not match the RHS of rule " + x.rule);
              for (const auto& [v, s] : free_vars(r.prop_lhs))
                if (!subst.count(v))
                  reject(RejectReason::CannotInfer,
                         "fold over a variable-dropping rule needs a checking goal");
              out.node.children.push_back(std::move(q.node));
              out.prop = substitute(r.prop_lhs, subst);
            },
            [&](const PrUnfold& x) {
              if (sys.kind != SystemKind::FoldUnfold)
                reject(RejectReason::IllegalNode,
                       "unfold nodes are only legal in the fold/unfold system");
              out.node.rule = "unfold";
              const RewriteRule& r = prop_rule(x.rule);
              Inferred q;
              {
                PathGuard g0(*this, 0);
                q = infer(x.p, ctx);
              }
              std::map<std::string, TermPtr> subst;
              if (!match_modulo(r.prop_lhs, q.prop, subst))
                reject(RejectReason::Mismatch,
                       "unfolded proposition does not match the LHS of rule " + x.rule);
              out.node.children.push_back(std::move(q.node));
              out.prop = substitute(r.prop_rhs, subst);
            },
            [&](const PrSuperIntro& x) {
              if (sys.kind != SystemKind::SuperNatural)
                reject(RejectReason::IllegalNode,
                       "sintro nodes are only legal in the supernatural system");
              out.node.rule = "super-intro";
              auto it = sys.super.find(x.rule);
              if (it == sys.super.end())
                reject(RejectReason::UnknownRule, "unknown supernatural rule: " + x.rule);
              if (!free_vars(it->second.lhs).empty())
                reject(RejectReason::CannotInfer,
                       "sintro for a parameterized rule needs a checking goal");
              check_super_intro(x, it->second, {}, ctx, out.node);
              out.prop = it->second.lhs;
            },
            [&](const PrSuperElim& x) {
              if (sys.kind != SystemKind::SuperNatural)
                reject(RejectReason::IllegalNode,
                       "selim nodes are only legal in the supernatural system");
              out.node.rule = "super-elim";
              auto it = sys.super.find(x.rule);
              if (it == sys.super.end())
                reject(RejectReason::UnknownRule, "unknown supernatural rule: " + x.rule);
              const SuperRuleInfo& info = it->second;
              if (x.leaf < 0 || static_cast<size_t>(x.leaf) >= info.leaves.size())
                reject(RejectReason::UnknownRule, "rule " + x.rule + " has no premise " +
                                                      std::to_string(x.leaf + 1));
              const SuperLeaf& leaf = info.leaves[static_cast<size_t>(x.leaf)];
              Inferred main;
              {
                PathGuard g0(*this, 0);
                main = infer(x.main, ctx);
              }
              PropPtr mp = expose(main.prop, out.node.congruences);
              std::map<std::string, TermPtr> inst;
              if (!match_modulo(info.lhs, mp, inst))
                reject(RejectReason::Mismatch,
                       "selim main premise does not match rule " + x.rule);
              out.node.children.push_back(std::move(main.node));
              if (x.args.size() != leaf.path.size())
                reject(RejectReason::Mismatch,
                       "selim expects " + std::to_string(leaf.path.size()) + " arguments");
              for (size_t j = 0; j < leaf.path.size(); ++j) {
                const auto& b = leaf.path[j];
                if (b.is_var) {
                  auto* t = std::get_if<TermPtr>(&x.args[j]);
                  if (!t)
                    reject(RejectReason::Mismatch,
                           "argument " + std::to_string(j + 1) + " must be a term");
                  if (sorted_term(*t) != b.sort)
                    reject(RejectReason::Sort, "selim term argument sort differs");
                  inst[b.name] = *t;
                } else {
                  auto* q = std::get_if<ProofPtr>(&x.args[j]);
                  if (!q)
                    reject(RejectReason::Mismatch,
                           "argument " + std::to_string(j + 1) + " must be a proof");
                  PathGuard g1(*this, static_cast<int>(j) + 1);
                  out.node.children.push_back(check(*q, ctx, substitute(b.hyp, inst)));
                }
              }
              out.prop = substitute(leaf.concl, inst);
            },
        },
        p->node);
    out.node.seq.goal = out.prop;
    return out;
  }

  // Structural matching of a proposition pattern (rule RHS) against a
  // proposition, binding term pattern variables. Quantifiers match by
  // descending into bodies; the pattern binds no proposition variables.
  bool match_prop_pattern(const PropPtr& pattern, const PropPtr& subject,
                          std::map<std::string, TermPtr>& subst) {
    return std::visit(
        overloaded{
            [&](const PAtom&) { return match_atom(pattern, subject, subst); },
            [&](const PTruth&) { return std::holds_alternative<PTruth>(subject->node); },
            [&](const PFalsity&) { return std::holds_alternative<PFalsity>(subject->node); },
            [&](const PAnd& x) {
              auto* y = std::get_if<PAnd>(&subject->node);
              return y && match_prop_pattern(x.l, y->l, subst) &&
                     match_prop_pattern(x.r, y->r, subst);
            },
            [&](const POr& x) {
              auto* y = std::get_if<POr>(&subject->node);
              return y && match_prop_pattern(x.l, y->l, subst) &&
                     match_prop_pattern(x.r, y->r, subst);
            },
            [&](const PImp& x) {
              auto* y = std::get_if<PImp>(&subject->node);
              return y && match_prop_pattern(x.l, y->l, subst) &&
                     match_prop_pattern(x.r, y->r, subst);
            },
            [&](const PForall& x) {
              auto* y = std::get_if<PForall>(&subject->node);
              if (!y || y->sort != x.sort) return false;
              std::string v = fresh("#m");
              TermPtr var = mk_var(v, x.sort);
              return match_prop_pattern(open_body(x.body, var), open_body(y->body, var), subst);
            },
            [&](const PExists& x) {
              auto* y = std::get_if<PExists>(&subject->node);
              if (!y || y->sort != x.sort) return false;
              std::string v = fresh("#m");
              TermPtr var = mk_var(v, x.sort);
              return match_prop_pattern(open_body(x.body, var), open_body(y->body, var), subst);
            },
        },
        pattern->node);
  }
};

}  // namespace

CheckResult typecheck(const ProofPtr& proof, const Context& ctx, const PropPtr& goal,
                      const RuleSystem& system, const Budgets& budgets) {
  Checker c{system, budgets};
  for (const auto& h : ctx) {
    c.used.insert(h.name);
    for (const auto& [n, s] : free_vars(h.prop)) c.used.insert(n);
  }
  for (const auto& [n, s] : free_vars(goal)) c.used.insert(n);
  for (const auto& n : free_hyps(proof)) c.used.insert(n);
  try {
    validate_context(system.theory.sig, ctx);
    check_prop(system.theory.sig, goal);
  } catch (const Error& e) {
    return Rejection{RejectReason::Sort, {}, e.what()};
  }
  try {
    Derivation d;
    d.system = system.kind;
    d.root = c.check(proof, ctx, goal);
    return d;
  } catch (const RejectEx& e) {
    return e.r;
  }
}

bool replay_derivation_node(const DerivationNode& n, const RuleSystem& system) {
  for (const auto& use : n.congruences) {
    try {
      PropPtr from = replay_steps(use.from, use.steps_from, system.congruence);
      PropPtr to = replay_steps(use.to, use.steps_to, system.congruence);
      if (use.kind == "expose") {
        if (!alpha_eq(from, use.to)) return false;
      } else {
        if (!alpha_eq(from, to)) return false;
      }
    } catch (const KernelError&) {
      return false;
    }
  }
  for (const auto& c : n.children)
    if (!replay_derivation_node(c, system)) return false;
  return true;
}

bool replay_derivation(const Derivation& d, const RuleSystem& system) {
  return replay_derivation_node(d.root, system);
}

}  // namespace demod
