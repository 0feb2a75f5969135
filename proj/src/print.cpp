#include "demod/print.hpp"

#include <sstream>

namespace demod {

namespace {

// Precedence levels of the concrete syntax, loosest first.
enum PropLevel { PL_TOP = 0, PL_IMP = 1, PL_OR = 2, PL_AND = 3, PL_UNIT = 4 };
enum ProofLevel { EL_TOP = 0, EL_APP = 1, EL_UN = 2, EL_PRIM = 3 };

std::string names_join(const std::vector<std::string>& parts, const std::string& sep) {
  std::string out;
  for (size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

void print_term_into(const TermPtr& t, std::string& out) {
  std::visit(overloaded{
                 [&](const TVar& v) { out += v.name; },
                 [&](const TBound& b) { out += "#" + std::to_string(b.index); },
                 [&](const TApp& a) {
                   out += a.fn;
                   if (!a.args.empty()) {
                     out += "(";
                     for (size_t i = 0; i < a.args.size(); ++i) {
                       if (i) out += ", ";
                       print_term_into(a.args[i], out);
                     }
                     out += ")";
                   }
                 },
             },
             t->node);
}

std::set<std::string> prop_names(const PropPtr& p) {
  std::set<std::string> out;
  for (const auto& [n, s] : free_vars(p)) out.insert(n);
  return out;
}

void print_prop_into(const PropPtr& p, int level, std::string& out) {
  auto wrap = [&](int mine, auto&& body) {
    bool parens = mine < level;
    if (parens) out += "(";
    body();
    if (parens) out += ")";
  };
  std::visit(
      overloaded{
          [&](const PAtom& a) {
            out += a.pred;
            if (!a.args.empty()) {
              out += "(";
              for (size_t i = 0; i < a.args.size(); ++i) {
                if (i) out += ", ";
                print_term_into(a.args[i], out);
              }
              out += ")";
            }
          },
          [&](const PTruth&) { out += "top"; },
          [&](const PFalsity&) { out += "bot"; },
          [&](const PAnd& b) {
            // /\ and \/ parse left-associatively; the right operand needs
            // the tighter level.
            wrap(PL_AND, [&] {
              print_prop_into(b.l, PL_AND, out);
              out += " /\\ ";
              print_prop_into(b.r, PL_UNIT, out);
            });
          },
          [&](const POr& b) {
            wrap(PL_OR, [&] {
              print_prop_into(b.l, PL_OR, out);
              out += " \\/ ";
              print_prop_into(b.r, PL_AND, out);
            });
          },
          [&](const PImp& b) {
            wrap(PL_IMP, [&] {
              print_prop_into(b.l, PL_OR, out);
              out += " => ";
              print_prop_into(b.r, PL_IMP, out);
            });
          },
          [&](const PForall& q) {
            wrap(PL_TOP, [&] {
              std::string v = fresh_name(q.hint.empty() ? "x" : q.hint, prop_names(q.body));
              out += "forall " + v + " : " + q.sort + " . ";
              print_prop_into(open_body(q.body, mk_var(v, q.sort)), PL_TOP, out);
            });
          },
          [&](const PExists& q) {
            wrap(PL_TOP, [&] {
              std::string v = fresh_name(q.hint.empty() ? "x" : q.hint, prop_names(q.body));
              out += "exists " + v + " : " + q.sort + " . ";
              print_prop_into(open_body(q.body, mk_var(v, q.sort)), PL_TOP, out);
            });
          },
      },
      p->node);
}

// All names visible anywhere in a proof: free hypotheses and free term
// variables of embedded propositions/terms. Binder display names are
// freshened against this set plus the names introduced above.
void collect_proof_names(const ProofPtr& p, std::set<std::string>& out) {
  std::visit(
      overloaded{
          [&](const PrHyp& h) { out.insert(h.name); },
          [&](const PrBoundHyp&) {},
          [&](const PrLam& x) {
            for (const auto& [n, s] : free_vars(x.ann)) out.insert(n);
            collect_proof_names(x.body, out);
          },
          [&](const PrApp& x) { collect_proof_names(x.fn, out); collect_proof_names(x.arg, out); },
          [&](const PrPair& x) { collect_proof_names(x.l, out); collect_proof_names(x.r, out); },
          [&](const PrProj& x) { collect_proof_names(x.p, out); },
          [&](const PrInj& x) { collect_proof_names(x.p, out); },
          [&](const PrMatch& x) {
            collect_proof_names(x.scrut, out);
            collect_proof_names(x.lbody, out);
            collect_proof_names(x.rbody, out);
          },
          [&](const PrGen& x) { collect_proof_names(x.body, out); },
          [&](const PrInst& x) {
            collect_proof_names(x.p, out);
            for (const auto& [n, s] : free_vars(x.witness)) out.insert(n);
          },
          [&](const PrPack& x) {
            for (const auto& [n, s] : free_vars(x.witness)) out.insert(n);
            collect_proof_names(x.p, out);
          },
          [&](const PrUnpack& x) { collect_proof_names(x.scrut, out); collect_proof_names(x.body, out); },
          [&](const PrUnit&) {},
          [&](const PrAbsurd& x) {
            collect_proof_names(x.p, out);
            for (const auto& [n, s] : free_vars(x.goal)) out.insert(n);
          },
          [&](const PrFold& x) { collect_proof_names(x.p, out); },
          [&](const PrUnfold& x) { collect_proof_names(x.p, out); },
          [&](const PrSuperIntro& x) {
            for (const auto& s : x.subs) collect_proof_names(s.body, out);
          },
          [&](const PrSuperElim& x) {
            collect_proof_names(x.main, out);
            for (const auto& a : x.args) {
              if (auto* t = std::get_if<TermPtr>(&a)) {
                for (const auto& [n, s] : free_vars(*t)) out.insert(n);
              } else {
                collect_proof_names(std::get<ProofPtr>(a), out);
              }
            }
          },
      },
      p->node);
}

struct ProofPrinter {
  std::set<std::string> used;

  std::string fresh(const std::string& hint) {
    std::string n = fresh_name(hint.empty() ? "h" : hint, used);
    used.insert(n);
    return n;
  }

  void print(const ProofPtr& p, int level, std::string& out) {
    auto wrap = [&](int mine, auto&& body) {
      bool parens = mine < level;
      if (parens) out += "(";
      body();
      if (parens) out += ")";
    };
    std::visit(
        overloaded{
            [&](const PrHyp& h) { out += h.name; },
            [&](const PrBoundHyp& b) { out += "#h" + std::to_string(b.index); },
            [&](const PrLam& x) {
              wrap(EL_TOP, [&] {
                std::string h = fresh(x.hint);
                out += "fun " + h + " : ";
                print_prop_into(x.ann, PL_TOP, out);
                out += " . ";
                print(open_hyp_at(x.body, 0, mk_hyp(h)), EL_TOP, out);
              });
            },
            [&](const PrApp& x) {
              wrap(EL_APP, [&] {
                print(x.fn, EL_APP, out);
                out += " ";
                print(x.arg, EL_PRIM, out);
              });
            },
            [&](const PrPair& x) {
              out += "<";
              print(x.l, EL_TOP, out);
              out += ", ";
              print(x.r, EL_TOP, out);
              out += ">";
            },
            [&](const PrProj& x) {
              wrap(EL_UN, [&] {
                out += x.second ? "snd " : "fst ";
                print(x.p, EL_UN, out);
              });
            },
            [&](const PrInj& x) {
              wrap(EL_UN, [&] {
                out += x.right ? "inr " : "inl ";
                print(x.p, EL_UN, out);
              });
            },
            [&](const PrMatch& x) {
              wrap(EL_TOP, [&] {
                out += "case ";
                print(x.scrut, EL_APP, out);
                std::string lh = fresh(x.lhint);
                std::string rh = fresh(x.rhint);
                out += " of " + lh + " . ";
                print(open_hyp_at(x.lbody, 0, mk_hyp(lh)), EL_TOP, out);
                out += " | " + rh + " . ";
                print(open_hyp_at(x.rbody, 0, mk_hyp(rh)), EL_TOP, out);
              });
            },
            [&](const PrGen& x) {
              wrap(EL_TOP, [&] {
                std::string v = fresh(x.hint.empty() ? "x" : x.hint);
                out += "gen " + v + " : " + x.sort + " . ";
                print(open_pvar_at(x.body, 0, mk_var(v, x.sort)), EL_TOP, out);
              });
            },
            [&](const PrInst& x) {
              wrap(EL_APP, [&] {
                print(x.p, EL_APP, out);
                out += " [";
                print_term_into(x.witness, out);
                out += "]";
              });
            },
            [&](const PrPack& x) {
              wrap(EL_TOP, [&] {
                out += "pack ";
                print_term_into(x.witness, out);
                out += ", ";
                print(x.p, EL_TOP, out);
              });
            },
            [&](const PrUnpack& x) {
              wrap(EL_TOP, [&] {
                out += "unpack ";
                print(x.scrut, EL_APP, out);
                std::string v = fresh(x.vhint.empty() ? "x" : x.vhint);
                std::string h = fresh(x.hhint);
                out += " as " + v + ", " + h + " in ";
                ProofPtr body = open_pvar_at(x.body, 0, mk_var(v, ""));
                print(open_hyp_at(body, 0, mk_hyp(h)), EL_TOP, out);
              });
            },
            [&](const PrUnit&) { out += "tt"; },
            [&](const PrAbsurd& x) {
              wrap(EL_TOP, [&] {
                out += "absurd ";
                print(x.p, EL_APP, out);
                out += " : ";
                print_prop_into(x.goal, PL_TOP, out);
              });
            },
            [&](const PrFold& x) {
              wrap(EL_UN, [&] {
                out += "fold " + x.rule + " ";
                print(x.p, EL_UN, out);
              });
            },
            [&](const PrUnfold& x) {
              wrap(EL_UN, [&] {
                out += "unfold " + x.rule + " ";
                print(x.p, EL_UN, out);
              });
            },
            [&](const PrSuperIntro& x) {
              wrap(EL_UN, [&] {
                out += "sintro " + x.rule + " (";
                for (size_t i = 0; i < x.subs.size(); ++i) {
                  if (i) out += " ; ";
                  ProofPtr body = x.subs[i].body;
                  std::vector<std::string> binder_txt;
                  // Open binders outermost-first; the last binder of each
                  // kind is innermost, so walk the list in reverse when
                  // computing indices.
                  int hyps_left = 0, vars_left = 0;
                  for (const auto& b : x.subs[i].binders) (b.is_var ? vars_left : hyps_left)++;
                  for (const auto& b : x.subs[i].binders) {
                    if (b.is_var) {
                      std::string v = fresh(b.name.empty() ? "x" : b.name);
                      body = open_pvar_at(body, --vars_left, mk_var(v, ""));
                      binder_txt.push_back("[" + v + "]");
                    } else {
                      std::string h = fresh(b.name.empty() ? "h" : b.name);
                      body = open_hyp_at(body, --hyps_left, mk_hyp(h));
                      binder_txt.push_back(h);
                    }
                  }
                  if (!binder_txt.empty()) out += names_join(binder_txt, " ") + " . ";
                  print(body, EL_TOP, out);
                }
                out += ")";
              });
            },
            [&](const PrSuperElim& x) {
              wrap(EL_UN, [&] {
                out += "selim " + x.rule + " " + std::to_string(x.leaf + 1) + " (";
                print(x.main, EL_TOP, out);
                for (const auto& a : x.args) {
                  out += " ; ";
                  if (auto* t = std::get_if<TermPtr>(&a)) {
                    out += "[";
                    print_term_into(*t, out);
                    out += "]";
                  } else {
                    print(std::get<ProofPtr>(a), EL_TOP, out);
                  }
                }
                out += ")";
              });
            },
        },
        p->node);
  }
};

}  // namespace

std::string print_term(const TermPtr& t) {
  std::string out;
  print_term_into(t, out);
  return out;
}

std::string print_prop(const PropPtr& p) {
  std::string out;
  print_prop_into(p, PL_TOP, out);
  return out;
}

std::string print_proof(const ProofPtr& p) {
  ProofPrinter pr;
  collect_proof_names(p, pr.used);
  std::string out;
  pr.print(p, EL_TOP, out);
  return out;
}

std::string print_context(const Context& ctx) {
  std::vector<std::string> parts;
  for (const auto& h : ctx) parts.push_back(h.name + " : " + print_prop(h.prop));
  return names_join(parts, ", ");
}

std::string print_sequent(const Sequent& s) {
  std::string c = print_context(s.ctx);
  return (c.empty() ? "" : c + " ") + std::string("|- ") + print_prop(s.goal);
}

std::string print_rule(const RewriteRule& r) {
  if (r.kind == RuleKind::TermRule)
    return "rule " + r.name + " : " + print_term(r.term_lhs) + " --> " + print_term(r.term_rhs);
  return "rule " + r.name + " : " + print_prop(r.prop_lhs) + " --> " + print_prop(r.prop_rhs);
}

std::string print_theory(const RewriteSystem& R) {
  std::ostringstream out;
  for (const auto& s : R.sig.sorts) out << "sort " << s << "\n";
  for (const auto& [name, decl] : R.sig.functions) {
    out << "fun " << name << " : ";
    if (decl.args.empty()) {
      out << decl.result;
    } else {
      for (size_t i = 0; i < decl.args.size(); ++i) out << (i ? " " : "") << decl.args[i];
      out << " -> " << decl.result;
    }
    out << "\n";
  }
  for (const auto& [name, args] : R.sig.predicates) {
    if (args.empty()) {
      out << "prop " << name << "\n";
    } else {
      out << "pred " << name << " : ";
      for (size_t i = 0; i < args.size(); ++i) out << (i ? " " : "") << args[i];
      out << "\n";
    }
  }
  for (const auto& r : R.rules) out << print_rule(r) << "\n";
  return out.str();
}

std::string print_derived_rule(const DerivedRule& r) {
  auto seq = [](const SchemaSequent& s) {
    std::string out = "G";
    for (const auto& h : s.hyps) out += ", " + print_prop(h);
    out += " |- " + print_prop(s.concl);
    if (!s.fresh.empty()) {
      std::vector<std::string> vs;
      for (const auto& [n, sort] : s.fresh) vs.push_back(n + " : " + sort);
      out += "   [" + names_join(vs, ", ") + "]";
    }
    return out;
  };
  std::vector<std::string> prems;
  for (const auto& p : r.premises) prems.push_back(seq(p));
  std::string top = names_join(prems, "   ");
  std::string bottom = seq(r.conclusion);
  size_t width = std::max(top.size(), bottom.size());
  std::string dashes(std::max<size_t>(width, 3), '-');
  return top + "\n" + dashes + " " + r.label + "\n" + bottom + "\n";
}

// ---------------------------------------------------------------------------
// Canonical keys: compact prefix serializations ignoring display hints.

namespace {

void key_term(const TermPtr& t, std::string& out) {
  std::visit(overloaded{
                 [&](const TVar& v) { out += "v" + v.name + ";"; },
                 [&](const TBound& b) { out += "b" + std::to_string(b.index) + ";"; },
                 [&](const TApp& a) {
                   out += "f" + a.fn + "(";
                   for (const auto& arg : a.args) key_term(arg, out);
                   out += ")";
                 },
             },
             t->node);
}

void key_prop(const PropPtr& p, std::string& out) {
  std::visit(overloaded{
                 [&](const PAtom& a) {
                   out += "A" + a.pred + "(";
                   for (const auto& arg : a.args) key_term(arg, out);
                   out += ")";
                 },
                 [&](const PTruth&) { out += "T"; },
                 [&](const PFalsity&) { out += "F"; },
                 [&](const PAnd& b) { out += "&("; key_prop(b.l, out); key_prop(b.r, out); out += ")"; },
                 [&](const POr& b) { out += "|("; key_prop(b.l, out); key_prop(b.r, out); out += ")"; },
                 [&](const PImp& b) { out += ">("; key_prop(b.l, out); key_prop(b.r, out); out += ")"; },
                 [&](const PForall& q) { out += "!" + q.sort + "("; key_prop(q.body, out); out += ")"; },
                 [&](const PExists& q) { out += "?" + q.sort + "("; key_prop(q.body, out); out += ")"; },
             },
             p->node);
}

void key_proof(const ProofPtr& p, std::string& out) {
  std::visit(
      overloaded{
          [&](const PrHyp& h) { out += "h" + h.name + ";"; },
          [&](const PrBoundHyp& b) { out += "i" + std::to_string(b.index) + ";"; },
          [&](const PrLam& x) { out += "L("; key_prop(x.ann, out); key_proof(x.body, out); out += ")"; },
          [&](const PrApp& x) { out += "@("; key_proof(x.fn, out); key_proof(x.arg, out); out += ")"; },
          [&](const PrPair& x) { out += "P("; key_proof(x.l, out); key_proof(x.r, out); out += ")"; },
          [&](const PrProj& x) { out += x.second ? "p2(" : "p1("; key_proof(x.p, out); out += ")"; },
          [&](const PrInj& x) { out += x.right ? "i2(" : "i1("; key_proof(x.p, out); out += ")"; },
          [&](const PrMatch& x) {
            out += "C(";
            key_proof(x.scrut, out);
            key_proof(x.lbody, out);
            key_proof(x.rbody, out);
            out += ")";
          },
          [&](const PrGen& x) { out += "G" + x.sort + "("; key_proof(x.body, out); out += ")"; },
          [&](const PrInst& x) { out += "I("; key_proof(x.p, out); key_term(x.witness, out); out += ")"; },
          [&](const PrPack& x) { out += "K("; key_term(x.witness, out); key_proof(x.p, out); out += ")"; },
          [&](const PrUnpack& x) { out += "U("; key_proof(x.scrut, out); key_proof(x.body, out); out += ")"; },
          [&](const PrUnit&) { out += "1"; },
          [&](const PrAbsurd& x) { out += "X("; key_proof(x.p, out); key_prop(x.goal, out); out += ")"; },
          [&](const PrFold& x) { out += "Fo" + x.rule + "("; key_proof(x.p, out); out += ")"; },
          [&](const PrUnfold& x) { out += "Un" + x.rule + "("; key_proof(x.p, out); out += ")"; },
          [&](const PrSuperIntro& x) {
            out += "Si" + x.rule + "(";
            for (const auto& s : x.subs) {
              for (const auto& b : s.binders) out += b.is_var ? "v" : "h";
              out += ":";
              key_proof(s.body, out);
            }
            out += ")";
          },
          [&](const PrSuperElim& x) {
            out += "Se" + x.rule + "#" + std::to_string(x.leaf) + "(";
            key_proof(x.main, out);
            for (const auto& a : x.args) {
              if (auto* t = std::get_if<TermPtr>(&a))
                key_term(*t, out);
              else
                key_proof(std::get<ProofPtr>(a), out);
            }
            out += ")";
          },
      },
      p->node);
}

}  // namespace

std::string canonical_key(const TermPtr& t) {
  std::string out;
  key_term(t, out);
  return out;
}
std::string canonical_key(const PropPtr& p) {
  std::string out;
  key_prop(p, out);
  return out;
}
std::string canonical_key(const ProofPtr& p) {
  std::string out;
  key_proof(p, out);
  return out;
}
std::string canonical_key(const Sequent& s) {
  std::string out;
  for (const auto& h : s.ctx) {
    out += h.name + ":";
    key_prop(h.prop, out);
    out += ",";
  }
  out += "|-";
  key_prop(s.goal, out);
  return out;
}

}  // namespace demod
