#include "demod/parse.hpp"

#include <cctype>

namespace demod {

namespace {

enum class Tok { Ident, Number, Symbol, End };

struct Token {
  Tok kind = Tok::End;
  std::string text;
  int line = 1, col = 1;
};

struct Lexer {
  std::vector<Token> toks;

  explicit Lexer(const std::string& src) {
    size_t i = 0;
    int line = 1, col = 1;
    auto advance = [&](size_t n) {
      for (size_t k = 0; k < n; ++k) {
        if (src[i + k] == '\n') {
          ++line;
          col = 1;
        } else {
          ++col;
        }
      }
      i += n;
    };
    static const char* symbols[] = {"-->", ":=", "|-", "=>", "/\\", "\\/", "->", "(", ")",
                                    "[",   "]",  "<",  ">",  ",",   ".",   ":",  ";", "|", "="};
    while (i < src.size()) {
      char c = src[i];
      if (c == '#') {  // comment to end of line
        while (i < src.size() && src[i] != '\n') advance(1);
        continue;
      }
      if (std::isspace(static_cast<unsigned char>(c))) {
        advance(1);
        continue;
      }
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        size_t j = i;
        while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) ||
                                  src[j] == '_' || src[j] == '\''))
          ++j;
        toks.push_back({Tok::Ident, src.substr(i, j - i), line, col});
        advance(j - i);
        continue;
      }
      if (std::isdigit(static_cast<unsigned char>(c))) {
        size_t j = i;
        while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
        toks.push_back({Tok::Number, src.substr(i, j - i), line, col});
        advance(j - i);
        continue;
      }
      bool matched = false;
      for (const char* s : symbols) {
        size_t len = std::char_traits<char>::length(s);
        if (src.compare(i, len, s) == 0) {
          toks.push_back({Tok::Symbol, s, line, col});
          advance(len);
          matched = true;
          break;
        }
      }
      if (!matched) throw ParseError(line, col, std::string("unexpected character '") + c + "'");
    }
    toks.push_back({Tok::End, "", line, col});
  }
};

struct VarScope {
  // Term variables currently in scope (quantifier / gen / unpack binders),
  // name -> sort. Parsed as free named variables, closed on binder exit.
  std::map<std::string, SortName> vars;
};

struct Parser {
  std::vector<Token> toks;
  size_t pos = 0;
  const Signature* sig = nullptr;
  // When non-null, undeclared identifiers in term positions become rule
  // pattern variables whose sorts are inferred and recorded here.
  std::map<std::string, SortName>* pattern_vars = nullptr;
  VarScope scope;

  explicit Parser(const std::string& src) : toks(Lexer(src).toks) {}

  const Token& peek(size_t ahead = 0) const {
    size_t k = pos + ahead;
    return k < toks.size() ? toks[k] : toks.back();
  }
  bool at_symbol(const std::string& s) const {
    return peek().kind == Tok::Symbol && peek().text == s;
  }
  bool at_ident(const std::string& s) const {
    return peek().kind == Tok::Ident && peek().text == s;
  }
  Token next() { return toks[pos < toks.size() - 1 ? pos++ : pos]; }
  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(peek().line, peek().col, msg + " (got '" + peek().text + "')");
  }
  void expect_symbol(const std::string& s) {
    if (!at_symbol(s)) fail("expected '" + s + "'");
    ++pos;
  }
  void expect_ident(const std::string& s) {
    if (!at_ident(s)) fail("expected '" + s + "'");
    ++pos;
  }
  std::string ident() {
    if (peek().kind != Tok::Ident) fail("expected identifier");
    return next().text;
  }
  std::string ident_or_number() {
    if (peek().kind != Tok::Ident && peek().kind != Tok::Number) fail("expected name");
    return next().text;
  }
  int number() {
    if (peek().kind != Tok::Number) fail("expected number");
    return std::stoi(next().text);
  }
  bool done() const { return peek().kind == Tok::End; }

  // --- terms ------------------------------------------------------------

  TermPtr term(const SortName& expected) {
    std::string name = ident();
    if (at_symbol("(")) {
      auto it = sig->functions.find(name);
      if (it == sig->functions.end()) fail("undeclared function: " + name);
      ++pos;
      std::vector<TermPtr> args;
      for (size_t k = 0; k < it->second.args.size(); ++k) {
        if (k) expect_symbol(",");
        args.push_back(term(it->second.args[k]));
      }
      expect_symbol(")");
      if (!expected.empty() && it->second.result != expected)
        fail("sort mismatch: " + name + " has sort " + it->second.result + ", expected " +
             expected);
      return mk_app(name, std::move(args));
    }
    if (auto it = sig->functions.find(name); it != sig->functions.end()) {
      if (!it->second.args.empty()) fail("missing arguments for " + name);
      if (!expected.empty() && it->second.result != expected)
        fail("sort mismatch: " + name + " has sort " + it->second.result + ", expected " +
             expected);
      return mk_app(name, {});
    }
    if (auto it = scope.vars.find(name); it != scope.vars.end()) {
      if (!expected.empty() && it->second != expected)
        fail("sort mismatch: variable " + name + " has sort " + it->second + ", expected " +
             expected);
      return mk_var(name, it->second);
    }
    if (pattern_vars) {
      if (expected.empty()) fail("cannot infer sort of pattern variable " + name);
      auto [it, inserted] = pattern_vars->emplace(name, expected);
      if (!inserted && it->second != expected)
        fail("pattern variable " + name + " used at sorts " + it->second + " and " + expected);
      return mk_var(name, expected);
    }
    fail("unknown identifier: " + name);
  }

  // --- propositions -----------------------------------------------------

  PropPtr prop() {
    if (at_ident("forall") || at_ident("exists")) return quantified();
    return prop_imp();
  }

  PropPtr quantified() {
    bool is_forall = at_ident("forall");
    ++pos;
    std::string v = ident();
    expect_symbol(":");
    std::string sort = ident();
    if (!sig->sorts.count(sort)) fail("undeclared sort: " + sort);
    expect_symbol(".");
    auto saved = scope.vars.find(v) != scope.vars.end()
                     ? std::optional<SortName>(scope.vars[v])
                     : std::nullopt;
    scope.vars[v] = sort;
    PropPtr body = prop();
    if (saved)
      scope.vars[v] = *saved;
    else
      scope.vars.erase(v);
    PropPtr closed = close_body(body, v);
    return is_forall ? mk_forall(v, sort, closed) : mk_exists(v, sort, closed);
  }

  PropPtr prop_imp() {
    PropPtr l = prop_or();
    if (at_symbol("=>")) {
      ++pos;
      PropPtr r = at_ident("forall") || at_ident("exists") ? quantified() : prop_imp();
      return mk_imp(l, r);
    }
    return l;
  }

  PropPtr prop_or() {
    PropPtr l = prop_and();
    while (at_symbol("\\/")) {
      ++pos;
      PropPtr r = at_ident("forall") || at_ident("exists") ? quantified() : prop_and();
      l = mk_or(l, r);
      if (std::holds_alternative<PForall>(r->node) || std::holds_alternative<PExists>(r->node))
        break;
    }
    return l;
  }

  PropPtr prop_and() {
    PropPtr l = prop_unit();
    while (at_symbol("/\\")) {
      ++pos;
      PropPtr r = at_ident("forall") || at_ident("exists") ? quantified() : prop_unit();
      l = mk_and(l, r);
      if (std::holds_alternative<PForall>(r->node) || std::holds_alternative<PExists>(r->node))
        break;
    }
    return l;
  }

  PropPtr prop_unit() {
    if (at_symbol("(")) {
      ++pos;
      PropPtr p = prop();
      expect_symbol(")");
      return p;
    }
    if (at_ident("top")) {
      ++pos;
      return mk_truth();
    }
    if (at_ident("bot")) {
      ++pos;
      return mk_falsity();
    }
    if (at_ident("forall") || at_ident("exists")) return quantified();
    std::string name = ident();
    auto it = sig->predicates.find(name);
    if (it == sig->predicates.end()) fail("undeclared predicate: " + name);
    std::vector<TermPtr> args;
    if (!it->second.empty()) {
      expect_symbol("(");
      for (size_t k = 0; k < it->second.size(); ++k) {
        if (k) expect_symbol(",");
        args.push_back(term(it->second[k]));
      }
      expect_symbol(")");
    }
    return mk_atom(name, std::move(args));
  }

  // --- proofs -----------------------------------------------------------

  bool at_binder_keyword() const {
    return at_ident("fun") || at_ident("gen") || at_ident("case") || at_ident("unpack") ||
           at_ident("pack") || at_ident("absurd");
  }

  ProofPtr proof_expr() {
    if (at_ident("fun")) {
      ++pos;
      std::string h = ident();
      expect_symbol(":");
      PropPtr ann = prop();
      expect_symbol(".");
      ProofPtr body = proof_expr();
      return mk_lam(h, ann, close_hyp_at(body, 0, h));
    }
    if (at_ident("gen")) {
      ++pos;
      std::string v = ident();
      expect_symbol(":");
      std::string sort = ident();
      if (!sig->sorts.count(sort)) fail("undeclared sort: " + sort);
      expect_symbol(".");
      auto saved = scope.vars.count(v) ? std::optional<SortName>(scope.vars[v]) : std::nullopt;
      scope.vars[v] = sort;
      ProofPtr body = proof_expr();
      if (saved)
        scope.vars[v] = *saved;
      else
        scope.vars.erase(v);
      return mk_gen(v, sort, close_pvar_at(body, 0, v));
    }
    if (at_ident("case")) {
      ++pos;
      ProofPtr scrut = proof_expr();
      expect_ident("of");
      std::string lh = ident();
      expect_symbol(".");
      ProofPtr lbody = proof_expr();
      expect_symbol("|");
      std::string rh = ident();
      expect_symbol(".");
      ProofPtr rbody = proof_expr();
      return mk_match(scrut, lh, close_hyp_at(lbody, 0, lh), rh, close_hyp_at(rbody, 0, rh));
    }
    if (at_ident("unpack")) {
      ++pos;
      ProofPtr scrut = proof_expr();
      expect_ident("as");
      std::string v = ident();
      expect_symbol(",");
      std::string h = ident();
      expect_ident("in");
      // The witness variable's sort comes from the scrutinee at check time;
      // parse the body with an unsorted free variable.
      auto saved = scope.vars.count(v) ? std::optional<SortName>(scope.vars[v]) : std::nullopt;
      scope.vars[v] = "";
      ProofPtr body = proof_expr();
      if (saved)
        scope.vars[v] = *saved;
      else
        scope.vars.erase(v);
      return mk_unpack(scrut, v, h, close_pvar_at(close_hyp_at(body, 0, h), 0, v));
    }
    if (at_ident("pack")) {
      ++pos;
      TermPtr t = term("");
      expect_symbol(",");
      ProofPtr p = proof_expr();
      return mk_pack(t, p);
    }
    if (at_ident("absurd")) {
      ++pos;
      ProofPtr p = proof_app();
      expect_symbol(":");
      PropPtr goal = prop();
      return mk_absurd(p, goal);
    }
    return proof_app();
  }

  bool at_expr_start() const {
    if (peek().kind != Tok::Ident && !at_symbol("(") && !at_symbol("<") && !at_symbol("["))
      return false;
    // Identifiers that end or separate expressions.
    if (at_ident("of") || at_ident("as") || at_ident("in") || at_ident("proof") ||
        at_ident("system"))
      return false;
    return true;
  }

  ProofPtr proof_app() {
    ProofPtr head = proof_unary();
    while (true) {
      if (at_symbol("[")) {
        ++pos;
        TermPtr t = term("");
        expect_symbol("]");
        head = mk_inst(head, t);
        continue;
      }
      if (at_expr_start() && !at_symbol("[")) {
        head = mk_papp(head, proof_unary());
        continue;
      }
      break;
    }
    return head;
  }

  ProofPtr proof_unary() {
    if (at_ident("fst") || at_ident("snd")) {
      bool second = at_ident("snd");
      ++pos;
      return mk_proj(second, proof_unary());
    }
    if (at_ident("inl") || at_ident("inr")) {
      bool right = at_ident("inr");
      ++pos;
      return mk_inj(right, proof_unary());
    }
    if (at_ident("fold") || at_ident("unfold")) {
      bool unfold = at_ident("unfold");
      ++pos;
      std::string rule = ident();
      ProofPtr p = proof_unary();
      return unfold ? mk_unfold(rule, p) : mk_fold(rule, p);
    }
    if (at_ident("sintro")) {
      ++pos;
      std::string rule = ident();
      expect_symbol("(");
      std::vector<SuperSub> subs;
      subs.push_back(super_sub());
      while (at_symbol(";")) {
        ++pos;
        subs.push_back(super_sub());
      }
      expect_symbol(")");
      return mk_super_intro(rule, std::move(subs));
    }
    if (at_ident("selim")) {
      ++pos;
      std::string rule = ident();
      int leaf = number();
      if (leaf < 1) fail("selim leaf index is 1-based");
      expect_symbol("(");
      ProofPtr main = proof_expr();
      std::vector<std::variant<TermPtr, ProofPtr>> args;
      while (at_symbol(";")) {
        ++pos;
        if (at_symbol("[")) {
          ++pos;
          args.emplace_back(term(""));
          expect_symbol("]");
        } else {
          args.emplace_back(proof_expr());
        }
      }
      expect_symbol(")");
      return mk_super_elim(rule, leaf - 1, main, std::move(args));
    }
    return proof_prim();
  }

  ProofPtr proof_prim() {
    if (at_ident("tt")) {
      ++pos;
      return mk_unit();
    }
    if (at_symbol("<")) {
      ++pos;
      ProofPtr l = proof_expr();
      expect_symbol(",");
      ProofPtr r = proof_expr();
      expect_symbol(">");
      return mk_pair(l, r);
    }
    if (at_symbol("(")) {
      ++pos;
      ProofPtr p = proof_expr();
      expect_symbol(")");
      return p;
    }
    if (peek().kind == Tok::Ident && !at_binder_keyword()) return mk_hyp(ident());
    fail("expected proof expression");
  }

  // A supernatural premise: optional binder list ("[x] h .") then a body.
  SuperSub super_sub() {
    size_t save = pos;
    std::vector<SuperBinder> binders;
    bool is_binder_list = false;
    while (true) {
      if (at_symbol("[") && peek(1).kind == Tok::Ident && peek(2).kind == Tok::Symbol &&
          peek(2).text == "]") {
        binders.push_back(SuperBinder{true, peek(1).text});
        pos += 3;
        continue;
      }
      if (peek().kind == Tok::Ident && !at_binder_keyword() && !at_ident("fst") &&
          !at_ident("snd") && !at_ident("inl") && !at_ident("inr") && !at_ident("tt") &&
          !at_ident("fold") && !at_ident("unfold") && !at_ident("sintro") &&
          !at_ident("selim")) {
        binders.push_back(SuperBinder{false, peek().text});
        ++pos;
        continue;
      }
      break;
    }
    if (!binders.empty() && at_symbol(".")) {
      ++pos;
      is_binder_list = true;
    }
    if (!is_binder_list) {
      pos = save;
      binders.clear();
    }
    // Parse body with binder names in scope, then close them innermost-last.
    std::vector<std::pair<std::string, std::optional<SortName>>> saved_vars;
    for (const auto& b : binders) {
      if (b.is_var) {
        saved_vars.emplace_back(
            b.name, scope.vars.count(b.name) ? std::optional<SortName>(scope.vars[b.name])
                                             : std::nullopt);
        scope.vars[b.name] = "";
      }
    }
    ProofPtr body = proof_expr();
    for (auto it = saved_vars.rbegin(); it != saved_vars.rend(); ++it) {
      if (it->second)
        scope.vars[it->first] = *it->second;
      else
        scope.vars.erase(it->first);
    }
    int hyp_index = 0, var_index = 0;
    for (auto it = binders.rbegin(); it != binders.rend(); ++it) {
      if (it->is_var)
        body = close_pvar_at(body, var_index++, it->name);
      else
        body = close_hyp_at(body, hyp_index++, it->name);
    }
    return SuperSub{std::move(binders), body};
  }

  // --- sequents ----------------------------------------------------------

  Sequent sequent() {
    Sequent s;
    if (!at_symbol("|-")) {
      while (true) {
        std::string h = ident();
        expect_symbol(":");
        PropPtr p = prop();
        s.ctx.push_back(Hypothesis{h, p});
        if (at_symbol(",")) {
          ++pos;
          continue;
        }
        break;
      }
    }
    expect_symbol("|-");
    s.goal = prop();
    return s;
  }
};

SystemKind system_from_name(const std::string& name, const Parser& p) {
  if (name == "modulo") return SystemKind::Modulo;
  if (name == "foldunfold") return SystemKind::FoldUnfold;
  if (name == "supernatural") return SystemKind::SuperNatural;
  throw ParseError(p.peek().line, p.peek().col, "unknown rule system: " + name);
}

}  // namespace

TheoryFile parse_theory(const std::string& text) {
  TheoryFile out;
  out.budgets = Budgets::from_env();
  Parser p(text);
  p.sig = &out.system.sig;
  while (!p.done()) {
    if (p.at_ident("sort")) {
      ++p.pos;
      out.system.sig.declare_sort(p.ident());
      continue;
    }
    if (p.at_ident("fun")) {
      ++p.pos;
      std::string name = p.ident();
      p.expect_symbol(":");
      std::vector<SortName> sorts;
      sorts.push_back(p.ident());
      while (p.peek().kind == Tok::Ident && !p.at_ident("sort") && !p.at_ident("fun") &&
             !p.at_ident("pred") && !p.at_ident("prop") && !p.at_ident("rule") &&
             !p.at_ident("option"))
        sorts.push_back(p.ident());
      FunDecl decl;
      if (p.at_symbol("->")) {
        ++p.pos;
        decl.args = std::move(sorts);
        decl.result = p.ident();
      } else {
        if (sorts.size() != 1)
          p.fail("constant declaration takes exactly one sort");
        decl.result = sorts[0];
      }
      out.system.sig.declare_function(name, std::move(decl));
      continue;
    }
    if (p.at_ident("pred")) {
      ++p.pos;
      std::string name = p.ident();
      p.expect_symbol(":");
      std::vector<SortName> sorts;
      sorts.push_back(p.ident());
      while (p.peek().kind == Tok::Ident && !p.at_ident("sort") && !p.at_ident("fun") &&
             !p.at_ident("pred") && !p.at_ident("prop") && !p.at_ident("rule") &&
             !p.at_ident("option"))
        sorts.push_back(p.ident());
      out.system.sig.declare_predicate(name, std::move(sorts));
      continue;
    }
    if (p.at_ident("prop")) {
      ++p.pos;
      out.system.sig.declare_predicate(p.ident(), {});
      continue;
    }
    if (p.at_ident("rule")) {
      ++p.pos;
      RewriteRule r;
      r.name = p.ident();
      p.expect_symbol(":");
      std::map<std::string, SortName> pattern_vars;
      p.pattern_vars = &pattern_vars;
      // The LHS head decides whether this is a term rule or a proposition
      // rule.
      if (p.peek().kind != Tok::Ident) p.fail("expected rule left-hand side");
      std::string head = p.peek().text;
      if (out.system.sig.predicates.count(head)) {
        r.kind = RuleKind::PropRule;
        r.prop_lhs = p.prop_unit();
        p.expect_symbol("-->");
        r.prop_rhs = p.prop();
      } else if (out.system.sig.functions.count(head)) {
        r.kind = RuleKind::TermRule;
        r.term_lhs = p.term("");
        p.expect_symbol("-->");
        r.term_rhs = p.term(check_term(out.system.sig, r.term_lhs));
      } else {
        p.fail("rule LHS head must be a declared function or predicate: " + head);
      }
      p.pattern_vars = nullptr;
      out.system.rules.push_back(std::move(r));
      continue;
    }
    if (p.at_ident("option")) {
      ++p.pos;
      std::string key = p.ident();
      int value = p.number();
      if (value < 0) p.fail("budget must be non-negative");
      try {
        out.budgets.apply_override(key, static_cast<std::size_t>(value));
      } catch (const Error& e) {
        p.fail(e.what());
      }
      continue;
    }
    p.fail("expected a declaration (sort, fun, pred, prop, rule, option)");
  }
  out.system.validate();
  return out;
}

ProofFile parse_proof_file(const std::string& text, const RewriteSystem& theory) {
  ProofFile out;
  Parser p(text);
  p.sig = &theory.sig;
  if (p.at_ident("system")) {
    ++p.pos;
    out.system = system_from_name(p.ident(), p);
  }
  while (!p.done()) {
    p.expect_ident("proof");
    ProofEntry e;
    e.name = p.ident();
    p.expect_symbol(":");
    e.seq = p.sequent();
    p.expect_symbol(":=");
    e.proof = p.proof_expr();
    validate_context(theory.sig, e.seq.ctx);
    check_prop(theory.sig, e.seq.goal);
    out.proofs.push_back(std::move(e));
  }
  return out;
}

Sequent parse_sequent(const std::string& text, const RewriteSystem& theory) {
  Parser p(text);
  p.sig = &theory.sig;
  Sequent s = p.sequent();
  if (!p.done()) p.fail("trailing input after sequent");
  validate_context(theory.sig, s.ctx);
  check_prop(theory.sig, s.goal);
  return s;
}

PropPtr parse_prop(const std::string& text, const RewriteSystem& theory) {
  Parser p(text);
  p.sig = &theory.sig;
  PropPtr r = p.prop();
  if (!p.done()) p.fail("trailing input after proposition");
  check_prop(theory.sig, r);
  return r;
}

TermPtr parse_term(const std::string& text, const RewriteSystem& theory) {
  Parser p(text);
  p.sig = &theory.sig;
  TermPtr r = p.term("");
  if (!p.done()) p.fail("trailing input after term");
  return r;
}

ProofPtr parse_proof(const std::string& text, const RewriteSystem& theory) {
  Parser p(text);
  p.sig = &theory.sig;
  ProofPtr r = p.proof_expr();
  if (!p.done()) p.fail("trailing input after proof");
  return r;
}

LatticeSpec parse_lattice(const std::string& text) {
  LatticeSpec out;
  Parser p(text);
  while (!p.done()) {
    if (p.at_ident("name")) {
      ++p.pos;
      out.name = p.ident_or_number();
      continue;
    }
    if (p.at_ident("elem")) {
      ++p.pos;
      while (p.peek().kind == Tok::Ident || p.peek().kind == Tok::Number) {
        if (p.at_ident("elem") || p.at_ident("le") || p.at_ident("top") || p.at_ident("bot") ||
            p.at_ident("name"))
          break;
        out.elems.push_back(p.ident_or_number());
      }
      continue;
    }
    if (p.at_ident("le")) {
      ++p.pos;
      std::string a = p.ident_or_number();
      std::string b = p.ident_or_number();
      out.le.emplace_back(a, b);
      continue;
    }
    if (p.at_ident("top")) {
      ++p.pos;
      out.top = p.ident_or_number();
      continue;
    }
    if (p.at_ident("bot")) {
      ++p.pos;
      out.bottom = p.ident_or_number();
      continue;
    }
    p.fail("expected a lattice declaration (name, elem, le, top, bot)");
  }
  return out;
}

}  // namespace demod
