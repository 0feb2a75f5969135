#pragma once

#include <optional>
#include <string>
#include <vector>

#include "demod/budgets.hpp"
#include "demod/proofs.hpp"
#include "demod/syntax.hpp"

namespace demod {

struct ParseError : Error {
  int line = 0, col = 0;
  ParseError(int line_, int col_, const std::string& msg)
      : Error(std::to_string(line_) + ":" + std::to_string(col_) + ": " + msg),
        line(line_),
        col(col_) {}
};

// Theory files (.dmt): signature declarations, rewrite rules, budget
// options. Rule pattern variables are undeclared identifiers; their sorts
// are inferred from the positions they occupy.
struct TheoryFile {
  RewriteSystem system;
  Budgets budgets;
};
TheoryFile parse_theory(const std::string& text);

// Proof files (.prf): optional `system` header, then named proofs with a
// declared sequent.
struct ProofEntry {
  std::string name;
  Sequent seq;
  ProofPtr proof;
};
struct ProofFile {
  std::optional<SystemKind> system;
  std::vector<ProofEntry> proofs;
};
ProofFile parse_proof_file(const std::string& text, const RewriteSystem& theory);

Sequent parse_sequent(const std::string& text, const RewriteSystem& theory);
PropPtr parse_prop(const std::string& text, const RewriteSystem& theory);
TermPtr parse_term(const std::string& text, const RewriteSystem& theory);
ProofPtr parse_proof(const std::string& text, const RewriteSystem& theory);

// Lattice files (.lat): elements (declaration order is the canonical
// enumeration order), generating `le` pairs, designated top and bottom.
struct LatticeSpec {
  std::string name;
  std::vector<std::string> elems;
  std::vector<std::pair<std::string, std::string>> le;
  std::string top, bottom;
};
LatticeSpec parse_lattice(const std::string& text);

}  // namespace demod
