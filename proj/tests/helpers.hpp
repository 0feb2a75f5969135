#pragma once

#include <doctest.h>

#include <cstdint>

#include "demod/frontend.hpp"
#include "demod/parse.hpp"
#include "demod/print.hpp"

namespace th {

using namespace demod;

inline std::string corpus_path(const std::string& name) {
  return std::string(DEMOD_CORPUS_DIR) + "/" + name;
}

inline TheoryFile load_theory(const std::string& name) {
  return parse_theory(read_file(corpus_path(name)));
}

inline ProofFile load_proof_file(const std::string& name, const RewriteSystem& theory) {
  return parse_proof_file(read_file(corpus_path(name)), theory);
}

// A tiny single-sorted signature used by hand-built terms in tests:
// sort s, functions f : s -> s and cc : s, predicates P : s and props Q, R.
inline RewriteSystem test_sig() {
  return parse_theory("sort s\nfun f : s -> s\nfun cc : s\npred P : s\nprop Q\nprop R\n").system;
}

// Deterministic generator for property-style tests.
struct Rng {
  std::uint64_t state = 0x9e3779b97f4a7c15ull;
  std::uint64_t next() {
    state ^= state << 13;
    state ^= state >> 7;
    state ^= state << 17;
    return state;
  }
  std::size_t below(std::size_t n) { return static_cast<std::size_t>(next() % n); }
};

inline TermPtr random_term(Rng& rng, int depth) {
  if (depth <= 0 || rng.below(3) == 0) {
    switch (rng.below(3)) {
      case 0: return mk_var("x", "s");
      case 1: return mk_var("y", "s");
      default: return mk_app("cc", {});
    }
  }
  return mk_app("f", {random_term(rng, depth - 1)});
}

inline PropPtr random_prop(Rng& rng, int depth) {
  if (depth <= 0 || rng.below(4) == 0) {
    switch (rng.below(4)) {
      case 0: return mk_atom("P", {random_term(rng, 1)});
      case 1: return mk_atom("Q");
      case 2: return mk_atom("R");
      default: return mk_truth();
    }
  }
  switch (rng.below(5)) {
    case 0: return mk_and(random_prop(rng, depth - 1), random_prop(rng, depth - 1));
    case 1: return mk_or(random_prop(rng, depth - 1), random_prop(rng, depth - 1));
    case 2: return mk_imp(random_prop(rng, depth - 1), random_prop(rng, depth - 1));
    case 3: {
      PropPtr body = random_prop(rng, depth - 1);
      return mk_forall("v", "s", close_body(body, "x"));
    }
    default: {
      PropPtr body = random_prop(rng, depth - 1);
      return mk_exists("w", "s", close_body(body, "y"));
    }
  }
}

// True when no redex (cut or commuting conversion) remains anywhere.
inline bool fully_normal(const ProofPtr& p) { return all_reduction_steps(p).empty(); }

}  // namespace th
