#pragma once
// Shared formulas for the test binaries.

#include <random>

#include "agl/reduction.hpp"

namespace fixtures {

// (u1 or not u2 or not u3) and (u1 or u2 or not u3)
inline agl::CnfFormula golden() {
  agl::CnfFormula phi;
  phi.n = 3;
  phi.clauses = {agl::Clause{agl::Literal{1, true}, {2, false}, {3, false}},
                 agl::Clause{agl::Literal{1, true}, {2, true}, {3, false}}};
  return phi;
}

inline agl::Assignment golden_assignment() { return {false, true, false}; }

// m clauses over m + 2 variables, clause j = (u_j or u_{j+1} or not u_{j+2}).
inline agl::CnfFormula chain(std::size_t m) {
  agl::CnfFormula phi;
  phi.n = m + 2;
  for (std::size_t j = 1; j <= m; ++j)
    phi.clauses.push_back(agl::Clause{agl::Literal{j, true}, {j + 1, true}, {j + 2, false}});
  return phi;
}

// Random satisfiable 3CNF using every variable; retries until one is found.
inline agl::CnfFormula random_formula(std::mt19937_64& rng, std::size_t n, std::size_t m) {
  std::uniform_int_distribution<std::size_t> var(1, n);
  std::bernoulli_distribution sign(0.5);
  for (;;) {
    agl::CnfFormula phi;
    phi.n = n;
    for (std::size_t j = 0; j < m; ++j) {
      agl::Clause c;
      for (std::size_t q = 0; q < 3; ++q) {
        bool fresh = false;
        while (!fresh) {
          c[q] = {var(rng), sign(rng)};
          fresh = true;
          for (std::size_t r = 0; r < q; ++r) fresh = fresh && c[r].var != c[q].var;
        }
      }
      phi.clauses.push_back(c);
    }
    try {
      phi.validate();
    } catch (const agl::FormulaError&) {
      continue;
    }
    if (agl::solve_assignment(phi)) return phi;
  }
}

}  // namespace fixtures
