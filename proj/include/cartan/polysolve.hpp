#pragma once

#include "cartan/linsolve.hpp"

#include <map>
#include <vector>

namespace cartan {

/// One branch of a solved polynomial system.
struct PolyBranch {
	std::map<Var, Poly> values;  // fully back-substituted
	std::vector<Var> free;
	std::vector<Poly> unsolved;  // equations the heuristics could not eliminate

	bool complete() const { return unsolved.empty(); }
};

struct PolySystemResult {
	std::vector<PolyBranch> branches;
	/// Dead branches: the assignments made and the nonzero constant the system reduced to.
	struct Dead {
		std::map<Var, Poly> values;
		Poly contradiction;
		Poly source;  // the equation before the last substitution emptied it
	};
	std::vector<Dead> dead;
	bool budget_exhausted = false;
};

struct PolySolveOptions {
	/// Split on monomial content (v * q = 0  ->  v = 0 | q = 0).
	bool branch = true;
	std::size_t branch_budget = 256;
};

/// Elimination heuristics for small polynomial systems:
///  1. linear slice: every equation of degree <= 1 in the unknowns goes through solve_linear;
///  2. an equation c*v + rest with constant c and v not in rest is solved for v;
///  3. content splitting (if enabled);
///  4. factor splitting c * (v + q) = 0  ->  c = 0 | v = -q (if enabled).
/// Unknowns listed earlier are preferred as free parameters; later ones are eliminated first.
PolySystemResult solve_polynomial_system(const std::vector<Poly>& equations,
                                         const std::vector<Var>& unknowns,
                                         const PolySolveOptions& opts = {});

}  // namespace cartan
