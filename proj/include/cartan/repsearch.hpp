#pragma once

#include "cartan/lie.hpp"
#include "cartan/matrix.hpp"
#include "cartan/polysolve.hpp"
#include "cartan/prolongation.hpp"

#include <map>
#include <string>
#include <vector>

namespace cartan {

/// Generator -> n x n matrix; entries may contain parameters such as lambda.
struct MatrixRep {
	std::size_t dim = 0;
	std::map<Var, PolyMatrix> matrices;

	friend bool operator==(const MatrixRep&, const MatrixRep&) = default;
};

/// Image of a Lie element, brackets as commutators. Throws std::invalid_argument
/// naming the first generator without a matrix.
PolyMatrix evaluate(const LieElement& e, const MatrixRep& rep);

struct RepResidual {
	LieElement relation;
	PolyMatrix residual;
};

struct RepVerification {
	std::vector<RepResidual> residuals;  // one per relation
	std::vector<Var> missing;           // generators with no matrix
	bool ok() const;
};

/// Every relation evaluated exactly; a missing generator is a failure, not an exception.
RepVerification verify_rep(const std::vector<LieElement>& relations, const MatrixRep& rep);

/// Adds matrices for generators given as combinations of represented ones.
MatrixRep extend_rep(const MatrixRep& rep, const std::map<Var, LieElement>& expansions);

enum class RepTemplate { UpperTriangular, Full };

struct SearchOptions {
	RepTemplate shape = RepTemplate::UpperTriangular;
	/// Scalar symbols in the relations (e.g. lambda) stay symbolic.
	PolySolveOptions solve;
};

struct RepFamily {
	MatrixRep rep;
	std::vector<Var> free;  // template entries left free
	/// No generator is represented by the zero matrix.
	bool nonzero = false;
};

struct SearchReport {
	std::vector<Var> unknowns;
	std::vector<Poly> equations;
	std::vector<RepFamily> families;
	/// Branches the elimination could not finish: partial assignments and the leftover equations.
	std::vector<PolyBranch> partial;
	bool budget_exhausted = false;
};

/// Template entries m_<gen>_<i><j> (1-based), equations from every relation entry.
/// Every returned family passes verify_rep. Throws std::invalid_argument for dim 0 or dim > 4.
SearchReport search_rep(const std::vector<LieElement>& relations, const std::vector<Var>& generators, std::size_t dim,
                        const SearchOptions& opts = {});

struct LaxPair {
	PolyMatrix U, V;
};

/// U = rep(b^(x)), V = rep(b^(t)). Throws std::invalid_argument unless the rep satisfies the solution's relations.
LaxPair assemble_lax(const ProlongationSolution& sol, const MatrixRep& rep);

/// Total derivatives along the evolution equation; no explicit x, t dependence.
Poly total_x(const Poly& p);
Poly total_t(const Poly& p, const EvolutionPDE& pde);

struct ZeroCurvatureReport {
	/// D_x V - D_t U + [U, V], with u_t and its x-derivatives replaced through the equation.
	PolyMatrix residual;
	bool pass = false;
};

ZeroCurvatureReport verify_zero_curvature(const LaxPair& pair, const EvolutionPDE& pde);

/// y_x = -U y and y_t = -V y, one line per component, e.g. "y1_x = -1/4*lambda*y1 + 2*y2".
struct LinearProblem {
	std::vector<std::string> x_equations, t_equations;
};

LinearProblem linear_problem(const LaxPair& pair);

}  // namespace cartan
