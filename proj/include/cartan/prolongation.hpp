#pragma once

#include "cartan/forms.hpp"
#include "cartan/lie.hpp"
#include "cartan/polysolve.hpp"

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace cartan {

/// u_t = F(u0, ..., u_{k-1}) + leading * u_k, with u_i the i-th x-derivative.
struct EvolutionPDE {
	int order = 2;
	Poly rhs;
	Rational leading = 1;

	/// u0 .. u_{order-1}
	std::vector<Var> jets() const;
	/// F + leading * u_k, the full right-hand side.
	Poly full_rhs() const;

	friend bool operator==(const EvolutionPDE&, const EvolutionPDE&) = default;
};

/// Coordinates x, t plus jets, and the closed 2-form ideal.
struct PDEIdeal {
	std::vector<Var> coordinates;
	FormIdeal ideal;
	ClosureReport closure;

	std::vector<Var> jets() const;
};

struct ConstructionError : std::runtime_error {
	ConstructionError(const std::string& what, ClosureReport report)
	    : std::runtime_error(what), report(std::move(report))
	{
	}
	ClosureReport report;
};

/// Order 2: alpha1 = du0^dt - u1 dx^dt, alpha2 = du0^dx + (F-part) + leading du1^dt.
/// Order 1: a single generator du0^dx + leading du0^dt + F dx^dt.
/// Throws ConstructionError if the result is not closed, std::invalid_argument for unsupported input.
PDEIdeal contact_ideal_from_pde(const EvolutionPDE& pde, const ReduceOptions& opts = {});

/// Ideal from explicitly given generators; closure is computed but not enforced.
PDEIdeal ideal_from_generators(std::vector<Var> coordinates, std::vector<DiffForm> generators,
                               const ReduceOptions& opts = {});

/// b^(x), b^(t): either given explicitly or a polynomial ansatz in the jets with fresh generators.
struct ConnectionAnsatz {
	std::optional<LieElement> bx, bt;
	/// Generic ansatz bounds: b^(x) has degree <= bx_degree in each jet; b^(t) total degree <= bt_degree.
	int bx_degree = 1;
	int bt_degree = 2;

	bool is_explicit() const { return bx.has_value(); }
	static ConnectionAnsatz explicit_connection(LieElement bx, LieElement bt);
};

/// Lie-valued form: coefficient of each wedge monomial is a LieElement.
using LieForm = std::map<WedgeMonomial, LieElement>;

std::string to_string(const LieForm& f);

/// Omega = d Gamma + Gamma ^ Gamma for Gamma = bx dx + bt dt, bx, bt depending on the jets only.
LieForm curvature(const LieElement& bx, const LieElement& bt, const std::vector<Var>& jets);

/// Condition `lhs = rhs` from matching coefficients on one wedge monomial.
struct Condition {
	WedgeMonomial monomial;
	Poly equation;  // = 0
	std::optional<Var> lhs;
	Poly rhs;
};

/// The determining system in symbolic form. Atoms: bx_<u>, bt_<u> stand for
/// partial derivatives of b^(x), b^(t), bxt for [b^(x), b^(t)], g1.. for the
/// ideal multipliers.
struct DeterminingSystem {
	PDEIdeal ideal;
	std::vector<Var> jets;
	std::vector<Var> multipliers;                        // g1, g2, ...
	std::map<Var, std::pair<char, Var>> derivative_atoms;  // bx_u0 -> ('x', u0)
	Var bracket_atom;                                     // bxt
	std::vector<Condition> conditions;
	std::map<Var, Poly> multiplier_solution;  // g's through the other atoms
	std::vector<Poly> residuals;              // after eliminating the g's

	ConnectionAnsatz ansatz;
	LieElement bx, bt;            // instantiated ansatz
	std::vector<Var> fresh;       // fresh generators of a generic ansatz
	/// Residuals with the ansatz substituted, split by jet monomials; each = 0.
	std::vector<LieElement> expanded;
};

DeterminingSystem derive_determining(const PDEIdeal& ideal, const ConnectionAnsatz& ansatz = {});

/// Evaluates a polynomial linear in Lie-valued atoms.
LieElement evaluate_linear(const Poly& p, const std::map<Var, LieElement>& atoms);

struct ProlongationSolution {
	std::vector<Var> jets;
	LieElement bx, bt;
	std::vector<Var> generators;  // A0, A1, ... in first-use order
	std::vector<LieElement> relations;
	/// Equations left with a non-constant coefficient on a generator; never dropped.
	std::vector<LieElement> unsolved;
	/// Curvature components on the integral submanifold: the multipliers g_k.
	std::vector<LieElement> curvature;
	/// Substituting back gives identities modulo the relations.
	bool verified = false;

	RelationSet relation_set(const RelationOptions& opts = {}) const;
};

ProlongationSolution solve_determining(const DeterminingSystem& sys);

/// Checks that Omega - sum g_k alpha^k vanishes modulo the relations, wedge monomial by wedge monomial.
bool verify_solution(const DeterminingSystem& sys, const ProlongationSolution& sol);

/// dX/dz + [gamma, X], the partial acting on coefficients.
LieElement covariant_derivative(const LieElement& gamma, const LieElement& x, Var z);

/// Splits x by monomials in the given coordinates; returns the coefficient elements.
std::vector<LieElement> split_by_monomials(const LieElement& x, const std::vector<Var>& coords);

struct FiltrationReport {
	int level = 0;
	/// All nabla_x^p nabla_t^q g_k, p + q <= level, split by jet monomials, unnormalized.
	std::vector<LieElement> elements;
	/// Independent elements in the free Lie algebra.
	std::vector<LieElement> free_basis;
	/// Independent elements modulo the relations, leading coefficient 1.
	std::vector<LieElement> basis;
	bool perfect = false;
	std::optional<bool> closed;
	bool budget_exhausted = false;
};

FiltrationReport holonomy_filtration(const ProlongationSolution& sol, int level, const RelationOptions& opts = {});

/// Element of the closed algebra basis: a name and its definition in the solution generators.
struct NamedElement {
	Var name;
	LieElement definition;
};

/// Letters keep their name; other basis elements get the next free A<n>.
std::vector<NamedElement> name_basis(const ProlongationSolution& sol, const std::vector<LieElement>& basis);

/// External generators expanded with unknown coefficients q<g><b> over the named basis.
std::map<Var, LieElement> default_expansions(const ProlongationSolution& sol, const std::vector<NamedElement>& basis);

struct CloseOptions {
	/// Exactly one free unknown gets renamed to this parameter.
	std::string free_parameter = "lambda";
	PolySolveOptions solve;
};

struct HolonomyClosure {
	std::vector<NamedElement> basis;
	std::map<Var, LieElement> expansions;  // as supplied
	std::vector<Var> unknowns;             // q's, then structure constants
	std::vector<Poly> equations;
	PolySystemResult raw;

	bool consistent = false;
	/// Values of the unknowns on the selected branch after renaming.
	std::map<Var, Poly> values;
	std::vector<Var> free;
	std::optional<Var> renamed_from;
	std::vector<Poly> unsolved;
	StructureConstants structure;
	std::map<Var, LieElement> solved_expansions;
	/// [B_i, B_j] - sum c^k_{ij} B_k for the basis.
	std::vector<LieElement> presentation;
	bool perfect = false;
};

/// Unknowns: coefficients in the expansions and the structure constants of the
/// basis. Equations: basis definitions, the solution relations, and Jacobi,
/// all evaluated in the closed algebra.
HolonomyClosure holonomy_close(const ProlongationSolution& sol, const std::vector<NamedElement>& basis,
                               const std::map<Var, LieElement>& expansions, const CloseOptions& opts = {});

}  // namespace cartan
