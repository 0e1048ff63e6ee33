#pragma once

#include "cartan/lie.hpp"
#include "cartan/matrix.hpp"
#include "cartan/prolongation.hpp"
#include "cartan/repsearch.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace cartan {

/// Problem-spec diagnostics carry a 1-based line and column.
struct SpecError : std::runtime_error {
	SpecError(const std::string& msg, int line, int column);
	std::string message;
	int line, column;
};

struct NamedForm {
	std::string name;
	DiffForm form;
	friend bool operator==(const NamedForm&, const NamedForm&) = default;
};

struct NamedRelation {
	std::string name;
	LieElement relation;
	friend bool operator==(const NamedRelation&, const NamedRelation&) = default;
};

/// Sectioned text format, see docs/problem_spec_grammar.md.
struct ProblemSpec {
	// [coordinates]
	std::vector<std::string> base{"x", "t"};
	std::vector<std::string> jets;  // empty: u0 .. u_{order-1}
	std::vector<std::string> parameters;

	// [pde]
	std::optional<EvolutionPDE> pde;

	// [forms]
	std::vector<NamedForm> forms;

	// [ansatz]
	int bx_degree = 1;
	int bt_degree = 2;
	std::optional<LieElement> bx, bt;

	// [holonomy]
	int holonomy_level = 0;
	std::string free_parameter = "lambda";
	std::map<Var, LieElement> expansions;

	// [representation]
	std::optional<std::size_t> rep_dim;
	RepTemplate rep_template = RepTemplate::UpperTriangular;
	std::map<Var, PolyMatrix> matrices;

	// [relations]
	std::vector<NamedRelation> relations;

	// [algebra]
	std::vector<std::string> algebra_names;
	std::optional<StructureConstants> algebra;
	int series_order = 6;

	/// Jet coordinates in use: declared, else from the pde order.
	std::vector<Var> jet_vars() const;
	std::vector<Var> coordinates() const;

	friend bool operator==(const ProblemSpec&, const ProblemSpec&) = default;
};

/// Throws SpecError on the first syntax or semantic error.
ProblemSpec parse_spec(std::string_view text);
std::string render_spec(const ProblemSpec& spec);

}  // namespace cartan
