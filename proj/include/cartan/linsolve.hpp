#pragma once

#include "cartan/poly.hpp"

#include <map>
#include <optional>
#include <vector>

namespace cartan {

/// Equations `e = 0`, each of total degree <= 1 in the unknowns. Coefficients
/// may be polynomials in any other symbols.
struct LinearSystem {
	std::vector<Var> unknowns;
	std::vector<Poly> equations;
};

struct LinearSolution {
	enum class Status { Solved, Inconsistent };

	Status status = Status::Solved;
	/// Pivot unknowns, expressed through the free unknowns and the parameters.
	std::map<Var, Poly> values;
	std::vector<Var> free;
	/// Reduced rows left without unknowns that still depend on parameters (must vanish).
	std::vector<Poly> conditions;
	/// Pivot rows whose solution is not polynomial (pivot does not divide exactly).
	std::vector<Poly> unsolved;
	/// For Inconsistent: the reduced row `0 = c`, written as the nonzero constant c,
	/// and the index of the input equation it was reduced from.
	std::optional<Poly> contradiction;
	std::size_t contradiction_source = 0;

	bool consistent() const { return status == Status::Solved; }
	/// values with every free unknown set to zero.
	std::map<Var, Poly> particular() const;
};

/// Fraction-free Gaussian elimination. The pivot is the entry of lowest total
/// degree among all remaining rows and columns; ties go to the earlier unknown,
/// then to the earlier equation. Throws std::invalid_argument if an equation is
/// not linear in the unknowns.
LinearSolution solve_linear(const LinearSystem& sys);

}  // namespace cartan
