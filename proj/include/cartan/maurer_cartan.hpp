#pragma once

#include "cartan/forms.hpp"
#include "cartan/lie.hpp"
#include "cartan/matrix.hpp"

#include <vector>

namespace cartan {

/// Group coordinates a1..ar.
std::vector<Var> group_coordinates(std::size_t r);

/// A^j_k = sum_i c^j_{ki} a^i (row = upper index). Throws std::invalid_argument
/// if the structure constants fail validation.
PolyMatrix build_a_matrix(const StructureConstants& c);

struct WSeries {
	PolyMatrix w;
	int order = 0;
	/// A^m = 0 for some m <= order, so w is the full series.
	bool exact = false;
	/// Smallest m with A^m = 0 (0 if none found up to order).
	int nilpotency = 0;
};

/// W = sum_{n=1..N} A^{n-1}/n!.
WSeries w_series(const PolyMatrix& a, int order);

struct MCForm {
	/// omega^j = sum_k W^j_k da^k, one 1-form per basis element.
	std::vector<DiffForm> components;
	WSeries series;
};

MCForm mc_form(const StructureConstants& c, int order = 6);

struct MCResidual {
	/// d omega^j + 1/2 sum_{i,k} c^j_{ik} omega^i ^ omega^k.
	std::vector<DiffForm> residuals;
	bool exact = false;
	int order = 0;
	/// Lowest total degree in the group coordinates over all residual terms; -1 if all vanish.
	int min_degree = -1;

	/// Exact series: all residuals vanish. Truncated: no term of degree below order - 1.
	bool ok() const { return exact ? min_degree < 0 : (min_degree < 0 || min_degree >= order - 1); }
};

MCResidual verify_mc_equation(const MCForm& omega, const StructureConstants& c);

}  // namespace cartan
