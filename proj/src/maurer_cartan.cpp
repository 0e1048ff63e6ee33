#include "cartan/maurer_cartan.hpp"

#include <stdexcept>

namespace cartan {

std::vector<Var> group_coordinates(std::size_t r)
{
	std::vector<Var> a;
	for (std::size_t i = 0; i < r; ++i)
		a.push_back(Var::group(static_cast<int>(i) + 1));
	return a;
}

PolyMatrix build_a_matrix(const StructureConstants& c)
{
	if (auto v = validate_structure_constants(c); !v.ok())
		throw std::invalid_argument("invalid structure constants");
	const std::size_t r = c.dim();
	auto a = group_coordinates(r);
	PolyMatrix m(r, r);
	for (std::size_t j = 0; j < r; ++j)
		for (std::size_t k = 0; k < r; ++k)
			for (std::size_t i = 0; i < r; ++i)
				if (!c(j, k, i).is_zero())
					m(j, k) += c(j, k, i) * Poly(a[i]);
	return m;
}

WSeries w_series(const PolyMatrix& a, int order)
{
	if (order < 1)
		throw std::invalid_argument("series order must be at least 1");
	WSeries s;
	s.order = order;
	s.w = PolyMatrix::identity(a.rows());
	PolyMatrix power = PolyMatrix::identity(a.rows());
	Rational fact = 1;
	for (int m = 1; m <= order; ++m) {
		power = power * a;  // A^m
		if (power.is_zero()) {
			s.nilpotency = m;
			break;
		}
		if (m < order) {
			fact *= m + 1;
			s.w += power * Poly(1 / fact);
		}
	}
	s.exact = s.nilpotency > 0;
	return s;
}

MCForm mc_form(const StructureConstants& c, int order)
{
	MCForm f;
	f.series = w_series(build_a_matrix(c), order);
	auto a = group_coordinates(c.dim());
	for (std::size_t j = 0; j < c.dim(); ++j) {
		DiffForm w(1);
		for (std::size_t k = 0; k < c.dim(); ++k)
			w.add_term(f.series.w(j, k), WedgeMonomial(a[k]));
		f.components.push_back(std::move(w));
	}
	return f;
}

MCResidual verify_mc_equation(const MCForm& omega, const StructureConstants& c)
{
	MCResidual r;
	r.exact = omega.series.exact;
	r.order = omega.series.order;
	const std::size_t n = c.dim();
	auto a = group_coordinates(n);
	for (std::size_t j = 0; j < n; ++j) {
		DiffForm res = exterior_derivative(omega.components[j]);
		for (std::size_t i = 0; i < n; ++i)
			for (std::size_t k = 0; k < n; ++k)
				if (!c(j, i, k).is_zero())
					res += wedge(omega.components[i], omega.components[k]) * (c(j, i, k) * Rational(1, 2));
		for (const auto& [w, coef] : res.terms())
			for (const auto& [m, q] : coef.terms()) {
				int d = 0;
				for (const auto& [v, e] : m.factors())
					if (v.kind() == VarKind::Group)
						d += e;
				if (r.min_degree < 0 || d < r.min_degree)
					r.min_degree = d;
			}
		r.residuals.push_back(std::move(res));
	}
	return r;
}

}  // namespace cartan
