#pragma once

#include "cartan/forms.hpp"
#include "cartan/poly.hpp"

#include <doctest.h>

#include <cstdlib>
#include <random>
#include <vector>

namespace cartan::testing {

inline unsigned base_seed()
{
	if (const char* s = std::getenv("CARTAN_TEST_SEED"))
		return static_cast<unsigned>(std::strtoul(s, nullptr, 10));
	return 20261019u;
}

class Gen {
public:
	explicit Gen(unsigned salt) : rng_(base_seed() ^ (salt * 2654435761u)) {}

	int uniform(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

	Rational rational(int range = 5)
	{
		int num = uniform(-range, range);
		int den = uniform(1, 3);
		Rational q(num, den);
		q.canonicalize();
		return q;
	}

	Poly poly(const std::vector<Var>& vars, int max_terms = 4, int max_degree = 2)
	{
		Poly p;
		int n = uniform(0, max_terms);
		for (int i = 0; i < n; ++i) {
			std::vector<Monomial::Factor> f;
			int d = uniform(0, max_degree);
			for (int k = 0; k < d; ++k)
				f.emplace_back(vars[uniform(0, static_cast<int>(vars.size()) - 1)], 1);
			p.add_term(rational(), Monomial::from_factors(f));
		}
		return p;
	}

	DiffForm form(const std::vector<Var>& coords, int degree, int max_terms = 3, int max_coeff_degree = 2)
	{
		auto basis = wedge_basis(coords, degree);
		DiffForm f(degree);
		if (basis.empty())
			return f;
		int n = uniform(0, max_terms);
		for (int i = 0; i < n; ++i)
			f.add_term(poly(coords, 2, max_coeff_degree), basis[uniform(0, static_cast<int>(basis.size()) - 1)]);
		return f;
	}

	std::mt19937& engine() { return rng_; }

private:
	std::mt19937 rng_;
};

}  // namespace cartan::testing

namespace doctest {
template <>
struct StringMaker<cartan::Poly> {
	static String convert(const cartan::Poly& p) { return cartan::to_string(p).c_str(); }
};
template <>
struct StringMaker<cartan::DiffForm> {
	static String convert(const cartan::DiffForm& f) { return cartan::to_string(f).c_str(); }
};
}  // namespace doctest
