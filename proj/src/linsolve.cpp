#include "cartan/linsolve.hpp"

#include <limits>
#include <set>
#include <stdexcept>
#include <tuple>

namespace cartan {

namespace {

struct Row {
	std::vector<Poly> coef;
	Poly rhs;
	std::size_t source;
};

void scale_down(Row& row)
{
	Integer num = 0, den = 1;
	auto fold = [&](const Poly& p) {
		for (const auto& [m, c] : p.terms()) {
			mpz_gcd(num.get_mpz_t(), num.get_mpz_t(), c.get_num_mpz_t());
			mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), c.get_den_mpz_t());
		}
	};
	for (const auto& p : row.coef)
		fold(p);
	fold(row.rhs);
	if (num == 0)
		return;
	Rational c(num, den);
	c.canonicalize();
	if (c == 1)
		return;
	for (auto& p : row.coef)
		p /= c;
	row.rhs /= c;
}

}  // namespace

std::map<Var, Poly> LinearSolution::particular() const
{
	std::map<Var, Poly> zero;
	for (Var v : free)
		zero.emplace(v, Poly());
	std::map<Var, Poly> out;
	for (const auto& [v, p] : values)
		out.emplace(v, substitute_simultaneous(p, zero));
	for (Var v : free)
		out.emplace(v, Poly());
	return out;
}

LinearSolution solve_linear(const LinearSystem& sys)
{
	const std::size_t n = sys.unknowns.size();
	std::map<Var, std::size_t> column;
	for (std::size_t i = 0; i < n; ++i)
		if (!column.emplace(sys.unknowns[i], i).second)
			throw std::invalid_argument("duplicate unknown '" + sys.unknowns[i].name() + "'");

	std::vector<Row> rows;
	for (std::size_t r = 0; r < sys.equations.size(); ++r) {
		Row row{std::vector<Poly>(n), Poly(), r};
		for (const auto& [m, c] : sys.equations[r].terms()) {
			int hit = -1;
			Monomial rest;
			std::vector<Monomial::Factor> others;
			for (const auto& [v, e] : m.factors()) {
				auto it = column.find(v);
				if (it == column.end()) {
					others.emplace_back(v, e);
					continue;
				}
				if (e > 1 || hit >= 0)
					throw std::invalid_argument("equation " + std::to_string(r) +
					                            " is not linear in the unknowns");
				hit = static_cast<int>(it->second);
			}
			auto cof = Monomial::from_factors(std::move(others));
			if (hit < 0)
				row.rhs.add_term(-c, cof);
			else
				row.coef[hit].add_term(c, cof);
		}
		rows.push_back(std::move(row));
	}

	std::vector<bool> row_used(rows.size(), false);
	std::vector<bool> col_pivot(n, false);
	std::vector<std::pair<std::size_t, std::size_t>> pivots;  // (row, col)

	for (;;) {
		auto best = std::make_tuple(std::numeric_limits<int>::max(), n, rows.size());
		for (std::size_t r = 0; r < rows.size(); ++r) {
			if (row_used[r])
				continue;
			for (std::size_t c = 0; c < n; ++c) {
				if (col_pivot[c] || rows[r].coef[c].is_zero())
					continue;
				auto key = std::make_tuple(rows[r].coef[c].total_degree(), c, r);
				if (key < best)
					best = key;
			}
		}
		auto [deg, pc, pr] = best;
		if (pr == rows.size())
			break;
		row_used[pr] = true;
		col_pivot[pc] = true;
		pivots.emplace_back(pr, pc);
		const Row pivot = rows[pr];
		const Poly& p = pivot.coef[pc];
		for (std::size_t r = 0; r < rows.size(); ++r) {
			if (r == pr || rows[r].coef[pc].is_zero())
				continue;
			Poly a = rows[r].coef[pc];
			Row& row = rows[r];
			if (p.is_constant()) {
				Poly f = a / p.constant_term();
				for (std::size_t c = 0; c < n; ++c)
					if (!pivot.coef[c].is_zero())
						row.coef[c] -= f * pivot.coef[c];
				row.rhs -= f * pivot.rhs;
			} else {
				for (std::size_t c = 0; c < n; ++c)
					row.coef[c] = p * row.coef[c] - a * pivot.coef[c];
				row.rhs = p * row.rhs - a * pivot.rhs;
			}
			scale_down(row);
		}
	}

	LinearSolution sol;
	for (std::size_t r = 0; r < rows.size(); ++r) {
		if (row_used[r] || rows[r].rhs.is_zero())
			continue;
		if (rows[r].rhs.is_constant()) {
			if (!sol.contradiction) {
				sol.status = LinearSolution::Status::Inconsistent;
				sol.contradiction = rows[r].rhs;
				sol.contradiction_source = rows[r].source;
			}
		} else {
			sol.conditions.push_back(-rows[r].rhs);
		}
	}

	for (std::size_t c = 0; c < n; ++c)
		if (!col_pivot[c])
			sol.free.push_back(sys.unknowns[c]);

	for (auto [r, c] : pivots) {
		const Row& row = rows[r];
		Poly numer = row.rhs;
		for (std::size_t k = 0; k < n; ++k)
			if (k != c && !row.coef[k].is_zero())
				numer -= row.coef[k] * Poly(sys.unknowns[k]);
		const Poly& p = row.coef[c];
		if (p.is_constant()) {
			sol.values.emplace(sys.unknowns[c], numer / p.constant_term());
		} else if (auto q = divide_exact(numer, p)) {
			sol.values.emplace(sys.unknowns[c], *q);
		} else {
			sol.unsolved.push_back(p * Poly(sys.unknowns[c]) - numer);
		}
	}
	return sol;
}

}  // namespace cartan
