#include "cartan/polysolve.hpp"

#include <algorithm>
#include <set>

namespace cartan {

namespace {

struct State {
	std::vector<Poly> eqs;
	std::map<Var, Poly> values;
};

class Solver {
public:
	Solver(const std::vector<Var>& unknowns, const PolySolveOptions& opts)
	    : unknowns_(unknowns), unknown_set_(unknowns.begin(), unknowns.end()), opts_(opts)
	{
	}

	PolySystemResult run(std::vector<Poly> eqs)
	{
		branches_used_ = 1;
		solve(State{std::move(eqs), {}});
		// Deduplicate branches that reached the same assignment.
		std::vector<PolyBranch> unique;
		std::set<std::string> seen;
		for (auto& b : result_.branches) {
			std::string key;
			for (const auto& [v, p] : b.values)
				key += v.name() + "=" + to_string(p) + ";";
			for (const auto& e : b.unsolved)
				key += "?" + to_string(e) + ";";
			if (seen.insert(key).second)
				unique.push_back(std::move(b));
		}
		result_.branches = std::move(unique);
		return std::move(result_);
	}

private:
	int unknown_degree(const Poly& p) const
	{
		int d = 0;
		for (const auto& [m, c] : p.terms()) {
			int k = 0;
			for (const auto& [v, e] : m.factors())
				if (unknown_set_.count(v))
					k += e;
			d = std::max(d, k);
		}
		return d;
	}

	void assign(State& s, Var v, const Poly& val)
	{
		for (auto& [w, p] : s.values)
			p = substitute_simultaneous(p, {{v, val}});
		s.values[v] = val;
	}

	// Returns false if the branch died.
	bool simplify(State& s)
	{
		std::vector<Poly> out;
		std::set<std::string> seen;
		for (const auto& e : s.eqs) {
			Poly p = substitute_simultaneous(e, s.values);
			if (p.is_zero())
				continue;
			if (p.is_constant()) {
				result_.dead.push_back({s.values, p, e});
				return false;
			}
			p = p.primitive();
			if (seen.insert(to_string(p)).second)
				out.push_back(std::move(p));
		}
		std::stable_sort(out.begin(), out.end(), [&](const Poly& a, const Poly& b) {
			return unknown_degree(a) < unknown_degree(b);
		});
		s.eqs = std::move(out);
		return true;
	}

	bool linear_slice(State& s)
	{
		LinearSystem sys;
		for (auto it = unknowns_.rbegin(); it != unknowns_.rend(); ++it)
			if (!s.values.count(*it))
				sys.unknowns.push_back(*it);
		for (const auto& e : s.eqs)
			if (unknown_degree(e) == 1)
				sys.equations.push_back(e);
		if (sys.equations.empty())
			return false;
		auto sol = solve_linear(sys);
		if (!sol.consistent()) {
			result_.dead.push_back({s.values, *sol.contradiction, sys.equations[sol.contradiction_source]});
			dead_ = true;
			return false;
		}
		bool progress = false;
		for (const auto& [v, val] : sol.values) {
			assign(s, v, substitute_simultaneous(val, s.values));
			progress = true;
		}
		return progress;
	}

	bool single_substitution(State& s)
	{
		for (const auto& e : s.eqs) {
			for (auto it = unknowns_.rbegin(); it != unknowns_.rend(); ++it) {
				Var v = *it;
				if (s.values.count(v) || e.degree(v) != 1)
					continue;
				Poly c = diff(e, v);
				if (!c.is_constant() || c.is_zero())
					continue;
				Poly rest = e - c * Poly(v);
				assign(s, v, -rest / c.constant_term());
				return true;
			}
		}
		return false;
	}

	void solve(State s)
	{
		for (;;) {
			if (!simplify(s))
				return;
			if (s.eqs.empty())
				break;
			dead_ = false;
			if (linear_slice(s))
				continue;
			if (dead_)
				return;
			if (single_substitution(s))
				continue;
			if (opts_.branch && try_branch(s))
				return;
			break;
		}
		PolyBranch b;
		b.values = s.values;
		for (Var v : unknowns_)
			if (!s.values.count(v))
				b.free.push_back(v);
		b.unsolved = s.eqs;
		result_.branches.push_back(std::move(b));
	}

	bool try_branch(const State& s)
	{
		for (std::size_t i = 0; i < s.eqs.size(); ++i) {
			const Poly& e = s.eqs[i];
			Monomial content = e.monomial_content();
			for (const auto& [v, k] : content.factors()) {
				if (!unknown_set_.count(v))
					continue;
				if (branches_used_ + 1 > opts_.branch_budget) {
					result_.budget_exhausted = true;
					return false;
				}
				++branches_used_;
				State zero = s;
				assign(zero, v, Poly());
				solve(std::move(zero));

				State rest = s;
				Poly reduced;
				for (const auto& [m, c] : e.terms())
					reduced.add_term(c, *m.divide(Monomial(v, k)));
				rest.eqs[i] = reduced;
				solve(std::move(rest));
				return true;
			}
		}
		// e = c * (v + q) with c a polynomial in the other unknowns.
		for (std::size_t i = 0; i < s.eqs.size(); ++i) {
			const Poly& e = s.eqs[i];
			for (auto it = unknowns_.rbegin(); it != unknowns_.rend(); ++it) {
				Var v = *it;
				if (s.values.count(v) || e.degree(v) != 1)
					continue;
				Poly c = diff(e, v);
				if (unknown_degree(c) == 0)
					continue;
				auto q = divide_exact(e - c * Poly(v), c);
				if (!q)
					continue;
				if (branches_used_ + 1 > opts_.branch_budget) {
					result_.budget_exhausted = true;
					return false;
				}
				++branches_used_;
				State zero = s;
				zero.eqs[i] = c;
				solve(std::move(zero));

				State rest = s;
				assign(rest, v, -*q);
				solve(std::move(rest));
				return true;
			}
		}
		return false;
	}

	std::vector<Var> unknowns_;
	std::set<Var> unknown_set_;
	PolySolveOptions opts_;
	PolySystemResult result_;
	std::size_t branches_used_ = 0;
	bool dead_ = false;
};

}  // namespace

PolySystemResult solve_polynomial_system(const std::vector<Poly>& equations,
                                         const std::vector<Var>& unknowns,
                                         const PolySolveOptions& opts)
{
	return Solver(unknowns, opts).run(equations);
}

}  // namespace cartan
