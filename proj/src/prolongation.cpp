#include "cartan/prolongation.hpp"

#include <algorithm>
#include <functional>

namespace cartan {

namespace {

Var x_coord() { return Var::base("x"); }
Var t_coord() { return Var::base("t"); }

DiffForm d(Var v) { return DiffForm::differential(v); }

Rational leading_rational(const LieElement& e)
{
	const Poly& c = e.leading_coefficient();
	return c.is_constant() ? c.constant_term() : Rational(1);
}

bool basis_less(const LieElement& a, const LieElement& b)
{
	if (a.leading_word() != b.leading_word())
		return a.leading_word() < b.leading_word();
	return to_string(a) < to_string(b);
}

LieElement monic(const LieElement& e)
{
	if (e.is_zero())
		return e;
	return e * Poly(1 / leading_rational(e));
}

}  // namespace

// ---------------------------------------------------------------- ideal

std::vector<Var> EvolutionPDE::jets() const
{
	std::vector<Var> out;
	for (int i = 0; i < order; ++i)
		out.push_back(Var::jet(i));
	return out;
}

Poly EvolutionPDE::full_rhs() const { return rhs + Poly(Var::jet(order)) * leading; }

std::vector<Var> PDEIdeal::jets() const
{
	std::vector<Var> out;
	for (Var v : coordinates)
		if (v.kind() != VarKind::Base)
			out.push_back(v);
	return out;
}

PDEIdeal contact_ideal_from_pde(const EvolutionPDE& pde, const ReduceOptions& opts)
{
	if (pde.order < 1 || pde.order > 2)
		throw std::invalid_argument("contact ideal recipe supports order 1 or 2; give the generators explicitly");
	if (is_zero(pde.leading))
		throw std::invalid_argument("leading coefficient must be nonzero");
	auto jets = pde.jets();
	for (Var v : pde.rhs.variables())
		if (std::find(jets.begin(), jets.end(), v) == jets.end())
			throw std::invalid_argument("right-hand side depends on '" + v.name() + "', not a jet coordinate below order " +
			                            std::to_string(pde.order));

	PDEIdeal out;
	out.coordinates = {x_coord(), t_coord()};
	out.coordinates.insert(out.coordinates.end(), jets.begin(), jets.end());
	Var x = x_coord(), t = t_coord(), u0 = Var::jet(0);
	const Poly nu(pde.leading);

	if (pde.order == 2) {
		Var u1 = Var::jet(1);
		DiffForm a1 = wedge(d(u0), d(t)) - wedge(d(x), d(t)) * Poly(u1);
		// F = f(u0) u1 + h: the f-part is written as f du0^dt, the rest as h dx^dt.
		Poly f, h;
		for (const auto& [m, c] : pde.rhs.terms()) {
			if (m.degree(u1) == 1)
				f.add_term(c, *m.divide(Monomial(u1)));
			else
				h.add_term(c, m);
		}
		DiffForm a2 = wedge(d(u0), d(x)) + wedge(d(u0), d(t)) * f + wedge(d(x), d(t)) * h + wedge(d(u1), d(t)) * nu;
		out.ideal.generators = {a1, a2};
	} else {
		DiffForm a = wedge(d(u0), d(x)) + wedge(d(u0), d(t)) * nu + wedge(d(x), d(t)) * pde.rhs;
		out.ideal.generators = {a};
	}
	out.closure = is_closed(out.ideal, opts);
	if (!out.closure.closed)
		throw ConstructionError("contact ideal is not closed", out.closure);
	return out;
}

PDEIdeal ideal_from_generators(std::vector<Var> coordinates, std::vector<DiffForm> generators,
                               const ReduceOptions& opts)
{
	PDEIdeal out;
	out.coordinates = std::move(coordinates);
	out.ideal.generators = std::move(generators);
	ReduceOptions o = opts;
	o.extra_coordinates.insert(o.extra_coordinates.end(), out.coordinates.begin(), out.coordinates.end());
	out.closure = is_closed(out.ideal, o);
	return out;
}

// ---------------------------------------------------------------- connection

ConnectionAnsatz ConnectionAnsatz::explicit_connection(LieElement bx, LieElement bt)
{
	ConnectionAnsatz a;
	a.bx = std::move(bx);
	a.bt = std::move(bt);
	return a;
}

std::string to_string(const LieForm& f)
{
	std::string s;
	for (const auto& [w, e] : f) {
		if (e.is_zero())
			continue;
		if (!s.empty())
			s += " + ";
		s += "(" + to_string(e) + ")*" + to_string(w);
	}
	return s.empty() ? "0" : s;
}

namespace {

void add_to(LieForm& f, const std::vector<Var>& factors, const LieElement& e)
{
	auto w = WedgeMonomial::from_factors(factors);
	if (!w || e.is_zero())
		return;
	auto& slot = f[w->second];
	slot += w->first < 0 ? -e : e;
	if (slot.is_zero())
		f.erase(w->second);
}

}  // namespace

LieForm curvature(const LieElement& bx, const LieElement& bt, const std::vector<Var>& jets)
{
	LieForm f;
	for (Var u : jets) {
		add_to(f, {u, x_coord()}, diff(bx, u));
		add_to(f, {u, t_coord()}, diff(bt, u));
	}
	add_to(f, {x_coord(), t_coord()}, bracket(bx, bt));
	return f;
}

LieElement evaluate_linear(const Poly& p, const std::map<Var, LieElement>& atoms)
{
	LieElement out;
	for (const auto& [m, c] : p.terms()) {
		std::optional<Var> atom;
		std::vector<Monomial::Factor> rest;
		for (const auto& [v, e] : m.factors()) {
			if (atoms.count(v)) {
				if (atom || e != 1)
					throw std::invalid_argument("expression is not linear in the Lie-valued symbols");
				atom = v;
			} else {
				rest.emplace_back(v, e);
			}
		}
		if (!atom)
			throw std::invalid_argument("expression has a term free of Lie-valued symbols");
		out += atoms.at(*atom) * Poly::term(c, Monomial::from_factors(rest));
	}
	return out;
}

std::vector<LieElement> split_by_monomials(const LieElement& x, const std::vector<Var>& coords)
{
	std::set<Var> cs(coords.begin(), coords.end());
	std::map<Monomial, LieElement> groups;
	for (const auto& [w, c] : x.terms())
		for (const auto& [m, cof] : coefficients_in(c, [&](Var v) { return cs.count(v) > 0; }))
			groups[m].add_term(cof, w);
	std::vector<LieElement> out;
	for (auto& [m, e] : groups)
		if (!e.is_zero())
			out.push_back(std::move(e));
	return out;
}

namespace {

std::vector<Monomial> bx_monomials(const std::vector<Var>& jets, int per_variable)
{
	std::vector<Monomial> out{Monomial()};
	for (Var u : jets) {
		std::vector<Monomial> next;
		for (const auto& m : out)
			for (int e = 0; e <= per_variable; ++e)
				next.push_back(m * Monomial(u, e));
		out = std::move(next);
	}
	std::sort(out.begin(), out.end());
	return out;
}

std::vector<Monomial> total_degree_monomials(const std::vector<Var>& jets, int degree)
{
	std::set<Monomial> all{Monomial()};
	std::vector<Monomial> frontier{Monomial()};
	for (int d = 1; d <= degree; ++d) {
		std::vector<Monomial> next;
		for (const auto& m : frontier)
			for (Var u : jets)
				next.push_back(m * Monomial(u));
		std::sort(next.begin(), next.end());
		next.erase(std::unique(next.begin(), next.end()), next.end());
		all.insert(next.begin(), next.end());
		frontier = std::move(next);
	}
	return {all.begin(), all.end()};
}

std::map<Var, LieElement> atom_values(const DeterminingSystem& sys, const LieElement& bx, const LieElement& bt)
{
	std::map<Var, LieElement> vals;
	for (const auto& [atom, slot] : sys.derivative_atoms)
		vals[atom] = diff(slot.first == 'x' ? bx : bt, slot.second);
	vals[sys.bracket_atom] = bracket(bx, bt);
	return vals;
}

}  // namespace

DeterminingSystem derive_determining(const PDEIdeal& ideal, const ConnectionAnsatz& ansatz)
{
	DeterminingSystem sys;
	sys.ideal = ideal;
	sys.jets = ideal.jets();
	sys.ansatz = ansatz;
	Var x = x_coord(), t = t_coord();

	DiffForm omega(2);
	for (Var u : sys.jets) {
		Var ax = Var::atom("bx_" + u.name());
		Var at = Var::atom("bt_" + u.name());
		sys.derivative_atoms[ax] = {'x', u};
		sys.derivative_atoms[at] = {'t', u};
		omega += wedge(d(u), d(x)) * Poly(ax);
		omega += wedge(d(u), d(t)) * Poly(at);
	}
	sys.bracket_atom = Var::atom("bxt");
	omega += wedge(d(x), d(t)) * Poly(sys.bracket_atom);

	DiffForm residual = omega;
	for (std::size_t k = 0; k < ideal.ideal.generators.size(); ++k) {
		const auto& a = ideal.ideal.generators[k];
		if (a.degree() != 2)
			throw std::invalid_argument("determining equations need 2-form generators");
		Var g = Var::atom("g" + std::to_string(k + 1));
		sys.multipliers.push_back(g);
		residual -= a * Poly(g);
	}

	LinearSystem ls;
	ls.unknowns = sys.multipliers;
	for (const auto& [w, eq] : residual.terms()) {
		Condition c{w, eq, std::nullopt, Poly()};
		for (const auto& [m, q] : eq.terms()) {
			if (m.degree() != 1)
				continue;
			Var v = m.factors().front().first;
			if (v == sys.bracket_atom || sys.derivative_atoms.count(v)) {
				c.lhs = v;
				c.rhs = (Poly(v) * q - eq) / q;
				break;
			}
		}
		sys.conditions.push_back(std::move(c));
		ls.equations.push_back(eq);
	}

	auto sol = solve_linear(ls);
	if (!sol.consistent())
		throw std::logic_error("multiplier elimination is inconsistent");
	sys.multiplier_solution = sol.particular();
	for (const auto& c : sol.conditions)
		sys.residuals.push_back(c.primitive());
	for (const auto& u : sol.unsolved)
		sys.residuals.push_back(u.primitive());

	if (ansatz.is_explicit()) {
		sys.bx = *ansatz.bx;
		sys.bt = *ansatz.bt;
	} else {
		int n = 0;
		for (const auto& m : bx_monomials(sys.jets, ansatz.bx_degree)) {
			Var g = Var::generator("X" + std::to_string(n++));
			sys.fresh.push_back(g);
			sys.bx += LieElement(g) * Poly::term(1, m);
		}
		n = 0;
		for (const auto& m : total_degree_monomials(sys.jets, ansatz.bt_degree)) {
			Var g = Var::generator("Y" + std::to_string(n++));
			sys.fresh.push_back(g);
			sys.bt += LieElement(g) * Poly::term(1, m);
		}
	}

	auto vals = atom_values(sys, sys.bx, sys.bt);
	for (const auto& r : sys.residuals)
		for (auto& e : split_by_monomials(evaluate_linear(r, vals), sys.jets))
			sys.expanded.push_back(std::move(e));
	return sys;
}

// ---------------------------------------------------------------- solving

namespace {

struct Candidate {
	Var generator;
	std::size_t equation;
	Rational coefficient;
};

std::optional<Candidate> find_candidate(const std::vector<LieElement>& eqs, const std::set<Var>& eliminable)
{
	std::optional<Candidate> best;
	for (std::size_t i = 0; i < eqs.size(); ++i) {
		for (const auto& [w, c] : eqs[i].terms()) {
			if (!w.is_letter() || !c.is_constant())
				continue;
			Var g = w.letters().front();
			if (!eliminable.count(g))
				continue;
			bool elsewhere = false;
			for (const auto& [w2, c2] : eqs[i].terms())
				if (!(w2 == w) && std::find(w2.letters().begin(), w2.letters().end(), g) != w2.letters().end())
					elsewhere = true;
			if (elsewhere)
				continue;
			if (!best || best->generator < g)
				best = Candidate{g, i, c.constant_term()};
		}
	}
	return best;
}

void collect_letters(const LieElement& e, std::vector<Var>& order)
{
	for (const auto& [w, c] : e.terms())
		for (Var v : w.letters())
			if (std::find(order.begin(), order.end(), v) == order.end())
				order.push_back(v);
}

// First use: jet monomials in ascending order, b^(x) before b^(t). A generator met
// as a bare letter with a constant coefficient is rescaled so that coefficient is 1.
void collect_first_use(const LieElement& e, const std::vector<Var>& jets, std::vector<Var>& order,
                       std::map<Var, Rational>& scale)
{
	std::set<Var> js(jets.begin(), jets.end());
	std::map<Monomial, LieElement> groups;
	for (const auto& [w, c] : e.terms())
		for (const auto& [m, cof] : coefficients_in(c, [&](Var v) { return js.count(v) > 0; }))
			groups[m].add_term(cof, w);
	for (const auto& [m, piece] : groups)
		for (const auto& [w, c] : piece.terms())
			for (Var v : w.letters())
				if (std::find(order.begin(), order.end(), v) == order.end()) {
					order.push_back(v);
					if (w.is_letter() && c.is_constant())
						scale[v] = c.constant_term();
				}
}

}  // namespace

RelationSet ProlongationSolution::relation_set(const RelationOptions& opts) const
{
	RelationOptions o = opts;
	o.generators.insert(o.generators.end(), generators.begin(), generators.end());
	return RelationSet(relations, o);
}

ProlongationSolution solve_determining(const DeterminingSystem& sys)
{
	std::vector<LieElement> eqs = sys.expanded;
	LieElement bx = sys.bx, bt = sys.bt;
	std::set<Var> eliminable(sys.fresh.begin(), sys.fresh.end());

	while (auto cand = find_candidate(eqs, eliminable)) {
		LieWord w(cand->generator);
		LieElement value = (LieElement::term(Poly(cand->coefficient), w) - eqs[cand->equation]) *
		                   Poly(1 / cand->coefficient);
		std::map<Var, LieElement> ex{{cand->generator, value}};
		eliminable.erase(cand->generator);
		std::vector<LieElement> next;
		for (const auto& e : eqs) {
			LieElement s = substitute_generators(e, ex);
			if (!s.is_zero())
				next.push_back(std::move(s));
		}
		eqs = std::move(next);
		bx = substitute_generators(bx, ex);
		bt = substitute_generators(bt, ex);
	}

	ProlongationSolution sol;
	sol.jets = sys.jets;

	std::vector<Var> order;
	std::map<Var, LieElement> rename;
	if (!sys.fresh.empty()) {
		std::map<Var, Rational> scale;
		collect_first_use(bx, sys.jets, order, scale);
		collect_first_use(bt, sys.jets, order, scale);
		for (const auto& e : eqs)
			collect_letters(e, order);
		for (std::size_t i = 0; i < order.size(); ++i) {
			Var a = Var::generator("A" + std::to_string(i));
			auto it = scale.find(order[i]);
			rename.emplace(order[i], LieElement(a) * Poly(it == scale.end() ? Rational(1) : 1 / it->second));
			sol.generators.push_back(a);
		}
	} else {
		collect_letters(bx, order);
		collect_letters(bt, order);
		for (const auto& e : eqs)
			collect_letters(e, order);
		sol.generators = order;
	}

	sol.bx = substitute_generators(bx, rename);
	sol.bt = substitute_generators(bt, rename);
	for (const auto& e : eqs) {
		LieElement r = monic(substitute_generators(e, rename));
		if (r.is_zero())
			continue;
		if (!r.leading_coefficient().is_constant())
			sol.unsolved.push_back(r);
		else if (std::find(sol.relations.begin(), sol.relations.end(), r) == sol.relations.end())
			sol.relations.push_back(r);
	}
	std::sort(sol.relations.begin(), sol.relations.end(), basis_less);

	auto vals = atom_values(sys, sol.bx, sol.bt);
	for (Var g : sys.multipliers) {
		auto it = sys.multiplier_solution.find(g);
		sol.curvature.push_back(it == sys.multiplier_solution.end() ? LieElement() : evaluate_linear(it->second, vals));
	}
	sol.verified = verify_solution(sys, sol);
	if (!sol.verified)
		throw std::logic_error("prolongation solution does not satisfy the determining system");
	return sol;
}

bool verify_solution(const DeterminingSystem& sys, const ProlongationSolution& sol)
{
	LieForm omega = curvature(sol.bx, sol.bt, sol.jets);
	const auto& gens = sys.ideal.ideal.generators;
	for (std::size_t k = 0; k < gens.size() && k < sol.curvature.size(); ++k)
		for (const auto& [w, c] : gens[k].terms()) {
			auto& slot = omega[w];
			slot -= sol.curvature[k] * c;
		}
	RelationSet rel = sol.relation_set();
	for (const auto& [w, e] : omega)
		for (const auto& piece : split_by_monomials(e, sol.jets))
			if (!rel.normalize(piece).is_zero())
				return false;
	return true;
}

// ---------------------------------------------------------------- holonomy

LieElement covariant_derivative(const LieElement& gamma, const LieElement& x, Var z)
{
	return diff(x, z) + bracket(gamma, x);
}

FiltrationReport holonomy_filtration(const ProlongationSolution& sol, int level, const RelationOptions& opts)
{
	FiltrationReport rep;
	rep.level = level;
	Var x = x_coord(), t = t_coord();
	for (int s = 0; s <= level; ++s)
		for (int q = 0; q <= s; ++q) {
			int p = s - q;
			for (const auto& g : sol.curvature) {
				LieElement e = g;
				for (int i = 0; i < q; ++i)
					e = covariant_derivative(sol.bt, e, t);
				for (int i = 0; i < p; ++i)
					e = covariant_derivative(sol.bx, e, x);
				for (auto& piece : split_by_monomials(e, sol.jets))
					rep.elements.push_back(std::move(piece));
			}
		}

	for (const auto& e : rep.elements)
		if (!in_rational_span(e, rep.free_basis))
			rep.free_basis.push_back(monic(e));
	std::stable_sort(rep.free_basis.begin(), rep.free_basis.end(), basis_less);

	try {
		RelationSet rel = sol.relation_set(opts);
		for (const auto& e : rep.elements) {
			LieElement n = rel.normalize(e);
			if (!n.is_zero() && !in_rational_span(n, rep.basis))
				rep.basis.push_back(monic(n));
		}
		std::stable_sort(rep.basis.begin(), rep.basis.end(), basis_less);
		SpanOptions so;
		so.degree_cap = opts.degree_cap;
		auto span = subalgebra_span(rep.basis, rel, so);
		rep.perfect = span.perfect();
		rep.closed = span.closed;
		rep.budget_exhausted = span.budget_exhausted;
	} catch (const BudgetExhausted&) {
		rep.budget_exhausted = true;
	}
	return rep;
}

std::vector<NamedElement> name_basis(const ProlongationSolution& sol, const std::vector<LieElement>& basis)
{
	int next = 0;
	for (Var g : sol.generators)
		next = std::max(next, g.index() + 1);
	std::vector<NamedElement> out;
	for (const auto& b : basis) {
		if (b.size() == 1 && b.terms().begin()->first.is_letter() && b.terms().begin()->second == Poly(1)) {
			out.push_back({b.terms().begin()->first.letters().front(), b});
			continue;
		}
		Var name = Var::generator("A" + std::to_string(next++));
		out.push_back({name, b});
	}
	return out;
}

std::map<Var, LieElement> default_expansions(const ProlongationSolution& sol, const std::vector<NamedElement>& basis)
{
	std::set<Var> names;
	bool wide = false;
	for (const auto& b : basis) {
		names.insert(b.name);
		wide = wide || b.name.index() >= 10;
	}
	std::map<Var, LieElement> out;
	for (Var g : sol.generators) {
		if (names.count(g))
			continue;
		wide = wide || g.index() >= 10;
		LieElement e;
		for (const auto& b : basis) {
			std::string q = "q" + std::to_string(g.index()) + (wide ? "_" : "") + std::to_string(b.name.index());
			e += LieElement(b.name) * Poly(Var::parameter(q));
		}
		out.emplace(g, e);
	}
	return out;
}

namespace {

using Vector = std::vector<Poly>;

class ClosedAlgebra {
public:
	ClosedAlgebra(const std::vector<NamedElement>& basis, const std::map<Var, LieElement>& expansions)
	    : r_(basis.size())
	{
		for (std::size_t k = 0; k < r_; ++k)
			index_.emplace(basis[k].name, k);
		for (std::size_t i = 0; i < r_; ++i)
			for (std::size_t j = i + 1; j < r_; ++j)
				for (std::size_t k = 0; k < r_; ++k) {
					Var c = Var::parameter("c_" + basis[i].name.name() + "_" + basis[j].name.name() + "_" +
					                       basis[k].name.name());
					constants_.push_back(c);
					table_[{i, j, k}] = Poly(c);
				}
		for (const auto& [g, e] : expansions) {
			Vector v(r_);
			for (const auto& [w, c] : e.terms()) {
				auto it = w.is_letter() ? index_.find(w.letters().front()) : index_.end();
				if (it == index_.end())
					throw std::invalid_argument("expansion of " + g.name() + " is not a combination of basis elements");
				v[it->second] += c;
			}
			letters_.emplace(g, std::move(v));
		}
		for (const auto& [name, k] : index_) {
			Vector v(r_);
			v[k] = Poly(1);
			letters_.emplace(name, std::move(v));
		}
	}

	const std::vector<Var>& constants() const { return constants_; }

	Poly c(std::size_t k, std::size_t i, std::size_t j) const
	{
		if (i == j)
			return Poly();
		if (i < j)
			return table_.at({i, j, k});
		return -table_.at({j, i, k});
	}

	Vector bracket(const Vector& a, const Vector& b) const
	{
		Vector out(r_);
		for (std::size_t i = 0; i < r_; ++i) {
			if (a[i].is_zero())
				continue;
			for (std::size_t j = 0; j < r_; ++j) {
				if (b[j].is_zero() || i == j)
					continue;
				Poly ab = a[i] * b[j];
				for (std::size_t k = 0; k < r_; ++k)
					out[k] += ab * c(k, i, j);
			}
		}
		return out;
	}

	Vector eval(const LieWord& w) const
	{
		if (w.is_letter()) {
			auto it = letters_.find(w.letters().front());
			if (it == letters_.end())
				throw std::invalid_argument("generator " + w.letters().front().name() + " has no value in the closed algebra");
			return it->second;
		}
		auto [l, r] = w.split();
		return bracket(eval(l), eval(r));
	}

	Vector eval(const LieElement& e) const
	{
		Vector out(r_);
		for (const auto& [w, c] : e.terms()) {
			Vector v = eval(w);
			for (std::size_t k = 0; k < r_; ++k)
				out[k] += v[k] * c;
		}
		return out;
	}

	Vector unit(std::size_t k) const
	{
		Vector v(r_);
		v[k] = Poly(1);
		return v;
	}

	std::size_t dim() const { return r_; }

private:
	std::size_t r_;
	std::map<Var, std::size_t> index_;
	std::map<Var, Vector> letters_;
	std::map<std::tuple<std::size_t, std::size_t, std::size_t>, Poly> table_;
	std::vector<Var> constants_;
};

void push_components(std::vector<Poly>& eqs, const Vector& v)
{
	for (const auto& p : v)
		if (!p.is_zero()) {
			Poly q = p.primitive();
			if (std::find(eqs.begin(), eqs.end(), q) == eqs.end())
				eqs.push_back(std::move(q));
		}
}

}  // namespace

HolonomyClosure holonomy_close(const ProlongationSolution& sol, const std::vector<NamedElement>& basis,
                               const std::map<Var, LieElement>& expansions, const CloseOptions& opts)
{
	HolonomyClosure out;
	out.basis = basis;
	out.expansions = expansions;
	ClosedAlgebra alg(basis, expansions);
	const std::size_t r = alg.dim();

	std::set<Var> qs;
	for (const auto& [g, e] : expansions)
		for (Var v : e.scalar_variables())
			if (v.name() != opts.free_parameter)
				qs.insert(v);
	out.unknowns.assign(qs.begin(), qs.end());
	out.unknowns.insert(out.unknowns.end(), alg.constants().begin(), alg.constants().end());

	for (std::size_t k = 0; k < r; ++k) {
		const auto& b = basis[k];
		if (b.definition == LieElement(b.name))
			continue;
		Vector v = alg.eval(b.definition);
		v[k] -= Poly(1);
		push_components(out.equations, v);
	}
	for (const auto& rel : sol.relations)
		push_components(out.equations, alg.eval(rel));
	for (std::size_t i = 0; i < r; ++i)
		for (std::size_t j = i + 1; j < r; ++j)
			for (std::size_t k = j + 1; k < r; ++k) {
				Vector a = alg.bracket(alg.bracket(alg.unit(i), alg.unit(j)), alg.unit(k));
				Vector b = alg.bracket(alg.bracket(alg.unit(j), alg.unit(k)), alg.unit(i));
				Vector c = alg.bracket(alg.bracket(alg.unit(k), alg.unit(i)), alg.unit(j));
				for (std::size_t m = 0; m < r; ++m)
					a[m] += b[m] + c[m];
				push_components(out.equations, a);
			}

	out.raw = solve_polynomial_system(out.equations, out.unknowns, opts.solve);

	const PolyBranch* chosen = nullptr;
	for (const auto& b : out.raw.branches)
		if (b.complete()) {
			chosen = &b;
			break;
		}
	if (!chosen && !out.raw.branches.empty())
		chosen = &out.raw.branches.front();
	if (!chosen)
		return out;

	out.consistent = chosen->complete();
	out.values = chosen->values;
	out.free = chosen->free;
	out.unsolved = chosen->unsolved;
	std::map<Var, Poly> rename;
	if (out.free.size() == 1) {
		Var lambda = Var::parameter(opts.free_parameter);
		out.renamed_from = out.free.front();
		rename[out.free.front()] = Poly(lambda);
		for (auto& [v, p] : out.values)
			p = substitute_simultaneous(p, rename);
		out.values[out.free.front()] = Poly(lambda);
		out.free = {lambda};
	}
	auto value_of = [&](Var v) {
		auto it = out.values.find(v);
		return it == out.values.end() ? substitute_simultaneous(Poly(v), rename) : it->second;
	};

	std::vector<std::string> names;
	std::vector<Var> name_vars;
	for (const auto& b : basis) {
		names.push_back(b.name.name());
		name_vars.push_back(b.name);
	}
	out.structure = StructureConstants(r, names);
	for (std::size_t i = 0; i < r; ++i)
		for (std::size_t j = 0; j < r; ++j)
			for (std::size_t k = 0; k < r; ++k) {
				Poly c = alg.c(k, i, j);
				if (!c.is_zero())
					c = substitute_simultaneous(c, [&] {
						std::map<Var, Poly> m;
						for (Var v : c.variables())
							m[v] = value_of(v);
						return m;
					}());
				out.structure(k, i, j) = c;
			}
	std::map<Var, Poly> all;
	for (Var v : out.unknowns)
		all[v] = value_of(v);
	for (const auto& [g, e] : expansions)
		out.solved_expansions[g] = substitute(e, all);
	out.presentation = presentation_relations(out.structure, name_vars);
	out.perfect = out.consistent && validate_structure_constants(out.structure).ok();
	return out;
}

}  // namespace cartan
