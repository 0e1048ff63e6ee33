#include "cartan/forms.hpp"

#include "cartan/detail/lexer.hpp"

#include <algorithm>
#include <stdexcept>

namespace cartan {

// ---------------------------------------------------------------- WedgeMonomial

std::optional<std::pair<int, WedgeMonomial>> WedgeMonomial::from_factors(std::vector<Var> factors)
{
	// insertion sort, counting transpositions
	int sign = 1;
	for (std::size_t i = 1; i < factors.size(); ++i)
		for (std::size_t j = i; j > 0 && factors[j] < factors[j - 1]; --j) {
			std::swap(factors[j], factors[j - 1]);
			sign = -sign;
		}
	for (std::size_t i = 1; i < factors.size(); ++i)
		if (factors[i] == factors[i - 1])
			return std::nullopt;
	WedgeMonomial w;
	w.factors_ = std::move(factors);
	return std::make_pair(sign, std::move(w));
}

std::optional<std::pair<int, WedgeMonomial>> wedge(const WedgeMonomial& a, const WedgeMonomial& b)
{
	// Merge; each time a factor of b overtakes k remaining factors of a, the sign flips k times.
	WedgeMonomial r;
	r.factors_.reserve(a.factors_.size() + b.factors_.size());
	int sign = 1;
	std::size_t i = 0, j = 0;
	while (i < a.factors_.size() || j < b.factors_.size()) {
		if (j == b.factors_.size() || (i < a.factors_.size() && a.factors_[i] < b.factors_[j])) {
			r.factors_.push_back(a.factors_[i++]);
		} else if (i == a.factors_.size() || b.factors_[j] < a.factors_[i]) {
			if ((a.factors_.size() - i) % 2 == 1)
				sign = -sign;
			r.factors_.push_back(b.factors_[j++]);
		} else {
			return std::nullopt;
		}
	}
	return std::make_pair(sign, std::move(r));
}

std::string to_string(const WedgeMonomial& w)
{
	std::string s;
	for (Var v : w.factors()) {
		if (!s.empty())
			s += '^';
		s += 'd' + v.name();
	}
	return s.empty() ? "1" : s;
}

// ---------------------------------------------------------------- DiffForm

DiffForm::DiffForm(const Poly& scalar) : degree_(0)
{
	if (!scalar.is_zero())
		terms_.emplace(WedgeMonomial(), scalar);
}

DiffForm DiffForm::differential(Var v)
{
	if (!v.is_coordinate())
		throw std::invalid_argument("differential of non-coordinate '" + v.name() + "'");
	return term(Poly(1), WedgeMonomial(v));
}

DiffForm DiffForm::term(const Poly& coef, const WedgeMonomial& w)
{
	DiffForm f(w.degree());
	f.add_term(coef, w);
	return f;
}

Poly DiffForm::coefficient(const WedgeMonomial& w) const
{
	auto it = terms_.find(w);
	return it == terms_.end() ? Poly() : it->second;
}

std::set<Var> DiffForm::coordinates() const
{
	std::set<Var> out;
	for (const auto& [w, c] : terms_) {
		out.insert(w.factors().begin(), w.factors().end());
		for (Var v : c.variables())
			if (v.is_coordinate())
				out.insert(v);
	}
	return out;
}

void DiffForm::add_term(const Poly& coef, const WedgeMonomial& w)
{
	if (coef.is_zero())
		return;
	if (w.degree() != degree_) {
		if (!terms_.empty())
			throw std::invalid_argument("form degree mismatch");
		degree_ = w.degree();
	}
	auto [it, inserted] = terms_.try_emplace(w, coef);
	if (!inserted) {
		it->second += coef;
		if (it->second.is_zero())
			terms_.erase(it);
	}
}

DiffForm& DiffForm::operator+=(const DiffForm& o)
{
	if (o.terms_.empty())
		return *this;
	if (terms_.empty())
		degree_ = o.degree_;
	if (degree_ != o.degree_)
		throw std::invalid_argument("adding forms of different degree");
	for (const auto& [w, c] : o.terms_)
		add_term(c, w);
	return *this;
}

DiffForm& DiffForm::operator-=(const DiffForm& o) { return *this += -o; }

DiffForm& DiffForm::operator*=(const Poly& s)
{
	if (s.is_zero()) {
		terms_.clear();
		return *this;
	}
	Terms out;
	for (auto& [w, c] : terms_) {
		Poly p = c * s;
		if (!p.is_zero())
			out.emplace(w, std::move(p));
	}
	terms_ = std::move(out);
	return *this;
}

DiffForm DiffForm::operator-() const
{
	return map_coefficients([](const Poly& c) { return -c; });
}

DiffForm wedge(const DiffForm& a, const DiffForm& b)
{
	DiffForm r(a.degree() + b.degree());
	for (const auto& [wa, ca] : a.terms())
		for (const auto& [wb, cb] : b.terms()) {
			auto w = wedge(wa, wb);
			if (!w)
				continue;
			Poly c = ca * cb;
			if (w->first < 0)
				c = -c;
			r.add_term(c, w->second);
		}
	return r;
}

DiffForm exterior_derivative(const DiffForm& f)
{
	DiffForm r(f.degree() + 1);
	for (const auto& [w, c] : f.terms())
		for (Var v : c.variables()) {
			if (!v.is_coordinate())
				continue;
			auto dw = wedge(WedgeMonomial(v), w);
			if (!dw)
				continue;
			Poly dc = diff(c, v);
			if (dw->first < 0)
				dc = -dc;
			r.add_term(dc, dw->second);
		}
	return r;
}

DiffForm substitute(const DiffForm& f, const std::map<Var, Poly>& bindings)
{
	return f.map_coefficients([&](const Poly& c) { return substitute_simultaneous(c, bindings); });
}

std::string to_string(const DiffForm& f)
{
	if (f.is_zero())
		return "0";
	if (f.degree() == 0)
		return to_string(f.terms().begin()->second);
	std::string s;
	for (auto it = f.terms().begin(); it != f.terms().end(); ++it) {
		const auto& [w, c] = *it;
		std::string wt = to_string(w);
		bool first = s.empty();
		if (c.size() == 1) {
			const auto& [m, q] = *c.terms().begin();
			bool neg = sgn(q) < 0;
			Poly a = neg ? -c : c;
			s += first ? (neg ? "-" : "") : (neg ? " - " : " + ");
			s += a == Poly(1) ? wt : to_string(a) + "*" + wt;
		} else {
			s += first ? "" : " + ";
			s += "(" + to_string(c) + ")*" + wt;
		}
	}
	return s;
}

namespace {

bool names_coordinate(std::string_view rest)
{
	if (rest.empty())
		return false;
	if (auto v = Var::lookup(rest))
		return v->is_coordinate();
	if (rest == "x" || rest == "t")
		return true;
	if (rest.size() >= 2 && (rest[0] == 'u' || rest[0] == 'a'))
		return std::all_of(rest.begin() + 1, rest.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
	return false;
}

class FormParser {
public:
	explicit FormParser(std::string_view text) : ts_(text) {}

	DiffForm parse()
	{
		DiffForm f = expr();
		if (!ts_.at_end())
			ts_.fail("unexpected token");
		return f;
	}

private:
	DiffForm add(DiffForm a, const DiffForm& b, int col)
	{
		try {
			return a += b;
		} catch (const std::invalid_argument& e) {
			throw ParseError(e.what(), col);
		}
	}

	DiffForm expr()
	{
		bool neg = ts_.accept("-");
		if (!neg)
			ts_.accept("+");
		DiffForm acc = term();
		if (neg)
			acc = -acc;
		for (;;) {
			int col = ts_.peek().column;
			if (ts_.accept("+"))
				acc = add(acc, term(), col);
			else if (ts_.accept("-"))
				acc = add(acc, -term(), col);
			else
				return acc;
		}
	}

	DiffForm term()
	{
		DiffForm acc = factor();
		for (;;) {
			if (ts_.accept("*") || ts_.accept("^")) {
				acc = wedge(acc, factor());
			} else if (ts_.accept("/")) {
				int col = ts_.peek().column;
				DiffForm d = factor();
				if (d.degree() != 0 || d.is_zero() || !d.terms().begin()->second.is_constant())
					throw ParseError("division only by a nonzero constant", col);
				acc *= Poly(1 / d.terms().begin()->second.constant_term());
			} else {
				return acc;
			}
		}
	}

	DiffForm factor()
	{
		int col = ts_.peek().column;
		DiffForm base = atom();
		if (ts_.peek().kind == detail::Token::Punct && ts_.peek().text == "^" &&
		    ts_.peek(1).kind == detail::Token::Number) {
			ts_.next();
			int e = std::stoi(ts_.next().text);
			if (base.degree() != 0)
				throw ParseError("power of a form of positive degree", col);
			Poly p = base.is_zero() ? Poly() : base.terms().begin()->second;
			return DiffForm(pow(p, e));
		}
		return base;
	}

	DiffForm atom()
	{
		const auto& tok = ts_.peek();
		if (tok.kind == detail::Token::Number) {
			ts_.next();
			return DiffForm(Poly(parse_rational(tok.text)));
		}
		if (tok.kind == detail::Token::Ident) {
			ts_.next();
			try {
				if (tok.text.size() > 1 && tok.text[0] == 'd' && names_coordinate(tok.text.substr(1)))
					return DiffForm::differential(Var::named(tok.text.substr(1)));
				Var v = Var::named(tok.text);
				if (v.kind() == VarKind::Generator)
					throw ParseError("Lie generator '" + tok.text + "' in a scalar form", tok.column);
				return DiffForm(Poly(v));
			} catch (const std::invalid_argument& e) {
				throw ParseError(e.what(), tok.column);
			}
		}
		if (ts_.accept("(")) {
			DiffForm f = expr();
			ts_.expect(")");
			return f;
		}
		ts_.fail("expected number, symbol, differential or '('");
	}

	detail::TokenStream ts_;
};

std::vector<Monomial> monomials_up_to(const std::vector<Var>& vars, int max_degree)
{
	std::vector<Monomial> out{Monomial()};
	std::vector<Monomial> frontier{Monomial()};
	for (int d = 1; d <= max_degree; ++d) {
		std::set<Monomial> next;
		for (const auto& m : frontier)
			for (Var v : vars)
				next.insert(m * Monomial(v));
		frontier.assign(next.begin(), next.end());
		out.insert(out.end(), frontier.begin(), frontier.end());
	}
	return out;
}

int coordinate_degree(const Poly& p)
{
	int d = 0;
	for (const auto& [m, c] : p.terms()) {
		int k = 0;
		for (const auto& [v, e] : m.factors())
			if (v.is_coordinate())
				k += e;
		d = std::max(d, k);
	}
	return d;
}

}  // namespace

DiffForm parse_form(std::string_view text) { return FormParser(text).parse(); }

std::vector<WedgeMonomial> wedge_basis(const std::vector<Var>& coordinates, int degree)
{
	std::vector<Var> sorted = coordinates;
	std::sort(sorted.begin(), sorted.end());
	sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
	std::vector<WedgeMonomial> out;
	if (degree < 0 || degree > static_cast<int>(sorted.size()))
		return out;
	std::vector<int> idx(degree);
	for (int i = 0; i < degree; ++i)
		idx[i] = i;
	const int n = static_cast<int>(sorted.size());
	for (;;) {
		std::vector<Var> f;
		for (int i : idx)
			f.push_back(sorted[i]);
		out.push_back(WedgeMonomial::from_factors(f)->second);
		int i = degree - 1;
		while (i >= 0 && idx[i] == n - degree + i)
			--i;
		if (i < 0)
			break;
		++idx[i];
		for (int j = i + 1; j < degree; ++j)
			idx[j] = idx[j - 1] + 1;
	}
	return out;
}

MembershipCertificate ideal_reduce(const DiffForm& f, const FormIdeal& ideal, const ReduceOptions& opts)
{
	std::set<Var> coord_set = f.coordinates();
	int max_gen_degree = 0;
	for (const auto& g : ideal.generators) {
		auto cs = g.coordinates();
		coord_set.insert(cs.begin(), cs.end());
		for (const auto& [w, c] : g.terms())
			max_gen_degree = std::max(max_gen_degree, coordinate_degree(c));
	}
	coord_set.insert(opts.extra_coordinates.begin(), opts.extra_coordinates.end());
	std::vector<Var> coords(coord_set.begin(), coord_set.end());
	const int bound = opts.max_coeff_degree.value_or(1 + max_gen_degree);
	const auto monomials = monomials_up_to(coords, bound);

	MembershipCertificate cert;
	cert.multipliers.reserve(ideal.generators.size());
	for (const auto& g : ideal.generators)
		cert.multipliers.emplace_back(std::max(0, f.degree() - g.degree()));

	// Unknown coefficient for every (generator, wedge monomial, coefficient monomial).
	struct Slot {
		std::size_t generator;
		WedgeMonomial w;
		Monomial m;
	};
	std::vector<Slot> slots;
	LinearSystem sys;
	DiffForm combination(f.degree());
	for (std::size_t k = 0; k < ideal.generators.size(); ++k) {
		const auto& g = ideal.generators[k];
		if (g.is_zero() || g.degree() > f.degree())
			continue;
		for (const auto& w : wedge_basis(coords, f.degree() - g.degree())) {
			DiffForm wg = wedge(DiffForm::term(Poly(1), w), g);
			if (wg.is_zero())
				continue;
			for (const auto& m : monomials) {
				Var c = Var::atom("_m" + std::to_string(slots.size()));
				slots.push_back({k, w, m});
				sys.unknowns.push_back(c);
				combination += wg * Poly::term(1, Monomial(c) * m);
			}
		}
	}
	DiffForm residual = combination - f;
	for (const auto& [w, coef] : residual.terms())
		for (auto& [m, eq] : coefficients_in(coef, [](Var v) { return v.is_coordinate(); }))
			sys.equations.push_back(eq);

	auto sol = solve_linear(sys);
	if (sol.consistent() && sol.conditions.empty() && sol.unsolved.empty()) {
		auto values = sol.particular();
		for (std::size_t i = 0; i < slots.size(); ++i) {
			const Poly& val = values.at(sys.unknowns[i]);
			if (val.is_zero())
				continue;
			if (!val.is_constant())
				throw std::logic_error("ideal_reduce: non-constant multiplier coefficient");
			cert.multipliers[slots[i].generator].add_term(Poly::term(val.constant_term(), slots[i].m),
			                                              slots[i].w);
		}
		cert.remainder = DiffForm(f.degree());
	} else {
		cert.remainder = f;
		if (sol.contradiction)
			cert.obstruction = sol.contradiction;
		else if (!sol.conditions.empty())
			cert.obstruction = sol.conditions.front();
	}

	DiffForm check = cert.remainder;
	for (std::size_t k = 0; k < ideal.generators.size(); ++k)
		check += wedge(cert.multipliers[k], ideal.generators[k]);
	if (!(check == f))
		throw std::logic_error("ideal_reduce: certificate does not recombine");
	return cert;
}

ClosureReport is_closed(const FormIdeal& ideal, const ReduceOptions& opts)
{
	ClosureReport rep;
	for (const auto& g : ideal.generators) {
		DiffForm dg = exterior_derivative(g);
		auto cert = ideal_reduce(dg, ideal, opts);
		rep.closed = rep.closed && cert.member();
		rep.derivatives.push_back(std::move(dg));
		rep.certificates.push_back(std::move(cert));
	}
	return rep;
}

}  // namespace cartan
