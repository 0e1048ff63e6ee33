#include "cartan/poly.hpp"

#include "cartan/detail/lexer.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace cartan {

// ---------------------------------------------------------------- Monomial

Monomial::Monomial(Var v, int exponent)
{
	if (exponent < 0)
		throw std::invalid_argument("negative exponent");
	if (exponent > 0)
		factors_.emplace_back(v, exponent);
}

Monomial Monomial::from_factors(std::vector<Factor> factors)
{
	std::sort(factors.begin(), factors.end(),
	          [](const Factor& a, const Factor& b) { return a.first < b.first; });
	Monomial m;
	for (auto& [v, e] : factors) {
		if (e < 0)
			throw std::invalid_argument("negative exponent");
		if (e == 0)
			continue;
		if (!m.factors_.empty() && m.factors_.back().first == v)
			m.factors_.back().second += e;
		else
			m.factors_.emplace_back(v, e);
	}
	return m;
}

int Monomial::degree() const
{
	int d = 0;
	for (const auto& f : factors_)
		d += f.second;
	return d;
}

int Monomial::degree(Var v) const
{
	for (const auto& [w, e] : factors_)
		if (w == v)
			return e;
	return 0;
}

Monomial Monomial::operator*(const Monomial& other) const
{
	Monomial r;
	r.factors_.reserve(factors_.size() + other.factors_.size());
	auto a = factors_.begin(), ae = factors_.end();
	auto b = other.factors_.begin(), be = other.factors_.end();
	while (a != ae || b != be) {
		if (b == be || (a != ae && a->first < b->first))
			r.factors_.push_back(*a++);
		else if (a == ae || b->first < a->first)
			r.factors_.push_back(*b++);
		else {
			r.factors_.emplace_back(a->first, a->second + b->second);
			++a;
			++b;
		}
	}
	return r;
}

std::optional<Monomial> Monomial::divide(const Monomial& other) const
{
	Monomial r;
	auto a = factors_.begin(), ae = factors_.end();
	for (const auto& [v, e] : other.factors_) {
		while (a != ae && a->first < v)
			r.factors_.push_back(*a++);
		if (a == ae || a->first != v || a->second < e)
			return std::nullopt;
		if (a->second > e)
			r.factors_.emplace_back(v, a->second - e);
		++a;
	}
	while (a != ae)
		r.factors_.push_back(*a++);
	return r;
}

Monomial Monomial::gcd(const Monomial& other) const
{
	Monomial r;
	for (const auto& [v, e] : factors_) {
		int f = other.degree(v);
		if (f > 0)
			r.factors_.emplace_back(v, std::min(e, f));
	}
	return r;
}

std::pair<Monomial, Monomial> Monomial::split(const std::function<bool(Var)>& pred) const
{
	Monomial in, out;
	for (const auto& f : factors_)
		(pred(f.first) ? in : out).factors_.push_back(f);
	return {in, out};
}

std::strong_ordering operator<=>(const Monomial& a, const Monomial& b)
{
	if (auto c = a.degree() <=> b.degree(); c != 0)
		return c;
	auto x = a.factors_.begin(), xe = a.factors_.end();
	auto y = b.factors_.begin(), ye = b.factors_.end();
	for (; x != xe && y != ye; ++x, ++y) {
		if (x->first != y->first)
			// the monomial containing the earlier variable is larger
			return x->first < y->first ? std::strong_ordering::greater : std::strong_ordering::less;
		if (x->second != y->second)
			return x->second <=> y->second;
	}
	if (x != xe)
		return std::strong_ordering::greater;
	if (y != ye)
		return std::strong_ordering::less;
	return std::strong_ordering::equal;
}

std::string to_string(const Monomial& m)
{
	if (m.is_one())
		return "1";
	std::string s;
	for (const auto& [v, e] : m.factors()) {
		if (!s.empty())
			s += '*';
		s += v.name();
		if (e != 1)
			s += '^' + std::to_string(e);
	}
	return s;
}

// ---------------------------------------------------------------- Poly

Poly::Poly(const Rational& c)
{
	if (!cartan::is_zero(c))
		terms_.emplace(Monomial(), c);
}

Poly::Poly(Var v) { terms_.emplace(Monomial(v), Rational(1)); }

Poly Poly::term(const Rational& c, const Monomial& m)
{
	Poly p;
	p.add_term(c, m);
	return p;
}

void Poly::add_term(const Rational& c, const Monomial& m)
{
	if (cartan::is_zero(c))
		return;
	auto [it, inserted] = terms_.try_emplace(m, c);
	if (!inserted) {
		it->second += c;
		if (cartan::is_zero(it->second))
			terms_.erase(it);
	}
}

bool Poly::is_constant() const
{
	return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.is_one());
}

Rational Poly::constant_term() const { return coefficient(Monomial()); }

Rational Poly::coefficient(const Monomial& m) const
{
	auto it = terms_.find(m);
	return it == terms_.end() ? Rational(0) : it->second;
}

int Poly::total_degree() const { return terms_.empty() ? -1 : terms_.rbegin()->first.degree(); }

int Poly::low_degree() const { return terms_.empty() ? -1 : terms_.begin()->first.degree(); }

int Poly::degree(Var v) const
{
	int d = terms_.empty() ? -1 : 0;
	for (const auto& [m, c] : terms_)
		d = std::max(d, m.degree(v));
	return d;
}

std::set<Var> Poly::variables() const
{
	std::set<Var> vs;
	for (const auto& [m, c] : terms_)
		for (const auto& f : m.factors())
			vs.insert(f.first);
	return vs;
}

bool Poly::depends_on(Var v) const
{
	for (const auto& [m, c] : terms_)
		if (m.degree(v) > 0)
			return true;
	return false;
}

const Monomial& Poly::leading_monomial() const
{
	if (terms_.empty())
		throw std::logic_error("leading monomial of zero polynomial");
	return terms_.rbegin()->first;
}

const Rational& Poly::leading_coefficient() const
{
	if (terms_.empty())
		throw std::logic_error("leading coefficient of zero polynomial");
	return terms_.rbegin()->second;
}

Rational Poly::content() const
{
	if (terms_.empty())
		return Rational(1);
	Integer num = 0, den = 1;
	for (const auto& [m, c] : terms_) {
		mpz_gcd(num.get_mpz_t(), num.get_mpz_t(), c.get_num_mpz_t());
		mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), c.get_den_mpz_t());
	}
	Rational r(num, den);
	r.canonicalize();
	return r;
}

Poly Poly::primitive() const
{
	if (terms_.empty())
		return *this;
	Rational c = content();
	if (sgn(leading_coefficient()) < 0)
		c = -c;
	return *this / c;
}

Monomial Poly::monomial_content() const
{
	if (terms_.empty())
		return Monomial();
	Monomial g = terms_.begin()->first;
	for (const auto& [m, c] : terms_)
		g = g.gcd(m);
	return g;
}

Poly& Poly::operator+=(const Poly& o)
{
	for (const auto& [m, c] : o.terms_)
		add_term(c, m);
	return *this;
}

Poly& Poly::operator-=(const Poly& o)
{
	for (const auto& [m, c] : o.terms_)
		add_term(-c, m);
	return *this;
}

Poly operator*(const Poly& a, const Poly& b)
{
	Poly r;
	for (const auto& [ma, ca] : a.terms_)
		for (const auto& [mb, cb] : b.terms_)
			r.add_term(ca * cb, ma * mb);
	return r;
}

Poly& Poly::operator*=(const Poly& o)
{
	*this = *this * o;
	return *this;
}

Poly& Poly::operator*=(const Rational& c)
{
	if (cartan::is_zero(c)) {
		terms_.clear();
		return *this;
	}
	for (auto& [m, v] : terms_)
		v *= c;
	return *this;
}

Poly& Poly::operator/=(const Rational& c)
{
	if (cartan::is_zero(c))
		throw std::domain_error("division by zero");
	for (auto& [m, v] : terms_)
		v /= c;
	return *this;
}

Poly Poly::operator-() const
{
	Poly r = *this;
	for (auto& [m, v] : r.terms_)
		v = -v;
	return r;
}

Poly pow(const Poly& p, int exponent)
{
	if (exponent < 0)
		throw std::invalid_argument("negative exponent");
	Poly r(1), base = p;
	while (exponent > 0) {
		if (exponent & 1)
			r *= base;
		exponent >>= 1;
		if (exponent)
			base *= base;
	}
	return r;
}

Poly diff(const Poly& p, Var v)
{
	Poly r;
	for (const auto& [m, c] : p.terms()) {
		int e = m.degree(v);
		if (e == 0)
			continue;
		auto rest = *m.divide(Monomial(v));
		r.add_term(c * e, rest);
	}
	return r;
}

Poly substitute_simultaneous(const Poly& p, const std::map<Var, Poly>& bindings)
{
	if (bindings.empty())
		return p;
	Poly r;
	for (const auto& [m, c] : p.terms()) {
		Poly t(c);
		std::vector<Monomial::Factor> kept;
		for (const auto& [v, e] : m.factors()) {
			auto it = bindings.find(v);
			if (it == bindings.end())
				kept.emplace_back(v, e);
			else
				t *= pow(it->second, e);
		}
		r += t * Poly::term(1, Monomial::from_factors(std::move(kept)));
	}
	return r;
}

Poly substitute(const Poly& p, const std::map<Var, Poly>& bindings)
{
	std::map<Var, Poly> active;
	for (const auto& [v, val] : bindings)
		if (!(val == Poly(v)))
			active.emplace(v, val);

	// Resolve every binding to a value free of bound symbols (depth-first, cycle-checked).
	std::map<Var, Poly> resolved;
	std::set<Var> on_stack;
	std::function<const Poly&(Var)> resolve = [&](Var v) -> const Poly& {
		if (auto it = resolved.find(v); it != resolved.end())
			return it->second;
		if (!on_stack.insert(v).second)
			throw CyclicBinding("cyclic binding through '" + v.name() + "'");
		const Poly& val = active.at(v);
		std::map<Var, Poly> inner;
		for (Var w : val.variables())
			if (active.count(w))
				inner.emplace(w, resolve(w));
		on_stack.erase(v);
		return resolved.emplace(v, substitute_simultaneous(val, inner)).first->second;
	};
	for (const auto& [v, val] : active)
		resolve(v);
	return substitute_simultaneous(p, resolved);
}

Poly substitute(const Poly& p, Var v, const Poly& value) { return substitute(p, {{v, value}}); }

std::map<Monomial, Poly> coefficients_in(const Poly& p, const std::function<bool(Var)>& pred)
{
	std::map<Monomial, Poly> out;
	for (const auto& [m, c] : p.terms()) {
		auto [in, rest] = m.split(pred);
		out[in].add_term(c, rest);
	}
	return out;
}

std::optional<Poly> divide_exact(const Poly& num, const Poly& den)
{
	if (den.is_zero())
		throw std::domain_error("division by zero polynomial");
	Poly q, r = num;
	const auto& lm = den.leading_monomial();
	const auto& lc = den.leading_coefficient();
	while (!r.is_zero()) {
		auto m = r.leading_monomial().divide(lm);
		if (!m)
			return std::nullopt;
		Poly t = Poly::term(r.leading_coefficient() / lc, *m);
		q += t;
		r -= t * den;
	}
	return q;
}

std::string to_string(const Poly& p)
{
	if (p.is_zero())
		return "0";
	std::string s;
	bool first = true;
	for (auto it = p.terms().rbegin(); it != p.terms().rend(); ++it) {
		const auto& [m, c] = *it;
		bool neg = sgn(c) < 0;
		Rational a = neg ? Rational(-c) : c;
		if (first)
			s += neg ? "-" : "";
		else
			s += neg ? " - " : " + ";
		first = false;
		if (m.is_one())
			s += to_string(a);
		else if (is_one(a))
			s += to_string(m);
		else
			s += to_string(a) + "*" + to_string(m);
	}
	return s;
}

namespace {

class PolyParser {
public:
	explicit PolyParser(std::string_view text) : ts_(text) {}

	Poly parse()
	{
		Poly p = expr();
		if (!ts_.at_end())
			ts_.fail("unexpected token");
		return p;
	}

private:
	Poly expr()
	{
		Poly acc;
		bool neg = false;
		if (ts_.accept("-"))
			neg = true;
		else
			ts_.accept("+");
		Poly t = term();
		acc = neg ? -t : t;
		for (;;) {
			if (ts_.accept("+"))
				acc += term();
			else if (ts_.accept("-"))
				acc -= term();
			else
				return acc;
		}
	}

	Poly term()
	{
		Poly acc = power();
		for (;;) {
			if (ts_.accept("*")) {
				acc *= power();
			} else if (ts_.accept("/")) {
				int col = ts_.peek().column;
				Poly d = power();
				if (!d.is_constant() || d.is_zero())
					throw ParseError("division only by a nonzero constant", col);
				acc /= d.constant_term();
			} else {
				return acc;
			}
		}
	}

	Poly power()
	{
		Poly base = atom();
		if (ts_.accept("^")) {
			const auto& tok = ts_.peek();
			if (tok.kind != detail::Token::Number)
				ts_.fail("expected integer exponent");
			ts_.next();
			base = pow(base, std::stoi(tok.text));
		}
		return base;
	}

	Poly atom()
	{
		const auto& tok = ts_.peek();
		if (tok.kind == detail::Token::Number) {
			ts_.next();
			return Poly(parse_rational(tok.text));
		}
		if (tok.kind == detail::Token::Ident) {
			ts_.next();
			Var v;
			try {
				v = Var::named(tok.text);
			} catch (const std::invalid_argument& e) {
				throw ParseError(e.what(), tok.column);
			}
			if (v.kind() == VarKind::Generator)
				throw ParseError("Lie generator '" + tok.text + "' in scalar expression", tok.column);
			return Poly(v);
		}
		if (ts_.accept("(")) {
			Poly p = expr();
			ts_.expect(")");
			return p;
		}
		ts_.fail("expected number, symbol or '('");
	}

	detail::TokenStream ts_;
};

}  // namespace

Poly parse_poly(std::string_view text) { return PolyParser(text).parse(); }

Poly partial_derivative(const Poly& p, std::string_view coordinate, const std::set<Var>& declared)
{
	for (Var v : declared)
		if (v.name() == coordinate)
			return diff(p, v);
	throw std::invalid_argument("unknown coordinate '" + std::string(coordinate) + "'");
}

}  // namespace cartan
