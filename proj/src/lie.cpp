#include "cartan/lie.hpp"

#include "cartan/detail/lexer.hpp"

#include <algorithm>
#include <deque>

namespace cartan {

// ---------------------------------------------------------------- words

bool is_lyndon(const std::vector<Var>& letters)
{
	if (letters.empty())
		return false;
	for (std::size_t i = 1; i < letters.size(); ++i)
		if (!std::lexicographical_compare(letters.begin(), letters.end(), letters.begin() + i, letters.end()))
			return false;
	return true;
}

LieWord LieWord::from_letters(std::vector<Var> letters)
{
	for (Var v : letters)
		if (v.kind() != VarKind::Generator)
			throw std::invalid_argument("'" + v.name() + "' is not a Lie generator");
	if (!is_lyndon(letters))
		throw std::invalid_argument("not a Lyndon word");
	LieWord w;
	w.letters_ = std::move(letters);
	return w;
}

std::pair<LieWord, LieWord> LieWord::split() const
{
	for (std::size_t i = 1; i < letters_.size(); ++i) {
		std::vector<Var> suffix(letters_.begin() + i, letters_.end());
		if (is_lyndon(suffix)) {
			LieWord l, r;
			l.letters_.assign(letters_.begin(), letters_.begin() + i);
			r.letters_ = std::move(suffix);
			return {l, r};
		}
	}
	throw std::logic_error("split of a letter");
}

bool LieWord::lex_less(const LieWord& o) const
{
	return std::lexicographical_compare(letters_.begin(), letters_.end(), o.letters_.begin(), o.letters_.end());
}

std::strong_ordering operator<=>(const LieWord& a, const LieWord& b)
{
	if (auto c = a.degree() <=> b.degree(); c != 0)
		return c;
	return a.letters_ <=> b.letters_;
}

std::string to_string(const LieWord& w)
{
	if (w.is_letter())
		return w.letters().front().name();
	auto [l, r] = w.split();
	return "[" + to_string(l) + "," + to_string(r) + "]";
}

// ---------------------------------------------------------------- elements

LieElement::LieElement(Var generator)
{
	terms_.emplace(LieWord::from_letters({generator}), Poly(1));
}

LieElement LieElement::term(const Poly& coef, const LieWord& w)
{
	LieElement e;
	e.add_term(coef, w);
	return e;
}

Poly LieElement::coefficient(const LieWord& w) const
{
	auto it = terms_.find(w);
	return it == terms_.end() ? Poly() : it->second;
}

std::set<Var> LieElement::generators() const
{
	std::set<Var> out;
	for (const auto& [w, c] : terms_)
		out.insert(w.letters().begin(), w.letters().end());
	return out;
}

std::set<Var> LieElement::scalar_variables() const
{
	std::set<Var> out;
	for (const auto& [w, c] : terms_)
		for (Var v : c.variables())
			out.insert(v);
	return out;
}

void LieElement::add_term(const Poly& coef, const LieWord& w)
{
	if (coef.is_zero())
		return;
	auto [it, inserted] = terms_.try_emplace(w, coef);
	if (!inserted) {
		it->second += coef;
		if (it->second.is_zero())
			terms_.erase(it);
	}
}

LieElement& LieElement::operator+=(const LieElement& o)
{
	for (const auto& [w, c] : o.terms_)
		add_term(c, w);
	return *this;
}

LieElement& LieElement::operator-=(const LieElement& o)
{
	for (const auto& [w, c] : o.terms_)
		add_term(-c, w);
	return *this;
}

LieElement& LieElement::operator*=(const Poly& s)
{
	if (s.is_zero()) {
		terms_.clear();
		return *this;
	}
	for (auto& [w, c] : terms_)
		c *= s;
	std::erase_if(terms_, [](const auto& kv) { return kv.second.is_zero(); });
	return *this;
}

LieElement LieElement::operator-() const
{
	return map_coefficients([](const Poly& c) { return -c; });
}

// ---------------------------------------------------------------- bracket

namespace {

using WordCombination = std::vector<std::pair<LieWord, Rational>>;

void accumulate(std::map<LieWord, Rational>& acc, const WordCombination& xs, const Rational& scale)
{
	for (const auto& [w, c] : xs) {
		auto& slot = acc[w];
		slot += c * scale;
		if (is_zero(slot))
			acc.erase(w);
	}
}

const WordCombination& bracket_words(const LieWord& u, const LieWord& v)
{
	thread_local std::map<std::pair<LieWord, LieWord>, WordCombination> memo;
	auto key = std::make_pair(u, v);
	if (auto it = memo.find(key); it != memo.end())
		return it->second;

	WordCombination out;
	if (u == v) {
		// alternating
	} else if (v.lex_less(u)) {
		out = bracket_words(v, u);
		for (auto& [w, c] : out)
			c = -c;
	} else if (u.is_letter() || !u.split().second.lex_less(v)) {
		std::vector<Var> letters = u.letters();
		letters.insert(letters.end(), v.letters().begin(), v.letters().end());
		out.emplace_back(LieWord::from_letters(std::move(letters)), Rational(1));
	} else {
		// [[u1,u2],v] = [u1,[u2,v]] + [[u1,v],u2]
		auto [u1, u2] = u.split();
		std::map<LieWord, Rational> acc;
		WordCombination inner = bracket_words(u2, v);
		for (const auto& [w, c] : inner)
			accumulate(acc, bracket_words(u1, w), c);
		inner = bracket_words(u1, v);
		for (const auto& [w, c] : inner)
			accumulate(acc, bracket_words(w, u2), c);
		out.assign(acc.begin(), acc.end());
	}
	return memo.emplace(key, std::move(out)).first->second;
}

}  // namespace

LieElement bracket(const LieWord& u, const LieWord& v)
{
	LieElement r;
	for (const auto& [w, c] : bracket_words(u, v))
		r.add_term(Poly(c), w);
	return r;
}

LieElement bracket(const LieElement& x, const LieElement& y)
{
	LieElement r;
	for (const auto& [u, a] : x.terms())
		for (const auto& [v, b] : y.terms()) {
			const auto& combo = bracket_words(u, v);
			if (combo.empty())
				continue;
			Poly ab = a * b;
			for (const auto& [w, c] : combo)
				r.add_term(ab * c, w);
		}
	return r;
}

LieElement substitute(const LieElement& x, const std::map<Var, Poly>& bindings)
{
	return x.map_coefficients([&](const Poly& c) { return substitute_simultaneous(c, bindings); });
}

LieElement diff(const LieElement& x, Var v)
{
	return x.map_coefficients([&](const Poly& c) { return diff(c, v); });
}

LieElement substitute_generators(const LieElement& x, const std::map<Var, LieElement>& expansions)
{
	for (const auto& [g, e] : expansions)
		for (Var h : e.generators())
			if (h != g && expansions.count(h))
				throw std::invalid_argument("expansion of " + g.name() + " references eliminated generator " +
				                            h.name());
	std::map<LieWord, LieElement> memo;
	std::function<LieElement(const LieWord&)> eval = [&](const LieWord& w) -> LieElement {
		if (auto it = memo.find(w); it != memo.end())
			return it->second;
		LieElement r;
		if (w.is_letter()) {
			auto it = expansions.find(w.letters().front());
			r = it == expansions.end() ? LieElement(w.letters().front()) : it->second;
		} else {
			auto [l, rt] = w.split();
			r = bracket(eval(l), eval(rt));
		}
		memo.emplace(w, r);
		return r;
	};
	LieElement out;
	for (const auto& [w, c] : x.terms())
		out += eval(w) * c;
	return out;
}

std::string to_string(const LieElement& x)
{
	if (x.is_zero())
		return "0";
	std::string s;
	for (const auto& [w, c] : x.terms()) {
		std::string wt = to_string(w);
		bool first = s.empty();
		if (c.size() == 1) {
			bool neg = sgn(c.terms().begin()->second) < 0;
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

struct Value {
	Poly scalar;
	std::optional<LieElement> lie;

	bool is_zero() const { return lie ? lie->is_zero() : scalar.is_zero(); }
};

class LieParser {
public:
	explicit LieParser(std::string_view text) : ts_(text) {}

	LieElement parse()
	{
		int col = ts_.peek().column;
		Value v = expr();
		if (!ts_.at_end())
			ts_.fail("unexpected token");
		return as_lie(v, col);
	}

private:
	static LieElement as_lie(const Value& v, int col)
	{
		if (v.lie)
			return *v.lie;
		if (v.scalar.is_zero())
			return {};
		throw ParseError("scalar where a Lie element is expected", col);
	}

	static Value add(Value a, const Value& b, int col)
	{
		if (!a.lie && !b.lie) {
			a.scalar += b.scalar;
			return a;
		}
		LieElement s = as_lie(a, col);
		s += as_lie(b, col);
		return {Poly(), s};
	}

	static Value negate(Value v)
	{
		if (v.lie)
			v.lie = -*v.lie;
		else
			v.scalar = -v.scalar;
		return v;
	}

	Value expr()
	{
		bool neg = ts_.accept("-");
		if (!neg)
			ts_.accept("+");
		Value acc = term();
		if (neg)
			acc = negate(acc);
		for (;;) {
			int col = ts_.peek().column;
			if (ts_.accept("+"))
				acc = add(acc, term(), col);
			else if (ts_.accept("-"))
				acc = add(acc, negate(term()), col);
			else
				return acc;
		}
	}

	Value term()
	{
		Value acc = factor();
		for (;;) {
			int col = ts_.peek().column;
			if (ts_.accept("*")) {
				Value f = factor();
				if (acc.lie && f.lie)
					throw ParseError("product of two Lie elements (use [a,b])", col);
				if (f.lie)
					std::swap(acc, f);
				if (acc.lie)
					*acc.lie *= f.scalar;
				else
					acc.scalar *= f.scalar;
			} else if (ts_.accept("/")) {
				Value d = factor();
				if (d.lie || d.scalar.is_zero() || !d.scalar.is_constant())
					throw ParseError("division only by a nonzero constant", col);
				Rational inv = 1 / d.scalar.constant_term();
				if (acc.lie)
					*acc.lie *= Poly(inv);
				else
					acc.scalar *= inv;
			} else {
				return acc;
			}
		}
	}

	Value factor()
	{
		int col = ts_.peek().column;
		Value base = atom();
		if (ts_.accept("^")) {
			const auto& tok = ts_.peek();
			if (tok.kind != detail::Token::Number)
				ts_.fail("expected exponent");
			if (base.lie)
				throw ParseError("power of a Lie element", col);
			ts_.next();
			base.scalar = pow(base.scalar, std::stoi(tok.text));
		}
		return base;
	}

	Value atom()
	{
		const auto tok = ts_.peek();
		if (tok.kind == detail::Token::Number) {
			ts_.next();
			return {Poly(parse_rational(tok.text)), std::nullopt};
		}
		if (tok.kind == detail::Token::Ident) {
			ts_.next();
			try {
				Var v = Var::named(tok.text);
				if (v.kind() == VarKind::Generator)
					return {Poly(), LieElement(v)};
				if (std::isupper(static_cast<unsigned char>(tok.text[0])))
					throw ParseError("'" + tok.text + "' is declared as a " + to_string(v.kind()), tok.column);
				return {Poly(v), std::nullopt};
			} catch (const std::invalid_argument& e) {
				throw ParseError(e.what(), tok.column);
			}
		}
		if (ts_.accept("(")) {
			Value v = expr();
			ts_.expect(")");
			return v;
		}
		if (ts_.accept("[")) {
			int c1 = ts_.peek().column;
			LieElement a = as_lie(expr(), c1);
			ts_.expect(",");
			int c2 = ts_.peek().column;
			LieElement b = as_lie(expr(), c2);
			ts_.expect("]");
			return {Poly(), bracket(a, b)};
		}
		ts_.fail("expected number, symbol, generator, '(' or '['");
	}

	detail::TokenStream ts_;
};

}  // namespace

LieElement parse_lie(std::string_view text) { return LieParser(text).parse(); }

// ---------------------------------------------------------------- relations

RelationSet::RelationSet(std::vector<LieElement> relations, RelationOptions opts)
    : relations_(std::move(relations)), opts_(std::move(opts))
{
	std::set<Var> gens(opts_.generators.begin(), opts_.generators.end());
	for (const auto& r : relations_) {
		auto g = r.generators();
		gens.insert(g.begin(), g.end());
	}
	std::deque<LieElement> work(relations_.begin(), relations_.end());
	std::size_t steps = 0;
	while (!work.empty()) {
		if (++steps > opts_.step_budget)
			throw BudgetExhausted("relation closure exceeded " + std::to_string(opts_.step_budget) + " steps");
		LieElement e = normalize(work.front());
		work.pop_front();
		if (e.is_zero())
			continue;
		if (!e.leading_coefficient().is_constant()) {
			deferred_.push_back(e);
			continue;
		}
		e *= Poly(1 / e.leading_coefficient().constant_term());
		LieWord lead = e.leading_word();
		rules_[lead] = LieElement::term(Poly(1), lead) - e;
		if (lead.degree() < opts_.degree_cap)
			for (Var g : gens)
				work.push_back(bracket(LieElement(g), e));
	}
}

LieElement RelationSet::normalize(const LieElement& x) const
{
	if (rules_.empty())
		return x;
	LieElement r = x;
	std::size_t steps = 0;
	for (;;) {
		auto hit = rules_.end();
		Poly coef;
		for (auto it = r.terms().rbegin(); it != r.terms().rend(); ++it) {
			hit = rules_.find(it->first);
			if (hit != rules_.end()) {
				coef = it->second;
				break;
			}
		}
		if (hit == rules_.end())
			return r;
		if (++steps > opts_.step_budget)
			throw BudgetExhausted("normalization exceeded " + std::to_string(opts_.step_budget) + " rewrite steps");
		r.add_term(-coef, hit->first);
		r += hit->second * coef;
	}
}

// ---------------------------------------------------------------- spans

namespace {

using Coord = std::pair<LieWord, Monomial>;
using Vec = std::map<Coord, Rational>;

Vec to_vec(const LieElement& x)
{
	Vec v;
	for (const auto& [w, c] : x.terms())
		for (const auto& [m, q] : c.terms())
			v.emplace(Coord{w, m}, q);
	return v;
}

class Echelon {
public:
	Vec reduce(Vec v) const
	{
		for (;;) {
			bool changed = false;
			for (auto it = v.rbegin(); it != v.rend(); ++it) {
				auto p = rows_.find(it->first);
				if (p == rows_.end())
					continue;
				Rational f = it->second;
				for (const auto& [k, c] : p->second) {
					auto& slot = v[k];
					slot -= f * c;
					if (is_zero(slot))
						v.erase(k);
				}
				changed = true;
				break;
			}
			if (!changed)
				return v;
		}
	}

	bool contains(const LieElement& x) const { return reduce(to_vec(x)).empty(); }

	bool insert(const LieElement& x)
	{
		Vec v = reduce(to_vec(x));
		if (v.empty())
			return false;
		Rational lead = v.rbegin()->second;
		for (auto& [k, c] : v)
			c /= lead;
		rows_.emplace(v.rbegin()->first, std::move(v));
		return true;
	}

	std::size_t rank() const { return rows_.size(); }

	/// Reduced row echelon basis, ascending by pivot; depends only on the span.
	std::vector<LieElement> canonical() const
	{
		std::vector<LieElement> out;
		for (const auto& [pivot, row] : rows_) {
			Vec v = row;
			v.erase(pivot);
			v = reduce(std::move(v));
			v[pivot] = 1;
			LieElement e;
			for (const auto& [k, c] : v)
				e.add_term(Poly::term(c, k.second), k.first);
			out.push_back(std::move(e));
		}
		return out;
	}

private:
	std::map<Coord, Vec> rows_;
};

}  // namespace

std::size_t rational_rank(const std::vector<LieElement>& elements)
{
	Echelon e;
	for (const auto& x : elements)
		e.insert(x);
	return e.rank();
}

bool in_rational_span(const LieElement& x, const std::vector<LieElement>& basis)
{
	Echelon e;
	for (const auto& b : basis)
		e.insert(b);
	return e.contains(x);
}

SpanReport subalgebra_span(const std::vector<LieElement>& seeds, const RelationSet& relations, const SpanOptions& opts)
{
	SpanReport rep;
	Echelon ech;
	for (const auto& s : seeds) {
		LieElement n = relations.normalize(s);
		if (ech.insert(n))
			rep.basis.push_back(std::move(n));
	}
	rep.seed_rank = rep.basis.size();

	rep.seeds_closed = true;
	for (std::size_t i = 0; i < rep.seed_rank && rep.seeds_closed; ++i)
		for (std::size_t j = i + 1; j < rep.seed_rank; ++j)
			if (!ech.contains(relations.normalize(bracket(rep.basis[i], rep.basis[j])))) {
				rep.seeds_closed = false;
				break;
			}

	// Grow from the canonical basis of the seed span so the result depends on the span only.
	std::vector<LieElement> work = ech.canonical();
	bool truncated = false;
	std::size_t brackets = 0;
	for (std::size_t j = 1; j < work.size(); ++j)
		for (std::size_t i = 0; i < j; ++i) {
			if (++brackets > opts.bracket_budget) {
				rep.budget_exhausted = true;
				rep.closed.reset();
				return rep;
			}
			LieElement b = relations.normalize(bracket(work[i], work[j]));
			if (ech.contains(b))
				continue;
			if (b.max_degree() > opts.degree_cap) {
				truncated = true;
				continue;
			}
			ech.insert(b);
			work.push_back(b);
			rep.basis.push_back(std::move(b));
		}
	if (!truncated)
		rep.closed = true;
	return rep;
}

// ---------------------------------------------------------------- structure constants

StructureConstants::StructureConstants(std::size_t dim, std::vector<std::string> names)
    : dim_(dim), names_(std::move(names)), c_(dim * dim * dim)
{
	if (names_.empty())
		for (std::size_t i = 0; i < dim; ++i)
			names_.push_back("e" + std::to_string(i + 1));
	if (names_.size() != dim)
		throw std::invalid_argument("structure constants: name count does not match dimension");
}

StructureValidation validate_structure_constants(const StructureConstants& c)
{
	const std::size_t n = c.dim();
	StructureValidation v;
	for (std::size_t i = 0; i < n; ++i)
		for (std::size_t j = i; j < n; ++j)
			for (std::size_t k = 0; k < n; ++k) {
				Poly defect = c(k, i, j) + c(k, j, i);
				if (!defect.is_zero()) {
					v.violation = StructureValidation::Violation::Antisymmetry;
					v.index = {i + 1, j + 1, k + 1};
					v.value = defect;
					return v;
				}
			}
	for (std::size_t i = 0; i < n; ++i)
		for (std::size_t j = i + 1; j < n; ++j)
			for (std::size_t k = j + 1; k < n; ++k)
				for (std::size_t l = 0; l < n; ++l) {
					Poly s;
					for (std::size_t m = 0; m < n; ++m)
						s += c(m, i, j) * c(l, m, k) + c(m, j, k) * c(l, m, i) + c(m, k, i) * c(l, m, j);
					if (!s.is_zero()) {
						v.violation = StructureValidation::Violation::Jacobi;
						v.index = {i + 1, j + 1, k + 1, l + 1};
						v.value = s;
						return v;
					}
				}
	return v;
}

StructureConstants structure_constants_from(const std::vector<Var>& basis, const RelationSet& relations)
{
	std::vector<std::string> names;
	std::map<LieWord, std::size_t> index;
	for (std::size_t i = 0; i < basis.size(); ++i) {
		names.push_back(basis[i].name());
		index.emplace(LieWord(basis[i]), i);
	}
	StructureConstants c(basis.size(), names);
	for (std::size_t i = 0; i < basis.size(); ++i)
		for (std::size_t j = 0; j < basis.size(); ++j) {
			LieElement b = relations.normalize(bracket(LieElement(basis[i]), LieElement(basis[j])));
			for (const auto& [w, q] : b.terms()) {
				auto it = index.find(w);
				if (it == index.end())
					throw std::domain_error("[" + basis[i].name() + "," + basis[j].name() + "] = " + to_string(b) +
					                        " leaves the span of the basis");
				c(it->second, i, j) = q;
			}
		}
	return c;
}

std::vector<LieElement> presentation_relations(const StructureConstants& c, const std::vector<Var>& basis)
{
	if (basis.size() != c.dim())
		throw std::invalid_argument("basis size does not match structure constants");
	std::vector<LieElement> out;
	for (std::size_t i = 0; i < basis.size(); ++i)
		for (std::size_t j = i + 1; j < basis.size(); ++j) {
			LieElement r = bracket(LieElement(basis[i]), LieElement(basis[j]));
			for (std::size_t k = 0; k < basis.size(); ++k)
				r -= LieElement(basis[k]) * c(k, i, j);
			out.push_back(std::move(r));
		}
	return out;
}

}  // namespace cartan
