#pragma once

#include "cartan/rational.hpp"
#include "cartan/symbol.hpp"

#include <compare>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace cartan {

/// Power product of symbols, factors sorted by Var order, exponents > 0.
class Monomial {
public:
	using Factor = std::pair<Var, int>;

	Monomial() = default;
	explicit Monomial(Var v, int exponent = 1);
	static Monomial from_factors(std::vector<Factor> factors);

	const std::vector<Factor>& factors() const { return factors_; }
	bool is_one() const { return factors_.empty(); }
	int degree() const;
	int degree(Var v) const;

	Monomial operator*(const Monomial& other) const;
	/// this / other, if other divides this.
	std::optional<Monomial> divide(const Monomial& other) const;
	Monomial gcd(const Monomial& other) const;

	/// Splits into (factors satisfying pred, the rest).
	std::pair<Monomial, Monomial> split(const std::function<bool(Var)>& pred) const;

	friend bool operator==(const Monomial&, const Monomial&) = default;
	/// Graded lexicographic order.
	friend std::strong_ordering operator<=>(const Monomial& a, const Monomial& b);

private:
	std::vector<Factor> factors_;
};

std::string to_string(const Monomial& m);

/// Sparse multivariate polynomial with exact rational coefficients.
/// No zero coefficient is ever stored.
class Poly {
public:
	using Terms = std::map<Monomial, Rational>;

	Poly() = default;
	Poly(const Rational& c);  // NOLINT(google-explicit-constructor)
	Poly(long c) : Poly(Rational(c)) {}  // NOLINT(google-explicit-constructor)
	Poly(int c) : Poly(Rational(c)) {}  // NOLINT(google-explicit-constructor)
	Poly(Var v);  // NOLINT(google-explicit-constructor)
	static Poly term(const Rational& c, const Monomial& m);

	const Terms& terms() const { return terms_; }
	std::size_t size() const { return terms_.size(); }
	bool is_zero() const { return terms_.empty(); }
	bool is_constant() const;
	Rational constant_term() const;
	/// Coefficient of a monomial (0 if absent).
	Rational coefficient(const Monomial& m) const;

	/// -1 for the zero polynomial.
	int total_degree() const;
	int degree(Var v) const;
	/// Lowest total degree among the terms (-1 for zero).
	int low_degree() const;
	std::set<Var> variables() const;
	bool depends_on(Var v) const;

	/// Highest term in graded-lex order. Requires nonzero.
	const Monomial& leading_monomial() const;
	const Rational& leading_coefficient() const;

	/// Positive rational c such that p / c has coprime integer coefficients.
	Rational content() const;
	/// p / content(), normalized so the leading coefficient is positive.
	Poly primitive() const;
	/// Greatest monomial dividing every term.
	Monomial monomial_content() const;

	Poly& operator+=(const Poly& o);
	Poly& operator-=(const Poly& o);
	Poly& operator*=(const Poly& o);
	Poly& operator*=(const Rational& c);
	Poly& operator/=(const Rational& c);
	Poly operator-() const;

	friend Poly operator+(Poly a, const Poly& b) { return a += b; }
	friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
	friend Poly operator*(const Poly& a, const Poly& b);
	friend Poly operator*(Poly a, const Rational& c) { return a *= c; }
	friend Poly operator*(const Rational& c, Poly a) { return a *= c; }
	friend Poly operator/(Poly a, const Rational& c) { return a /= c; }

	friend bool operator==(const Poly&, const Poly&) = default;

	void add_term(const Rational& c, const Monomial& m);

private:
	Terms terms_;
};

Poly pow(const Poly& p, int exponent);

/// Formal partial derivative.
Poly diff(const Poly& p, Var v);

/// Simultaneous substitution; bound values are not themselves rewritten.
Poly substitute_simultaneous(const Poly& p, const std::map<Var, Poly>& bindings);

/// Substitution with transitive resolution of the bindings: a bound value may
/// mention other bound symbols. Identity bindings (v <- v) are ignored.
/// Throws CyclicBinding when the bindings reference each other in a cycle.
Poly substitute(const Poly& p, const std::map<Var, Poly>& bindings);
Poly substitute(const Poly& p, Var v, const Poly& value);

struct CyclicBinding : std::runtime_error {
	using std::runtime_error::runtime_error;
};

/// Groups the terms of p by their monomial in the variables selected by pred;
/// the map values are the cofactors in the remaining variables.
std::map<Monomial, Poly> coefficients_in(const Poly& p, const std::function<bool(Var)>& pred);

/// Exact multivariate division, if `den` divides `num`.
std::optional<Poly> divide_exact(const Poly& num, const Poly& den);

/// Canonical text, e.g. "3/2*u0^2*u1 - x". Terms in descending graded-lex order.
std::string to_string(const Poly& p);

/// Parses the polynomial grammar (see docs/text_grammar.md).
Poly parse_poly(std::string_view text);

/// Partial derivative with respect to a named coordinate that must be declared in `declared`.
Poly partial_derivative(const Poly& p, std::string_view coordinate, const std::set<Var>& declared);

}  // namespace cartan
