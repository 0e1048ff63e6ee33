#pragma once

#include "cartan/linsolve.hpp"
#include "cartan/poly.hpp"

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace cartan {

/// dz^{i1} ^ ... ^ dz^{ip} with strictly increasing factors (Var order).
class WedgeMonomial {
public:
	WedgeMonomial() = default;
	explicit WedgeMonomial(Var v) : factors_{v} {}
	/// Sorts the factors; returns the permutation sign, or nullopt for a repeated factor.
	static std::optional<std::pair<int, WedgeMonomial>> from_factors(std::vector<Var> factors);

	const std::vector<Var>& factors() const { return factors_; }
	int degree() const { return static_cast<int>(factors_.size()); }

	/// a ^ b as (sign, monomial), or nullopt when a and b share a factor.
	friend std::optional<std::pair<int, WedgeMonomial>> wedge(const WedgeMonomial& a,
	                                                          const WedgeMonomial& b);

	friend bool operator==(const WedgeMonomial&, const WedgeMonomial&) = default;
	friend auto operator<=>(const WedgeMonomial& a, const WedgeMonomial& b)
	{
		return a.factors_ <=> b.factors_;
	}

private:
	std::vector<Var> factors_;
};

std::string to_string(const WedgeMonomial& w);

/// Homogeneous differential form with polynomial coefficients.
class DiffForm {
public:
	using Terms = std::map<WedgeMonomial, Poly>;

	explicit DiffForm(int degree = 0) : degree_(degree) {}
	DiffForm(const Poly& scalar);  // NOLINT(google-explicit-constructor): 0-form
	static DiffForm differential(Var v);
	static DiffForm term(const Poly& coef, const WedgeMonomial& w);

	int degree() const { return degree_; }
	const Terms& terms() const { return terms_; }
	bool is_zero() const { return terms_.empty(); }
	Poly coefficient(const WedgeMonomial& w) const;
	/// Coordinates occurring either as differentials or inside coefficients.
	std::set<Var> coordinates() const;

	void add_term(const Poly& coef, const WedgeMonomial& w);

	DiffForm& operator+=(const DiffForm& o);
	DiffForm& operator-=(const DiffForm& o);
	DiffForm& operator*=(const Poly& s);
	DiffForm operator-() const;
	friend DiffForm operator+(DiffForm a, const DiffForm& b) { return a += b; }
	friend DiffForm operator-(DiffForm a, const DiffForm& b) { return a -= b; }
	friend DiffForm operator*(const Poly& s, DiffForm a) { return a *= s; }
	friend DiffForm operator*(DiffForm a, const Poly& s) { return a *= s; }

	/// Zero forms of any degree compare equal.
	friend bool operator==(const DiffForm& a, const DiffForm& b)
	{
		return a.terms_ == b.terms_ && (a.degree_ == b.degree_ || a.terms_.empty());
	}

	/// Applies f to every coefficient.
	template <class F>
	DiffForm map_coefficients(F&& f) const
	{
		DiffForm r(degree_);
		for (const auto& [w, c] : terms_)
			r.add_term(f(c), w);
		return r;
	}

private:
	int degree_;
	Terms terms_;
};

DiffForm wedge(const DiffForm& a, const DiffForm& b);
DiffForm exterior_derivative(const DiffForm& f);
DiffForm substitute(const DiffForm& f, const std::map<Var, Poly>& bindings);

/// Text form, e.g. "-u1*dx^dt - dt^du0". Terms in ascending wedge-monomial order.
std::string to_string(const DiffForm& f);
/// Parses the form grammar (docs/text_grammar.md). `dX` is a differential when X names a
/// coordinate (x, t, u<n>, a<n>, or a declared base coordinate).
DiffForm parse_form(std::string_view text);

/// All wedge monomials of the given degree over the given coordinates.
std::vector<WedgeMonomial> wedge_basis(const std::vector<Var>& coordinates, int degree);

struct FormIdeal {
	std::vector<DiffForm> generators;
};

/// form = sum_k multipliers[k] ^ generators[k] + remainder, exactly.
struct MembershipCertificate {
	std::vector<DiffForm> multipliers;
	DiffForm remainder;
	/// For non-members: the reduced contradictory row of the coefficient-matching system.
	std::optional<Poly> obstruction;

	bool member() const { return remainder.is_zero(); }
};

struct ReduceOptions {
	/// Bound on the total degree of multiplier coefficients.
	/// Default: 1 + the largest coefficient degree among the generators.
	std::optional<int> max_coeff_degree;
	/// Coordinates to include in the multiplier ansatz beyond those present in the input.
	std::vector<Var> extra_coordinates;
};

/// Ideal membership by coefficient matching. Multipliers for a generator of
/// degree q have degree deg(f) - q and polynomial coefficients of bounded
/// degree; the unknown coefficients solve a rational linear system. The
/// certificate is recombined and checked before returning.
MembershipCertificate ideal_reduce(const DiffForm& f, const FormIdeal& ideal, const ReduceOptions& opts = {});

struct ClosureReport {
	bool closed = true;
	std::vector<DiffForm> derivatives;
	std::vector<MembershipCertificate> certificates;
};

/// d(I) in I, checked generator by generator.
ClosureReport is_closed(const FormIdeal& ideal, const ReduceOptions& opts = {});

}  // namespace cartan
