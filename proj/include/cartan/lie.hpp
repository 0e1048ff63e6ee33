#pragma once

#include "cartan/poly.hpp"

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace cartan {

/// Lyndon word over generator symbols; stands for its standard bracketing,
/// e.g. A0 A0 A1 is [A0,[A0,A1]] and A0 A1 A1 is [[A0,A1],A1].
class LieWord {
public:
	LieWord() = default;
	explicit LieWord(Var generator) : letters_{generator} {}
	/// Throws std::invalid_argument unless `letters` is a nonempty Lyndon word of generators.
	static LieWord from_letters(std::vector<Var> letters);

	const std::vector<Var>& letters() const { return letters_; }
	int degree() const { return static_cast<int>(letters_.size()); }
	bool is_letter() const { return letters_.size() == 1; }
	/// Standard factorization (left, right), right being the longest proper Lyndon suffix.
	std::pair<LieWord, LieWord> split() const;

	/// Plain lexicographic order on letter sequences (a proper prefix is smaller).
	bool lex_less(const LieWord& o) const;

	friend bool operator==(const LieWord&, const LieWord&) = default;
	/// Basis order: degree first, then lexicographic.
	friend std::strong_ordering operator<=>(const LieWord& a, const LieWord& b);

private:
	std::vector<Var> letters_;
};

bool is_lyndon(const std::vector<Var>& letters);
std::string to_string(const LieWord& w);

/// Linear combination of Lyndon basis elements with polynomial coefficients.
class LieElement {
public:
	using Terms = std::map<LieWord, Poly>;

	LieElement() = default;
	LieElement(Var generator);  // NOLINT(google-explicit-constructor)
	static LieElement term(const Poly& coef, const LieWord& w);

	const Terms& terms() const { return terms_; }
	bool is_zero() const { return terms_.empty(); }
	std::size_t size() const { return terms_.size(); }
	Poly coefficient(const LieWord& w) const;
	/// Highest word in basis order. Requires nonzero.
	const LieWord& leading_word() const { return terms_.rbegin()->first; }
	const Poly& leading_coefficient() const { return terms_.rbegin()->second; }
	int max_degree() const { return terms_.empty() ? 0 : terms_.rbegin()->first.degree(); }
	std::set<Var> generators() const;
	/// Scalar symbols occurring in the coefficients.
	std::set<Var> scalar_variables() const;

	void add_term(const Poly& coef, const LieWord& w);

	LieElement& operator+=(const LieElement& o);
	LieElement& operator-=(const LieElement& o);
	LieElement& operator*=(const Poly& s);
	LieElement operator-() const;
	friend LieElement operator+(LieElement a, const LieElement& b) { return a += b; }
	friend LieElement operator-(LieElement a, const LieElement& b) { return a -= b; }
	friend LieElement operator*(const Poly& s, LieElement a) { return a *= s; }
	friend LieElement operator*(LieElement a, const Poly& s) { return a *= s; }

	friend bool operator==(const LieElement&, const LieElement&) = default;

	template <class F>
	LieElement map_coefficients(F&& f) const
	{
		LieElement r;
		for (const auto& [w, c] : terms_)
			r.add_term(f(c), w);
		return r;
	}

private:
	Terms terms_;
};

/// Bracket in the free Lie algebra, result in the Lyndon basis.
LieElement bracket(const LieElement& x, const LieElement& y);
LieElement bracket(const LieWord& u, const LieWord& v);

/// Replaces scalar symbols inside the coefficients.
LieElement substitute(const LieElement& x, const std::map<Var, Poly>& bindings);
/// Coefficient-wise partial derivative.
LieElement diff(const LieElement& x, Var v);

/// Substitutes generators by elements and renormalizes. Throws std::invalid_argument
/// if an expansion mentions a generator that is itself being replaced.
LieElement substitute_generators(const LieElement& x, const std::map<Var, LieElement>& expansions);

/// "(u1 + 1/2*u0^2)*A1 + A2 - u0*[A0,A1]"; terms in ascending basis order.
std::string to_string(const LieElement& x);
/// Lie text grammar (docs/text_grammar.md): sums of scalar multiples of
/// generators and brackets, e.g. "[A1,[A1,A0]] + 1/2*[A0,A1]".
LieElement parse_lie(std::string_view text);

struct BudgetExhausted : std::runtime_error {
	using std::runtime_error::runtime_error;
};

struct RelationOptions {
	/// Ideal closure brackets relations with generators up to this word degree.
	int degree_cap = 4;
	std::size_t step_budget = 10000;
	/// Generators used for the ideal closure, in addition to those in the relations.
	std::vector<Var> generators;
};

/// Relations r = 0 oriented as rewrite rules leading word -> rest.
class RelationSet {
public:
	RelationSet() = default;
	explicit RelationSet(std::vector<LieElement> relations, RelationOptions opts = {});

	const std::vector<LieElement>& relations() const { return relations_; }
	/// lead -> rest, with rest below lead in basis order.
	const std::map<LieWord, LieElement>& rules() const { return rules_; }
	/// Consequences whose leading coefficient is not a rational number; not used for rewriting.
	const std::vector<LieElement>& deferred() const { return deferred_; }
	const RelationOptions& options() const { return opts_; }
	bool empty() const { return relations_.empty(); }

	/// Rewrites to a fixpoint. Throws BudgetExhausted.
	LieElement normalize(const LieElement& x) const;

private:
	std::vector<LieElement> relations_;
	RelationOptions opts_;
	std::map<LieWord, LieElement> rules_;
	std::vector<LieElement> deferred_;
};

inline LieElement normalize_modulo(const LieElement& x, const RelationSet& r) { return r.normalize(x); }

struct SpanOptions {
	int degree_cap = 4;
	std::size_t bracket_budget = 10000;
};

struct SpanReport {
	/// Normalized seeds (independent ones), followed by the brackets that extended the span.
	std::vector<LieElement> basis;
	std::size_t seed_rank = 0;
	/// [S, S] within S for the span S of the seeds.
	bool seeds_closed = false;
	/// The final basis spans a subalgebra. Unknown (nullopt) when a bracket left the degree cap or the budget ran out.
	std::optional<bool> closed;
	bool budget_exhausted = false;

	/// The seed span is bracket-closed (perfect holonomy at this level).
	bool perfect() const { return seeds_closed; }
};

/// Span over the rationals, with (word, scalar monomial) pairs as coordinates.
SpanReport subalgebra_span(const std::vector<LieElement>& seeds, const RelationSet& relations,
                           const SpanOptions& opts = {});

/// Rank of a list of elements over the rationals.
std::size_t rational_rank(const std::vector<LieElement>& elements);
/// Whether x lies in the rational span of `basis`.
bool in_rational_span(const LieElement& x, const std::vector<LieElement>& basis);

/// c^k_{ij}: [e_i, e_j] = sum_k c^k_{ij} e_k. Indices are 0-based in the API, 1-based in reports.
class StructureConstants {
public:
	StructureConstants() = default;
	explicit StructureConstants(std::size_t dim, std::vector<std::string> names = {});

	std::size_t dim() const { return dim_; }
	const std::vector<std::string>& names() const { return names_; }
	const Poly& operator()(std::size_t k, std::size_t i, std::size_t j) const { return c_[(k * dim_ + i) * dim_ + j]; }
	Poly& operator()(std::size_t k, std::size_t i, std::size_t j) { return c_[(k * dim_ + i) * dim_ + j]; }

	friend bool operator==(const StructureConstants&, const StructureConstants&) = default;

private:
	std::size_t dim_ = 0;
	std::vector<std::string> names_;
	std::vector<Poly> c_;
};

struct StructureValidation {
	enum class Violation { None, Antisymmetry, Jacobi };
	Violation violation = Violation::None;
	/// 1-based: (i, j, k) for antisymmetry of c^k_{ij}; (i, j, k, l) for Jacobi.
	std::vector<std::size_t> index;
	Poly value;  // the nonzero defect

	bool ok() const { return violation == Violation::None; }
};

StructureValidation validate_structure_constants(const StructureConstants& c);

/// Structure constants of the algebra spanned by `basis` generators, reading each
/// normalized [B_i, B_j] as a combination of basis generators. Throws std::domain_error
/// if a bracket does not normalize into the span.
StructureConstants structure_constants_from(const std::vector<Var>& basis, const RelationSet& relations);

/// Presentation relations [e_i, e_j] - sum_k c^k_{ij} e_k for i < j.
std::vector<LieElement> presentation_relations(const StructureConstants& c, const std::vector<Var>& basis);

}  // namespace cartan
