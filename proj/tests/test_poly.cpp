#include "cartan/detail/lexer.hpp"
#include "cartan/linsolve.hpp"
#include "cartan/poly.hpp"
#include "cartan/polysolve.hpp"
#include "random_gen.hpp"

#include <doctest.h>

using namespace cartan;

namespace {

Poly P(const char* s) { return parse_poly(s); }

std::vector<Var> jet_vars() { return {Var::named("x"), Var::named("t"), Var::jet(0), Var::jet(1), Var::named("lambda")}; }

}  // namespace

TEST_CASE("polynomial text round trip")
{
	Poly p = P("3/2*u0^2*u1 - x");
	CHECK(to_string(p) == "3/2*u0^2*u1 - x");
	CHECK(to_string(P("x - x")) == "0");
	CHECK(to_string(P("(u0 + 1)^2")) == "u0^2 + 2*u0 + 1");
	CHECK(to_string(P("-u1/2")) == "-1/2*u1");
	CHECK_THROWS_AS(P("u0 +"), ParseError);
	CHECK_THROWS_AS(P("u0/u1"), ParseError);
	CHECK_THROWS_AS(P("A1 + u0"), ParseError);
}

TEST_CASE("monomial order is graded lexicographic")
{
	CHECK(Monomial(Var::jet(0), 2) > Monomial(Var::jet(1)));
	CHECK(Monomial(Var::named("x")) > Monomial(Var::jet(0)));
	CHECK(Monomial() < Monomial(Var::jet(3)));
}

TEST_CASE("partial derivative")
{
	std::set<Var> ctx{Var::named("x"), Var::named("t"), Var::jet(0), Var::jet(1)};
	CHECK(partial_derivative(P("u0^2/2"), "u0", ctx) == P("u0"));
	CHECK(partial_derivative(P("u1 + u0^2/2"), "u1", ctx) == Poly(1));
	CHECK(partial_derivative(P("u0*u1 + 7"), "x", ctx).is_zero());
	CHECK_THROWS_AS(partial_derivative(P("u0"), "u7", ctx), std::invalid_argument);
}

TEST_CASE("substitution")
{
	Var ut = Var::parameter("ut");
	Var uxx = Var::jet(2);
	CHECK(substitute(P("ut - u0*u1 - u2"), ut, P("u0*u1 + u2")).is_zero());
	CHECK(substitute(P("u0*u1 + x"), {{Var::jet(0), Poly(Var::jet(0))}}) == P("u0*u1 + x"));
	CHECK(substitute(P("-lambda^2/2"), Var::named("lambda"), Poly(0)).is_zero());
	// transitive resolution
	CHECK(substitute(P("p"), {{Var::named("p"), P("q + 1")}, {Var::named("q"), P("u0")}}) == P("u0 + 1"));
	CHECK_THROWS_AS(substitute(P("p"), {{Var::named("p"), P("q")}, {Var::named("q"), P("p + 1")}}), CyclicBinding);
	(void)uxx;
}

TEST_CASE("solve_linear examples")
{
	Var q03 = Var::named("q03");
	auto s = solve_linear({{q03}, {P("q03 + 2")}});
	REQUIRE(s.consistent());
	CHECK(s.values.at(q03) == Poly(-2));

	Var a = Var::named("ya"), b = Var::named("yb");
	auto e = solve_linear({{a, b}, {}});
	CHECK(e.consistent());
	CHECK(e.free == std::vector<Var>{a, b});

	auto bad = solve_linear({{a, b}, {P("ya + yb - 1"), P("ya + yb - 2")}});
	CHECK_FALSE(bad.consistent());
	REQUIRE(bad.contradiction);
	CHECK(bad.contradiction->is_constant());
	CHECK_FALSE(bad.contradiction->is_zero());

	CHECK_THROWS_AS(solve_linear({{a}, {P("ya^2 - 1")}}), std::invalid_argument);
}

TEST_CASE("solve_linear with parametric coefficients")
{
	Var a = Var::named("ya"), b = Var::named("yb");
	// u0*ya + yb = u1, ya - yb = 0  ->  ya = u1/(u0 + 1): not polynomial
	auto s = solve_linear({{a, b}, {P("u0*ya + yb - u1"), P("ya - yb")}});
	CHECK(s.consistent());
	CHECK_FALSE(s.unsolved.empty());
	// ya + u0*yb = 0, yb = u1  ->  ya = -u0*u1
	auto t = solve_linear({{a, b}, {P("ya + u0*yb"), P("yb - u1")}});
	REQUIRE(t.consistent());
	CHECK(t.unsolved.empty());
	CHECK(t.values.at(a) == P("-u0*u1"));
}

TEST_CASE("property: ring axioms" * doctest::description("300 randomized triples"))
{
	testing::Gen g(1);
	auto vars = jet_vars();
	for (int i = 0; i < 300; ++i) {
		Poly p = g.poly(vars), q = g.poly(vars), r = g.poly(vars);
		CHECK((p + q) * r == p * r + q * r);
		CHECK((p * q) * r == p * (q * r));
		CHECK(p * q == q * p);
		CHECK(p - p == Poly());
	}
}

TEST_CASE("property: Leibniz rule for partial derivatives")
{
	testing::Gen g(2);
	auto vars = jet_vars();
	for (int i = 0; i < 300; ++i) {
		Poly p = g.poly(vars, 4, 3), q = g.poly(vars, 4, 3);
		Var v = vars[g.uniform(0, static_cast<int>(vars.size()) - 1)];
		CHECK(diff(p * q, v) == p * diff(q, v) + q * diff(p, v));
	}
}

TEST_CASE("property: substitution commutes with arithmetic")
{
	testing::Gen g(3);
	auto vars = jet_vars();
	for (int i = 0; i < 300; ++i) {
		Poly p = g.poly(vars), q = g.poly(vars);
		std::map<Var, Poly> b{{Var::jet(0), g.poly(vars, 2, 1)}, {Var::named("x"), g.poly(vars, 2, 2)}};
		CHECK(substitute_simultaneous(p + q, b) == substitute_simultaneous(p, b) + substitute_simultaneous(q, b));
		CHECK(substitute_simultaneous(p * q, b) == substitute_simultaneous(p, b) * substitute_simultaneous(q, b));
	}
}

TEST_CASE("property: text round trip")
{
	testing::Gen g(4);
	auto vars = jet_vars();
	for (int i = 0; i < 300; ++i) {
		Poly p = g.poly(vars, 5, 3);
		CHECK(parse_poly(to_string(p)) == p);
	}
}

TEST_CASE("property: solve_linear solutions satisfy every equation")
{
	testing::Gen g(5);
	std::vector<Var> unknowns;
	for (int i = 0; i < 5; ++i)
		unknowns.push_back(Var::atom("_z" + std::to_string(i)));
	std::vector<Var> params{Var::jet(0), Var::named("lambda")};
	int solved = 0;
	for (int i = 0; i < 3000 && solved < 300; ++i) {
		LinearSystem sys;
		sys.unknowns = unknowns;
		int rows = g.uniform(0, 6);
		for (int r = 0; r < rows; ++r) {
			Poly e = g.poly(params, 1, 1);
			for (Var u : unknowns)
				if (g.uniform(0, 2) == 0)
					e += g.poly(params, 2, 1) * Poly(u);
			sys.equations.push_back(e);
		}
		auto s = solve_linear(sys);
		if (!s.consistent()) {
			REQUIRE(s.contradiction);
			CHECK(s.contradiction->is_constant());
			continue;
		}
		if (!s.unsolved.empty() || !s.conditions.empty())
			continue;
		++solved;
		for (const auto& e : sys.equations)
			CHECK(substitute_simultaneous(e, s.values).is_zero());
		auto part = s.particular();
		for (const auto& e : sys.equations)
			CHECK(substitute_simultaneous(e, part).is_zero());
	}
	CHECK(solved >= 200);
}

TEST_CASE("polynomial system: Burgers-shaped q system")
{
	Var q01 = Var::named("q01"), q03 = Var::named("q03"), q21 = Var::named("q21"), q23 = Var::named("q23");
	std::vector<Poly> eqs{P("q01*q23 - q03*q21"), P("q03 + 2"), P("q21 + q01*q23/2")};
	auto r = solve_polynomial_system(eqs, {q01, q03, q21, q23});
	REQUIRE(r.branches.size() >= 1);
	const auto& b = r.branches.front();
	CHECK(b.complete());
	for (const auto& e : eqs)
		CHECK(substitute(e, b.values).is_zero());
}
