#include "cartan/pipeline.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace cartan;

namespace {

ProblemSpec load(const std::string& name)
{
	std::ifstream in(std::filesystem::path(CARTAN_DATA_DIR) / name);
	std::ostringstream s;
	s << in.rdbuf();
	return parse_spec(s.str());
}

std::vector<std::string> stage_names(const Report& r)
{
	std::vector<std::string> out;
	for (const auto& [k, v] : r.json["stages"].items())
		out.push_back(k);
	return out;
}

}  // namespace

TEST_CASE("command names round trip")
{
	for (Command c : {Command::IdealCheck, Command::McBuild, Command::McVerify, Command::ProlongDerive,
	                  Command::ProlongSolve, Command::Holonomy, Command::RepVerify, Command::RepSearch,
	                  Command::LaxVerify, Command::Pipeline}) {
		std::string n = command_name(c);
		auto sp = n.find(' ');
		auto back = sp == std::string::npos ? parse_command(n, "") : parse_command(n.substr(0, sp), n.substr(sp + 1));
		REQUIRE(back);
		CHECK(*back == c);
	}
	CHECK_FALSE(parse_command("ideal", "solve"));
}

TEST_CASE("burgers pipeline passes every stage")
{
	auto r = run_command(Command::Pipeline, load("burgers.spec"));
	CHECK(r.pass);
	CHECK(r.json["schema_version"] == 1);
	CHECK(r.json["verdict"] == "pass");
	CHECK_FALSE(r.json.contains("failed_stage"));
	CHECK_FALSE(r.json.contains("timings_ms"));
	CHECK(stage_names(r) ==
	      std::vector<std::string>{"determining", "holonomy", "ideal", "lax", "representation", "solution"});
	const auto& st = r.json["stages"];
	CHECK(st["solution"]["relations"].size() == 3);
	CHECK(st["holonomy"]["closure"]["values"]["q03"] == "-2");
	CHECK(st["holonomy"]["closure"]["free"] == nlohmann::json::array({"lambda"}));
	CHECK(st["lax"]["residual"] == nlohmann::json::parse(R"([["0","0"],["0","0"]])"));
	CHECK(st["lax"]["convention"] == "D_x V - D_t U + [U,V]");
	CHECK(r.text.find("verdict: PASS") != std::string::npos);
}

TEST_CASE("reports are deterministic and timings are opt-in")
{
	auto spec = load("burgers.spec");
	auto a = run_command(Command::Pipeline, spec);
	auto b = run_command(Command::Pipeline, spec);
	CHECK(a.json.dump() == b.json.dump());
	CHECK(a.text == b.text);
	RunOptions o;
	o.timings = true;
	auto t = run_command(Command::Pipeline, spec, o);
	CHECK(t.json["timings_ms"].contains("lax"));
}

TEST_CASE("the seed only changes the randomized checks")
{
	auto spec = load("burgers.spec");
	RunOptions a, b;
	a.seed = 3;
	b.seed = 4;
	auto ra = run_command(Command::Pipeline, spec, a);
	auto rb = run_command(Command::Pipeline, spec, b);
	CHECK(ra.pass);
	CHECK(rb.pass);
	CHECK(ra.json["stages"]["representation"]["conjugation_checks"] !=
	      rb.json["stages"]["representation"]["conjugation_checks"]);
	CHECK(ra.json["stages"]["solution"] == rb.json["stages"]["solution"]);
}

TEST_CASE("failures name the failing stage")
{
	auto r = run_command(Command::Pipeline, load("nonclosed.spec"));
	CHECK_FALSE(r.pass);
	CHECK(r.json["failed_stage"] == "ideal");
	CHECK(r.json["stages"]["ideal"]["certificates"][0]["remainder"] == "-dx^du0");

	r = run_command(Command::Pipeline, load("heat.spec"));
	CHECK_FALSE(r.pass);
	CHECK(r.json["failed_stage"] == "holonomy");
	CHECK(r.json["stages"]["holonomy"]["closure"]["consistent"] == false);
	CHECK_FALSE(r.json["stages"]["holonomy"]["closure"]["inconsistency"].empty());

	r = run_command(Command::LaxVerify, load("burgers_pair_heat.spec"));
	CHECK_FALSE(r.pass);
	CHECK(r.json["failed_stage"] == "lax");
	CHECK(r.json["stages"]["lax"]["residual"][0][0] == "1/4*u0*u1");
}

TEST_CASE("prolong derive and solve stop where asked")
{
	auto spec = load("burgers.spec");
	auto d = run_command(Command::ProlongDerive, spec);
	CHECK(stage_names(d) == std::vector<std::string>{"determining", "ideal"});
	CHECK(d.json["stages"]["determining"]["conditions"].size() == 5);
	CHECK(d.json["stages"]["determining"]["multipliers"]["g2"] == "bx_u0");
	auto s = run_command(Command::ProlongSolve, spec);
	CHECK(s.json["stages"]["solution"]["bx"] == "A0 + u0*A1");
	CHECK(s.json["stages"]["solution"]["verified"] == true);
}

TEST_CASE("holonomy level override")
{
	RunOptions o;
	o.holonomy_level = 1;
	auto r = run_command(Command::Holonomy, load("burgers.spec"), o);
	const auto& h = r.json["stages"]["holonomy"];
	CHECK(h["level"] == 1);
	CHECK(h["free_basis"].size() == 6);
	CHECK(h["basis"].size() == 4);
	CHECK(h["perfect"] == false);
	CHECK(r.json["notes"].size() == 3);
}

TEST_CASE("rep verify and search on a closed presentation")
{
	auto spec = load("closed_burgers.spec");
	auto v = run_command(Command::RepVerify, spec);
	CHECK(v.pass);
	CHECK(v.json["stages"]["representation"]["checks"][0]["ok"] == true);

	spec.matrices[Var::generator("A3")](0, 1) = Poly(Rational(2));
	v = run_command(Command::RepVerify, spec);
	CHECK_FALSE(v.pass);
	CHECK(v.json["stages"]["representation"]["checks"][0]["residuals"][1].contains("residual"));

	auto s = run_command(Command::RepSearch, load("closed_burgers.spec"));
	CHECK(s.pass);
	CHECK_FALSE(s.json["stages"]["rep_search"]["families"].empty());
}

TEST_CASE("maurer-cartan commands")
{
	auto b = run_command(Command::McBuild, load("heisenberg.spec"));
	CHECK(b.pass);
	CHECK(b.json["stages"]["mc_build"]["exact"] == true);
	auto v = run_command(Command::McVerify, load("two_dim.spec"));
	CHECK(v.pass);
	CHECK(v.json["stages"]["mc_verify"]["min_degree"] == 5);
	CHECK(v.json["stages"]["mc_verify"]["sweep"].size() == 5);
	CHECK_THROWS_AS(run_command(Command::McBuild, load("burgers.spec")), InputError);
}

TEST_CASE("missing inputs are input errors")
{
	CHECK_THROWS_AS(run_command(Command::Pipeline, load("closed_burgers.spec")), InputError);
	CHECK_THROWS_AS(run_command(Command::RepVerify, load("burgers_level1.spec")), InputError);
}
