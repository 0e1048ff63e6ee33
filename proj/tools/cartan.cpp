#include "cartan/pipeline.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

struct Args {
	std::string spec;
	std::string json;
	std::optional<int> max_degree, holonomy_level, series_order;
	std::optional<std::size_t> rep_dim;
	unsigned seed = 1;
	bool timings = false;
};

void add_common(CLI::App* cmd, Args& a)
{
	cmd->add_option("--spec", a.spec, "problem spec file")->required();
	cmd->add_option("--json", a.json, "write the JSON report to this file ('-' for stdout)");
	cmd->add_option("--max-degree", a.max_degree, "degree bound on the t-component of the connection ansatz")
	    ->check(CLI::Range(0, 6));
	cmd->add_option("--holonomy-level", a.holonomy_level, "filtration level")->check(CLI::Range(0, 4));
	cmd->add_option("--series-order", a.series_order, "truncation order of the exponential series")
	    ->check(CLI::Range(1, 12));
	cmd->add_option("--rep-dim", a.rep_dim, "matrix dimension for rep search")->check(CLI::Range(1, 4));
	cmd->add_option("--seed", a.seed, "seed for the randomized consistency checks");
	cmd->add_flag("--timings", a.timings, "include per-stage timings in the JSON report");
}

std::string read_file(const std::string& path)
{
	std::ifstream in(path, std::ios::binary);
	if (!in)
		throw std::runtime_error("cannot read " + path);
	std::ostringstream s;
	s << in.rdbuf();
	return s.str();
}

}  // namespace

int main(int argc, char** argv)
{
	CLI::App app{"Prolongation structures of evolution equations"};
	app.require_subcommand(1);
	Args args;
	std::optional<cartan::Command> chosen;

	auto leaf = [&](CLI::App* parent, const std::string& name, const std::string& desc, cartan::Command c) {
		auto* s = parent->add_subcommand(name, desc);
		add_common(s, args);
		s->callback([&chosen, c] { chosen = c; });
	};
	auto* ideal = app.add_subcommand("ideal", "exterior differential ideal");
	ideal->require_subcommand(1);
	leaf(ideal, "check", "build the ideal and certify closure", cartan::Command::IdealCheck);
	auto* mc = app.add_subcommand("mc", "Maurer-Cartan forms of a matrix Lie group");
	mc->require_subcommand(1);
	leaf(mc, "build", "build the Maurer-Cartan forms", cartan::Command::McBuild);
	leaf(mc, "verify", "check the Maurer-Cartan equations", cartan::Command::McVerify);
	auto* prolong = app.add_subcommand("prolong", "prolongation structure");
	prolong->require_subcommand(1);
	leaf(prolong, "derive", "derive the determining equations", cartan::Command::ProlongDerive);
	leaf(prolong, "solve", "solve the determining equations", cartan::Command::ProlongSolve);
	leaf(&app, "holonomy", "holonomy filtration and closure", cartan::Command::Holonomy);
	auto* rep = app.add_subcommand("rep", "matrix representations");
	rep->require_subcommand(1);
	leaf(rep, "verify", "check the spec matrices against the relations", cartan::Command::RepVerify);
	leaf(rep, "search", "search for matrix representations", cartan::Command::RepSearch);
	auto* lax = app.add_subcommand("lax", "Lax pair");
	lax->require_subcommand(1);
	leaf(lax, "verify", "assemble and check the zero-curvature condition", cartan::Command::LaxVerify);
	leaf(&app, "pipeline", "run every stage in order", cartan::Command::Pipeline);

	try {
		app.parse(argc, argv);
	} catch (const CLI::Success& e) {
		return app.exit(e);
	} catch (const CLI::ParseError& e) {
		app.exit(e);
		return 2;
	}

	cartan::ProblemSpec spec;
	try {
		spec = cartan::parse_spec(read_file(args.spec));
	} catch (const cartan::SpecError& e) {
		std::cerr << args.spec << ":" << e.line << ":" << e.column << ": " << e.message << "\n";
		return 2;
	} catch (const std::exception& e) {
		std::cerr << "error: " << e.what() << "\n";
		return 2;
	}

	cartan::RunOptions opts;
	opts.max_degree = args.max_degree;
	opts.holonomy_level = args.holonomy_level;
	opts.series_order = args.series_order;
	opts.rep_dim = args.rep_dim;
	opts.seed = args.seed;
	opts.timings = args.timings;

	cartan::Report report;
	try {
		report = cartan::run_command(*chosen, spec, opts);
	} catch (const cartan::InputError& e) {
		std::cerr << "error: " << e.what() << "\n";
		return 2;
	}

	std::string json = report.json.dump(2) + "\n";
	if (args.json == "-") {
		std::cout << json;
	} else {
		std::cout << report.text;
		if (!args.json.empty()) {
			std::ofstream out(args.json, std::ios::binary);
			if (!out) {
				std::cerr << "error: cannot write " << args.json << "\n";
				return 2;
			}
			out << json;
		}
	}
	return report.pass ? 0 : 1;
}
