#pragma once

#include "cartan/problem_spec.hpp"

#include <json.hpp>

#include <optional>
#include <stdexcept>
#include <string>

namespace cartan {

enum class Command {
	IdealCheck,
	McBuild,
	McVerify,
	ProlongDerive,
	ProlongSolve,
	Holonomy,
	RepVerify,
	RepSearch,
	LaxVerify,
	Pipeline,
};

/// "ideal check" -> Command::IdealCheck, and so on.
std::optional<Command> parse_command(const std::string& group, const std::string& action);
std::string command_name(Command c);

struct RunOptions {
	std::optional<int> max_degree;
	std::optional<int> holonomy_level;
	std::optional<int> series_order;
	std::optional<std::size_t> rep_dim;
	/// Drives the randomized conjugation and specialization checks only.
	unsigned seed = 1;
	bool timings = false;
};

/// The spec lacks what the command needs (e.g. `mc build` without [algebra]).
struct InputError : std::runtime_error {
	using std::runtime_error::runtime_error;
};

struct Report {
	nlohmann::json json;  // schema_version 1, see docs/report-schema.md
	std::string text;
	bool pass = false;
};

constexpr int kSchemaVersion = 1;

/// Runs one command. Throws InputError for missing inputs; stage failures are verdicts.
Report run_command(Command cmd, const ProblemSpec& spec, const RunOptions& opts = {});

}  // namespace cartan
