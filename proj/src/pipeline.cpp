#include "cartan/pipeline.hpp"

#include "cartan/maurer_cartan.hpp"

#include <chrono>
#include <random>
#include <set>
#include <sstream>

namespace cartan {

using nlohmann::json;

namespace {

const std::map<std::pair<std::string, std::string>, Command>& command_table()
{
	static const std::map<std::pair<std::string, std::string>, Command> t{
	    {{"ideal", "check"}, Command::IdealCheck},      {{"mc", "build"}, Command::McBuild},
	    {{"mc", "verify"}, Command::McVerify},          {{"prolong", "derive"}, Command::ProlongDerive},
	    {{"prolong", "solve"}, Command::ProlongSolve},  {{"holonomy", ""}, Command::Holonomy},
	    {{"rep", "verify"}, Command::RepVerify},        {{"rep", "search"}, Command::RepSearch},
	    {{"lax", "verify"}, Command::LaxVerify},        {{"pipeline", ""}, Command::Pipeline},
	};
	return t;
}

json matrix_json(const PolyMatrix& m)
{
	json rows = json::array();
	for (std::size_t i = 0; i < m.rows(); ++i) {
		json row = json::array();
		for (std::size_t j = 0; j < m.cols(); ++j)
			row.push_back(to_string(m(i, j)));
		rows.push_back(row);
	}
	return rows;
}

json strings(const std::vector<LieElement>& v)
{
	json a = json::array();
	for (const auto& e : v)
		a.push_back(to_string(e));
	return a;
}

json strings(const std::vector<Poly>& v)
{
	json a = json::array();
	for (const auto& e : v)
		a.push_back(to_string(e));
	return a;
}

json names(const std::vector<Var>& v)
{
	json a = json::array();
	for (Var x : v)
		a.push_back(x.name());
	return a;
}

json structure_json(const StructureConstants& c)
{
	json b = json::array();
	for (std::size_t i = 0; i < c.dim(); ++i)
		for (std::size_t j = i + 1; j < c.dim(); ++j)
			for (std::size_t k = 0; k < c.dim(); ++k)
				if (!c(k, i, j).is_zero())
					b.push_back({i + 1, j + 1, k + 1, to_string(c(k, i, j))});
	return {{"names", c.names()}, {"brackets", b}};
}

std::string indent(const std::string& s) { return "  " + s + "\n"; }

class Runner {
public:
	Runner(const ProblemSpec& spec, const RunOptions& opts) : spec_(spec), opts_(opts), rng_(opts.seed) {}

	Report run(Command cmd)
	{
		report_.json = {{"schema_version", kSchemaVersion}, {"command", command_name(cmd)}};
		report_.json["stages"] = json::object();
		report_.json["notes"] = json::array();
		bool ok = dispatch(cmd);
		report_.pass = ok;
		report_.json["verdict"] = ok ? "pass" : "fail";
		if (!ok && !failed_.empty())
			report_.json["failed_stage"] = failed_;
		if (opts_.timings)
			report_.json["timings_ms"] = timings_;
		out_ << "verdict: " << (ok ? "PASS" : "FAIL");
		if (!ok && !failed_.empty())
			out_ << " (stage " << failed_ << ")";
		out_ << "\n";
		report_.text = out_.str();
		return std::move(report_);
	}

private:
	bool dispatch(Command cmd)
	{
		switch (cmd) {
		case Command::IdealCheck:
			return stage("ideal", &Runner::ideal);
		case Command::McBuild:
			return stage("mc_build", &Runner::mc_build);
		case Command::McVerify:
			return stage("mc_verify", &Runner::mc_verify);
		case Command::ProlongDerive:
			return stage("ideal", &Runner::ideal) && stage("determining", &Runner::determining);
		case Command::ProlongSolve:
			return stage("ideal", &Runner::ideal) && stage("determining", &Runner::determining) &&
			       stage("solution", &Runner::solution);
		case Command::Holonomy:
			return prolong() && stage("holonomy", &Runner::holonomy);
		case Command::RepVerify:
			if (!spec_.relations.empty())
				return stage("representation", &Runner::rep_verify);
			return prolong() && stage("holonomy", &Runner::holonomy) && stage("representation", &Runner::rep_verify);
		case Command::RepSearch:
			if (!spec_.relations.empty())
				return stage("rep_search", &Runner::rep_search);
			return prolong() && stage("holonomy", &Runner::holonomy) && stage("rep_search", &Runner::rep_search);
		case Command::LaxVerify:
			if (spec_.bx)
				return stage("lax", &Runner::lax);
			return prolong() && stage("holonomy", &Runner::holonomy) && stage("representation", &Runner::rep_stage) &&
			       stage("lax", &Runner::lax);
		case Command::Pipeline:
			return prolong() && stage("holonomy", &Runner::holonomy) && stage("representation", &Runner::rep_stage) &&
			       stage("lax", &Runner::lax);
		}
		return false;
	}

	bool prolong()
	{
		return stage("ideal", &Runner::ideal) && stage("determining", &Runner::determining) &&
		       stage("solution", &Runner::solution);
	}

	bool stage(const std::string& name, bool (Runner::*fn)(json&))
	{
		json j = json::object();
		auto t0 = std::chrono::steady_clock::now();
		bool ok = (this->*fn)(j);
		auto t1 = std::chrono::steady_clock::now();
		timings_[name] = std::chrono::duration<double, std::milli>(t1 - t0).count();
		j["pass"] = ok;
		report_.json["stages"][name] = j;
		if (!ok)
			failed_ = name;
		return ok;
	}

	void note(const std::string& s)
	{
		report_.json["notes"].push_back(s);
		notes_text_ += "note: " + s + "\n";
		out_ << "note: " << s << "\n";
	}

	// ------------------------------------------------------------ ideal

	std::vector<std::string> generator_names() const
	{
		std::vector<std::string> out;
		if (!spec_.forms.empty())
			for (const auto& f : spec_.forms)
				out.push_back(f.name);
		else
			for (std::size_t i = 0; i < ideal_->ideal.generators.size(); ++i)
				out.push_back("alpha" + std::to_string(i + 1));
		return out;
	}

	void closure_json(json& j, const ClosureReport& c, const std::vector<std::string>& gnames)
	{
		j["closed"] = c.closed;
		json certs = json::array();
		for (std::size_t k = 0; k < c.certificates.size(); ++k) {
			const auto& cert = c.certificates[k];
			json m = json::object();
			std::string combo;
			for (std::size_t i = 0; i < cert.multipliers.size(); ++i) {
				m[gnames[i]] = to_string(cert.multipliers[i]);
				if (!cert.multipliers[i].is_zero())
					combo += (combo.empty() ? "" : " + ") + std::string("(") + to_string(cert.multipliers[i]) + ")^" + gnames[i];
			}
			json cj = {{"generator", gnames[k]},
			           {"derivative", to_string(c.derivatives[k])},
			           {"member", cert.member()},
			           {"multipliers", m},
			           {"remainder", to_string(cert.remainder)}};
			if (cert.obstruction)
				cj["obstruction"] = to_string(*cert.obstruction);
			certs.push_back(cj);
			std::string line = "d(" + gnames[k] + ") = " + to_string(c.derivatives[k]);
			if (cert.member())
				line += c.derivatives[k].is_zero() ? "" : " = " + combo;
			else
				line += "  NOT IN IDEAL, remainder " + to_string(cert.remainder);
			out_ << indent(line);
		}
		j["certificates"] = certs;
	}

	bool ideal(json& j)
	{
		if (ideal_)
			return ideal_->closure.closed;
		out_ << "[ideal]\n";
		if (spec_.pde) {
			try {
				ideal_ = contact_ideal_from_pde(*spec_.pde);
			} catch (const ConstructionError& e) {
				j["error"] = e.what();
				out_ << indent(std::string("error: ") + e.what());
				std::vector<std::string> g{"alpha1", "alpha2"};
				closure_json(j, e.report, g);
				return false;
			} catch (const std::invalid_argument& e) {
				j["error"] = e.what();
				out_ << indent(std::string("error: ") + e.what());
				return false;
			}
		} else if (!spec_.forms.empty()) {
			std::vector<DiffForm> gens;
			for (const auto& f : spec_.forms)
				gens.push_back(f.form);
			ideal_ = ideal_from_generators(spec_.coordinates(), gens);
		} else {
			throw InputError("spec declares neither [pde] nor [forms]");
		}
		auto gnames = generator_names();
		j["coordinates"] = names(ideal_->coordinates);
		json gens = json::array();
		for (std::size_t k = 0; k < gnames.size(); ++k) {
			gens.push_back({{"name", gnames[k]}, {"form", to_string(ideal_->ideal.generators[k])}});
			out_ << indent(gnames[k] + " = " + to_string(ideal_->ideal.generators[k]));
		}
		j["generators"] = gens;
		closure_json(j, ideal_->closure, gnames);
		out_ << indent(std::string("closed: ") + (ideal_->closure.closed ? "yes" : "no"));
		return ideal_->closure.closed;
	}

	// ------------------------------------------------------------ determining

	ConnectionAnsatz ansatz() const
	{
		ConnectionAnsatz a;
		if (spec_.bx) {
			a = ConnectionAnsatz::explicit_connection(*spec_.bx, *spec_.bt);
		} else {
			a.bx_degree = spec_.bx_degree;
			a.bt_degree = opts_.max_degree.value_or(spec_.bt_degree);
		}
		return a;
	}

	bool determining(json& j)
	{
		out_ << "[determining]\n";
		sys_ = derive_determining(*ideal_, ansatz());
		json conds = json::array();
		out_ << indent("conditions:");
		for (const auto& c : sys_->conditions) {
			json cj = {{"monomial", to_string(c.monomial)}, {"equation", to_string(c.equation)}};
			if (c.lhs) {
				cj["lhs"] = c.lhs->name();
				cj["rhs"] = to_string(c.rhs);
				out_ << indent("  " + c.lhs->name() + " = " + to_string(c.rhs));
			} else {
				out_ << indent("  " + to_string(c.equation) + " = 0");
			}
			conds.push_back(cj);
		}
		j["conditions"] = conds;
		json mult = json::object();
		out_ << indent("multipliers:");
		for (const auto& [g, p] : sys_->multiplier_solution) {
			mult[g.name()] = to_string(p);
			out_ << indent("  " + g.name() + " = " + to_string(p));
		}
		j["multipliers"] = mult;
		j["residuals"] = strings(sys_->residuals);
		out_ << indent("after eliminating the multipliers:");
		for (const auto& r : sys_->residuals)
			out_ << indent("  " + to_string(r) + " = 0");
		j["ansatz"] = {{"explicit", sys_->ansatz.is_explicit()},
		               {"bx", to_string(sys_->bx)},
		               {"bt", to_string(sys_->bt)},
		               {"bx_degree", sys_->ansatz.bx_degree},
		               {"bt_degree", sys_->ansatz.bt_degree},
		               {"fresh", names(sys_->fresh)}};
		j["equations"] = strings(sys_->expanded);
		out_ << indent("ansatz equations: " + std::to_string(sys_->expanded.size()));
		return true;
	}

	// ------------------------------------------------------------ solution

	bool solution(json& j)
	{
		out_ << "[solution]\n";
		sol_ = solve_determining(*sys_);
		j["bx"] = to_string(sol_->bx);
		j["bt"] = to_string(sol_->bt);
		j["generators"] = names(sol_->generators);
		j["relations"] = strings(sol_->relations);
		j["unsolved"] = strings(sol_->unsolved);
		j["curvature"] = strings(sol_->curvature);
		j["verified"] = sol_->verified;
		out_ << indent("bx = " + to_string(sol_->bx));
		out_ << indent("bt = " + to_string(sol_->bt));
		for (const auto& r : sol_->relations)
			out_ << indent("relation: " + to_string(r) + " = 0");
		for (const auto& r : sol_->unsolved)
			out_ << indent("unsolved: " + to_string(r) + " = 0");
		for (std::size_t k = 0; k < sol_->curvature.size(); ++k)
			out_ << indent("g" + std::to_string(k + 1) + " = " + to_string(sol_->curvature[k]));
		out_ << indent(std::string("verified: ") + (sol_->verified ? "yes" : "no"));
		return sol_->verified && sol_->unsolved.empty();
	}

	// ------------------------------------------------------------ holonomy

	json named_json(const std::vector<NamedElement>& v, bool table)
	{
		json a = json::array();
		std::vector<std::pair<std::string, LieElement>> known;
		for (Var g : sol_->generators)
			known.emplace_back(g.name(), LieElement(g));
		for (const auto& n : v) {
			json e = {{"name", n.name.name()}, {"definition", to_string(n.definition)}};
			std::string line = n.name.name() + " = " + to_string(n.definition);
			if (table && !(n.definition == LieElement(n.name))) {
				if (auto b = as_bracket(n.definition, known)) {
					e["bracket"] = *b;
					if (*b != to_string(n.definition))
						line += "  = " + *b;
				}
			}
			known.emplace_back(n.name.name(), n.definition);
			out_ << indent("  " + line);
			a.push_back(e);
		}
		return a;
	}

	static std::optional<std::string> as_bracket(const LieElement& def,
	                                             const std::vector<std::pair<std::string, LieElement>>& known)
	{
		for (std::size_t i = 0; i < known.size(); ++i)
			for (std::size_t k = 0; k < known.size(); ++k) {
				if (i == k)
					continue;
				LieElement b = bracket(known[i].second, known[k].second);
				if (b == def)
					return "[" + known[i].first + "," + known[k].first + "]";
			}
		return std::nullopt;
	}

	bool holonomy(json& j)
	{
		const int level = opts_.holonomy_level.value_or(spec_.holonomy_level);
		out_ << "[holonomy]\n";
		filt_ = holonomy_filtration(*sol_, level);
		j["level"] = level;
		j["elements"] = filt_->elements.size();
		out_ << indent("level " + std::to_string(level) + ": " + std::to_string(filt_->elements.size()) + " elements");
		out_ << indent("free-algebra basis (" + std::to_string(filt_->free_basis.size()) + "):");
		j["free_basis"] = named_json(name_basis(*sol_, filt_->free_basis), true);
		out_ << indent("basis modulo relations (" + std::to_string(filt_->basis.size()) + "):");
		auto nb = name_basis(*sol_, filt_->basis);
		j["basis"] = named_json(nb, false);
		j["perfect"] = filt_->perfect;
		j["closed"] = filt_->closed ? json(*filt_->closed) : json(nullptr);
		j["budget_exhausted"] = filt_->budget_exhausted;
		out_ << indent(std::string("perfect: ") + (filt_->perfect ? "yes" : "no"));
		if (filt_->budget_exhausted) {
			out_ << indent("budget exhausted");
			return false;
		}
		if (level >= 1) {
			note("expansion verification only: closure at level " + std::to_string(level) +
			     " checks user-supplied expansions and does not solve for them");
			note("sign convention: A3 = [A0,A1]; with A3 = [A1,A0] an element changes sign once per occurrence of A3");
			note("covariant derivatives use the solved connection, t-component " + to_string(sol_->bt));
			if (spec_.expansions.empty()) {
				out_ << indent("closure: not attempted (no expansions supplied)");
				return true;
			}
		}
		if (filt_->basis.empty())
			return true;

		auto expansions = spec_.expansions.empty() ? default_expansions(*sol_, nb) : spec_.expansions;
		CloseOptions co;
		co.free_parameter = spec_.free_parameter;
		try {
			close_ = holonomy_close(*sol_, nb, expansions, co);
		} catch (const std::invalid_argument& e) {
			j["closure"] = {{"error", e.what()}};
			out_ << indent(std::string("closure error: ") + e.what());
			return false;
		}
		const auto& hc = *close_;
		json c;
		json ex = json::object();
		for (const auto& [g, e] : hc.expansions)
			ex[g.name()] = to_string(e);
		c["expansions"] = ex;
		c["unknowns"] = names(hc.unknowns);
		c["equations"] = strings(hc.equations);
		c["consistent"] = hc.consistent;
		out_ << indent("closure:");
		for (const auto& [g, e] : hc.expansions)
			out_ << indent("  " + g.name() + " = " + to_string(e));
		if (!hc.consistent) {
			json dead = json::array();
			std::set<std::string> seen;
			for (const auto& d : hc.raw.dead) {
				if (!seen.insert(to_string(d.source) + "|" + to_string(d.contradiction)).second)
					continue;
				json vals = json::object();
				for (const auto& [v, p] : d.values)
					vals[v.name()] = to_string(p);
				dead.push_back({{"values", vals}, {"contradiction", to_string(d.contradiction)}, {"source", to_string(d.source)}});
			}
			c["inconsistency"] = dead;
			c["unsolved"] = strings(hc.unsolved);
			out_ << indent("  inconsistent");
			for (const auto& d : dead)
				out_ << indent("  certificate: " + d["source"].get<std::string>() + " reduces to " +
				               d["contradiction"].get<std::string>());
			j["closure"] = c;
			return false;
		}
		json vals = json::object();
		for (const auto& [v, p] : hc.values) {
			if (v.name().rfind("c_", 0) == 0)
				continue;
			vals[v.name()] = to_string(p);
			out_ << indent("  " + v.name() + " = " + to_string(p));
		}
		c["values"] = vals;
		c["free"] = names(hc.free);
		if (hc.renamed_from)
			c["renamed_from"] = hc.renamed_from->name();
		c["structure"] = structure_json(hc.structure);
		c["presentation"] = strings(hc.presentation);
		json se = json::object();
		for (const auto& [g, e] : hc.solved_expansions) {
			se[g.name()] = to_string(e);
			out_ << indent("  " + g.name() + " = " + to_string(e));
		}
		c["solved_expansions"] = se;
		c["perfect"] = hc.perfect;
		for (const auto& p : hc.presentation)
			out_ << indent("  " + to_string(p) + " = 0");
		out_ << indent(std::string("  perfect: ") + (hc.perfect ? "yes" : "no"));
		j["closure"] = c;
		return hc.perfect;
	}

	/// Presentation of the closed algebra plus g - expansion(g) for every external generator.
	std::vector<LieElement> closed_relations() const
	{
		std::vector<LieElement> out = close_->presentation;
		for (const auto& [g, e] : close_->solved_expansions)
			out.push_back(LieElement(g) - e);
		return out;
	}

	std::vector<Var> closed_generators() const
	{
		std::vector<Var> out;
		for (const auto& n : close_->basis)
			out.push_back(n.name);
		return out;
	}

	// ------------------------------------------------------------ representation

	MatrixRep spec_rep() const
	{
		MatrixRep r;
		r.matrices = spec_.matrices;
		r.dim = spec_.rep_dim.value_or(r.matrices.empty() ? 0 : r.matrices.begin()->second.rows());
		if (close_ && close_->consistent) {
			std::map<Var, LieElement> missing;
			for (const auto& [g, e] : close_->solved_expansions)
				if (!r.matrices.count(g))
					missing[g] = e;
			bool all = true;
			for (const auto& n : close_->basis)
				all = all && r.matrices.count(n.name);
			if (all && !missing.empty())
				r = extend_rep(r, missing);
		}
		return r;
	}

	json check_json(const std::string& set, const std::vector<LieElement>& rels, const MatrixRep& rep, bool& ok)
	{
		auto v = verify_rep(rels, rep);
		json res = json::array();
		for (const auto& r : v.residuals) {
			json rj = {{"relation", to_string(r.relation)}, {"zero", r.residual.is_zero()}};
			if (!r.residual.is_zero())
				rj["residual"] = matrix_json(r.residual);
			res.push_back(rj);
		}
		ok = ok && v.ok();
		out_ << indent(set + ": " + (v.ok() ? "all residuals zero" : "FAILED"));
		for (Var m : v.missing)
			out_ << indent("  missing matrix for " + m.name());
		for (const auto& r : v.residuals)
			if (!r.residual.is_zero())
				out_ << indent("  " + to_string(r.relation) + " -> " + to_string(r.residual));
		return {{"set", set}, {"ok", v.ok()}, {"missing", names(v.missing)}, {"residuals", res}};
	}

	PolyMatrix random_invertible(std::size_t n)
	{
		std::uniform_int_distribution<int> num(-4, 4), den(1, 3);
		for (;;) {
			PolyMatrix p(n, n);
			for (std::size_t i = 0; i < n; ++i)
				for (std::size_t k = 0; k < n; ++k) {
					Rational q(num(rng_), den(rng_));
					q.canonicalize();
					p(i, k) = Poly(q);
				}
			try {
				inverse_rational(p);
				return p;
			} catch (const std::domain_error&) {
			}
		}
	}

	bool rep_verify(json& j)
	{
		if (spec_.matrices.empty())
			throw InputError("spec has no [representation] matrices");
		out_ << "[representation]\n";
		MatrixRep rep = spec_rep();
		rep_ = rep;
		j["dim"] = rep.dim;
		json mats = json::object();
		for (const auto& [g, m] : rep.matrices) {
			mats[g.name()] = matrix_json(m);
			out_ << indent(g.name() + " = " + to_string(m));
		}
		j["matrices"] = mats;
		bool ok = true;
		json checks = json::array();
		std::vector<std::pair<std::string, std::vector<LieElement>>> sets;
		if (!spec_.relations.empty()) {
			std::vector<LieElement> rels;
			for (const auto& r : spec_.relations)
				rels.push_back(r.relation);
			sets.emplace_back("relations", rels);
		} else {
			sets.emplace_back("prolongation", sol_->relations);
			if (close_ && close_->consistent)
				sets.emplace_back("closed", closed_relations());
		}
		for (const auto& [name, rels] : sets)
			checks.push_back(check_json(name, rels, rep, ok));
		j["checks"] = checks;

		json conj = json::array();
		if (rep.dim > 0) {
			for (int k = 0; k < 3; ++k) {
				PolyMatrix p = random_invertible(rep.dim), pi = inverse_rational(p);
				MatrixRep c = rep;
				for (auto& [g, m] : c.matrices)
					m = p * m * pi;
				bool same = true;
				for (const auto& [name, rels] : sets)
					same = same && (verify_rep(rels, c).ok() == verify_rep(rels, rep).ok());
				conj.push_back({{"conjugator", matrix_json(p)}, {"same_verdict", same}});
				ok = ok && same;
			}
		}
		j["conjugation_checks"] = conj;
		return ok;
	}

	/// Level >= 1 only verifies expansions; searches fall back to the level-0 closure.
	bool level0_closure()
	{
		if (close_)
			return close_->consistent;
		auto f = holonomy_filtration(*sol_, 0);
		if (f.basis.empty())
			return false;
		auto nb = name_basis(*sol_, f.basis);
		CloseOptions co;
		co.free_parameter = spec_.free_parameter;
		close_ = holonomy_close(*sol_, nb, default_expansions(*sol_, nb), co);
		if (close_->consistent)
			note("representation search uses the level-0 closure");
		return close_->consistent;
	}

	bool rep_search(json& j)
	{
		std::vector<LieElement> rels;
		std::vector<Var> gens;
		if (!spec_.relations.empty()) {
			std::set<Var> g;
			for (const auto& r : spec_.relations) {
				rels.push_back(r.relation);
				for (Var v : r.relation.generators())
					g.insert(v);
			}
			gens.assign(g.begin(), g.end());
		} else if (!level0_closure()) {
			rels = sol_->relations;
			gens = sol_->generators;
		} else {
			rels = close_->presentation;
			gens = closed_generators();
		}
		std::size_t dim = opts_.rep_dim.value_or(spec_.rep_dim.value_or(2));
		out_ << "[rep_search]\n";
		out_ << indent("dimension " + std::to_string(dim) + ", template " +
		               (spec_.rep_template == RepTemplate::Full ? "full" : "upper"));
		SearchOptions so;
		so.shape = spec_.rep_template;
		SearchReport sr;
		try {
			sr = search_rep(rels, gens, dim, so);
		} catch (const std::invalid_argument& e) {
			throw InputError(e.what());
		}
		j["dim"] = dim;
		j["template"] = spec_.rep_template == RepTemplate::Full ? "full" : "upper";
		j["generators"] = names(gens);
		j["relations"] = strings(rels);
		j["unknowns"] = names(sr.unknowns);
		j["equations"] = strings(sr.equations);
		j["budget_exhausted"] = sr.budget_exhausted;
		json fams = json::array();
		bool found = false;
		for (const auto& f : sr.families) {
			MatrixRep rep = f.rep;
			if (close_ && close_->consistent && spec_.relations.empty())
				rep = extend_rep(rep, close_->solved_expansions);
			bool verified = verify_rep(rels, rep).ok();
			if (sol_ && spec_.relations.empty())
				verified = verified && verify_rep(sol_->relations, rep).ok();
			json mats = json::object();
			for (const auto& [g, m] : rep.matrices)
				mats[g.name()] = matrix_json(m);
			fams.push_back({{"matrices", mats}, {"free", names(f.free)}, {"nonzero", f.nonzero}, {"verified", verified}});
			out_ << indent(std::string("family") + (f.nonzero ? "" : " (degenerate)") + ", free: " +
			               std::to_string(f.free.size()) + (verified ? ", verified" : ", NOT verified"));
			for (const auto& [g, m] : rep.matrices)
				out_ << indent("  " + g.name() + " = " + to_string(m));
			if (f.nonzero && verified && !found) {
				found = true;
				rep_ = rep;
			}
		}
		j["families"] = fams;
		json partial = json::array();
		for (const auto& p : sr.partial)
			partial.push_back({{"unsolved", strings(p.unsolved)}});
		j["partial"] = partial;
		if (!sr.partial.empty())
			out_ << indent(std::to_string(sr.partial.size()) + " branch(es) left unsolved");
		return found;
	}

	bool rep_stage(json& j)
	{
		if (!spec_.matrices.empty())
			return rep_verify(j);
		return rep_search(j);
	}

	// ------------------------------------------------------------ lax

	bool lax(json& j)
	{
		if (!spec_.pde)
			throw InputError("lax verify needs a [pde] section");
		out_ << "[lax]\n";
		LaxPair pair;
		if (spec_.bx) {
			if (spec_.matrices.empty())
				throw InputError("lax verify with an explicit connection needs [representation] matrices");
			MatrixRep rep = spec_rep();
			std::vector<LieElement> rels;
			for (const auto& r : spec_.relations)
				rels.push_back(r.relation);
			auto v = verify_rep(rels, rep);
			if (!v.ok()) {
				j["error"] = "representation does not satisfy the [relations]";
				out_ << indent("representation does not satisfy the [relations]");
				return false;
			}
			try {
				pair = {evaluate(*spec_.bx, rep), evaluate(*spec_.bt, rep)};
			} catch (const std::invalid_argument& e) {
				throw InputError(e.what());
			}
		} else {
			if (!rep_)
				throw InputError("no representation available");
			ProlongationSolution s = *sol_;
			try {
				pair = assemble_lax(s, *rep_);
			} catch (const std::invalid_argument& e) {
				j["error"] = e.what();
				out_ << indent(std::string("error: ") + e.what());
				return false;
			}
		}
		auto zc = verify_zero_curvature(pair, *spec_.pde);
		j["U"] = matrix_json(pair.U);
		j["V"] = matrix_json(pair.V);
		j["convention"] = "D_x V - D_t U + [U,V]";
		j["residual"] = matrix_json(zc.residual);
		j["zero_curvature"] = zc.pass;
		out_ << indent("U = " + to_string(pair.U));
		out_ << indent("V = " + to_string(pair.V));
		out_ << indent("D_x V - D_t U + [U,V] = " + to_string(zc.residual));
		out_ << indent(std::string("zero curvature: ") + (zc.pass ? "yes" : "no"));

		auto lp = linear_problem(pair);
		j["linear_problem"] = {{"x", lp.x_equations}, {"t", lp.t_equations}};
		out_ << indent("linear problem:");
		for (const auto& s : lp.x_equations)
			out_ << indent("  " + s);
		for (const auto& s : lp.t_equations)
			out_ << indent("  " + s);

		Var lambda = Var::parameter(spec_.free_parameter);
		json spec_checks = json::array();
		bool ok = zc.pass;
		if (zc.pass) {
			std::uniform_int_distribution<int> num(-9, 9), den(1, 4);
			for (int k = 0; k < 3; ++k) {
				Rational q(num(rng_), den(rng_));
				q.canonicalize();
				LaxPair s{substitute(pair.U, {{lambda, Poly(q)}}), substitute(pair.V, {{lambda, Poly(q)}})};
				bool pass = verify_zero_curvature(s, *spec_.pde).pass;
				spec_checks.push_back({{"value", to_string(q)}, {"pass", pass}});
				ok = ok && pass;
			}
		}
		j["specialization_checks"] = spec_checks;
		return ok;
	}

	// ------------------------------------------------------------ Maurer-Cartan

	const StructureConstants& algebra() const
	{
		if (!spec_.algebra)
			throw InputError("spec has no [algebra] section");
		return *spec_.algebra;
	}

	int series_order() const { return opts_.series_order.value_or(spec_.series_order); }

	bool validate(json& j)
	{
		auto v = validate_structure_constants(algebra());
		j["structure"] = structure_json(algebra());
		if (v.ok())
			return true;
		json idx = json::array();
		for (auto i : v.index)
			idx.push_back(i);
		j["violation"] = {{"kind", v.violation == StructureValidation::Violation::Jacobi ? "jacobi" : "antisymmetry"},
		                  {"index", idx},
		                  {"value", to_string(v.value)}};
		out_ << indent("structure constants invalid");
		return false;
	}

	bool mc_build(json& j)
	{
		out_ << "[mc_build]\n";
		if (!validate(j))
			return false;
		auto form = mc_form(algebra(), series_order());
		j["a_matrix"] = matrix_json(build_a_matrix(algebra()));
		j["order"] = form.series.order;
		j["exact"] = form.series.exact;
		j["nilpotency"] = form.series.nilpotency;
		j["w"] = matrix_json(form.series.w);
		json comps = json::array();
		for (const auto& c : form.components)
			comps.push_back(to_string(c));
		j["components"] = comps;
		out_ << indent("A = " + to_string(build_a_matrix(algebra())));
		out_ << indent("W = " + to_string(form.series.w) + (form.series.exact ? "  (exact)" : "  (truncated)"));
		for (std::size_t k = 0; k < form.components.size(); ++k)
			out_ << indent("omega" + std::to_string(k + 1) + " = " + to_string(form.components[k]));
		return true;
	}

	bool mc_verify(json& j)
	{
		out_ << "[mc_verify]\n";
		if (!validate(j))
			return false;
		auto one = [&](int order) {
			auto r = verify_mc_equation(mc_form(algebra(), order), algebra());
			return r;
		};
		auto r = one(series_order());
		json res = json::array();
		for (const auto& f : r.residuals)
			res.push_back(to_string(f));
		j["order"] = r.order;
		j["exact"] = r.exact;
		j["residuals"] = res;
		j["min_degree"] = r.min_degree;
		j["ok"] = r.ok();
		out_ << indent(std::string(r.exact ? "exact series" : "truncated series") + ", order " + std::to_string(r.order));
		out_ << indent("lowest residual degree: " + (r.min_degree < 0 ? std::string("none (identically zero)")
		                                                                : std::to_string(r.min_degree)));
		bool ok = r.ok();
		if (!r.exact) {
			json sweep = json::array();
			for (int n = 2; n <= series_order(); ++n) {
				auto s = one(n);
				sweep.push_back({{"order", n}, {"min_degree", s.min_degree}, {"ok", s.ok()}});
				out_ << indent("order " + std::to_string(n) + ": lowest residual degree " + std::to_string(s.min_degree) +
				               (s.ok() ? "" : "  FAILED"));
				ok = ok && s.ok();
			}
			j["sweep"] = sweep;
		}
		return ok;
	}

	const ProblemSpec& spec_;
	RunOptions opts_;
	std::mt19937 rng_;
	Report report_;
	std::ostringstream out_;
	std::string notes_text_;
	std::string failed_;
	json timings_ = json::object();

	std::optional<PDEIdeal> ideal_;
	std::optional<DeterminingSystem> sys_;
	std::optional<ProlongationSolution> sol_;
	std::optional<FiltrationReport> filt_;
	std::optional<HolonomyClosure> close_;
	std::optional<MatrixRep> rep_;
};

}  // namespace

std::optional<Command> parse_command(const std::string& group, const std::string& action)
{
	auto it = command_table().find({group, action});
	if (it == command_table().end())
		return std::nullopt;
	return it->second;
}

std::string command_name(Command c)
{
	for (const auto& [k, v] : command_table())
		if (v == c)
			return k.second.empty() ? k.first : k.first + " " + k.second;
	return "";
}

Report run_command(Command cmd, const ProblemSpec& spec, const RunOptions& opts)
{
	return Runner(spec, opts).run(cmd);
}

}  // namespace cartan
