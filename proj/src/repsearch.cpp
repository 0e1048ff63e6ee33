#include "cartan/repsearch.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace cartan {

namespace {

PolyMatrix evaluate_word(const LieWord& w, const MatrixRep& rep, std::map<LieWord, PolyMatrix>& memo)
{
	if (auto it = memo.find(w); it != memo.end())
		return it->second;
	PolyMatrix m;
	if (w.is_letter()) {
		auto it = rep.matrices.find(w.letters().front());
		if (it == rep.matrices.end())
			throw std::invalid_argument("no matrix for generator " + w.letters().front().name());
		m = it->second;
	} else {
		auto [l, r] = w.split();
		m = commutator(evaluate_word(l, rep, memo), evaluate_word(r, rep, memo));
	}
	memo.emplace(w, m);
	return m;
}

}  // namespace

PolyMatrix evaluate(const LieElement& e, const MatrixRep& rep)
{
	std::map<LieWord, PolyMatrix> memo;
	PolyMatrix out(rep.dim, rep.dim);
	for (const auto& [w, c] : e.terms())
		out += evaluate_word(w, rep, memo) * c;
	return out;
}

bool RepVerification::ok() const
{
	return missing.empty() && std::all_of(residuals.begin(), residuals.end(),
	                                      [](const RepResidual& r) { return r.residual.is_zero(); });
}

RepVerification verify_rep(const std::vector<LieElement>& relations, const MatrixRep& rep)
{
	RepVerification out;
	std::set<Var> missing;
	for (const auto& r : relations)
		for (Var g : r.generators())
			if (!rep.matrices.count(g))
				missing.insert(g);
	out.missing.assign(missing.begin(), missing.end());
	if (!out.missing.empty())
		return out;
	for (const auto& r : relations)
		out.residuals.push_back({r, evaluate(r, rep)});
	return out;
}

MatrixRep extend_rep(const MatrixRep& rep, const std::map<Var, LieElement>& expansions)
{
	MatrixRep out = rep;
	for (const auto& [g, e] : expansions)
		out.matrices[g] = evaluate(e, rep);
	return out;
}

SearchReport search_rep(const std::vector<LieElement>& relations, const std::vector<Var>& generators, std::size_t dim,
                        const SearchOptions& opts)
{
	if (dim == 0 || dim > 4)
		throw std::invalid_argument("representation search supports dimensions 1 to 4");
	SearchReport out;
	MatrixRep tmpl;
	tmpl.dim = dim;
	for (Var g : generators) {
		PolyMatrix m(dim, dim);
		for (std::size_t i = 0; i < dim; ++i)
			for (std::size_t j = 0; j < dim; ++j) {
				if (opts.shape == RepTemplate::UpperTriangular && j < i)
					continue;
				Var v = Var::parameter("m_" + g.name() + "_" + std::to_string(i + 1) + std::to_string(j + 1));
				out.unknowns.push_back(v);
				m(i, j) = Poly(v);
			}
		tmpl.matrices.emplace(g, std::move(m));
	}
	for (const auto& r : relations) {
		PolyMatrix m = evaluate(r, tmpl);
		for (std::size_t i = 0; i < dim; ++i)
			for (std::size_t j = 0; j < dim; ++j)
				if (!m(i, j).is_zero()) {
					Poly q = m(i, j).primitive();
					if (std::find(out.equations.begin(), out.equations.end(), q) == out.equations.end())
						out.equations.push_back(std::move(q));
				}
	}

	auto solved = solve_polynomial_system(out.equations, out.unknowns, opts.solve);
	out.budget_exhausted = solved.budget_exhausted;
	for (const auto& b : solved.branches) {
		if (!b.complete()) {
			out.partial.push_back(b);
			continue;
		}
		RepFamily fam;
		fam.rep.dim = dim;
		for (const auto& [g, m] : tmpl.matrices)
			fam.rep.matrices.emplace(g, substitute(m, b.values));
		fam.free = b.free;
		fam.nonzero = std::none_of(fam.rep.matrices.begin(), fam.rep.matrices.end(),
		                           [](const auto& kv) { return kv.second.is_zero(); });
		if (!verify_rep(relations, fam.rep).ok())
			throw std::logic_error("representation search produced a family that fails verification");
		out.families.push_back(std::move(fam));
	}
	std::stable_sort(out.families.begin(), out.families.end(), [](const RepFamily& a, const RepFamily& b) {
		if (a.nonzero != b.nonzero)
			return a.nonzero;
		return a.free.size() > b.free.size();
	});
	return out;
}

LaxPair assemble_lax(const ProlongationSolution& sol, const MatrixRep& rep)
{
	auto check = verify_rep(sol.relations, rep);
	if (!check.ok())
		throw std::invalid_argument("representation does not satisfy the prolongation relations");
	return {evaluate(sol.bx, rep), evaluate(sol.bt, rep)};
}

Poly total_x(const Poly& p)
{
	Poly out;
	for (Var v : p.variables())
		if (v.kind() == VarKind::Jet)
			out += diff(p, v) * Poly(Var::jet(v.index() + 1));
	return out;
}

Poly total_t(const Poly& p, const EvolutionPDE& pde)
{
	Poly out;
	for (Var v : p.variables()) {
		if (v.kind() != VarKind::Jet)
			continue;
		Poly ut = pde.full_rhs();
		for (int i = 0; i < v.index(); ++i)
			ut = total_x(ut);
		out += diff(p, v) * ut;
	}
	return out;
}

ZeroCurvatureReport verify_zero_curvature(const LaxPair& pair, const EvolutionPDE& pde)
{
	if (pair.U.rows() != pair.V.rows() || pair.U.cols() != pair.V.cols() || !pair.U.is_square())
		throw std::invalid_argument("Lax pair matrices must be square of equal size");
	ZeroCurvatureReport out;
	PolyMatrix dxV = pair.V.map([](const Poly& p) { return total_x(p); });
	PolyMatrix dtU = pair.U.map([&](const Poly& p) { return total_t(p, pde); });
	out.residual = dxV - dtU + commutator(pair.U, pair.V);
	out.pass = out.residual.is_zero();
	return out;
}

LinearProblem linear_problem(const LaxPair& pair)
{
	LinearProblem out;
	auto rows = [](const PolyMatrix& m, const char* sub, std::vector<std::string>& dst) {
		for (std::size_t i = 0; i < m.rows(); ++i) {
			Poly rhs;
			for (std::size_t j = 0; j < m.cols(); ++j)
				rhs -= m(i, j) * Poly(Var::parameter("y" + std::to_string(j + 1)));
			dst.push_back("y" + std::to_string(i + 1) + "_" + sub + " = " + to_string(rhs));
		}
	};
	rows(pair.U, "x", out.x_equations);
	rows(pair.V, "t", out.t_equations);
	return out;
}

}  // namespace cartan
