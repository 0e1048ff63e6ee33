#include "cartan/pipeline.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace cartan;

namespace {

py::object to_python(const nlohmann::json& j)
{
	return py::module_::import("json").attr("loads")(j.dump());
}

Command command_from(const std::string& name)
{
	auto sp = name.find(' ');
	auto c = sp == std::string::npos ? parse_command(name, "") : parse_command(name.substr(0, sp), name.substr(sp + 1));
	if (!c)
		throw py::value_error("unknown command '" + name + "'");
	return *c;
}

py::dict run(const std::string& command, const std::string& spec_text, std::optional<int> max_degree,
             std::optional<int> holonomy_level, std::optional<int> series_order, std::optional<std::size_t> rep_dim,
             unsigned seed)
{
	Command c = command_from(command);
	ProblemSpec spec = parse_spec(spec_text);
	RunOptions o;
	o.max_degree = max_degree;
	o.holonomy_level = holonomy_level;
	o.series_order = series_order;
	o.rep_dim = rep_dim;
	o.seed = seed;
	Report r;
	{
		py::gil_scoped_release release;
		r = run_command(c, spec, o);
	}
	py::dict out;
	out["pass"] = r.pass;
	out["text"] = r.text;
	out["report"] = to_python(r.json);
	return out;
}

}  // namespace

PYBIND11_MODULE(cartan, m)
{
	m.doc() = "Prolongation structures of evolution equations";
	m.attr("SCHEMA_VERSION") = kSchemaVersion;

	py::register_exception<SpecError>(m, "SpecError", PyExc_ValueError);
	py::register_exception<InputError>(m, "InputError", PyExc_ValueError);

	m.def("run", &run, py::arg("command"), py::arg("spec"), py::kw_only(), py::arg("max_degree") = py::none(),
	      py::arg("holonomy_level") = py::none(), py::arg("series_order") = py::none(), py::arg("rep_dim") = py::none(),
	      py::arg("seed") = 1u,
	      "Run a command ('pipeline', 'prolong solve', ...) on spec text; returns {'pass', 'text', 'report'}.");
	m.def(
	    "check_spec", [](const std::string& text) { return render_spec(parse_spec(text)); }, py::arg("spec"),
	    "Parse spec text and return its canonical rendering.");
	m.def(
	    "normalize_poly", [](const std::string& s) { return to_string(parse_poly(s)); }, py::arg("text"));
	m.def(
	    "normalize_lie", [](const std::string& s) { return to_string(parse_lie(s)); }, py::arg("text"));
	m.def(
	    "bracket", [](const std::string& a, const std::string& b) { return to_string(bracket(parse_lie(a), parse_lie(b))); },
	    py::arg("a"), py::arg("b"));
	m.def(
	    "d", [](const std::string& s) { return to_string(exterior_derivative(parse_form(s))); }, py::arg("form"),
	    "Exterior derivative of a form given as text.");
	m.def(
	    "wedge",
	    [](const std::string& a, const std::string& b) { return to_string(wedge(parse_form(a), parse_form(b))); },
	    py::arg("a"), py::arg("b"));
}
