#include "bltab/degree.hpp"
#include "bltab/error.hpp"
#include "bltab/formula.hpp"
#include "bltab/kset.hpp"
#include "bltab/model.hpp"
#include "bltab/solver.hpp"
#include "bltab/tableau.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace py = pybind11;
using namespace bltab;

namespace {

std::vector<FormulaPtr> parse_all(const std::vector<std::string>& texts) {
    std::vector<FormulaPtr> out;
    out.reserve(texts.size());
    for (const auto& t : texts) out.push_back(parse_formula(t));
    return out;
}

ExploreConfig make_config(const std::string& backend, const std::string& smt_cmd,
                          std::uint64_t timeout_ms, long grid_denominator, bool prune,
                          std::uint64_t max_nodes) {
    ExploreConfig ec;
    if (backend == "smt")
        ec.solver.backend = Backend::Smt;
    else if (backend == "grid")
        ec.solver.backend = Backend::Grid;
    else
        throw std::invalid_argument("backend must be 'smt' or 'grid'");
    ec.solver.smt_cmd = smt_cmd;
    ec.solver.timeout_ms = timeout_ms;
    ec.solver.grid_denominator = grid_denominator;
    ec.prune = prune;
    ec.max_nodes = max_nodes;
    return ec;
}

py::dict model_to_dict(const ExtractedModel& m) {
    py::dict d;
    py::list comps;
    for (const auto& c : m.tnorm.components) {
        py::dict cd;
        cd["lo"] = rat_to_string(c.lo);
        cd["hi"] = rat_to_string(c.hi);
        cd["kind"] = std::string(c.kind == CompKind::Lukasiewicz ? "L" : "P");
        comps.append(cd);
    }
    d["components"] = comps;
    py::dict val;
    for (const auto& [atom, value] : m.valuation) val[py::str(atom)] = rat_to_string(value);
    d["valuation"] = val;
    d["exact"] = m.exact;
    if (!m.exact) d["precision"] = rat_to_string(m.precision);
    return d;
}

ExtractedModel model_from_dict(const py::dict& d) {
    ExtractedModel m;
    std::vector<Component> comps;
    if (d.contains("components")) {
        for (auto item : d["components"]) {
            py::dict cd = py::cast<py::dict>(item);
            Component c;
            c.lo = rat_from_string(py::cast<std::string>(cd["lo"]));
            c.hi = rat_from_string(py::cast<std::string>(cd["hi"]));
            std::string kind = py::cast<std::string>(cd["kind"]);
            if (kind == "L")
                c.kind = CompKind::Lukasiewicz;
            else if (kind == "P")
                c.kind = CompKind::Product;
            else
                throw std::invalid_argument("component kind must be 'L' or 'P'");
            comps.push_back(c);
        }
    }
    m.tnorm = make_ordinal_sum(std::move(comps));
    if (d.contains("valuation")) {
        py::dict val = py::cast<py::dict>(d["valuation"]);
        for (auto item : val)
            m.valuation[py::cast<std::string>(item.first)] =
                rat_from_string(py::cast<std::string>(item.second));
    }
    if (d.contains("exact")) m.exact = py::cast<bool>(d["exact"]);
    if (d.contains("precision")) m.precision = rat_from_string(py::cast<std::string>(d["precision"]));
    return m;
}

py::dict verdict_to_dict(const Verdict& v, const ExploreStats& st) {
    py::dict out;
    switch (v.status) {
        case VerdictStatus::Satisfiable: out["verdict"] = "sat"; break;
        case VerdictStatus::Unsatisfiable: out["verdict"] = "unsat"; break;
        default: out["verdict"] = "unknown"; break;
    }
    out["model"] = v.model ? py::object(model_to_dict(*v.model)) : py::object(py::none());
    out["diagnostics"] = v.undecided;
    py::dict stats;
    stats["nodes"] = st.nodes;
    stats["leaves"] = st.leaves;
    stats["solver_calls"] = st.solver_calls;
    out["stats"] = stats;
    return out;
}

py::dict py_solve(const std::vector<std::string>& formulas, const std::string& k,
                  const std::string& backend, const std::string& smt_cmd,
                  std::uint64_t timeout_ms, long grid_denominator, bool prune,
                  std::uint64_t max_nodes) {
    std::vector<FormulaPtr> psis = parse_all(formulas);
    KSet kset = parse_kset(k);
    ExploreConfig ec =
        make_config(backend, smt_cmd, timeout_ms, grid_denominator, prune, max_nodes);
    ExploreStats stats;
    Verdict v = explore(psis, kset, ec, &stats);
    return verdict_to_dict(v, stats);
}

py::dict py_degree(const std::vector<std::string>& formulas, const std::string& mode,
                   const std::string& tol, const std::string& backend, const std::string& smt_cmd,
                   std::uint64_t timeout_ms, long grid_denominator, bool prune,
                   std::uint64_t max_nodes) {
    std::vector<FormulaPtr> psis = parse_all(formulas);
    DegreeMode m;
    if (mode == "weak")
        m = DegreeMode::Weak;
    else if (mode == "strong")
        m = DegreeMode::Strong;
    else
        throw std::invalid_argument("mode must be 'weak' or 'strong'");
    ExploreConfig ec =
        make_config(backend, smt_cmd, timeout_ms, grid_denominator, prune, max_nodes);
    ExploreStats stats;
    ec.stats = &stats;
    DegreeBracket b = consistency_degree(psis, m, rat_from_string(tol), ec);
    py::dict out;
    out["lo"] = rat_to_string(b.lo);
    out["hi"] = rat_to_string(b.hi);
    switch (b.attained) {
        case Attained::Yes: out["attained"] = "yes"; break;
        case Attained::No: out["attained"] = "no"; break;
        default: out["attained"] = "unknown"; break;
    }
    out["complete"] = b.complete;
    out["note"] = b.note;
    py::dict st;
    st["nodes"] = stats.nodes;
    st["leaves"] = stats.leaves;
    st["solver_calls"] = stats.solver_calls;
    out["stats"] = st;
    return out;
}

}  // namespace

PYBIND11_MODULE(_bltab, mod) {
    mod.doc() = "Tableau-based K-satisfiability solver for propositional fuzzy logic "
                "with Delta and involutive negation";

    py::register_exception<ParseError>(mod, "FormulaParseError", PyExc_ValueError);
    py::register_exception<InternalError>(mod, "InternalSolverError", PyExc_RuntimeError);

    mod.def("parse_formula", [](const std::string& text) { return render_formula(parse_formula(text)); },
            py::arg("text"),
            "Parse a formula and return its canonical rendering; raises ValueError with "
            "the offending position on bad input.");

    mod.def("parse_kset", [](const std::string& text) { return render_kset(parse_kset(text)); },
            py::arg("text"),
            "Parse a truth-value set and return its canonical rendering.");

    mod.def("evaluate",
            [](const std::string& formula, const py::dict& model) {
                ExtractedModel m = model_from_dict(model);
                return rat_to_string(evaluate(parse_formula(formula), m));
            },
            py::arg("formula"), py::arg("model"),
            "Evaluate a formula in a model given as {'components': [{'lo','hi','kind'}], "
            "'valuation': {atom: rational-string}}; returns the value as a rational string.");

    mod.def("verify",
            [](const std::vector<std::string>& formulas, const std::string& k,
               const py::dict& model) {
                ExtractedModel m = model_from_dict(model);
                std::string why;
                bool ok = verify_model(parse_all(formulas), parse_kset(k), m, &why);
                return py::make_tuple(ok, why);
            },
            py::arg("formulas"), py::arg("k"), py::arg("model"),
            "Check that every formula evaluates into K under the model; returns "
            "(ok, reason-when-not).");

    mod.def("solve", &py_solve, py::arg("formulas"), py::arg("k"), py::arg("backend") = "grid",
            py::arg("smt_cmd") = "", py::arg("timeout_ms") = std::uint64_t{10000},
            py::arg("grid_denominator") = 4L, py::arg("prune") = false,
            py::arg("max_nodes") = std::uint64_t{200000},
            "Decide K-satisfiability; returns {'verdict', 'model', 'diagnostics', 'stats'}.");

    mod.def("consistency_degree", &py_degree, py::arg("formulas"), py::arg("mode") = "weak",
            py::arg("tol") = "1/16", py::arg("backend") = "grid", py::arg("smt_cmd") = "",
            py::arg("timeout_ms") = std::uint64_t{10000}, py::arg("grid_denominator") = 4L,
            py::arg("prune") = false, py::arg("max_nodes") = std::uint64_t{200000},
            "Bracket the weak or strong consistency degree to within tol; returns "
            "{'lo', 'hi', 'attained', 'complete', 'note', 'stats'}.");

    mod.attr("__version__") = "0.1.0";
}
