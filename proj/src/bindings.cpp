#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "epostar/epo.hpp"
#include "epostar/epostar_order.hpp"
#include "epostar/parser.hpp"
#include "epostar/pipeline.hpp"
#include "epostar/rewrite.hpp"

namespace py = pybind11;
using namespace epostar;

namespace {

Strategy strategy_from(const std::string& name) {
    if (name == "innermost") return Strategy::Innermost;
    if (name == "full") return Strategy::Full;
    throw Error("strategy must be 'innermost' or 'full'");
}

Term parse_over(const Trs& trs, const std::string& text, const std::vector<std::string>& vars) {
    return parse_term(text, trs.signature(), std::set<std::string>(vars.begin(), vars.end()));
}

int default_k(const Trs& trs) { return std::max(trs.max_rhs_size(), 1); }

py::dict check_to_dict(const CheckReport& report) {
    py::dict out;
    out["compatible"] = report.all_oriented();
    out["constructor_trs"] = report.constructor_trs;
    out["issues"] = report.certificate_issues;
    py::list rules;
    for (const RuleVerdict& v : report.rules) {
        py::dict rule;
        rule["lhs"] = v.lhs;
        rule["rhs"] = v.rhs;
        rule["oriented"] = v.oriented;
        rule["trace"] = v.trace;
        rules.append(rule);
    }
    out["rules"] = rules;
    return out;
}

}  // namespace

PYBIND11_MODULE(_epostar, m) {
    m.doc() = "Exponential-path-order certificates for term rewrite systems";

    py::register_exception<Error>(m, "EpostarError");

    py::class_<Trs>(m, "Trs")
        .def_static("parse", [](const std::string& text) { return parse_trs(text); },
                    py::arg("text"))
        .def("render", &Trs::render)
        .def("is_constructor_trs", &Trs::is_constructor_trs)
        .def("max_rhs_size", &Trs::max_rhs_size)
        .def_property_readonly("num_rules",
                               [](const Trs& trs) { return trs.rules().size(); })
        .def_property_readonly("symbols",
                               [](const Trs& trs) {
                                   py::list out;
                                   for (SymbolId f : trs.signature().sorted_by_name()) {
                                       const FunctionSymbol& sym = trs.signature()[f];
                                       out.append(py::make_tuple(
                                           sym.name, sym.arity,
                                           sym.kind == SymbolKind::Defined ? "defined"
                                                                           : "constructor"));
                                   }
                                   return out;
                               })
        .def("__repr__", [](const Trs& trs) {
            return "<Trs with " + std::to_string(trs.rules().size()) + " rules>";
        });

    m.def("parse_trs", [](const std::string& text) { return parse_trs(text); }, py::arg("text"));

    m.def(
        "synthesize",
        [](const Trs& trs, const std::string& solver, double timeout) {
            SolverConfig config;
            config.timeout =
                std::chrono::milliseconds(static_cast<long>(std::max(timeout, 0.001) * 1000));
            if (!solver.empty() && solver != "builtin") config.external_path = solver;
            SynthResult result = synthesize(trs, config);
            py::dict out;
            switch (result.status) {
                case SynthResult::Status::Compatible: out["status"] = "compatible"; break;
                case SynthResult::Status::Incompatible: out["status"] = "incompatible"; break;
                case SynthResult::Status::Unknown: out["status"] = "unknown"; break;
            }
            if (result.certificate) out["certificate"] = result.certificate->to_json(trs);
            if (!result.detail.empty()) out["detail"] = result.detail;
            return out;
        },
        py::arg("trs"), py::arg("solver") = "builtin", py::arg("timeout") = 60.0);

    m.def(
        "check",
        [](const Trs& trs, const std::string& certificate_json) {
            Certificate cert = Certificate::from_json(certificate_json, trs);
            return check_to_dict(check_certificate(trs, cert));
        },
        py::arg("trs"), py::arg("certificate_json"));

    m.def("encode_dimacs", [](const Trs& trs) { return encode_to_dimacs(trs); }, py::arg("trs"));

    m.def(
        "derivation_height",
        [](const Trs& trs, const std::string& term, const std::string& strategy, long node_budget,
           long size_budget, bool bottom) {
            RewriteEngine engine(trs, bottom);
            Term start = parse_over(engine.trs(), term, {});
            DerivationRecord rec = engine.derivation_height(start, strategy_from(strategy),
                                                            SearchLimits{node_budget, size_budget});
            py::dict out;
            out["height"] = rec.height;
            out["truncated"] = rec.truncated;
            py::list steps;
            for (const Term& t : rec.witness) steps.append(t.render(engine.trs().signature()));
            out["witness"] = steps;
            return out;
        },
        py::arg("trs"), py::arg("term"), py::arg("strategy") = "innermost",
        py::arg("node_budget") = 1'000'000L, py::arg("size_budget") = 10'000L,
        py::arg("bottom") = false);

    m.def(
        "empirical_rc",
        [](const Trs& trs, int max_size, const std::string& strategy, long node_budget,
           long size_budget, bool bottom) {
            auto rows = empirical_rc(trs, max_size, strategy_from(strategy),
                                     SearchLimits{node_budget, size_budget}, bottom);
            RewriteEngine engine(trs, bottom);
            py::list out;
            for (const RcRow& row : rows) {
                py::dict line;
                line["n"] = row.size;
                line["height"] = row.height;
                line["witness"] =
                    row.witness
                        ? py::object(py::str(row.witness->render(engine.trs().signature())))
                        : py::object(py::none());
                line["truncated"] = row.truncated;
                out.append(line);
            }
            return out;
        },
        py::arg("trs"), py::arg("max_size"), py::arg("strategy") = "innermost",
        py::arg("node_budget") = 1'000'000L, py::arg("size_budget") = 10'000L,
        py::arg("bottom") = false);

    m.def("bottom_complete",
          [](const Trs& trs, int depth_cap) { return bottom_complete(trs, depth_cap); },
          py::arg("trs"), py::arg("depth_cap") = 1);

    m.def(
        "epostar_gt",
        [](const Trs& trs, const std::string& certificate_json, const std::string& lhs,
           const std::string& rhs, const std::vector<std::string>& vars) {
            Certificate cert = Certificate::from_json(certificate_json, trs);
            return epostar_gt(parse_over(trs, lhs, vars), parse_over(trs, rhs, vars), cert,
                              trs.signature());
        },
        py::arg("trs"), py::arg("certificate_json"), py::arg("lhs"), py::arg("rhs"),
        py::arg("vars") = std::vector<std::string>{"x", "y", "z"});

    m.def(
        "epo_gt",
        [](const Trs& trs, const std::string& certificate_json,
           const std::vector<std::string>& lhs, const std::vector<std::string>& rhs,
           std::optional<int> k, const std::vector<std::string>& vars) {
            Certificate cert = Certificate::from_json(certificate_json, trs);
            TermSequence a, b;
            for (const std::string& t : lhs) a.push_back(parse_over(trs, t, vars));
            for (const std::string& t : rhs) b.push_back(parse_over(trs, t, vars));
            EpoOrder order(trs.signature(), cert.precedence, k.value_or(default_k(trs)));
            return order.gt(a, b);
        },
        py::arg("trs"), py::arg("certificate_json"), py::arg("lhs"), py::arg("rhs"),
        py::arg("k") = py::none(), py::arg("vars") = std::vector<std::string>{"x", "y", "z"});

    m.def(
        "slow_value",
        [](const Trs& trs, const std::string& certificate_json,
           const std::vector<std::string>& terms, std::optional<int> k) {
            Certificate cert = Certificate::from_json(certificate_json, trs);
            TermSequence a;
            for (const std::string& t : terms) a.push_back(parse_over(trs, t, {}));
            SlowMeasure slow(trs.signature(), cert.precedence, k.value_or(default_k(trs)));
            return slow.value(a);
        },
        py::arg("trs"), py::arg("certificate_json"), py::arg("terms"), py::arg("k") = py::none());
}
