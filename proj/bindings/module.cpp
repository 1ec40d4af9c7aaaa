#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "cbd/chsh.hpp"
#include "cbd/coupling.hpp"
#include "cbd/errors.hpp"
#include "cbd/io.hpp"
#include "cbd/oracle.hpp"
#include "cbd/system.hpp"

namespace py = pybind11;

namespace {

using namespace cbd;

// Rationals cross the boundary as canonical strings; the python wrapper turns
// them into fractions.Fraction.
py::dict coupling_dict(const Coupling& coupling) {
    py::list variables;
    for (const auto& v : coupling.variables) {
        variables.append(py::make_tuple(v.content, v.context));
    }
    py::dict atoms;
    for (std::size_t a = 0; a < coupling.atoms.size(); ++a) {
        if (coupling.atoms[a] != 0) {
            atoms[py::str(atom_outcome_string(a, coupling.variables.size()))] =
                to_string(coupling.atoms[a]);
        }
    }
    py::dict d;
    d["variables"] = std::move(variables);
    d["atoms"] = std::move(atoms);
    return d;
}

py::dict connection_dict(const Connection& conn) {
    py::dict d;
    d["content"] = conn.content;
    d["contexts"] = py::make_tuple(conn.context_a, conn.context_b);
    d["p_a"] = to_string(conn.p_a);
    d["p_b"] = to_string(conn.p_b);
    return d;
}

py::dict dist_dict(const ContextDistribution& dist) {
    py::dict probs;
    for (std::size_t atom = 0; atom < dist.probs.size(); ++atom) {
        if (dist.probs[atom] != 0) {
            probs[py::str(atom_outcome_string(atom, dist.arity()))] = to_string(dist.probs[atom]);
        }
    }
    py::dict d;
    d["id"] = dist.context;
    d["contents"] = dist.contents;
    d["probabilities"] = std::move(probs);
    return d;
}

const ContextDistribution& context_or_throw(const System& system, const std::string& label) {
    const ContextDistribution* ctx = system.find_context(label);
    if (!ctx) throw Error(Errc::UnknownContent, "no context labeled '" + label + "'");
    return *ctx;
}

AbTable table_from_tuple(const py::tuple& t, const std::string& label) {
    if (t.size() != 3) {
        throw Error(Errc::InvalidTable, "context '" + label + "' needs (p, q, r)");
    }
    return {parse_rational(t[0].cast<std::string>()), parse_rational(t[1].cast<std::string>()),
            parse_rational(t[2].cast<std::string>())};
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Contextuality-by-Default analysis core";

    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            PyErr_SetString(PyExc_ValueError, e.what());
        }
    });

    py::class_<System>(m, "System")
        .def("__eq__", [](const System& a, const System& b) { return a == b; })
        .def("__repr__", [](const System& s) {
            return "<System: " + std::to_string(s.contexts().size()) + " contexts, " +
                   std::to_string(s.contents().size()) + " contents>";
        });

    m.def("parse_system", [](const std::string& text) { return parse_system(text); });
    m.def("serialize_system", [](const System& s) { return serialize_system(s); });
    m.def("contexts", [](const System& s) {
        py::list out;
        for (const auto& ctx : s.contexts()) out.append(dist_dict(ctx));
        return out;
    });
    m.def("contents", [](const System& s) { return s.contents(); });

    m.def("pr_box", &pr_box);
    m.def("trivial_system", &trivial_system);
    m.def("perturbed_pr_box",
          [](const std::string& eps) { return perturbed_pr_box(parse_rational(eps)); });
    m.def("perturbed_trivial",
          [](const std::string& eps) { return perturbed_trivial(parse_rational(eps)); });
    m.def("make_ab_system", [](const py::dict& tables) {
        AbParams params;
        const std::pair<const char*, AbTable*> slots[] = {{"11", &params.ctx11},
                                                          {"12", &params.ctx12},
                                                          {"21", &params.ctx21},
                                                          {"22", &params.ctx22}};
        for (auto& [label, field] : slots) {
            if (!tables.contains(label)) {
                throw Error(Errc::InvalidTable, std::string("missing context '") + label + "'");
            }
            *field = table_from_tuple(tables[label].cast<py::tuple>(), label);
        }
        return make_ab_system(params);
    });

    m.def("connections", [](const System& s) {
        py::list out;
        for (const auto& conn : connections(s)) out.append(connection_dict(conn));
        return out;
    });

    m.def("is_consistently_connected", [](const System& s) {
        auto report = is_consistently_connected(s);
        py::list checks;
        for (const auto& check : report.checks) {
            py::dict d = connection_dict(check.connection);
            d["delta"] = to_string(check.delta);
            checks.append(std::move(d));
        }
        py::dict out;
        out["consistent"] = report.consistent;
        out["checks"] = std::move(checks);
        return out;
    });

    m.def(
        "marginal",
        [](const System& s, const std::string& context, const std::vector<std::string>& subset) {
            ContextDistribution result = marginal(context_or_throw(s, context), subset);
            py::dict probs;
            for (std::size_t atom = 0; atom < result.probs.size(); ++atom) {
                probs[py::str(atom_outcome_string(atom, result.arity()))] =
                    to_string(result.probs[atom]);
            }
            return probs;
        },
        py::arg("system"), py::arg("context"), py::arg("subset"));

    m.def("canonical_sample_space", [](const System& s, const std::string& context) {
        SampleSpace space = canonical_sample_space(context_or_throw(s, context));
        py::list points;
        for (std::size_t pt = 0; pt < space.points.size(); ++pt) {
            py::dict p;
            p["point"] = space.points[pt];
            p["mass"] = to_string(space.mass[pt]);
            py::dict values;
            for (std::size_t v = 0; v < space.variables.size(); ++v) {
                values[py::str(space.variables[v])] = space.values[v][pt];
            }
            p["values"] = std::move(values);
            points.append(std::move(p));
        }
        py::dict out;
        out["context"] = space.context;
        out["points"] = std::move(points);
        return out;
    });

    m.def(
        "analyze",
        [](const System& s, std::size_t max_vars) {
            CbdReport report = analyze(s, max_vars);
            py::list conns, omegas, omega_primes;
            for (const auto& c : report.connections) conns.append(connection_dict(c));
            for (const auto& w : report.omegas) omegas.append(to_string(w));
            for (const auto& w : report.omega_primes) omega_primes.append(to_string(w));
            py::dict out;
            out["connections"] = std::move(conns);
            out["omegas"] = std::move(omegas);
            out["omega_primes"] = std::move(omega_primes);
            out["cntx"] = to_string(report.cntx);
            out["contextual"] = report.contextual;
            out["witness"] = coupling_dict(report.witness);
            return out;
        },
        py::arg("system"), py::arg("max_vars") = kDefaultMaxVars);

    m.def("chsh", [](const System& s) {
        ChshReport report = chsh(s);
        py::list exps;
        for (const auto& e : report.expectations) exps.append(to_string(e));
        py::dict out;
        out["contexts"] = report.contexts;
        out["expectations"] = std::move(exps);
        out["s_value"] = to_string(report.s_value);
        out["contextual"] = report.contextual;
        return out;
    });

    m.def("maximal_coupling", [](const std::string& p, const std::string& q) {
        PairCoupling pc = maximal_coupling(parse_rational(p), parse_rational(q));
        py::list table;
        for (const auto& row : pc.table) {
            table.append(py::make_tuple(to_string(row[0]), to_string(row[1])));
        }
        py::dict out;
        out["table"] = std::move(table);
        out["equality_prob"] = to_string(pc.equality_prob);
        return out;
    });

    m.def(
        "product_coupling",
        [](const System& s, std::size_t max_vars) { return coupling_dict(product_coupling(s, max_vars)); },
        py::arg("system"), py::arg("max_vars") = kDefaultMaxVars);

    m.def(
        "reduced_coupling_feasible",
        [](const System& s, std::size_t max_vars) {
            ReducedCoupling rc = reduced_coupling_feasible(s, max_vars);
            py::dict atoms;
            for (std::size_t a = 0; a < rc.atoms.size(); ++a) {
                if (rc.atoms[a] != 0) {
                    atoms[py::str(atom_outcome_string(a, rc.contents.size()))] = to_string(rc.atoms[a]);
                }
            }
            py::dict out;
            out["feasible"] = rc.feasible;
            out["contents"] = rc.contents;
            out["atoms"] = std::move(atoms);
            return out;
        },
        py::arg("system"), py::arg("max_vars") = kDefaultMaxVars);

    m.def("pair_coupling_bruteforce", [](const std::string& p, const std::string& q,
                                         unsigned long denominator) {
        return to_string(pair_coupling_bruteforce(parse_rational(p), parse_rational(q), denominator));
    });

    m.def("deterministic_mixture_feasible",
          [](const System& s) { return deterministic_mixture_feasible(s); });

    m.def(
        "grid_search_omega",
        [](const System& s, unsigned long denominator, std::size_t max_vars) {
            GridSearchResult result = grid_search_omega(s, denominator, max_vars);
            py::dict out;
            out["best_objective"] = to_string(result.best_objective);
            out["best_coupling"] = coupling_dict(result.best_coupling);
            out["denominator"] = result.denominator;
            return out;
        },
        py::arg("system"), py::arg("denominator"), py::arg("max_vars") = kDefaultMaxVars);

    m.def(
        "simulate",
        [](const System& s, std::size_t samples, std::uint64_t seed) {
            return simulate_system(s, samples, seed);
        },
        py::arg("system"), py::arg("samples"), py::arg("seed"));
}
