#include "cbd/io.hpp"

#include <filesystem>
#include <fstream>
#include <ostream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "cbd/chsh.hpp"
#include "cbd/errors.hpp"

namespace cbd {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

json parse_json_strict(const std::string& text) {
    // nlohmann keeps the last duplicate silently, so duplicates are caught
    // with a parser callback tracking the open objects.
    std::vector<std::set<std::string>> open_objects;
    auto callback = [&](int, json::parse_event_t event, json& parsed) {
        if (event == json::parse_event_t::object_start) {
            open_objects.emplace_back();
        } else if (event == json::parse_event_t::object_end) {
            open_objects.pop_back();
        } else if (event == json::parse_event_t::key) {
            if (!open_objects.back().insert(parsed.get<std::string>()).second) {
                throw Error(Errc::ParseError,
                            "duplicate key '" + parsed.get<std::string>() + "'");
            }
        }
        return true;
    };
    try {
        return json::parse(text, callback);
    } catch (const json::exception& e) {
        throw Error(Errc::ParseError, e.what());
    }
}

void check_keys(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
    for (const auto& item : obj.items()) {
        if (!allowed.count(item.key())) {
            throw Error(Errc::ParseError, "unexpected key '" + item.key() + "' in " + where);
        }
    }
}

const json& require_key(const json& obj, const char* key, const std::string& where) {
    auto it = obj.find(key);
    if (it == obj.end()) {
        throw Error(Errc::ParseError, "missing key '" + std::string(key) + "' in " + where);
    }
    return *it;
}

Rat json_rational(const json& value, const std::string& where) {
    if (value.is_string()) return parse_rational(value.get<std::string>());
    if (value.is_number_integer() && !value.is_number_float()) {
        return parse_rational(value.dump());
    }
    throw Error(Errc::ParseError,
                "probability in " + where + " must be a rational string like \"1/2\"");
}

}  // namespace

System parse_system(const std::string& text) {
    json root = parse_json_strict(text);
    if (!root.is_object()) throw Error(Errc::ParseError, "top level must be an object");
    check_keys(root, {"contexts"}, "top level");
    const json& ctxs = require_key(root, "contexts", "top level");
    if (!ctxs.is_array()) throw Error(Errc::ParseError, "'contexts' must be an array");

    std::vector<ContextDistribution> contexts;
    for (const json& entry : ctxs) {
        if (!entry.is_object()) throw Error(Errc::ParseError, "each context must be an object");
        check_keys(entry, {"id", "contents", "probabilities"}, "context");
        const json& id = require_key(entry, "id", "context");
        if (!id.is_string()) throw Error(Errc::ParseError, "context 'id' must be a string");
        std::string where = "context '" + id.get<std::string>() + "'";

        ContextDistribution dist;
        dist.context = id.get<std::string>();
        const json& contents = require_key(entry, "contents", where);
        if (!contents.is_array()) throw Error(Errc::ParseError, where + ": 'contents' must be an array");
        for (const json& c : contents) {
            if (!c.is_string()) throw Error(Errc::ParseError, where + ": contents must be strings");
            dist.contents.push_back(c.get<std::string>());
        }

        std::size_t k = dist.contents.size();
        if (k > 20) {
            throw Error(Errc::SystemTooLarge, where + " holds " + std::to_string(k) +
                                                  " contents; 2^k outcomes would not fit");
        }
        if (k == 0) throw Error(Errc::WrongArity, where + " lists no contents");
        dist.probs.assign(std::size_t(1) << k, Rat(0));

        const json& probs = require_key(entry, "probabilities", where);
        if (!probs.is_object()) {
            throw Error(Errc::ParseError, where + ": 'probabilities' must be an object");
        }
        for (const auto& item : probs.items()) {
            const std::string& outcome = item.key();
            if (outcome.size() != k) {
                throw Error(Errc::ParseError, where + ": outcome '" + outcome + "' must have " +
                                                  std::to_string(k) + " characters");
            }
            dist.probs[outcome_string_atom(outcome)] =
                json_rational(item.value(), where + " outcome '" + outcome + "'");
        }
        contexts.push_back(std::move(dist));
    }
    return validate_system(std::move(contexts));
}

std::string serialize_system(const System& system) {
    ordered_json root;
    root["contexts"] = ordered_json::array();
    for (const auto& ctx : system.contexts()) {
        ordered_json entry;
        entry["id"] = ctx.context;
        entry["contents"] = ctx.contents;
        ordered_json probs = ordered_json::object();
        for (std::size_t atom = 0; atom < ctx.probs.size(); ++atom) {
            if (ctx.probs[atom] != 0) {
                probs[atom_outcome_string(atom, ctx.arity())] = to_string(ctx.probs[atom]);
            }
        }
        entry["probabilities"] = std::move(probs);
        root["contexts"].push_back(std::move(entry));
    }
    return root.dump(2) + "\n";
}

ContextDistribution sample_context(const ContextDistribution& dist, std::size_t n,
                                   std::mt19937_64& rng) {
    if (n == 0) throw std::invalid_argument("sample_context: need at least one draw");
    std::vector<Rat> cumulative;
    Rat running(0);
    for (const auto& p : dist.probs) {
        running += p;
        cumulative.push_back(running);
    }

    static const mpz_class kTwo64 = mpz_class(1) << 64;
    std::vector<unsigned long> counts(dist.probs.size(), 0);
    for (std::size_t i = 0; i < n; ++i) {
        Rat u(mpz_class(rng()), kTwo64);
        u.canonicalize();
        std::size_t atom = 0;
        while (u >= cumulative[atom]) ++atom;
        ++counts[atom];
    }

    ContextDistribution out;
    out.context = dist.context;
    out.contents = dist.contents;
    for (auto c : counts) {
        Rat p(c, static_cast<unsigned long>(n));
        p.canonicalize();
        out.probs.push_back(std::move(p));
    }
    return out;
}

System simulate_system(const System& system, std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<ContextDistribution> sampled;
    for (const auto& ctx : system.contexts()) sampled.push_back(sample_context(ctx, n, rng));
    return validate_system(std::move(sampled));
}

namespace {

ordered_json connection_json(const Connection& conn, const Rat& omega, const Rat& omega_prime) {
    ordered_json j;
    j["content"] = conn.content;
    j["contexts"] = {conn.context_a, conn.context_b};
    j["p_a"] = to_string(conn.p_a);
    j["p_b"] = to_string(conn.p_b);
    j["omega"] = to_string(omega);
    j["omega_prime"] = to_string(omega_prime);
    return j;
}

ordered_json chsh_json(const ChshReport& report) {
    ordered_json j;
    j["contexts"] = report.contexts;
    ordered_json exps = ordered_json::array();
    for (const auto& e : report.expectations) exps.push_back(to_string(e));
    j["expectations"] = std::move(exps);
    j["s_value"] = to_string(report.s_value);
    j["contextual"] = report.contextual;
    return j;
}

ordered_json analysis_json(const System& system, const CbdReport& report) {
    ordered_json j;
    j["consistent"] = is_consistently_connected(system).consistent;
    ordered_json conns = ordered_json::array();
    for (std::size_t i = 0; i < report.connections.size(); ++i) {
        conns.push_back(
            connection_json(report.connections[i], report.omegas[i], report.omega_primes.empty()
                                                                         ? Rat(0)
                                                                         : report.omega_primes[i]));
    }
    j["connections"] = std::move(conns);
    j["cntx"] = to_string(report.cntx);
    j["contextual"] = report.contextual;
    try {
        j["chsh"] = chsh_json(chsh(system));
    } catch (const Error&) {
        // not a consistently connected rank-4 cycle; no closed form applies
    }
    return j;
}

void analysis_text(std::ostream& out, const System& system, const CbdReport& report) {
    auto consistency = is_consistently_connected(system);
    out << "contexts: " << system.contexts().size() << ", contents: " << system.contents().size()
        << ", connections: " << report.connections.size() << "\n";
    out << "consistent: " << (consistency.consistent ? "yes" : "no") << "\n";
    for (std::size_t i = 0; i < report.connections.size(); ++i) {
        const auto& conn = report.connections[i];
        out << "connection " << conn.content << " [" << conn.context_a << ", " << conn.context_b
            << "]: p_a = " << to_string(conn.p_a) << ", p_b = " << to_string(conn.p_b)
            << ", omega = " << to_string(report.omegas[i]);
        if (!report.omega_primes.empty()) {
            out << ", omega' = " << to_string(report.omega_primes[i]);
        }
        out << "\n";
    }
    out << "CNTX = " << to_string(report.cntx) << "\n";
    out << "verdict: " << (report.contextual ? "CONTEXTUAL" : "NONCONTEXTUAL") << "\n";
    try {
        auto ch = chsh(system);
        out << "CHSH: s = " << to_string(ch.s_value) << " ("
            << (ch.contextual ? "contextual" : "noncontextual") << ")\n";
    } catch (const Error&) {
    }
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(Errc::ParseError, "cannot read '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

int run_validate(const RunConfig& config, std::ostream& out) {
    System system = parse_system(read_file(config.input_path));
    auto consistency = is_consistently_connected(system);
    auto conns = connections(system);
    if (config.format == "json") {
        ordered_json j;
        j["valid"] = true;
        j["contexts"] = system.contexts().size();
        j["contents"] = system.contents().size();
        j["connections"] = conns.size();
        j["consistent"] = consistency.consistent;
        out << j.dump(2) << "\n";
    } else {
        out << "valid system: " << system.contexts().size() << " contexts, "
            << system.contents().size() << " contents, " << conns.size() << " connections\n";
        out << "consistent: " << (consistency.consistent ? "yes" : "no") << "\n";
        for (const auto& check : consistency.checks) {
            if (check.delta == 0) continue;
            out << "  " << check.connection.content << " [" << check.connection.context_a << ", "
                << check.connection.context_b << "]: p_a = " << to_string(check.connection.p_a)
                << ", p_b = " << to_string(check.connection.p_b)
                << ", delta = " << to_string(check.delta) << "\n";
        }
    }
    return 0;
}

int run_analyze(const RunConfig& config, std::ostream& out) {
    System system = parse_system(read_file(config.input_path));
    CbdReport report = analyze(system, config.max_vars);
    if (config.format == "json") {
        out << analysis_json(system, report).dump(2) << "\n";
    } else {
        analysis_text(out, system, report);
    }
    return 0;
}

int run_chsh(const RunConfig& config, std::ostream& out) {
    System system = parse_system(read_file(config.input_path));
    ChshReport report = chsh(system);
    if (config.format == "json") {
        out << chsh_json(report).dump(2) << "\n";
    } else {
        for (std::size_t i = 0; i < report.contexts.size(); ++i) {
            out << "context " << report.contexts[i]
                << ": expectation = " << to_string(report.expectations[i]) << "\n";
        }
        out << "s = " << to_string(report.s_value) << "\n";
        out << "verdict: " << (report.contextual ? "CONTEXTUAL" : "NONCONTEXTUAL") << "\n";
    }
    return 0;
}

int run_sample_space(const RunConfig& config, std::ostream& out) {
    System system = parse_system(read_file(config.input_path));
    if (config.format == "json") {
        ordered_json spaces = ordered_json::array();
        for (const auto& ctx : system.contexts()) {
            if (ctx.arity() != 2) continue;
            SampleSpace space = canonical_sample_space(ctx);
            ordered_json entry;
            entry["context"] = space.context;
            ordered_json points = ordered_json::array();
            for (std::size_t pt = 0; pt < space.points.size(); ++pt) {
                ordered_json p;
                p["point"] = space.points[pt];
                p["mass"] = to_string(space.mass[pt]);
                ordered_json values;
                for (std::size_t v = 0; v < space.variables.size(); ++v) {
                    values[space.variables[v]] = space.values[v][pt];
                }
                p["values"] = std::move(values);
                points.push_back(std::move(p));
            }
            entry["points"] = std::move(points);
            spaces.push_back(std::move(entry));
        }
        ordered_json j;
        j["sample_spaces"] = std::move(spaces);
        out << j.dump(2) << "\n";
    } else {
        for (const auto& ctx : system.contexts()) {
            if (ctx.arity() != 2) {
                out << "context " << ctx.context << ": skipped (holds " << ctx.arity()
                    << " contents, canonical construction covers pairs)\n";
                continue;
            }
            SampleSpace space = canonical_sample_space(ctx);
            out << "context " << space.context << " (" << space.variables[0] << ", "
                << space.variables[1] << "):\n";
            for (std::size_t pt = 0; pt < space.points.size(); ++pt) {
                out << "  " << space.points[pt] << ": mass = " << to_string(space.mass[pt]);
                for (std::size_t v = 0; v < space.variables.size(); ++v) {
                    out << ", " << space.variables[v] << " = "
                        << (space.values[v][pt] > 0 ? "+1" : "-1");
                }
                out << "\n";
            }
        }
    }
    return 0;
}

int run_simulate(const RunConfig& config, std::ostream& out) {
    if (config.samples == 0) {
        throw Error(Errc::ParseError, "simulate requires --samples at least 1");
    }
    System system = parse_system(read_file(config.input_path));
    System empirical = simulate_system(system, config.samples, config.seed);
    CbdReport report = analyze(empirical, config.max_vars);
    if (config.format == "json") {
        ordered_json j;
        j["seed"] = config.seed;
        j["samples_per_context"] = config.samples;
        j["empirical_system"] = ordered_json::parse(serialize_system(empirical));
        j["analysis"] = analysis_json(empirical, report);
        out << j.dump(2) << "\n";
    } else {
        out << "seed = " << config.seed << ", samples per context = " << config.samples << "\n";
        out << "empirical system:\n";
        for (const auto& ctx : empirical.contexts()) {
            out << "  context " << ctx.context << ":";
            bool firstAtom = true;
            for (std::size_t atom = 0; atom < ctx.probs.size(); ++atom) {
                if (ctx.probs[atom] == 0) continue;
                out << (firstAtom ? " " : ", ") << atom_outcome_string(atom, ctx.arity()) << " = "
                    << to_string(ctx.probs[atom]);
                firstAtom = false;
            }
            out << "\n";
        }
        analysis_text(out, empirical, report);
    }
    return 0;
}

int run_fixtures(const RunConfig& config, std::ostream& out) {
    if (config.out_dir.empty()) {
        throw Error(Errc::ParseError, "fixtures requires --out <dir>");
    }
    Rat epsilon = parse_rational(config.epsilon);
    Fixtures all = fixtures(epsilon);

    std::filesystem::path dir(config.out_dir);
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw Error(Errc::ParseError, "cannot create '" + config.out_dir + "': " + ec.message());

    std::vector<std::pair<std::string, const System*>> files = {
        {"pr_box.json", &all.pr_box},
        {"trivial.json", &all.trivial},
        {"perturbed_pr_box.json", &all.perturbed_pr_box},
        {"perturbed_trivial.json", &all.perturbed_trivial},
    };
    std::vector<std::string> written;
    for (const auto& [name, system] : files) {
        std::filesystem::path path = dir / name;
        std::ofstream file(path);
        if (!file) throw Error(Errc::ParseError, "cannot write '" + path.string() + "'");
        file << serialize_system(*system);
        written.push_back(path.string());
    }
    if (config.format == "json") {
        ordered_json j;
        j["written"] = written;
        j["epsilon"] = to_string(epsilon);
        out << j.dump(2) << "\n";
    } else {
        for (const auto& path : written) out << "wrote " << path << "\n";
    }
    return 0;
}

}  // namespace

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
    try {
        if (config.command == "validate") return run_validate(config, out);
        if (config.command == "analyze") return run_analyze(config, out);
        if (config.command == "chsh") return run_chsh(config, out);
        if (config.command == "sample-space") return run_sample_space(config, out);
        if (config.command == "simulate") return run_simulate(config, out);
        if (config.command == "fixtures") return run_fixtures(config, out);
        err << "error: unknown command '" << config.command << "'\n";
        return 2;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return e.code() == Errc::ParseError ? 2 : 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace cbd
