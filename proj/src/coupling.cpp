#include "cbd/coupling.hpp"

#include <algorithm>
#include <map>

#include "cbd/errors.hpp"

namespace cbd {

PairCoupling maximal_coupling(const Rat& p, const Rat& q) {
    if (!in_unit_interval(p) || !in_unit_interval(q)) {
        throw std::invalid_argument("maximal_coupling: margins must lie in [0,1]");
    }
    Rat lo = std::min(p, q);
    PairCoupling pc;
    pc.table[0][0] = lo;
    pc.table[0][1] = p - lo;
    pc.table[1][0] = q - lo;
    pc.table[1][1] = 1 - p - q + lo;
    pc.equality_prob = 1 - rat_abs(p - q);
    return pc;
}

std::vector<VariableRef> coupling_variables(const System& system) {
    std::vector<VariableRef> vars;
    for (const auto& ctx : system.contexts()) {
        for (const auto& content : ctx.contents) vars.push_back({content, ctx.context});
    }
    return vars;
}

std::vector<Rat> omega_vector(const System& system) {
    std::vector<Rat> omegas;
    for (const auto& conn : connections(system)) {
        omegas.push_back(1 - rat_abs(conn.p_a - conn.p_b));
    }
    return omegas;
}

namespace {

std::size_t variable_position(const std::vector<VariableRef>& vars, const std::string& content,
                              const std::string& context) {
    for (std::size_t i = 0; i < vars.size(); ++i) {
        if (vars[i].content == content && vars[i].context == context) return i;
    }
    throw Error(Errc::UnknownContent, "variable (" + content + ", " + context + ") not in coupling");
}

void check_size_guard(std::size_t total_vars, std::size_t max_vars) {
    if (total_vars > max_vars) {
        throw Error(Errc::SystemTooLarge, "system has " + std::to_string(total_vars) +
                                              " variables, guard is " + std::to_string(max_vars) +
                                              " (2^n coupling atoms)");
    }
}

std::size_t atom_cap(std::size_t num_atoms) {
    return std::max(num_atoms, kDefaultColumnCap);
}

}  // namespace

LinearProgram build_coupling_lp(const System& system, std::size_t max_vars) {
    std::size_t n = system.total_variables();
    check_size_guard(n, max_vars);
    std::size_t num_atoms = std::size_t(1) << n;

    LinearProgram lp;
    lp.num_vars = num_atoms;
    lp.objective.assign(num_atoms, Rat(0));

    // One equality row per context outcome; the row sums atoms whose bits at
    // the context's variable block match that outcome.
    std::size_t offset = 0;
    for (const auto& ctx : system.contexts()) {
        std::size_t k = ctx.arity();
        std::size_t base = lp.constraints.size();
        for (std::size_t t = 0; t < ctx.probs.size(); ++t) {
            Constraint c;
            c.coeffs.assign(num_atoms, Rat(0));
            c.rel = Relation::Eq;
            c.rhs = ctx.probs[t];
            lp.constraints.push_back(std::move(c));
        }
        std::size_t shift = n - offset - k;
        std::size_t mask = (std::size_t(1) << k) - 1;
        for (std::size_t a = 0; a < num_atoms; ++a) {
            lp.constraints[base + ((a >> shift) & mask)].coeffs[a] = 1;
        }
        offset += k;
    }

    auto vars = coupling_variables(system);
    for (const auto& conn : connections(system)) {
        std::size_t i = variable_position(vars, conn.content, conn.context_a);
        std::size_t j = variable_position(vars, conn.content, conn.context_b);
        for (std::size_t a = 0; a < num_atoms; ++a) {
            if (((a >> (n - 1 - i)) & 1u) == ((a >> (n - 1 - j)) & 1u)) lp.objective[a] += 1;
        }
    }
    return lp;
}

Coupling product_coupling(const System& system, std::size_t max_vars) {
    std::size_t n = system.total_variables();
    check_size_guard(n, max_vars);
    std::size_t num_atoms = std::size_t(1) << n;

    Coupling coupling;
    coupling.variables = coupling_variables(system);
    coupling.atoms.assign(num_atoms, Rat(1));
    std::size_t offset = 0;
    for (const auto& ctx : system.contexts()) {
        std::size_t k = ctx.arity();
        std::size_t shift = n - offset - k;
        std::size_t mask = (std::size_t(1) << k) - 1;
        for (std::size_t a = 0; a < num_atoms; ++a) {
            const Rat& f = ctx.probs[(a >> shift) & mask];
            if (coupling.atoms[a] == 0) continue;
            if (f == 0) {
                coupling.atoms[a] = 0;
            } else if (f != 1) {
                coupling.atoms[a] *= f;
            }
        }
        offset += k;
    }
    return coupling;
}

Rat equality_probability(const Coupling& coupling, const Connection& conn) {
    std::size_t n = coupling.variables.size();
    std::size_t i = variable_position(coupling.variables, conn.content, conn.context_a);
    std::size_t j = variable_position(coupling.variables, conn.content, conn.context_b);
    Rat total(0);
    for (std::size_t a = 0; a < coupling.atoms.size(); ++a) {
        if (((a >> (n - 1 - i)) & 1u) == ((a >> (n - 1 - j)) & 1u)) total += coupling.atoms[a];
    }
    return total;
}

ContextDistribution coupling_marginal(const Coupling& coupling, const ContextDistribution& ctx) {
    std::size_t n = coupling.variables.size();
    std::size_t k = ctx.arity();
    std::vector<std::size_t> pos;
    for (const auto& content : ctx.contents) {
        pos.push_back(variable_position(coupling.variables, content, ctx.context));
    }
    ContextDistribution out;
    out.context = ctx.context;
    out.contents = ctx.contents;
    out.probs.assign(std::size_t(1) << k, Rat(0));
    for (std::size_t a = 0; a < coupling.atoms.size(); ++a) {
        if (coupling.atoms[a] == 0) continue;
        std::size_t t = 0;
        for (std::size_t j = 0; j < k; ++j) {
            t = (t << 1) | ((a >> (n - 1 - pos[j])) & 1u);
        }
        out.probs[t] += coupling.atoms[a];
    }
    return out;
}

Rat coupling_objective(const System& system, const Coupling& coupling) {
    Rat total(0);
    for (const auto& conn : connections(system)) total += equality_probability(coupling, conn);
    return total;
}

namespace {

// Contents seen in exactly two contexts, i.e. the ones connections constrain.
std::map<std::string, int> content_multiplicity(const System& system) {
    std::map<std::string, int> count;
    for (const auto& ctx : system.contexts()) {
        for (const auto& content : ctx.contents) ++count[content];
    }
    return count;
}

}  // namespace

CbdReport analyze(const System& system, std::size_t max_vars) {
    std::size_t n = system.total_variables();
    check_size_guard(n, max_vars);

    CbdReport report;
    report.connections = connections(system);
    report.omegas = omega_vector(system);

    if (report.connections.empty()) {
        report.cntx = 0;
        report.contextual = false;
        report.witness = product_coupling(system, max_vars);
        return report;
    }

    // Contents measured only once enlarge the atom space without touching the
    // objective, so the LP runs on the system with them marginalized out and
    // the witness is extended back afterwards via per-context conditionals.
    auto multiplicity = content_multiplicity(system);
    std::vector<ContextDistribution> reduced_contexts;
    for (const auto& ctx : system.contexts()) {
        std::vector<std::string> kept;
        for (const auto& content : ctx.contents) {
            if (multiplicity[content] == 2) kept.push_back(content);
        }
        if (kept.empty()) continue;
        reduced_contexts.push_back(kept.size() == ctx.arity() ? ctx : marginal(ctx, kept));
    }
    System reduced = validate_system(std::move(reduced_contexts));

    LinearProgram lp = build_coupling_lp(reduced, max_vars);
    LpOutcome lp_out = solve(lp, atom_cap(lp.num_vars));
    // A product coupling always satisfies the marginal constraints, so the LP
    // cannot be infeasible, and mass <= 1 bounds the objective.
    if (lp_out.status != LpStatus::Optimal) {
        throw std::logic_error("coupling LP did not reach an optimum");
    }

    Coupling reduced_witness{coupling_variables(reduced), std::move(lp_out.solution)};
    for (const auto& conn : report.connections) {
        report.omega_primes.push_back(equality_probability(reduced_witness, conn));
    }

    Rat omega_total(0);
    for (const auto& w : report.omegas) omega_total += w;
    report.cntx = omega_total - lp_out.value;
    report.contextual = report.cntx > 0;

    // Extend the reduced witness over the dropped variables: conditionally on
    // each context's kept outcome, dropped variables follow that context's own
    // conditional distribution, independently across contexts. This preserves
    // every context marginal and every equality probability.
    auto full_vars = coupling_variables(system);
    std::size_t rn = reduced_witness.variables.size();
    std::vector<std::size_t> reduced_to_full(rn);
    for (std::size_t i = 0; i < rn; ++i) {
        reduced_to_full[i] = variable_position(full_vars, reduced_witness.variables[i].content,
                                               reduced_witness.variables[i].context);
    }

    struct DropInfo {
        const ContextDistribution* ctx;
        ContextDistribution kept_marginal;
        std::vector<std::size_t> full_pos;  // all of the context's variables
        std::vector<std::size_t> kept_bits;  // indices into full_pos that were kept
    };
    std::vector<DropInfo> drops;
    for (const auto& ctx : system.contexts()) {
        std::vector<std::string> kept;
        std::vector<std::size_t> kept_bits;
        for (std::size_t j = 0; j < ctx.contents.size(); ++j) {
            if (multiplicity[ctx.contents[j]] == 2) {
                kept.push_back(ctx.contents[j]);
                kept_bits.push_back(j);
            }
        }
        if (kept.size() == ctx.arity()) continue;
        DropInfo info;
        info.ctx = &ctx;
        if (!kept.empty()) info.kept_marginal = marginal(ctx, kept);
        for (const auto& content : ctx.contents) {
            info.full_pos.push_back(variable_position(full_vars, content, ctx.context));
        }
        info.kept_bits = std::move(kept_bits);
        drops.push_back(std::move(info));
    }

    if (drops.empty()) {
        report.witness = std::move(reduced_witness);
        return report;
    }

    Coupling witness;
    witness.variables = full_vars;
    witness.atoms.assign(std::size_t(1) << n, Rat(0));
    for (std::size_t a = 0; a < witness.atoms.size(); ++a) {
        std::size_t r = 0;
        for (std::size_t i = 0; i < rn; ++i) {
            r = (r << 1) | ((a >> (n - 1 - reduced_to_full[i])) & 1u);
        }
        Rat mass = reduced_witness.atoms[r];
        if (mass == 0) continue;
        for (const auto& info : drops) {
            std::size_t t = 0;
            for (std::size_t p : info.full_pos) t = (t << 1) | ((a >> (n - 1 - p)) & 1u);
            std::size_t u = 0;
            for (std::size_t b : info.kept_bits) {
                u = (u << 1) | ((t >> (info.ctx->arity() - 1 - b)) & 1u);
            }
            const Rat& joint = info.ctx->probs[t];
            if (joint == 0) {
                mass = 0;
                break;
            }
            if (info.kept_bits.empty()) {
                mass *= joint;
            } else {
                mass *= joint / info.kept_marginal.probs[u];
            }
        }
        witness.atoms[a] = std::move(mass);
    }
    report.witness = std::move(witness);
    return report;
}

ReducedCoupling reduced_coupling_feasible(const System& system, std::size_t max_vars) {
    auto consistency = is_consistently_connected(system);
    if (!consistency.consistent) {
        throw Error(Errc::NotConsistentlyConnected,
                    "reduced couplings are defined for consistently connected systems only");
    }

    const auto& contents = system.contents();
    std::size_t m = contents.size();
    check_size_guard(m, max_vars);
    std::size_t num_atoms = std::size_t(1) << m;

    std::vector<Constraint> constraints;
    for (const auto& ctx : system.contexts()) {
        std::vector<std::size_t> pos;
        for (const auto& content : ctx.contents) {
            auto it = std::lower_bound(contents.begin(), contents.end(), content);
            pos.push_back(std::size_t(it - contents.begin()));
        }
        std::size_t base = constraints.size();
        for (std::size_t t = 0; t < ctx.probs.size(); ++t) {
            Constraint c;
            c.coeffs.assign(num_atoms, Rat(0));
            c.rel = Relation::Eq;
            c.rhs = ctx.probs[t];
            constraints.push_back(std::move(c));
        }
        std::size_t k = ctx.arity();
        for (std::size_t a = 0; a < num_atoms; ++a) {
            std::size_t t = 0;
            for (std::size_t j = 0; j < k; ++j) {
                t = (t << 1) | ((a >> (m - 1 - pos[j])) & 1u);
            }
            constraints[base + t].coeffs[a] = 1;
        }
    }

    auto feas = check_feasible(num_atoms, constraints, atom_cap(num_atoms));
    ReducedCoupling out;
    out.feasible = feas.feasible;
    out.contents = contents;
    if (feas.feasible) out.atoms = std::move(feas.witness);
    return out;
}

}  // namespace cbd
