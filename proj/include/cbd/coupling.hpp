#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "cbd/lp.hpp"
#include "cbd/system.hpp"

namespace cbd {

// Joint table of one coupled connection pair, rows/columns ordered +1 first.
struct PairCoupling {
    std::array<std::array<Rat, 2>, 2> table;
    Rat equality_prob;
};

// The coupling maximizing Pr[equal] for margins (p, q):
// table = (min(p,q), p-min; q-min, 1-p-q+min), equality 1-|p-q|.
PairCoupling maximal_coupling(const Rat& p, const Rat& q);

struct VariableRef {
    std::string content;
    std::string context;

    bool operator==(const VariableRef& other) const = default;
};

// Joint distribution over every variable of every context, one atom per
// outcome combination, same bit convention as ContextDistribution.
struct Coupling {
    std::vector<VariableRef> variables;
    std::vector<Rat> atoms;
};

struct CbdReport {
    std::vector<Connection> connections;
    std::vector<Rat> omegas;        // 1 - |p_a - p_b| per connection
    std::vector<Rat> omega_primes;  // equality probs achieved by the witness
    Rat cntx;
    bool contextual = false;
    Coupling witness;
};

struct ReducedCoupling {
    bool feasible = false;
    std::vector<std::string> contents;  // sorted, one variable each
    std::vector<Rat> atoms;             // witness, empty when infeasible
};

// Witness couplings live on 2^(total variables) atoms, so systems wider than
// this are rejected.
inline constexpr std::size_t kDefaultMaxVars = 16;

// Flat variable order: contexts sorted by label, contents in listed order.
std::vector<VariableRef> coupling_variables(const System& system);

std::vector<Rat> omega_vector(const System& system);

// The unreduced LP over all coupling atoms: per-context marginal equalities,
// objective = number of agreeing connections per atom.
LinearProgram build_coupling_lp(const System& system, std::size_t max_vars = kDefaultMaxVars);

CbdReport analyze(const System& system, std::size_t max_vars = kDefaultMaxVars);

// Contexts made independent; exists for every valid system.
Coupling product_coupling(const System& system, std::size_t max_vars = kDefaultMaxVars);

// One variable per content. Feasible iff a consistently connected system is
// noncontextual.
ReducedCoupling reduced_coupling_feasible(const System& system,
                                          std::size_t max_vars = kDefaultMaxVars);

Rat equality_probability(const Coupling& coupling, const Connection& conn);
ContextDistribution coupling_marginal(const Coupling& coupling, const ContextDistribution& ctx);
Rat coupling_objective(const System& system, const Coupling& coupling);

}  // namespace cbd
