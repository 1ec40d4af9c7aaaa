#pragma once

#include <cstddef>

#include "cbd/coupling.hpp"
#include "cbd/system.hpp"

namespace cbd {

// Scans the one-parameter family of 2x2 tables with margins (p, q) over the
// Frechet interval at step 1/denominator, endpoints always included, and
// returns the best equality probability. Exact because the optimum sits at an
// endpoint.
Rat pair_coupling_bruteforce(const Rat& p, const Rat& q, unsigned long denominator);

// Mixture-over-deterministic-assignments feasibility, decided by a phase-one
// routine written independently of the lp-engine. Must agree with
// reduced_coupling_feasible.
bool deterministic_mixture_feasible(const System& system);

struct GridSearchResult {
    Rat best_objective;
    Coupling best_coupling;
    unsigned long denominator = 1;
};

// Lower-bounds the coupling LP optimum by evaluating valid couplings only:
// the product coupling, greedily aligned quantile couplings, and their
// lattice mixtures at weights k/denominator.
GridSearchResult grid_search_omega(const System& system, unsigned long denominator,
                                   std::size_t max_vars = kDefaultMaxVars);

}  // namespace cbd
