#include "cbd/oracle.hpp"

#include <algorithm>
#include <map>

#include "cbd/errors.hpp"

namespace cbd {

Rat pair_coupling_bruteforce(const Rat& p, const Rat& q, unsigned long denominator) {
    if (denominator == 0) throw std::invalid_argument("denominator must be at least 1");
    if (!in_unit_interval(p) || !in_unit_interval(q)) {
        throw std::invalid_argument("margins must lie in [0,1]");
    }
    Rat excess = p + q - 1;
    Rat lo = excess > 0 ? excess : Rat(0);
    Rat hi = std::min(p, q);

    Rat best(-1);
    auto consider = [&](const Rat& t) {
        if (t < lo || t > hi) return;
        // table (t, p-t; q-t, 1-p-q+t): equality mass is the diagonal
        Rat eq = 1 - p - q + 2 * t;
        if (eq > best) best = eq;
    };
    consider(lo);
    consider(hi);
    for (unsigned long k = 0; k <= denominator; ++k) {
        Rat t(k, denominator);
        t.canonicalize();
        consider(t);
    }
    return best;
}

namespace {

// Deliberately separate from the lp-engine: a bare phase-one simplex for
// A w = b, w >= 0, b >= 0, with the opposite Bland orientation (highest
// eligible index enters, ratio ties resolved toward the highest basis index).
// Termination is still guaranteed; disagreement with the main engine on any
// system would expose a systematic bug in one of them.
bool equality_system_feasible(const std::vector<std::vector<Rat>>& a, const std::vector<Rat>& b) {
    std::size_t m = a.size();
    if (m == 0) return true;
    std::size_t ncols = a[0].size();
    std::size_t width = ncols + m;

    std::vector<std::vector<Rat>> rows(m);
    std::vector<std::size_t> basis(m);
    for (std::size_t i = 0; i < m; ++i) {
        rows[i].assign(width + 1, Rat(0));
        for (std::size_t j = 0; j < ncols; ++j) rows[i][j] = a[i][j];
        rows[i][ncols + i] = 1;
        rows[i][width] = b[i];
        basis[i] = ncols + i;
    }

    std::vector<Rat> cost(width, Rat(0));
    Rat deficit(0);
    for (std::size_t i = 0; i < m; ++i) {
        deficit += b[i];
        for (std::size_t j = 0; j < ncols; ++j) cost[j] += rows[i][j];
    }

    while (deficit != 0) {
        std::size_t entering = width;
        for (std::size_t j = width; j-- > 0;) {
            if (cost[j] > 0) {
                entering = j;
                break;
            }
        }
        if (entering == width) break;

        std::size_t leaving = m;
        Rat best_ratio;
        for (std::size_t i = 0; i < m; ++i) {
            if (rows[i][entering] <= 0) continue;
            Rat ratio = rows[i][width] / rows[i][entering];
            if (leaving == m || ratio < best_ratio ||
                (ratio == best_ratio && basis[i] > basis[leaving])) {
                leaving = i;
                best_ratio = ratio;
            }
        }
        if (leaving == m) break;  // cannot happen: the artificial sum is bounded

        auto& prow = rows[leaving];
        if (prow[entering] != 1) {
            Rat inv = prow[entering];
            for (auto& v : prow) {
                if (v != 0) v /= inv;
            }
        }
        for (std::size_t i = 0; i < m; ++i) {
            if (i == leaving) continue;
            Rat f = rows[i][entering];
            if (f == 0) continue;
            for (std::size_t j = 0; j <= width; ++j) {
                if (prow[j] != 0) rows[i][j] -= f * prow[j];
            }
        }
        Rat f = cost[entering];
        deficit -= f * prow[width];
        for (std::size_t j = 0; j < width; ++j) {
            if (prow[j] != 0) cost[j] -= f * prow[j];
        }
        basis[leaving] = entering;
    }
    return deficit == 0;
}

}  // namespace

bool deterministic_mixture_feasible(const System& system) {
    auto consistency = is_consistently_connected(system);
    if (!consistency.consistent) {
        throw Error(Errc::NotConsistentlyConnected,
                    "deterministic mixtures are checked for consistently connected systems only");
    }
    const auto& contents = system.contents();
    std::size_t m = contents.size();
    if (m > 12) {
        throw Error(Errc::TooManyContents, "oracle handles at most 12 contents, got " +
                                               std::to_string(m));
    }
    std::size_t num_assignments = std::size_t(1) << m;

    std::vector<std::vector<Rat>> a;
    std::vector<Rat> b;
    for (const auto& ctx : system.contexts()) {
        std::vector<std::size_t> pos;
        for (const auto& content : ctx.contents) {
            pos.push_back(std::size_t(
                std::find(contents.begin(), contents.end(), content) - contents.begin()));
        }
        std::size_t k = ctx.arity();
        std::size_t base = a.size();
        for (const auto& prob : ctx.probs) {
            a.emplace_back(num_assignments, Rat(0));
            b.push_back(prob);
        }
        for (std::size_t w = 0; w < num_assignments; ++w) {
            std::size_t t = 0;
            for (std::size_t j = 0; j < k; ++j) {
                t = (t << 1) | ((w >> (m - 1 - pos[j])) & 1u);
            }
            a[base + t][w] = 1;
        }
    }
    return equality_system_feasible(a, b);
}

namespace {

struct ContextPlan {
    std::size_t shift;                // full-atom bit shift of this context's block
    std::vector<std::size_t> order;   // outcome atoms sorted by oriented key
    std::vector<Rat> bounds;          // cumulative masses along that order
};

// The coupling induced by driving every context with one shared uniform draw:
// each context partitions [0,1) into outcome intervals, ordered so that
// orientation-aligned outcomes come first, and the joint atoms are the common
// refinement of the partitions. Context marginals hold by construction.
Coupling quantile_coupling(const System& system, const std::map<std::string, int>& orientation,
                           std::size_t n) {
    std::vector<ContextPlan> plans;
    std::vector<Rat> cuts{Rat(0)};
    std::size_t offset = 0;
    for (const auto& ctx : system.contexts()) {
        std::size_t k = ctx.arity();
        ContextPlan plan;
        plan.shift = n - offset - k;
        plan.order.resize(ctx.probs.size());
        std::vector<std::size_t> keys(ctx.probs.size());
        for (std::size_t t = 0; t < ctx.probs.size(); ++t) {
            std::size_t key = 0;
            for (std::size_t j = 0; j < k; ++j) {
                unsigned bit = (t >> (k - 1 - j)) & 1u;
                if (orientation.at(ctx.contents[j]) < 0) bit ^= 1u;
                key = (key << 1) | bit;
            }
            plan.order[t] = t;
            keys[t] = key;
        }
        std::sort(plan.order.begin(), plan.order.end(),
                  [&](std::size_t x, std::size_t y) { return keys[x] < keys[y]; });
        Rat running(0);
        for (std::size_t t : plan.order) {
            running += ctx.probs[t];
            plan.bounds.push_back(running);
            cuts.push_back(running);
        }
        plans.push_back(std::move(plan));
        offset += k;
    }

    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    Coupling coupling;
    coupling.variables = coupling_variables(system);
    coupling.atoms.assign(std::size_t(1) << n, Rat(0));
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const Rat& left = cuts[i];
        Rat length = cuts[i + 1] - cuts[i];
        std::size_t atom = 0;
        for (const auto& plan : plans) {
            std::size_t idx = 0;
            while (plan.bounds[idx] <= left) ++idx;
            atom |= plan.order[idx] << plan.shift;
        }
        coupling.atoms[atom] += length;
    }
    return coupling;
}

}  // namespace

GridSearchResult grid_search_omega(const System& system, unsigned long denominator,
                                   std::size_t max_vars) {
    if (denominator == 0) throw std::invalid_argument("denominator must be at least 1");
    std::size_t n = system.total_variables();
    if (n > max_vars) {
        throw Error(Errc::SystemTooLarge, "system has " + std::to_string(n) +
                                              " variables, guard is " + std::to_string(max_vars));
    }

    GridSearchResult result;
    result.denominator = denominator;
    Coupling product = product_coupling(system, max_vars);
    Rat product_obj = coupling_objective(system, product);
    result.best_objective = product_obj;
    result.best_coupling = product;

    std::map<std::string, int> orientation;
    for (const auto& content : system.contents()) orientation[content] = +1;

    Coupling aligned = quantile_coupling(system, orientation, n);
    Rat aligned_obj = coupling_objective(system, aligned);

    // Greedy per-content flips, kept only when they strictly improve.
    for (const auto& content : system.contents()) {
        orientation[content] = -orientation[content];
        Coupling flipped = quantile_coupling(system, orientation, n);
        Rat flipped_obj = coupling_objective(system, flipped);
        if (flipped_obj > aligned_obj) {
            aligned = std::move(flipped);
            aligned_obj = std::move(flipped_obj);
        } else {
            orientation[content] = -orientation[content];
        }
    }

    if (aligned_obj > result.best_objective) {
        result.best_objective = aligned_obj;
        result.best_coupling = aligned;
    }

    // Lattice mixtures of the two endpoints; every mixture is itself a valid
    // coupling, so the reported bound stays a true lower bound.
    for (unsigned long k = 1; k < denominator; ++k) {
        Rat lambda(k, denominator);
        lambda.canonicalize();
        Coupling mix;
        mix.variables = product.variables;
        mix.atoms.resize(product.atoms.size());
        for (std::size_t a = 0; a < mix.atoms.size(); ++a) {
            mix.atoms[a] = lambda * aligned.atoms[a] + (1 - lambda) * product.atoms[a];
        }
        Rat obj = coupling_objective(system, mix);
        if (obj > result.best_objective) {
            result.best_objective = obj;
            result.best_coupling = std::move(mix);
        }
    }
    return result;
}

}  // namespace cbd
