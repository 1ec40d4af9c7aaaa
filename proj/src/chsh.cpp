#include "cbd/chsh.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <set>

#include "cbd/errors.hpp"

namespace cbd {

Rat expectation_product(const ContextDistribution& dist) {
    if (dist.arity() != 2) {
        throw Error(Errc::WrongArity, "expectation needs exactly 2 contents, context '" +
                                          dist.context + "' has " + std::to_string(dist.arity()));
    }
    Rat e = dist.probs[0] - dist.probs[1] - dist.probs[2] + dist.probs[3];
    return e;
}

namespace {

// The rank-4 cyclic shape: 4 contexts of 2 contents, 4 contents each shared by
// 2 contexts, with the sharing graph one simple 4-cycle (two disjoint 2-cycles
// also satisfy the degree counts, so the cycle is traversed explicitly).
void require_cyclic_rank4(const System& system) {
    auto wrong = [](const std::string& why) {
        return Error(Errc::WrongShape, "not a cyclic rank-4 system: " + why);
    };
    if (system.contexts().size() != 4) throw wrong("expected 4 contexts");
    if (system.contents().size() != 4) throw wrong("expected 4 contents");
    for (const auto& ctx : system.contexts()) {
        if (ctx.arity() != 2) throw wrong("context '" + ctx.context + "' does not hold 2 contents");
    }
    auto conns = connections(system);
    if (conns.size() != 4) throw wrong("every content must appear in exactly two contexts");

    std::map<std::string, std::vector<std::string>> adjacent;
    for (const auto& conn : conns) {
        if (conn.context_a == conn.context_b) throw wrong("degenerate connection");
        adjacent[conn.context_a].push_back(conn.context_b);
        adjacent[conn.context_b].push_back(conn.context_a);
    }
    for (const auto& ctx : system.contexts()) {
        auto& nbrs = adjacent[ctx.context];
        if (nbrs.size() != 2 || nbrs[0] == nbrs[1]) {
            throw wrong("contexts must form a single 4-cycle");
        }
    }
    std::string start = system.contexts().front().context;
    std::string prev = start;
    std::string here = adjacent[start][0];
    std::set<std::string> seen{start, here};
    for (int step = 0; step < 2; ++step) {
        const auto& nbrs = adjacent[here];
        std::string next = nbrs[0] == prev ? nbrs[1] : nbrs[0];
        if (!seen.insert(next).second) throw wrong("contexts must form a single 4-cycle");
        prev = here;
        here = next;
    }
}

}  // namespace

ChshReport chsh(const System& system) {
    require_cyclic_rank4(system);
    auto consistency = is_consistently_connected(system);
    if (!consistency.consistent) {
        throw Error(Errc::NotConsistentlyConnected,
                    "the CHSH criterion applies to consistently connected systems only");
    }

    ChshReport report;
    for (const auto& ctx : system.contexts()) {
        report.contexts.push_back(ctx.context);
        report.expectations.push_back(expectation_product(ctx));
    }

    bool first = true;
    for (unsigned mask = 0; mask < 16; ++mask) {
        if (std::popcount(mask) % 2 == 0) continue;
        Rat s(0);
        for (unsigned i = 0; i < 4; ++i) {
            if (mask & (1u << i)) {
                s -= report.expectations[i];
            } else {
                s += report.expectations[i];
            }
        }
        if (first || s > report.s_value) report.s_value = s;
        first = false;
    }
    report.contextual = report.s_value > 2;
    return report;
}

}  // namespace cbd
