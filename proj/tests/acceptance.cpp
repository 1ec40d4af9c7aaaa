// Acceptance suite: one line per criterion, nonzero exit if anything fails.

#include <chrono>
#include <cstdio>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cbd/chsh.hpp"
#include "cbd/coupling.hpp"
#include "cbd/io.hpp"
#include "cbd/oracle.hpp"
#include "cbd/system.hpp"
#include "generators.hpp"

using namespace cbd;
using Clock = std::chrono::steady_clock;

namespace {

int failures = 0;

double ms_since(Clock::time_point start) {
    return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

void report(int number, bool ok, const std::string& detail) {
    std::printf("%s criterion %2d: %s\n", ok ? "PASS" : "FAIL", number, detail.c_str());
    if (!ok) ++failures;
}

std::string fmt_ms(double ms) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.0f ms", ms);
    return buf;
}

Rat optimum_of(const CbdReport& r) {
    Rat total(0);
    for (const auto& w : r.omega_primes) total += w;
    return total;
}

void criterion_1() {
    auto start = Clock::now();
    CbdReport r = analyze(pr_box());
    double ms = ms_since(start);
    bool ok = r.cntx == 1 && r.contextual && ms < 1000.0;
    std::ostringstream detail;
    detail << "PR box: CNTX = " << to_string(r.cntx) << ", contextual, " << fmt_ms(ms)
           << " (limit 1000 ms)";
    report(1, ok, detail.str());
}

void criterion_2() {
    auto start = Clock::now();
    CbdReport r = analyze(trivial_system());
    double ms = ms_since(start);
    bool ok = r.cntx == 0 && !r.contextual && ms < 1000.0;
    std::ostringstream detail;
    detail << "deterministic correlations: CNTX = " << to_string(r.cntx) << ", noncontextual, "
           << fmt_ms(ms) << " (limit 1000 ms)";
    report(2, ok, detail.str());
}

void criterion_3() {
    const std::vector<Rat> eps = {make_rat(1, 16), make_rat(1, 8), make_rat(1, 4), make_rat(3, 8)};
    auto start = Clock::now();
    bool ok = true;
    for (const auto& e : eps) {
        Rat expected = 1 - 2 * e;
        CbdReport r = analyze(perturbed_pr_box(e));
        if (r.cntx != expected || r.contextual != (expected > 0)) ok = false;
    }
    double ms = ms_since(start);
    ok = ok && ms < 5000.0;
    std::ostringstream detail;
    detail << "perturbed PR box: CNTX = 1 - 2*eps at eps = 1/16, 1/8, 1/4, 3/8, " << fmt_ms(ms)
           << " (limit 5000 ms)";
    report(3, ok, detail.str());
}

void criterion_4() {
    const std::vector<Rat> eps = {make_rat(1, 16), make_rat(1, 8), make_rat(1, 4), make_rat(7, 16)};
    bool ok = true;
    for (const auto& e : eps) {
        CbdReport r = analyze(perturbed_trivial(e));
        if (r.cntx != 0 || r.contextual) ok = false;
    }
    report(4, ok, "perturbed deterministic system: CNTX = 0 at eps = 1/16, 1/8, 1/4, 7/16");
}

void criterion_5() {
    std::mt19937_64 rng(1005);
    auto start = Clock::now();
    int checked = 0;
    bool ok = true;
    for (int trial = 0; trial < 200; ++trial) {
        System sys = gen::random_rank4_consistent(rng);
        ChshReport bound = chsh(sys);
        CbdReport full = analyze(sys);
        if (bound.contextual != full.contextual) ok = false;
        if ((bound.s_value > 2) != (full.cntx > 0)) ok = false;
        ++checked;
    }
    double ms = ms_since(start);
    ok = ok && checked == 200 && ms < 60000.0;
    std::ostringstream detail;
    detail << "cyclic bound agrees with the coupling verdict on " << checked
           << " random consistent four-cycles, " << fmt_ms(ms) << " (limit 60000 ms)";
    report(5, ok, detail.str());
}

void criterion_6() {
    std::mt19937_64 rng(1006);
    bool ok = true;
    for (int trial = 0; trial < 500; ++trial) {
        Rat p = gen::lattice_rat(rng, 16);
        Rat q = gen::lattice_rat(rng, 16);
        Rat closed = maximal_coupling(p, q).equality_prob;
        Rat scanned = pair_coupling_bruteforce(p, q, 16);
        Rat formula = 1 - rat_abs(p - q);
        if (closed != scanned || closed != formula) ok = false;
    }
    report(6, ok, "closed-form pair couplings match the brute-force scan on 500 margin pairs");
}

void criterion_7() {
    std::mt19937_64 rng(1007);
    std::vector<System> suite = {pr_box(), trivial_system()};
    for (int trial = 0; trial < 100; ++trial) suite.push_back(gen::random_small_consistent(rng));
    bool ok = true;
    for (const System& sys : suite) {
        bool contextual = analyze(sys).contextual;
        bool reduced = reduced_coupling_feasible(sys).feasible;
        bool mixture = deterministic_mixture_feasible(sys);
        if (contextual != !reduced || contextual != !mixture) ok = false;
    }
    std::ostringstream detail;
    detail << "contextuality, reduced-coupling infeasibility, and mixture infeasibility coincide on "
           << suite.size() << " consistent systems";
    report(7, ok, detail.str());
}

void criterion_8() {
    std::mt19937_64 rng(1008);
    std::vector<System> suite = {pr_box(), trivial_system(), perturbed_pr_box(make_rat(1, 8)),
                                 perturbed_trivial(make_rat(1, 4))};
    for (int trial = 0; trial < 48; ++trial) suite.push_back(gen::random_rank4(rng));
    for (int trial = 0; trial < 48; ++trial) suite.push_back(gen::random_small_consistent(rng));
    bool ok = true;
    for (const System& sys : suite) {
        Coupling prod = product_coupling(sys);
        for (const auto& ctx : sys.contexts()) {
            if (coupling_marginal(prod, ctx).probs != ctx.probs) ok = false;
        }
        if (coupling_objective(sys, prod) > optimum_of(analyze(sys))) ok = false;
    }
    std::ostringstream detail;
    detail << "product couplings have exact marginals and never beat the optimum on " << suite.size()
           << " systems";
    report(8, ok, detail.str());
}

void criterion_9() {
    ChshReport r = chsh(pr_box());
    std::ostringstream detail;
    detail << "PR box cyclic score s = " << to_string(r.s_value);
    report(9, r.s_value == 4 && r.contextual, detail.str());
}

void criterion_10() {
    std::mt19937_64 rng(1010);
    bool ok = true;
    for (int trial = 0; trial < 100; ++trial) {
        System sys = trial % 2 == 0 ? gen::random_rank4_consistent(rng)
                                    : gen::random_small_consistent(rng);
        Rat base = analyze(sys).cntx;
        if (analyze(gen::relabel_reversed(sys)).cntx != base) ok = false;
        const auto& contents = sys.contents();
        std::uniform_int_distribution<std::size_t> pick(0, contents.size() - 1);
        if (analyze(gen::flip_content(sys, contents[pick(rng)])).cntx != base) ok = false;
    }
    report(10, ok, "CNTX is invariant under relabeling and value flips on 100 random systems");
}

void criterion_11() {
    System ring = gen::kcbs_rank5();
    auto start = Clock::now();
    CbdReport r = analyze(ring);
    double ms = ms_since(start);
    GridSearchResult grid = grid_search_omega(ring, 4);
    bool ok = ms < 10000.0 && r.cntx > 0 && r.cntx == 1 && grid.best_objective <= optimum_of(r);
    std::ostringstream detail;
    detail << "odd five-cycle: CNTX = " << to_string(r.cntx) << " in " << fmt_ms(ms)
           << " (limit 10000 ms), grid lower bound " << to_string(grid.best_objective)
           << " <= optimum " << to_string(optimum_of(r));
    report(11, ok, detail.str());
}

void criterion_12() {
    System empirical = simulate_system(pr_box(), 400, 1);
    CbdReport r = analyze(empirical);
    bool ok = r.cntx >= make_rat(17, 20) && r.cntx <= 1;
    std::ostringstream detail;
    detail << "400-sample PR box resample (seed 1): empirical CNTX = " << to_string(r.cntx)
           << ", within [17/20, 1]";
    report(12, ok, detail.str());
}

}  // namespace

int main() {
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9();
    criterion_10();
    criterion_11();
    criterion_12();
    if (failures == 0) {
        std::printf("all 12 criteria passed\n");
        return 0;
    }
    std::printf("%d criteria failed\n", failures);
    return 1;
}
