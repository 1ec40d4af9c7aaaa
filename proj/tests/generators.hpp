#pragma once

#include <algorithm>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "cbd/system.hpp"

// Randomized system generators shared by the property tests and the
// acceptance suite. Everything is driven by a caller-owned mt19937_64 so runs
// are reproducible.
namespace gen {

inline cbd::Rat lattice_rat(std::mt19937_64& rng, unsigned long den) {
    std::uniform_int_distribution<unsigned long> pick(0, den);
    cbd::Rat r(pick(rng), den);
    r.canonicalize();
    return r;
}

// A point of the Frechet interval of margins (p, q), drawn from the 1/den
// lattice plus both endpoints, so the resulting 2x2 table is always valid.
inline cbd::Rat frechet_point(std::mt19937_64& rng, const cbd::Rat& p, const cbd::Rat& q,
                              unsigned long den) {
    cbd::Rat excess = p + q - 1;
    cbd::Rat lo = excess > 0 ? excess : cbd::Rat(0);
    cbd::Rat hi = std::min(p, q);
    std::vector<cbd::Rat> candidates{lo, hi};
    for (unsigned long k = 0; k <= den; ++k) {
        cbd::Rat t(k, den);
        t.canonicalize();
        if (t >= lo && t <= hi) candidates.push_back(t);
    }
    std::uniform_int_distribution<std::size_t> pick(0, candidates.size() - 1);
    return candidates[pick(rng)];
}

// Consistently connected rank-4 system: one margin per content (denominator
// up to 8), joints on the 1/16 lattice.
inline cbd::System random_rank4_consistent(std::mt19937_64& rng) {
    cbd::Rat p1 = lattice_rat(rng, 8), p2 = lattice_rat(rng, 8);
    cbd::Rat q1 = lattice_rat(rng, 8), q2 = lattice_rat(rng, 8);
    auto table = [&](const cbd::Rat& p, const cbd::Rat& q) {
        return cbd::AbTable{p, q, frechet_point(rng, p, q, 16)};
    };
    return cbd::make_ab_system({table(p1, q1), table(p1, q2), table(p2, q1), table(p2, q2)});
}

// Rank-4 system with per-context margins, generally inconsistently connected.
inline cbd::System random_rank4(std::mt19937_64& rng) {
    auto table = [&] {
        cbd::Rat p = lattice_rat(rng, 8);
        cbd::Rat q = lattice_rat(rng, 8);
        return cbd::AbTable{p, q, frechet_point(rng, p, q, 16)};
    };
    return cbd::make_ab_system({table(), table(), table(), table()});
}

// Consistently connected cycle or path over 2..6 contents. Paths leave their
// end contents in a single context, exercising the marginalization path.
inline cbd::System random_small_consistent(std::mt19937_64& rng) {
    int n = std::uniform_int_distribution<int>(2, 6)(rng);
    bool cycle = std::uniform_int_distribution<int>(0, 1)(rng) == 0;

    std::vector<cbd::Rat> margin;
    for (int i = 0; i < n; ++i) margin.push_back(lattice_rat(rng, 8));

    std::vector<cbd::ContextDistribution> contexts;
    int num_contexts = cycle ? n : n - 1;
    for (int i = 0; i < num_contexts; ++i) {
        int a = i, b = (i + 1) % n;
        cbd::ContextDistribution dist;
        dist.context = "c" + std::to_string(i);
        dist.contents = {"X" + std::to_string(a), "X" + std::to_string(b)};
        cbd::Rat r = frechet_point(rng, margin[std::size_t(a)], margin[std::size_t(b)], 16);
        dist.probs = {r, margin[std::size_t(a)] - r, margin[std::size_t(b)] - r,
                      1 - margin[std::size_t(a)] - margin[std::size_t(b)] + r};
        contexts.push_back(std::move(dist));
    }
    return cbd::validate_system(std::move(contexts));
}

// Negates one content's values everywhere it occurs.
inline cbd::System flip_content(const cbd::System& system, const std::string& content) {
    std::vector<cbd::ContextDistribution> contexts;
    for (auto ctx : system.contexts()) {
        auto it = std::find(ctx.contents.begin(), ctx.contents.end(), content);
        if (it != ctx.contents.end()) {
            std::size_t pos = std::size_t(it - ctx.contents.begin());
            std::size_t bit = std::size_t(1) << (ctx.arity() - 1 - pos);
            std::vector<cbd::Rat> flipped(ctx.probs.size());
            for (std::size_t a = 0; a < ctx.probs.size(); ++a) flipped[a ^ bit] = ctx.probs[a];
            ctx.probs = std::move(flipped);
        }
        contexts.push_back(std::move(ctx));
    }
    return cbd::validate_system(std::move(contexts));
}

// Bijective renaming that reverses the lexicographic order of both label
// namespaces, so every downstream sort changes.
inline cbd::System relabel_reversed(const cbd::System& system) {
    std::map<std::string, std::string> content_map, context_map;
    {
        const auto& cs = system.contents();
        for (std::size_t i = 0; i < cs.size(); ++i) {
            content_map[cs[i]] = "R" + std::string(1, char('z' - char(i)));
        }
        for (std::size_t i = 0; i < system.contexts().size(); ++i) {
            context_map[system.contexts()[i].context] = "K" + std::string(1, char('z' - char(i)));
        }
    }
    std::vector<cbd::ContextDistribution> contexts;
    for (auto ctx : system.contexts()) {
        ctx.context = context_map.at(ctx.context);
        for (auto& content : ctx.contents) content = content_map.at(content);
        contexts.push_back(std::move(ctx));
    }
    return cbd::validate_system(std::move(contexts));
}

// The rank-5 cyclic analogue of the maximally contextual rank-4 pattern: four
// perfectly correlating contexts and one perfectly anticorrelating, all
// margins 1/2.
inline cbd::System kcbs_rank5() {
    cbd::Rat h(1, 2);
    std::vector<cbd::ContextDistribution> contexts;
    for (int i = 0; i < 5; ++i) {
        cbd::ContextDistribution dist;
        dist.context = "c" + std::to_string(i);
        dist.contents = {"X" + std::to_string(i), "X" + std::to_string((i + 1) % 5)};
        if (i < 4) {
            dist.probs = {h, cbd::Rat(0), cbd::Rat(0), h};
        } else {
            dist.probs = {cbd::Rat(0), h, h, cbd::Rat(0)};
        }
        contexts.push_back(std::move(dist));
    }
    return cbd::validate_system(std::move(contexts));
}

}  // namespace gen
