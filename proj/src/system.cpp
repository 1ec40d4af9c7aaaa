#include "cbd/system.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "cbd/errors.hpp"

namespace cbd {

std::string atom_outcome_string(std::size_t atom, std::size_t arity) {
    std::string s(arity, '+');
    for (std::size_t pos = 0; pos < arity; ++pos) {
        if (atom_value(atom, arity, pos) < 0) s[pos] = '-';
    }
    return s;
}

std::size_t outcome_string_atom(const std::string& outcome) {
    std::size_t atom = 0;
    for (char c : outcome) {
        atom <<= 1;
        if (c == '-') {
            atom |= 1;
        } else if (c != '+') {
            throw Error(Errc::ParseError, "outcome string '" + outcome + "' has characters outside {+,-}");
        }
    }
    return atom;
}

ContextDistribution SampleSpace::push_forward() const {
    std::size_t k = variables.size();
    ContextDistribution dist;
    dist.context = context;
    dist.contents = variables;
    dist.probs.assign(std::size_t(1) << k, Rat(0));
    for (std::size_t pt = 0; pt < points.size(); ++pt) {
        std::size_t atom = 0;
        for (std::size_t v = 0; v < k; ++v) {
            atom <<= 1;
            if (values[v][pt] < 0) atom |= 1;
        }
        dist.probs[atom] += mass[pt];
    }
    return dist;
}

const ContextDistribution* System::find_context(const std::string& label) const {
    for (const auto& ctx : contexts_) {
        if (ctx.context == label) return &ctx;
    }
    return nullptr;
}

std::size_t System::total_variables() const {
    std::size_t n = 0;
    for (const auto& ctx : contexts_) n += ctx.arity();
    return n;
}

System validate_system(std::vector<ContextDistribution> contexts) {
    if (contexts.empty()) throw Error(Errc::EmptySystem, "system has no contexts");

    std::set<std::string> seen_labels;
    for (const auto& ctx : contexts) {
        if (ctx.context.empty()) throw Error(Errc::ParseError, "context label must be nonempty");
        if (!seen_labels.insert(ctx.context).second) {
            throw Error(Errc::DuplicateContextLabel, "context '" + ctx.context + "' appears twice");
        }
        if (ctx.contents.empty()) {
            throw Error(Errc::WrongArity, "context '" + ctx.context + "' lists no contents");
        }
        std::set<std::string> seen_contents;
        for (const auto& content : ctx.contents) {
            if (content.empty()) throw Error(Errc::ParseError, "content label must be nonempty");
            if (!seen_contents.insert(content).second) {
                throw Error(Errc::DuplicateContent,
                            "content '" + content + "' listed twice in context '" + ctx.context + "'");
            }
        }
        std::size_t k = ctx.arity();
        if (k >= 8 * sizeof(std::size_t) || ctx.probs.size() != (std::size_t(1) << k)) {
            throw Error(Errc::DimensionMismatch,
                        "context '" + ctx.context + "' needs 2^" + std::to_string(k) +
                            " probabilities, got " + std::to_string(ctx.probs.size()));
        }
        Rat total(0);
        for (std::size_t atom = 0; atom < ctx.probs.size(); ++atom) {
            if (ctx.probs[atom] < 0) {
                throw Error(Errc::NegativeProbability,
                            "context '" + ctx.context + "' outcome " + atom_outcome_string(atom, k) +
                                " has probability " + to_string(ctx.probs[atom]));
            }
            total += ctx.probs[atom];
        }
        if (total != 1) {
            throw Error(Errc::NonUnitMass,
                        "context '" + ctx.context + "' probabilities sum to " + to_string(total));
        }
    }

    std::map<std::string, std::vector<std::string>> content_contexts;
    for (const auto& ctx : contexts) {
        for (const auto& content : ctx.contents) content_contexts[content].push_back(ctx.context);
    }
    for (const auto& [content, labels] : content_contexts) {
        if (labels.size() > 2) {
            throw Error(Errc::OverconnectedContent,
                        "content '" + content + "' appears in " + std::to_string(labels.size()) +
                            " contexts; at most two are supported");
        }
    }

    std::sort(contexts.begin(), contexts.end(),
              [](const ContextDistribution& a, const ContextDistribution& b) {
                  return a.context < b.context;
              });

    System system;
    system.contexts_ = std::move(contexts);
    for (const auto& entry : content_contexts) system.contents_.push_back(entry.first);
    return system;
}

ContextDistribution marginal(const ContextDistribution& dist,
                             const std::vector<std::string>& subset) {
    if (subset.empty()) throw std::invalid_argument("marginal: empty subset");
    std::vector<std::size_t> positions;
    std::set<std::string> seen;
    for (const auto& content : subset) {
        if (!seen.insert(content).second) {
            throw std::invalid_argument("marginal: duplicate content '" + content + "'");
        }
        auto it = std::find(dist.contents.begin(), dist.contents.end(), content);
        if (it == dist.contents.end()) {
            throw Error(Errc::UnknownContent,
                        "content '" + content + "' is not in context '" + dist.context + "'");
        }
        positions.push_back(std::size_t(it - dist.contents.begin()));
    }

    std::size_t k = dist.arity();
    std::size_t m = subset.size();
    ContextDistribution out;
    out.context = dist.context;
    out.contents = subset;
    out.probs.assign(std::size_t(1) << m, Rat(0));
    for (std::size_t atom = 0; atom < dist.probs.size(); ++atom) {
        std::size_t target = 0;
        for (std::size_t j = 0; j < m; ++j) {
            target <<= 1;
            target |= (atom >> (k - 1 - positions[j])) & 1u;
        }
        out.probs[target] += dist.probs[atom];
    }
    return out;
}

Rat plus_marginal(const ContextDistribution& dist, const std::string& content) {
    auto it = std::find(dist.contents.begin(), dist.contents.end(), content);
    if (it == dist.contents.end()) {
        throw Error(Errc::UnknownContent,
                    "content '" + content + "' is not in context '" + dist.context + "'");
    }
    std::size_t pos = std::size_t(it - dist.contents.begin());
    Rat p(0);
    for (std::size_t atom = 0; atom < dist.probs.size(); ++atom) {
        if (atom_value(atom, dist.arity(), pos) > 0) p += dist.probs[atom];
    }
    return p;
}

std::vector<Connection> connections(const System& system) {
    std::vector<Connection> result;
    for (const auto& content : system.contents()) {
        std::vector<const ContextDistribution*> holders;
        for (const auto& ctx : system.contexts()) {
            if (std::find(ctx.contents.begin(), ctx.contents.end(), content) != ctx.contents.end()) {
                holders.push_back(&ctx);
            }
        }
        if (holders.size() != 2) continue;
        Connection conn;
        conn.content = content;
        conn.context_a = holders[0]->context;
        conn.context_b = holders[1]->context;
        conn.p_a = plus_marginal(*holders[0], content);
        conn.p_b = plus_marginal(*holders[1], content);
        result.push_back(std::move(conn));
    }
    return result;
}

ConsistencyReport is_consistently_connected(const System& system) {
    ConsistencyReport report;
    for (auto& conn : connections(system)) {
        Rat delta = rat_abs(conn.p_a - conn.p_b);
        if (delta != 0) report.consistent = false;
        report.checks.push_back({std::move(conn), std::move(delta)});
    }
    return report;
}

SampleSpace canonical_sample_space(const ContextDistribution& dist) {
    if (dist.arity() != 2) {
        throw Error(Errc::WrongArity, "canonical sample space needs exactly 2 contents, context '" +
                                          dist.context + "' has " + std::to_string(dist.arity()));
    }
    Rat r = dist.probs[0];
    SampleSpace space;
    space.context = dist.context;
    space.points = {"a", "b", "c", "d"};
    space.mass = {r, dist.probs[1], dist.probs[2], dist.probs[3]};
    space.variables = dist.contents;
    space.values = {{+1, +1, -1, -1}, {+1, -1, +1, -1}};
    return space;
}

namespace {

ContextDistribution ab_context(const std::string& label, const std::string& a_content,
                               const std::string& b_content, const AbTable& t) {
    ContextDistribution ctx;
    ctx.context = label;
    ctx.contents = {a_content, b_content};
    Rat pp = t.r;
    Rat pm = t.p - t.r;
    Rat mp = t.q - t.r;
    Rat mm = 1 - t.p - t.q + t.r;
    for (const Rat& cell : {pp, pm, mp, mm}) {
        if (!in_unit_interval(cell)) {
            throw Error(Errc::InvalidTable, "context '" + label + "' with p=" + to_string(t.p) +
                                                ", q=" + to_string(t.q) + ", r=" + to_string(t.r) +
                                                " has cell " + to_string(cell));
        }
    }
    ctx.probs = {pp, pm, mp, mm};
    return ctx;
}

}  // namespace

System make_ab_system(const AbParams& params) {
    return validate_system({
        ab_context("11", "A1", "B1", params.ctx11),
        ab_context("12", "A1", "B2", params.ctx12),
        ab_context("21", "A2", "B1", params.ctx21),
        ab_context("22", "A2", "B2", params.ctx22),
    });
}

System pr_box() {
    Rat h = make_rat(1, 2);
    AbTable corr{h, h, h};      // diagonal table, perfect correlation
    AbTable anti{h, h, Rat(0)};  // antidiagonal, perfect anticorrelation
    return make_ab_system({corr, corr, corr, anti});
}

System trivial_system() {
    Rat h = make_rat(1, 2);
    AbTable corr{h, h, h};
    return make_ab_system({corr, corr, corr, corr});
}

namespace {

void check_epsilon(const Rat& epsilon) {
    if (epsilon < 0 || epsilon > make_rat(1, 2)) {
        throw Error(Errc::EpsilonOutOfRange, "epsilon must lie in [0, 1/2], got " + to_string(epsilon));
    }
}

}  // namespace

System perturbed_pr_box(const Rat& epsilon) {
    check_epsilon(epsilon);
    Rat h = make_rat(1, 2);
    AbTable corr{h, h, h};
    // context 22 table (0, 1/2+eps; 1/2-eps, 0): margins drift apart with eps
    AbTable tilted{h + epsilon, h - epsilon, Rat(0)};
    return make_ab_system({corr, corr, corr, tilted});
}

System perturbed_trivial(const Rat& epsilon) {
    check_epsilon(epsilon);
    Rat h = make_rat(1, 2);
    AbTable corr{h, h, h};
    AbTable skew{h + epsilon, h + epsilon, h + epsilon};
    return make_ab_system({corr, corr, corr, skew});
}

Fixtures fixtures(const Rat& epsilon) {
    return {pr_box(), trivial_system(), perturbed_pr_box(epsilon), perturbed_trivial(epsilon)};
}

}  // namespace cbd
