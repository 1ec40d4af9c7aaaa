#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "cbd/rational.hpp"

namespace cbd {

// One row-block of the content-context matrix: a labeled context, its ordered
// contents, and the joint distribution over {-1,+1}^k.
//
// Atom encoding: the atom index read in binary with k bits, most significant
// bit first listed content; bit 0 means value +1, bit 1 means value -1. So for
// k=2 the atoms are 0=(+,+), 1=(+,-), 2=(-,+), 3=(-,-).
struct ContextDistribution {
    std::string context;
    std::vector<std::string> contents;
    std::vector<Rat> probs;

    std::size_t arity() const { return contents.size(); }

    bool operator==(const ContextDistribution& other) const = default;
};

// Value (+1 or -1) of the variable at position pos in the given atom.
inline int atom_value(std::size_t atom, std::size_t arity, std::size_t pos) {
    return ((atom >> (arity - 1 - pos)) & 1u) ? -1 : +1;
}

std::string atom_outcome_string(std::size_t atom, std::size_t arity);

// Inverse of atom_outcome_string. Throws Error(ParseError) on characters
// outside {'+','-'}.
std::size_t outcome_string_atom(const std::string& outcome);

struct Connection {
    std::string content;
    std::string context_a;
    std::string context_b;
    Rat p_a;  // Pr[value = +1] in context_a
    Rat p_b;

    bool operator==(const Connection& other) const = default;
};

struct ConnectionCheck {
    Connection connection;
    Rat delta;  // |p_a - p_b|
};

struct ConsistencyReport {
    bool consistent = true;
    std::vector<ConnectionCheck> checks;
};

// The canonical four-point probability space carrying a two-variable context:
// points a,b,c,d with masses (r, p-r, q-r, 1-p-q+r), first variable +1 on
// {a,b}, second +1 on {a,c}.
struct SampleSpace {
    std::string context;
    std::vector<std::string> points;
    std::vector<Rat> mass;
    std::vector<std::string> variables;
    std::vector<std::vector<int>> values;  // values[variable][point]

    ContextDistribution push_forward() const;
};

class System {
  public:
    const std::vector<ContextDistribution>& contexts() const { return contexts_; }
    const std::vector<std::string>& contents() const { return contents_; }

    const ContextDistribution* find_context(const std::string& label) const;
    std::size_t total_variables() const;

    bool operator==(const System& other) const = default;

  private:
    System() = default;
    friend System validate_system(std::vector<ContextDistribution> contexts);

    std::vector<ContextDistribution> contexts_;  // sorted by label
    std::vector<std::string> contents_;          // sorted, derived
};

// Checks every type invariant and returns the System with contexts sorted by
// label (all downstream orderings are lexicographic). Throws cbd::Error.
System validate_system(std::vector<ContextDistribution> contexts);

// Distribution of an ordered subset of a context's contents, eliminated
// variables summed out.
ContextDistribution marginal(const ContextDistribution& dist,
                             const std::vector<std::string>& subset);

// Pr[value = +1] of one content within a context.
Rat plus_marginal(const ContextDistribution& dist, const std::string& content);

// One Connection per content appearing in exactly two contexts, ordered by
// content label. Contents appearing once yield nothing.
std::vector<Connection> connections(const System& system);

ConsistencyReport is_consistently_connected(const System& system);

SampleSpace canonical_sample_space(const ContextDistribution& dist);

// Parameters of one 2x2 context table: p = Pr[first = +1], q = Pr[second = +1],
// r = Pr[both = +1].
struct AbTable {
    Rat p;
    Rat q;
    Rat r;
};

struct AbParams {
    AbTable ctx11;
    AbTable ctx12;
    AbTable ctx21;
    AbTable ctx22;
};

// The four-context Alice-Bob system: contexts "11","12","21","22", context ij
// holding contents {Ai, Bj} with the given tables.
System make_ab_system(const AbParams& params);

System pr_box();
System trivial_system();
System perturbed_pr_box(const Rat& epsilon);
System perturbed_trivial(const Rat& epsilon);

struct Fixtures {
    System pr_box;
    System trivial;
    System perturbed_pr_box;
    System perturbed_trivial;
};

Fixtures fixtures(const Rat& epsilon);

}  // namespace cbd
