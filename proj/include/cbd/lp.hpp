#pragma once

#include <cstddef>
#include <vector>

#include "cbd/rational.hpp"

namespace cbd {

enum class Relation { Eq, Le, Ge };

struct Constraint {
    std::vector<Rat> coeffs;
    Relation rel = Relation::Eq;
    Rat rhs;
};

// Maximize objective . x subject to the constraints and x >= 0.
struct LinearProgram {
    std::size_t num_vars = 0;
    std::vector<Rat> objective;
    std::vector<Constraint> constraints;
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpOutcome {
    LpStatus status = LpStatus::Infeasible;
    Rat value;
    std::vector<Rat> solution;
};

struct FeasibilityResult {
    bool feasible = false;
    std::vector<Rat> witness;
};

// Coupling LPs grow as 2^(total variables); anything wider than this is
// rejected up front instead of exhausting memory.
inline constexpr std::size_t kDefaultColumnCap = 65536;

// Two-phase simplex with Bland's rule, exact rational arithmetic throughout.
// The returned solution is a basic feasible vertex.
LpOutcome solve(const LinearProgram& lp, std::size_t column_cap = kDefaultColumnCap);

// Phase one only: is {constraints, x >= 0} nonempty, and a point if so.
FeasibilityResult check_feasible(std::size_t num_vars, const std::vector<Constraint>& constraints,
                                 std::size_t column_cap = kDefaultColumnCap);

}  // namespace cbd
