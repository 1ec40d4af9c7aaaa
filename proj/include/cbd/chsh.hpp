#pragma once

#include <string>
#include <vector>

#include "cbd/system.hpp"

namespace cbd {

// <V1 V2> for a two-content context.
Rat expectation_product(const ContextDistribution& dist);

struct ChshReport {
    std::vector<std::string> contexts;  // the four context labels, sorted
    std::vector<Rat> expectations;      // aligned with contexts
    Rat s_value;
    bool contextual = false;
};

// Closed-form criterion for consistently connected cyclic rank-4 systems:
// s = max over the eight odd-minus sign patterns of the signed expectation
// sum; contextual iff s > 2.
ChshReport chsh(const System& system);

}  // namespace cbd
