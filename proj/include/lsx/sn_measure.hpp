#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lsx/eval.hpp"
#include "lsx/term.hpp"

namespace lsx {

// The strong-normalization measure. Cast-headed summands (including scaled
// casts) combine by max; everything else follows the size algebra. Computed
// on the canonical form, so it is invariant under associativity and
// commutativity of + by construction.
uint64_t measure_size(const TermPtr &t);

struct MeasureReport {
    struct Entry {
        std::string rule;
        uint64_t size_before;
        uint64_t size_after;
        bool ok;
    };
    std::vector<Entry> entries;
    std::vector<size_t> violations;  // indices into entries
    bool clean() const { return violations.empty(); }
};

// Checks strict decrease of the measure across a trace, at the granularity
// of the rewritten rule instance. Beta steps are exempt.
MeasureReport check_trace(const Trace &trace);

}  // namespace lsx
