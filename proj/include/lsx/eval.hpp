#pragma once

#include <optional>
#include <random>
#include <string>
#include <vector>

#include "lsx/basis.hpp"
#include "lsx/measurement.hpp"
#include "lsx/term.hpp"
#include "lsx/typecheck.hpp"

namespace lsx {

// One reduction step. `before`/`after` are the whole terms (canonical);
// `redex_before`/`redex_after` are the rewritten rule instance, which is the
// granularity at which the measure theorem is stated.
struct Step {
    std::string rule;
    double probability = 1.0;
    TermPtr before;
    TermPtr after;
    TermPtr redex_before;
    TermPtr redex_after;
};

struct Trace {
    std::vector<Step> steps;
    TermPtr final;
    double total_probability = 1.0;
    bool fuel_exhausted = false;
};

struct Distribution {
    std::vector<std::pair<TermPtr, double>> outcomes;  // canonical, merged, sorted
};

class Evaluator {
  public:
    Evaluator(const BasisRegistry &reg, TypingContext ctx = {})
        : reg_(reg), ctx_(std::move(ctx)) {}

    // The unique next step under the fixed strategy: vector-space and error
    // rules first (innermost), then the leftmost-outermost redex of the
    // remaining rules. Measurement sampling consumes the rng.
    std::optional<Step> step(const TermPtr &t, std::mt19937_64 &rng) const;

    Trace normalize(const TermPtr &t, std::mt19937_64 &rng, int fuel = 100000) const;

    // Exhaustive expansion over every measurement outcome instead of
    // sampling; probabilities multiply along branches and merge on equal
    // canonical normal forms.
    Distribution distribution(const TermPtr &t, int fuel = 100000) const;

  private:
    struct Found {
        std::string rule;
        double prob;
        TermPtr redex_before, redex_after;
        TermPtr whole;  // rebuilt whole term, canonical
    };

    std::optional<Found> phase1(const TermPtr &t) const;
    std::vector<Found> phase2(const TermPtr &t, std::mt19937_64 *rng) const;
    std::vector<Found> alternatives(const TermPtr &t, std::mt19937_64 *rng) const;

    const BasisRegistry &reg_;
    TypingContext ctx_;
};

std::string show_step(const Step &s);
std::string show_trace(const Trace &t);

}  // namespace lsx
