#pragma once

#include <memory>

#include "lsx/type.hpp"

namespace lsx {

// Test oracle: decides A <= B by replaying the declarative subtyping rules
// (reflexivity, transitivity, span introduction/collapse, the atomic-product
// rule, span monotonicity, arrow and product congruence) with explicit
// transitivity over a finite candidate universe. Completely independent of
// the min_s-based algorithm. Restricted to the atoms {B, X}; types containing
// generators are rejected.
class DeclarativeOracle {
  public:
    // `depth` bounds the number of saturation passes (one more layer of rule
    // applications, transitivity included, per pass).
    explicit DeclarativeOracle(int depth = 12);
    ~DeclarativeOracle();

    bool query(const TypePtr &a, const TypePtr &b);

  private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

// One-shot convenience wrapper.
bool declarative_search(const TypePtr &a, const TypePtr &b, int depth = 12);

}  // namespace lsx
