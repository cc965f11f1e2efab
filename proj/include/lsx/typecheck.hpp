#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "lsx/basis.hpp"
#include "lsx/subtype.hpp"
#include "lsx/term.hpp"
#include "lsx/type.hpp"

namespace lsx {

// Ordered variable context; duplicate names are rejected on construction.
struct TypingContext {
    std::vector<std::pair<std::string, TypePtr>> bindings;

    void bind(const std::string &name, TypePtr t) {
        for (auto &[n, _] : bindings)
            if (n == name) throw std::invalid_argument("duplicate context variable " + name);
        bindings.emplace_back(name, std::move(t));
    }
    const TypePtr *lookup(const std::string &name) const {
        for (auto &[n, t] : bindings)
            if (n == name) return &t;
        return nullptr;
    }
};

struct TypeError : std::runtime_error {
    enum class Kind {
        UnboundVar,
        NotAFunction,
        ArgMismatch,
        LinearityViolation,
        MeasureArity,
        CastShape,
        ProductShape,
    };
    Kind kind;
    std::string path;  // child-index path from the root, e.g. "/0/1"
    TypeError(Kind k, std::string path_, const std::string &detail)
        : std::runtime_error(detail + " (at " + (path_.empty() ? "/" : path_) + ")"),
          kind(k),
          path(std::move(path_)) {}
};

struct TypedTerm {
    TermPtr term;
    TypePtr type;                      // minimal synthesized type, min_s-normalized
    std::map<std::string, int> usage;  // free-variable occurrence counts
};

enum class AppRule { ElimPlain, ElimSpan };

struct AppChoice {
    AppRule rule;
    TypePtr result;
};

// Selects the application rule for normalized function/argument types and
// yields the result type. Throws TypeError (NotAFunction / ArgMismatch).
AppChoice choose_app_rule(const TypePtr &fun_type, const TypePtr &arg_type,
                          const BasisRegistry &reg);

// Bottom-up minimal type synthesis following the generation lemma.
TypedTerm infer(const TypingContext &ctx, const TermPtr &t, const BasisRegistry &reg);

// Checking against an expected type via subsumption.
void check(const TypingContext &ctx, const TermPtr &t, const TypePtr &expected,
           const BasisRegistry &reg);

}  // namespace lsx
