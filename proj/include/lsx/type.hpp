#pragma once

#include <cassert>
#include <memory>
#include <string>
#include <vector>

#include "lsx/basis.hpp"

namespace lsx {

struct Type;
using TypePtr = std::shared_ptr<const Type>;

// Type grammar: atoms (measurement bases), spans S(.), right-nested products
// over qubit types, first-order arrows, and one-dimensional subspace
// generators Q[|psi>]. A distinguished bottom type is used internally as the
// type of the error term (it is below every type and never stored).
struct Type {
    enum class Kind { Atom, Span, Prod, Arrow, QGen, Bottom };

    Kind kind;
    std::string atom;  // Atom: basis id
    TypePtr a, b;      // Span: a; Prod: a x b; Arrow: a => b
    Vec2 ket;          // QGen

    static TypePtr mk_atom(std::string id) {
        auto t = std::make_shared<Type>();
        t->kind = Kind::Atom;
        t->atom = std::move(id);
        return t;
    }
    static TypePtr span(TypePtr inner) {
        auto t = std::make_shared<Type>();
        t->kind = Kind::Span;
        t->a = std::move(inner);
        return t;
    }
    // Right-nested canonical representative of the associative product.
    static TypePtr prod(TypePtr l, TypePtr r) {
        if (l->kind == Kind::Prod) return prod(l->a, prod(l->b, std::move(r)));
        auto t = std::make_shared<Type>();
        t->kind = Kind::Prod;
        t->a = std::move(l);
        t->b = std::move(r);
        return t;
    }
    static TypePtr prod_of(const std::vector<TypePtr> &fs) {
        assert(!fs.empty());
        TypePtr t = fs.back();
        for (size_t i = fs.size() - 1; i-- > 0;) t = prod(fs[i], t);
        return t;
    }
    static TypePtr arrow(TypePtr dom, TypePtr cod) {
        auto t = std::make_shared<Type>();
        t->kind = Kind::Arrow;
        t->a = std::move(dom);
        t->b = std::move(cod);
        return t;
    }
    static TypePtr qgen(Vec2 v) {
        auto t = std::make_shared<Type>();
        t->kind = Kind::QGen;
        t->ket = v;
        return t;
    }
    static TypePtr bottom() {
        auto t = std::make_shared<Type>();
        t->kind = Kind::Bottom;
        return t;
    }

    bool is_atom() const { return kind == Kind::Atom; }
    bool is_span() const { return kind == Kind::Span; }
    bool is_prod() const { return kind == Kind::Prod; }
    bool is_arrow() const { return kind == Kind::Arrow; }
    bool is_qgen() const { return kind == Kind::QGen; }
    bool is_bottom() const { return kind == Kind::Bottom; }
};

inline TypePtr type_B() { return Type::mk_atom("B"); }
inline TypePtr type_X() { return Type::mk_atom("X"); }

// Top-level factors of the associative product (length 1 for non-products).
inline void factors_into(const TypePtr &t, std::vector<TypePtr> &out) {
    if (t->is_prod()) {
        factors_into(t->a, out);
        factors_into(t->b, out);
    } else {
        out.push_back(t);
    }
}
inline std::vector<TypePtr> factors(const TypePtr &t) {
    std::vector<TypePtr> out;
    factors_into(t, out);
    return out;
}

// Number of product constructors anywhere in the type. Invariant under
// subtyping, used as a fast rejection test.
inline int prod_count(const TypePtr &t) {
    switch (t->kind) {
        case Type::Kind::Atom:
        case Type::Kind::QGen:
        case Type::Kind::Bottom: return 0;
        case Type::Kind::Span: return prod_count(t->a);
        case Type::Kind::Prod: return 1 + prod_count(t->a) + prod_count(t->b);
        case Type::Kind::Arrow: return prod_count(t->a) + prod_count(t->b);
    }
    return 0;
}

// Base types M: products of atoms, no spans, no generators, no arrows.
inline bool is_base_type(const TypePtr &t) {
    if (t->is_atom()) return true;
    if (t->is_prod()) return is_base_type(t->a) && is_base_type(t->b);
    return false;
}

// Qubit types: arrow-free (spans, products, atoms, generators).
inline bool is_qubit_type(const TypePtr &t) {
    switch (t->kind) {
        case Type::Kind::Atom:
        case Type::Kind::QGen: return true;
        case Type::Kind::Span: return is_qubit_type(t->a);
        case Type::Kind::Prod: return is_qubit_type(t->a) && is_qubit_type(t->b);
        default: return false;
    }
}

inline bool type_eq(const TypePtr &x, const TypePtr &y) {
    if (x.get() == y.get()) return true;
    if (x->kind != y->kind) return false;
    switch (x->kind) {
        case Type::Kind::Atom: return x->atom == y->atom;
        case Type::Kind::Span: return type_eq(x->a, y->a);
        case Type::Kind::Prod:
        case Type::Kind::Arrow: return type_eq(x->a, y->a) && type_eq(x->b, y->b);
        case Type::Kind::QGen: return x->ket.eq(y->ket);
        case Type::Kind::Bottom: return true;
    }
    return false;
}

// Total order for deterministic containers and canonical forms.
inline int type_cmp(const TypePtr &x, const TypePtr &y) {
    if (x->kind != y->kind) return (int)x->kind < (int)y->kind ? -1 : 1;
    switch (x->kind) {
        case Type::Kind::Atom: return x->atom.compare(y->atom) < 0 ? -1 : (x->atom == y->atom ? 0 : 1);
        case Type::Kind::Span: return type_cmp(x->a, y->a);
        case Type::Kind::Prod:
        case Type::Kind::Arrow: {
            int c = type_cmp(x->a, y->a);
            return c != 0 ? c : type_cmp(x->b, y->b);
        }
        case Type::Kind::QGen: {
            int c = x->ket.a0.compare(y->ket.a0);
            return c != 0 ? c : x->ket.a1.compare(y->ket.a1);
        }
        case Type::Kind::Bottom: return 0;
    }
    return 0;
}

// Node count, the size notion used by the exhaustive subtyping comparison.
inline int type_size(const TypePtr &t) {
    switch (t->kind) {
        case Type::Kind::Atom:
        case Type::Kind::QGen:
        case Type::Kind::Bottom: return 1;
        case Type::Kind::Span: return 1 + type_size(t->a);
        case Type::Kind::Prod:
        case Type::Kind::Arrow: return 1 + type_size(t->a) + type_size(t->b);
    }
    return 1;
}

}  // namespace lsx
