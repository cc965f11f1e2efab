#include "lsx/parser.hpp"

#include <cctype>
#include <cmath>
#include <map>
#include <optional>

namespace lsx {

namespace {

struct Token {
    enum class Kind { Ident, Num, ImagNum, Ket, Sym, End };
    Kind kind;
    std::string text;  // Ident/Sym/Ket (ket content without bars)
    double num = 0;    // Num / ImagNum
    int line = 1, col = 1;
};

struct Lexer {
    const std::string &src;
    size_t pos = 0;
    int line = 1, col = 1;
    std::vector<Token> toks;

    explicit Lexer(const std::string &s) : src(s) { run(); }

    [[noreturn]] void fail(const std::string &msg) { throw ParseError(msg, line, col); }

    char peek(size_t off = 0) const { return pos + off < src.size() ? src[pos + off] : '\0'; }

    void advance() {
        if (src[pos] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
        ++pos;
    }

    void push(Token t) {
        toks.push_back(std::move(t));
    }

    void run() {
        while (pos < src.size()) {
            char c = peek();
            int tl = line, tc = col;
            if (c == '#') {
                while (pos < src.size() && peek() != '\n') advance();
                continue;
            }
            if (std::isspace((unsigned char)c)) {
                advance();
                continue;
            }
            if (c == '(' && peek(1) == 'x' && peek(2) == ')') {
                advance();
                advance();
                advance();
                push({Token::Kind::Sym, "(x)", 0, tl, tc});
                continue;
            }
            if (c == '=' && peek(1) == '>') {
                advance();
                advance();
                push({Token::Kind::Sym, "=>", 0, tl, tc});
                continue;
            }
            if (std::isdigit((unsigned char)c)) {
                std::string n;
                while (std::isdigit((unsigned char)peek())) {
                    n += peek();
                    advance();
                }
                if (peek() == '.' && std::isdigit((unsigned char)peek(1))) {
                    n += '.';
                    advance();
                    while (std::isdigit((unsigned char)peek())) {
                        n += peek();
                        advance();
                    }
                }
                if (peek() == 'e' || peek() == 'E') {
                    size_t save = pos;
                    std::string e;
                    e += peek();
                    advance();
                    if (peek() == '+' || peek() == '-') {
                        e += peek();
                        advance();
                    }
                    if (std::isdigit((unsigned char)peek())) {
                        while (std::isdigit((unsigned char)peek())) {
                            e += peek();
                            advance();
                        }
                        n += e;
                    } else {
                        pos = save;  // not an exponent; leave for ident lexing
                    }
                }
                bool imag = false;
                if (peek() == 'i' && !std::isalnum((unsigned char)peek(1)) && peek(1) != '_') {
                    imag = true;
                    advance();
                }
                push({imag ? Token::Kind::ImagNum : Token::Kind::Num, n, std::stod(n), tl, tc});
                continue;
            }
            if (c == '|') {
                advance();
                std::string content;
                while (pos < src.size() && peek() != '>') {
                    if (peek() == '\n') fail("unterminated ket");
                    content += peek();
                    advance();
                }
                if (pos == src.size()) fail("unterminated ket");
                advance();  // '>'
                if (content.empty()) fail("empty ket");
                push({Token::Kind::Ket, content, 0, tl, tc});
                continue;
            }
            if (std::isalpha((unsigned char)c) || c == '_') {
                std::string id;
                while (std::isalnum((unsigned char)peek()) || peek() == '_' || peek() == '\'') {
                    id += peek();
                    advance();
                }
                push({Token::Kind::Ident, id, 0, tl, tc});
                continue;
            }
            std::string sym(1, c);
            if (std::string("\\:.()*+-,=[]").find(c) == std::string::npos)
                fail(std::string("unexpected character '") + c + "'");
            advance();
            push({Token::Kind::Sym, sym, 0, tl, tc});
        }
        push({Token::Kind::End, "", 0, line, col});
    }
};

bool is_keyword(const std::string &id) {
    static const char *kws[] = {"if",    "then",  "else", "zero",  "err",   "head",
                                "tail",  "castl", "castr", "cast",  "pi",    "pix",
                                "basis", "def",   "up",   "down",  "strict", "overlap",
                                "isqrt2"};
    for (auto *k : kws)
        if (id == k) return true;
    if (id.size() > 2 && id.substr(0, 2) == "if" &&
        std::all_of(id.begin() + 2, id.end(), [](char c) { return std::isdigit((unsigned char)c); }))
        return true;
    if (id.size() > 3 && id.substr(0, 3) == "ite") {
        std::string rest = id.substr(3);
        if (rest == "x" ||
            std::all_of(rest.begin(), rest.end(), [](char c) { return std::isdigit((unsigned char)c); }))
            return true;
    }
    return false;
}

struct Parser {
    std::vector<Token> toks;
    size_t pos = 0;
    const BasisRegistry *reg;

    const Token &cur() const { return toks[pos]; }
    const Token &next(size_t off = 1) const {
        return toks[std::min(pos + off, toks.size() - 1)];
    }

    [[noreturn]] void fail(const std::string &msg) {
        throw ParseError(msg + " (got '" + cur().text + "')", cur().line, cur().col);
    }

    bool at_sym(const std::string &s) const {
        return cur().kind == Token::Kind::Sym && cur().text == s;
    }
    bool at_ident(const std::string &s) const {
        return cur().kind == Token::Kind::Ident && cur().text == s;
    }
    void eat() { ++pos; }
    void expect_sym(const std::string &s) {
        if (!at_sym(s)) fail("expected '" + s + "'");
        eat();
    }
    std::string expect_ident() {
        if (cur().kind != Token::Kind::Ident) fail("expected identifier");
        std::string s = cur().text;
        eat();
        return s;
    }

    // ---- types ----

    TypePtr type() {
        TypePtr lhs = prod_type();
        if (at_sym("=>")) {
            eat();
            if (!is_qubit_type(lhs)) fail("function domain must be a qubit type");
            return Type::arrow(lhs, type());
        }
        return lhs;
    }

    TypePtr prod_type() {
        TypePtr lhs = atom_type();
        std::vector<TypePtr> fs{lhs};
        while (at_sym("*")) {
            eat();
            fs.push_back(atom_type());
        }
        return fs.size() == 1 ? fs[0] : Type::prod_of(fs);
    }

    TypePtr atom_type() {
        if (at_sym("(")) {
            eat();
            TypePtr t = type();
            expect_sym(")");
            return t;
        }
        if (cur().kind != Token::Kind::Ident) fail("expected type");
        std::string id = cur().text;
        if (id == "S") {
            eat();
            expect_sym("(");
            TypePtr t = type();
            expect_sym(")");
            return Type::span(t);
        }
        if (id == "Q") {
            eat();
            expect_sym("[");
            if (cur().kind != Token::Kind::Ket) fail("expected ket in Q[...]");
            Vec2 v = ket_vector(cur().text);
            eat();
            expect_sym("]");
            return Type::qgen(v);
        }
        if (reg->has(id)) {
            eat();
            return Type::mk_atom(id);
        }
        fail("unknown type '" + id + "'");
    }

    Vec2 ket_vector(const std::string &content) {
        auto [basis, idx] = ket_ref(content);
        const BasisDef &d = reg->get(basis);
        return idx == 0 ? d.up : d.down;
    }

    // Resolves a single-ket content string to (basis, idx).
    std::pair<std::string, int> ket_ref(const std::string &content) {
        if (content == "0") return {"B", 0};
        if (content == "1") return {"B", 1};
        if (content == "+") return {"X", 0};
        if (content == "-") return {"X", 1};
        if (content.size() > 2 && (content.substr(0, 2) == "up" || content.substr(0, 2) == "dn")) {
            std::string n = content.substr(2);
            if (!n.empty() && std::all_of(n.begin(), n.end(), [](char c) {
                    return std::isdigit((unsigned char)c);
                })) {
                std::string b = "B" + n;
                if (!reg->has(b)) fail("ket references unregistered basis " + b);
                return {b, content[0] == 'u' ? 0 : 1};
            }
        }
        fail("unknown ket |" + content + ">");
    }

    // ---- scalars ----

    std::optional<Scalar> try_scalar() {
        size_t save = pos;
        auto part = [&](bool &ok) -> double {
            ok = true;
            double sign = 1;
            while (at_sym("-") || at_sym("+")) {
                if (at_sym("-")) sign = -sign;
                eat();
            }
            if (at_ident("isqrt2")) {
                eat();
                return sign / std::sqrt(2.0);
            }
            if (cur().kind == Token::Kind::Num) {
                double v = cur().num;
                eat();
                return sign * v;
            }
            ok = false;
            return 0;
        };
        bool ok = false;
        // imaginary-only literal
        if (cur().kind == Token::Kind::ImagNum ||
            ((at_sym("-") || at_sym("+")) && next().kind == Token::Kind::ImagNum)) {
            double sign = 1;
            while (at_sym("-") || at_sym("+")) {
                if (at_sym("-")) sign = -sign;
                eat();
            }
            double v = cur().num;
            eat();
            return Scalar{0, sign * v};
        }
        double re = part(ok);
        if (!ok) {
            pos = save;
            return std::nullopt;
        }
        if ((at_sym("+") || at_sym("-")) && next().kind == Token::Kind::ImagNum) {
            double sign = at_sym("-") ? -1 : 1;
            eat();
            double v = cur().num;
            eat();
            return Scalar{re, sign * v};
        }
        return Scalar{re, 0};
    }

    // ---- terms ----
    // expr > lambda/if | sum;  sum > dotted (+|- dotted)*;  dotted > scalar '.' dotted | prefix;
    // prefix > head/tail/cast/pi ... prefix | tensor;  tensor > app ((x) app)*;  app > atom+.

    TermPtr expr() {
        if (at_sym("\\")) return lambda();
        if (cur().kind == Token::Kind::Ident && if_basis(cur().text)) return if_expr();
        return sum();
    }

    static std::string ite_basis_of(const std::string &id) {
        // "ite" -> B, "itex" -> X, "ite<N>" -> B<N>; empty when not an ite form.
        if (id == "ite") return "B";
        if (id == "itex") return "X";
        if (id.size() > 3 && id.substr(0, 3) == "ite" &&
            std::all_of(id.begin() + 3, id.end(),
                        [](char c) { return std::isdigit((unsigned char)c); }))
            return "B" + id.substr(3);
        return "";
    }

    bool if_basis(const std::string &id) const {
        if (id == "if" || id == "ifx") return true;
        return id.size() > 2 && id.substr(0, 2) == "if" &&
               std::all_of(id.begin() + 2, id.end(),
                           [](char c) { return std::isdigit((unsigned char)c); });
    }

    TermPtr lambda() {
        expect_sym("\\");
        std::string x = expect_ident();
        expect_sym(":");
        TypePtr t = type();
        expect_sym(".");
        return Term::lam(x, t, expr());
    }

    TermPtr if_expr() {
        std::string id = expect_ident();
        std::string basis = id == "if" ? "B" : (id == "ifx" ? "X" : "B" + id.substr(2));
        if (!reg->has(basis)) fail("conditional over unregistered basis " + basis);
        TermPtr cond = expr();
        if (!at_ident("then")) fail("expected 'then'");
        eat();
        TermPtr then_ = expr();
        if (!at_ident("else")) fail("expected 'else'");
        eat();
        TermPtr else_ = expr();
        return Term::app(Term::ite(basis, then_, else_), cond);
    }

    TermPtr sum() {
        bool neg = false;
        if (at_sym("-")) {
            neg = true;
            eat();
        }
        TermPtr first = dotted();
        if (neg) first = negate(first);
        std::vector<TermPtr> parts{first};
        while (at_sym("+") || at_sym("-")) {
            bool minus = at_sym("-");
            eat();
            TermPtr t = dotted();
            parts.push_back(minus ? negate(t) : t);
        }
        return parts.size() == 1 ? parts[0] : Term::sum(std::move(parts));
    }

    static TermPtr negate(const TermPtr &t) {
        if (t->is(Term::Kind::Scale))
            return Term::scale(Scalar{-t->scalar.re, -t->scalar.im}, t->kids[0]);
        return Term::scale(Scalar{-1, 0}, t);
    }

    TermPtr dotted() {
        size_t save = pos;
        if (auto s = try_scalar()) {
            if (at_sym(".")) {
                eat();
                return Term::scale(*s, dotted());
            }
            pos = save;
        }
        return prefix();
    }

    TermPtr prefix() {
        if (cur().kind == Token::Kind::Ident) {
            const std::string &id = cur().text;
            if (id == "head") {
                eat();
                return Term::head(prefix());
            }
            if (id == "tail") {
                eat();
                return Term::tail(prefix());
            }
            if (id == "castl" || id == "cast") {
                eat();
                return Term::castl(prefix());
            }
            if (id == "castr") {
                eat();
                return Term::castr(prefix());
            }
            if (id == "pi" || id == "pix") {
                std::string basis = id == "pi" ? "B" : "X";
                eat();
                if (id == "pi" && at_sym("[")) {
                    eat();
                    if (cur().kind != Token::Kind::Num) fail("expected basis index");
                    basis = "B" + cur().text;
                    if (!reg->has(basis)) fail("measurement over unregistered basis " + basis);
                    eat();
                    expect_sym("]");
                }
                if (cur().kind != Token::Kind::Num || cur().num != std::floor(cur().num) ||
                    cur().num < 1)
                    fail("expected positive qubit count after measurement");
                int m = (int)cur().num;
                eat();
                return Term::meas(m, basis, prefix());
            }
        }
        return tensor_expr();
    }

    TermPtr tensor_expr() {
        TermPtr lhs = app_expr();
        std::vector<TermPtr> fs{lhs};
        while (at_sym("(x)")) {
            eat();
            fs.push_back(app_expr());
        }
        return fs.size() == 1 ? fs[0] : Term::tensor_of(fs);
    }

    bool at_atom_start() const {
        switch (cur().kind) {
            case Token::Kind::Ket: return true;
            case Token::Kind::Sym: return cur().text == "(";
            case Token::Kind::Ident: {
                const std::string &id = cur().text;
                if (!ite_basis_of(id).empty()) return true;
                return !is_keyword(id);
            }
            default: return false;
        }
    }

    TermPtr app_expr() {
        TermPtr t = atom();
        while (at_atom_start()) t = Term::app(t, atom());
        return t;
    }

    TermPtr atom() {
        if (at_sym("(")) {
            eat();
            TermPtr t = expr();
            expect_sym(")");
            return t;
        }
        if (cur().kind == Token::Kind::Ket) {
            std::string content = cur().text;
            eat();
            return ket_term(content);
        }
        if (cur().kind == Token::Kind::Ident) {
            std::string id = cur().text;
            if (id == "zero") {
                eat();
                return Term::zero();
            }
            if (id == "err") {
                eat();
                return Term::err();
            }
            if (std::string b = ite_basis_of(id); !b.empty()) {
                if (!reg->has(b)) fail("conditional over unregistered basis " + b);
                eat();
                expect_sym("(");
                TermPtr then_ = expr();
                expect_sym(",");
                TermPtr else_ = expr();
                expect_sym(")");
                return Term::ite(b, then_, else_);
            }
            if (is_keyword(id)) fail("unexpected keyword '" + id + "'");
            eat();
            return Term::var(id);
        }
        fail("expected a term");
    }

    TermPtr ket_term(const std::string &content) {
        // Multi-ket sugar |abc...> over {0,1,+,-} expands to a tensor.
        bool multi = content.size() > 1 &&
                     std::all_of(content.begin(), content.end(), [](char c) {
                         return c == '0' || c == '1' || c == '+' || c == '-';
                     });
        if (multi) {
            std::vector<TermPtr> fs;
            for (char c : content) {
                auto [b, i] = ket_ref(std::string(1, c));
                fs.push_back(Term::ket(b, i));
            }
            return Term::tensor_of(fs);
        }
        auto [b, i] = ket_ref(content);
        return Term::ket(b, i);
    }

    // ---- source files ----

    Scalar scalar_or_fail() {
        if (auto s = try_scalar()) return *s;
        fail("expected scalar literal");
    }

    SourceFile file() {
        SourceFile sf;
        reg = &sf.registry;
        std::map<std::string, TermPtr> env;
        while (at_ident("basis") || at_ident("def")) {
            if (at_ident("basis")) {
                eat();
                std::string id = expect_ident();
                expect_sym("=");
                if (!at_ident("up")) fail("expected 'up'");
                eat();
                expect_sym("(");
                Scalar u0 = scalar_or_fail();
                expect_sym(",");
                Scalar u1 = scalar_or_fail();
                expect_sym(")");
                expect_sym(",");
                if (!at_ident("down")) fail("expected 'down'");
                eat();
                expect_sym("(");
                Scalar d0 = scalar_or_fail();
                expect_sym(",");
                Scalar d1 = scalar_or_fail();
                expect_sym(")");
                RegisterMode mode = RegisterMode::Strict;
                if (at_ident("strict")) {
                    eat();
                } else if (at_ident("overlap")) {
                    mode = RegisterMode::Overlapping;
                    eat();
                }
                try {
                    sf.registry.register_basis({id, {u0, u1}, {d0, d1}}, mode);
                } catch (const BasisError &e) {
                    throw ParseError(e.what(), cur().line, cur().col);
                }
            } else {
                eat();
                std::string name = expect_ident();
                expect_sym("=");
                TermPtr body = expr();
                for (auto &[n, d] : env)
                    if (free_vars(body).count(n)) body = subst(body, n, d);
                if (env.count(name)) fail("duplicate definition of " + name);
                env[name] = body;
                sf.defs.emplace_back(name, body);
            }
        }
        if (cur().kind != Token::Kind::End) {
            TermPtr main = expr();
            for (auto &[n, d] : env)
                if (free_vars(main).count(n)) main = subst(main, n, d);
            sf.main = canonicalize(main);
        }
        if (cur().kind != Token::Kind::End) fail("trailing input");
        return sf;
    }
};

}  // namespace

SourceFile parse_file(const std::string &source) {
    Lexer lex(source);
    Parser p;
    p.toks = std::move(lex.toks);
    return p.file();
}

TermPtr parse_term(const std::string &source, const BasisRegistry &reg) {
    Lexer lex(source);
    Parser p;
    p.toks = std::move(lex.toks);
    p.reg = &reg;
    TermPtr t = p.expr();
    if (p.cur().kind != Token::Kind::End) p.fail("trailing input");
    return canonicalize(t);
}

TypePtr parse_type(const std::string &source, const BasisRegistry &reg) {
    Lexer lex(source);
    Parser p;
    p.toks = std::move(lex.toks);
    p.reg = &reg;
    TypePtr t = p.type();
    if (p.cur().kind != Token::Kind::End) p.fail("trailing input");
    return t;
}

}  // namespace lsx
