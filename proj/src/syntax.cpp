#include "histnec/syntax.hpp"

#include <algorithm>
#include <cctype>
#include <functional>

namespace histnec {

namespace {

std::size_t mix(std::size_t seed, std::size_t v) {
    return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

}  // namespace

Formula Formula::make(Kind k, std::string name, const Formula* lhs, const Formula* rhs) {
    auto n = std::make_shared<FormulaNode>();
    n->kind = k;
    n->name = std::move(name);
    n->hash = mix(static_cast<std::size_t>(k) + 1, std::hash<std::string>{}(n->name));
    if (lhs) {
        n->children.push_back(*lhs);
        n->hash = mix(n->hash, lhs->hash());
        n->size += lhs->size();
    }
    if (rhs) {
        n->children.push_back(*rhs);
        n->hash = mix(n->hash, rhs->hash());
        n->size += rhs->size();
    }
    return Formula(std::move(n));
}

Formula::Formula() : Formula(bottom()) {}

Formula Formula::atom(std::string name) { return make(Kind::Atom, std::move(name), nullptr, nullptr); }

Formula Formula::bottom() {
    static const Formula b = make(Kind::Bottom, {}, nullptr, nullptr);
    return b;
}

Formula Formula::negation(Formula f) { return make(Kind::Not, {}, &f, nullptr); }
Formula Formula::conjunction(Formula lhs, Formula rhs) { return make(Kind::And, {}, &lhs, &rhs); }
Formula Formula::next(Formula f) { return make(Kind::Next, {}, &f, nullptr); }
Formula Formula::yesterday(Formula f) { return make(Kind::Yesterday, {}, &f, nullptr); }
Formula Formula::con(Formula antecedent, Formula consequent) {
    return make(Kind::Con, {}, &antecedent, &consequent);
}

bool operator==(const Formula& a, const Formula& b) {
    if (a.identity() == b.identity()) return true;
    if (a.hash() != b.hash() || a.kind() != b.kind() || a.size() != b.size()) return false;
    if (a.kind() == Kind::Atom) return a.name() == b.name();
    for (std::size_t i = 0; i < a.arity(); ++i)
        if (!(a.child(i) == b.child(i))) return false;
    return true;
}

bool operator<(const Formula& a, const Formula& b) {
    if (a.identity() == b.identity()) return false;
    if (a.kind() != b.kind()) return a.kind() < b.kind();
    if (a.kind() == Kind::Atom) return a.name() < b.name();
    for (std::size_t i = 0; i < a.arity(); ++i) {
        if (a.child(i) < b.child(i)) return true;
        if (b.child(i) < a.child(i)) return false;
    }
    return false;
}

Formula top() {
    static const Formula t = Formula::negation(Formula::bottom());
    return t;
}

Formula lor(const Formula& a, const Formula& b) {
    return Formula::negation(Formula::conjunction(Formula::negation(a), Formula::negation(b)));
}

Formula implies(const Formula& a, const Formula& b) {
    return Formula::negation(Formula::conjunction(a, Formula::negation(b)));
}

Formula iff(const Formula& a, const Formula& b) { return Formula::conjunction(implies(a, b), implies(b, a)); }

Formula box(const Formula& f) { return Formula::con(top(), f); }

Formula diamond(const Formula& f) { return Formula::negation(box(Formula::negation(f))); }

Formula dual(const Formula& antecedent, const Formula& f) {
    return Formula::negation(Formula::con(antecedent, Formula::negation(f)));
}

Formula next_n(std::size_t n, Formula f) {
    for (std::size_t i = 0; i < n; ++i) f = Formula::next(std::move(f));
    return f;
}

Formula yesterday_n(std::size_t n, Formula f) {
    for (std::size_t i = 0; i < n; ++i) f = Formula::yesterday(std::move(f));
    return f;
}

Formula conjoin(const std::vector<Formula>& parts) {
    if (parts.empty()) return top();
    Formula acc = parts.front();
    for (std::size_t i = 1; i < parts.size(); ++i) acc = Formula::conjunction(acc, parts[i]);
    return acc;
}

Formula disjoin(const std::vector<Formula>& parts) {
    if (parts.empty()) return Formula::bottom();
    Formula acc = parts.front();
    for (std::size_t i = 1; i < parts.size(); ++i) acc = lor(acc, parts[i]);
    return acc;
}

bool is_top(const Formula& f) { return f.is(Kind::Not) && f.lhs().is(Kind::Bottom); }

bool is_box(const Formula& f) { return f.is(Kind::Con) && is_top(f.lhs()); }

// ---------------------------------------------------------------------------
// Parser

namespace {

enum class Tok {
    Atom, False, True, Not, And, Or, Implies, Iff, Next, Yesterday,
    LBracket, RBracket, LAngle, RAngle, LParen, RParen, Box, Dia, End
};

struct Token {
    Tok kind;
    std::string text;
    std::size_t pos;
};

std::vector<Token> tokenize(std::string_view s) {
    std::vector<Token> out;
    std::size_t i = 0;
    auto starts = [&](std::string_view lit) { return s.substr(i, lit.size()) == lit; };
    while (i < s.size()) {
        const char c = s[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
            continue;
        }
        const std::size_t at = i;
        if (starts("<->")) {
            out.push_back({Tok::Iff, "<->", at});
            i += 3;
        } else if (starts("->")) {
            out.push_back({Tok::Implies, "->", at});
            i += 2;
        } else if (starts("#f")) {
            out.push_back({Tok::False, "#f", at});
            i += 2;
        } else if (starts("#t")) {
            out.push_back({Tok::True, "#t", at});
            i += 2;
        } else if (c >= 'a' && c <= 'z') {
            std::size_t j = i + 1;
            while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_')) ++j;
            std::string word(s.substr(i, j - i));
            if (word == "box")
                out.push_back({Tok::Box, word, at});
            else if (word == "dia")
                out.push_back({Tok::Dia, word, at});
            else
                out.push_back({Tok::Atom, word, at});
            i = j;
        } else {
            Tok k;
            switch (c) {
                case '~': k = Tok::Not; break;
                case '&': k = Tok::And; break;
                case '|': k = Tok::Or; break;
                case 'X': k = Tok::Next; break;
                case 'Y': k = Tok::Yesterday; break;
                case '[': k = Tok::LBracket; break;
                case ']': k = Tok::RBracket; break;
                case '<': k = Tok::LAngle; break;
                case '>': k = Tok::RAngle; break;
                case '(': k = Tok::LParen; break;
                case ')': k = Tok::RParen; break;
                default: throw SyntaxError(at, std::string("unknown token '") + c + "'");
            }
            out.push_back({k, std::string(1, c), at});
            ++i;
        }
    }
    out.push_back({Tok::End, "", s.size()});
    return out;
}

class Parser {
public:
    explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

    Formula parse_all() {
        Formula f = parse_iff();
        if (peek().kind != Tok::End) throw SyntaxError(peek().pos, "unexpected '" + peek().text + "'");
        return f;
    }

private:
    const Token& peek() const { return toks_[pos_]; }
    const Token& take() { return toks_[pos_++]; }
    void expect(Tok k, const char* what) {
        if (peek().kind != k) {
            const std::string got = peek().kind == Tok::End ? "end of input" : "'" + peek().text + "'";
            throw SyntaxError(peek().pos, std::string("expected ") + what + ", got " + got);
        }
        ++pos_;
    }

    Formula parse_iff() {
        Formula lhs = parse_implies();
        while (peek().kind == Tok::Iff) {
            take();
            lhs = iff(lhs, parse_implies());
        }
        return lhs;
    }

    Formula parse_implies() {
        Formula lhs = parse_or();
        if (peek().kind == Tok::Implies) {
            take();
            return implies(lhs, parse_implies());
        }
        return lhs;
    }

    Formula parse_or() {
        Formula lhs = parse_and();
        while (peek().kind == Tok::Or) {
            take();
            lhs = lor(lhs, parse_and());
        }
        return lhs;
    }

    Formula parse_and() {
        Formula lhs = parse_unary();
        while (peek().kind == Tok::And) {
            take();
            lhs = Formula::conjunction(lhs, parse_unary());
        }
        return lhs;
    }

    Formula parse_unary() {
        const Token& t = take();
        switch (t.kind) {
            case Tok::Not: return Formula::negation(parse_unary());
            case Tok::Next: return Formula::next(parse_unary());
            case Tok::Yesterday: return Formula::yesterday(parse_unary());
            case Tok::Box: return box(parse_unary());
            case Tok::Dia: return diamond(parse_unary());
            case Tok::LBracket: {
                Formula a = parse_iff();
                expect(Tok::RBracket, "']'");
                return Formula::con(a, parse_unary());
            }
            case Tok::LAngle: {
                Formula a = parse_iff();
                expect(Tok::RAngle, "'>'");
                return dual(a, parse_unary());
            }
            case Tok::LParen: {
                Formula f = parse_iff();
                expect(Tok::RParen, "')'");
                return f;
            }
            case Tok::Atom: return Formula::atom(t.text);
            case Tok::False: return Formula::bottom();
            case Tok::True: return top();
            case Tok::End: throw SyntaxError(t.pos, "unexpected end of input");
            default: throw SyntaxError(t.pos, "unexpected '" + t.text + "'");
        }
    }

    std::vector<Token> toks_;
    std::size_t pos_ = 0;
};

}  // namespace

Formula parse(std::string_view text) { return Parser(tokenize(text)).parse_all(); }

// ---------------------------------------------------------------------------
// Printer

namespace {

struct Sugar {
    enum class Op { None, Or, Implies, Iff };
    Op op = Op::None;
    const Formula* a = nullptr;
    const Formula* b = nullptr;
};

bool is_implication(const Formula& f) {
    return f.is(Kind::Not) && f.lhs().is(Kind::And) && f.lhs().rhs().is(Kind::Not);
}

Sugar binary_sugar(const Formula& f) {
    if (f.is(Kind::And) && is_implication(f.lhs()) && is_implication(f.rhs())) {
        const Formula& l = f.lhs().lhs();
        const Formula& r = f.rhs().lhs();
        if (l.lhs() == r.rhs().lhs() && l.rhs().lhs() == r.lhs()) return {Sugar::Op::Iff, &l.lhs(), &l.rhs().lhs()};
    }
    if (f.is(Kind::Not) && f.lhs().is(Kind::And)) {
        const Formula& c = f.lhs();
        if (c.lhs().is(Kind::Not) && c.rhs().is(Kind::Not)) return {Sugar::Op::Or, &c.lhs().lhs(), &c.rhs().lhs()};
        if (c.rhs().is(Kind::Not)) return {Sugar::Op::Implies, &c.lhs(), &c.rhs().lhs()};
    }
    return {};
}

class Printer {
public:
    explicit Printer(PrintOptions o) : opts_(o) {}

    std::string top_level(const Formula& f) { return opts_.resugar ? sugared(f) : plain(f); }

private:
    // Plain mode: minimal parentheses over the core connectives.
    std::string plain(const Formula& f) {
        switch (f.kind()) {
            case Kind::Atom: return f.name();
            case Kind::Bottom: return "#f";
            case Kind::Not: return "~" + plain_operand(f.lhs());
            case Kind::Next: return "X " + plain_operand(f.lhs());
            case Kind::Yesterday: return "Y " + plain_operand(f.lhs());
            case Kind::Con: return "[" + plain(f.lhs()) + "] " + plain_operand(f.rhs());
            case Kind::And: return plain(f.lhs()) + " & " + plain_operand(f.rhs());
        }
        return {};
    }
    std::string plain_operand(const Formula& f) {
        return f.is(Kind::And) ? "(" + plain(f) + ")" : plain(f);
    }

    std::string sugared(const Formula& f) {
        const Sugar s = binary_sugar(f);
        switch (s.op) {
            case Sugar::Op::Or: return operand(*s.a) + " | " + operand(*s.b);
            case Sugar::Op::Implies: return operand(*s.a) + " -> " + operand(*s.b);
            case Sugar::Op::Iff: return operand(*s.a) + " <-> " + operand(*s.b);
            case Sugar::Op::None: break;
        }
        switch (f.kind()) {
            case Kind::Atom: return f.name();
            case Kind::Bottom: return "#f";
            case Kind::Not:
                if (is_top(f)) return "#t";
                if (f.lhs().is(Kind::Con) && f.lhs().rhs().is(Kind::Not) && binary_sugar(f.lhs().rhs()).op == Sugar::Op::None) {
                    const Formula& c = f.lhs();
                    if (is_top(c.lhs())) return "dia " + operand(c.rhs().lhs());
                    return "<" + sugared(c.lhs()) + "> " + operand(c.rhs().lhs());
                }
                return "~" + operand(f.lhs());
            case Kind::Next: return "X " + operand(f.lhs());
            case Kind::Yesterday: return "Y " + operand(f.lhs());
            case Kind::Con:
                if (is_top(f.lhs())) return "box " + operand(f.rhs());
                return "[" + sugared(f.lhs()) + "] " + operand(f.rhs());
            case Kind::And: return operand(f.lhs()) + " & " + operand(f.rhs());
        }
        return {};
    }
    std::string operand(const Formula& f) {
        const bool binary = f.is(Kind::And) || binary_sugar(f).op != Sugar::Op::None;
        return binary ? "(" + sugared(f) + ")" : sugared(f);
    }

    PrintOptions opts_;
};

}  // namespace

std::string print(const Formula& f, PrintOptions opts) { return Printer(opts).top_level(f); }

// ---------------------------------------------------------------------------
// Fragments and metrics

const char* to_string(Fragment tag) {
    switch (tag) {
        case Fragment::XY: return "XY";
        case Fragment::N_XY: return "N_XY";
        case Fragment::Con_XY: return "Con_XY";
        case Fragment::OneBox: return "OneBox";
        case Fragment::ConSHN: return "ConSHN";
        case Fragment::Closed: return "Closed";
    }
    return "?";
}

namespace {

// X^n a or Y^n a with a an atom or bottom (n may be 0).
bool is_nxy_atom(const Formula& f) {
    const Formula* g = &f;
    if (g->is(Kind::Next)) {
        while (g->is(Kind::Next)) g = &g->lhs();
    } else {
        while (g->is(Kind::Yesterday)) g = &g->lhs();
    }
    return g->is(Kind::Atom) || g->is(Kind::Bottom);
}

}  // namespace

bool in_xy(const Formula& f) {
    if (f.is(Kind::Con)) return false;
    for (std::size_t i = 0; i < f.arity(); ++i)
        if (!in_xy(f.child(i))) return false;
    return true;
}

bool in_pl(const Formula& f) {
    switch (f.kind()) {
        case Kind::Atom:
        case Kind::Bottom: return true;
        case Kind::Not: return in_pl(f.lhs());
        case Kind::And: return in_pl(f.lhs()) && in_pl(f.rhs());
        default: return false;
    }
}

bool in_nxy(const Formula& f) {
    switch (f.kind()) {
        case Kind::Not: return in_nxy(f.lhs());
        case Kind::And: return in_nxy(f.lhs()) && in_nxy(f.rhs());
        case Kind::Con: return false;
        default: return is_nxy_atom(f);
    }
}

bool in_con_xy(const Formula& f) {
    switch (f.kind()) {
        case Kind::Not: return in_con_xy(f.lhs());
        case Kind::And: return in_con_xy(f.lhs()) && in_con_xy(f.rhs());
        case Kind::Con: return in_nxy(f.lhs()) && in_con_xy(f.rhs());
        default: return is_nxy_atom(f);
    }
}

bool in_one_box(const Formula& f) {
    switch (f.kind()) {
        case Kind::Not: return in_one_box(f.lhs());
        case Kind::And: return in_one_box(f.lhs()) && in_one_box(f.rhs());
        case Kind::Con: return is_top(f.lhs()) && in_nxy(f.rhs());
        default: return is_nxy_atom(f);
    }
}

bool in_conshn(const Formula& f) {
    if (f.is(Kind::Con)) return in_xy(f.lhs()) && in_conshn(f.rhs());
    for (std::size_t i = 0; i < f.arity(); ++i)
        if (!in_conshn(f.child(i))) return false;
    return true;
}

bool is_closed(const Formula& f) {
    switch (f.kind()) {
        case Kind::Con: return in_xy(f.lhs()) && in_conshn(f.rhs());
        case Kind::Not: return is_closed(f.lhs());
        case Kind::And: return is_closed(f.lhs()) && is_closed(f.rhs());
        default: return false;
    }
}

FragmentSet fragment_of(const Formula& f) {
    FragmentSet tags;
    if (in_xy(f)) tags.insert(Fragment::XY);
    if (in_nxy(f)) tags.insert(Fragment::N_XY);
    if (in_con_xy(f)) tags.insert(Fragment::Con_XY);
    if (in_one_box(f)) tags.insert(Fragment::OneBox);
    if (in_conshn(f)) tags.insert(Fragment::ConSHN);
    if (is_closed(f)) tags.insert(Fragment::Closed);
    return tags;
}

std::size_t horizon(const Formula& f) {
    switch (f.kind()) {
        case Kind::Atom:
        case Kind::Bottom: return 0;
        case Kind::Not: return horizon(f.lhs());
        case Kind::Next: return 1 + horizon(f.lhs());
        case Kind::Yesterday: {
            const std::size_t h = horizon(f.lhs());
            return h == 0 ? 0 : h - 1;
        }
        case Kind::And:
        case Kind::Con: return std::max(horizon(f.lhs()), horizon(f.rhs()));
    }
    return 0;
}

std::size_t ydepth(const Formula& f) {
    switch (f.kind()) {
        case Kind::Atom:
        case Kind::Bottom: return 0;
        case Kind::Not: return ydepth(f.lhs());
        case Kind::Yesterday: return 1 + ydepth(f.lhs());
        case Kind::Next: {
            const std::size_t d = ydepth(f.lhs());
            return d == 0 ? 0 : d - 1;
        }
        case Kind::And:
        case Kind::Con: return std::max(ydepth(f.lhs()), ydepth(f.rhs()));
    }
    return 0;
}

std::size_t modal_depth(const Formula& f) {
    std::size_t d = 0;
    for (std::size_t i = 0; i < f.arity(); ++i) d = std::max(d, modal_depth(f.child(i)));
    return f.is(Kind::Con) ? std::max(d, modal_depth(f.rhs()) + 1) : d;
}

namespace {
void collect_atoms(const Formula& f, std::set<std::string>& out) {
    if (f.is(Kind::Atom)) out.insert(f.name());
    for (std::size_t i = 0; i < f.arity(); ++i) collect_atoms(f.child(i), out);
}
}  // namespace

std::set<std::string> atoms_of(const Formula& f) {
    std::set<std::string> out;
    collect_atoms(f, out);
    return out;
}

const Formula& subformula_at(const Formula& f, const Path& path) {
    const Formula* g = &f;
    for (std::size_t step : path) {
        if (step >= g->arity()) throw std::out_of_range("path leaves the formula");
        g = &g->child(step);
    }
    return *g;
}

namespace {
Formula replace_from(const Formula& f, const Path& path, std::size_t at, const Formula& r) {
    if (at == path.size()) return r;
    const std::size_t step = path[at];
    if (step >= f.arity()) throw std::out_of_range("path leaves the formula");
    Formula c = replace_from(f.child(step), path, at + 1, r);
    switch (f.kind()) {
        case Kind::Not: return Formula::negation(c);
        case Kind::Next: return Formula::next(c);
        case Kind::Yesterday: return Formula::yesterday(c);
        case Kind::And: return step == 0 ? Formula::conjunction(c, f.rhs()) : Formula::conjunction(f.lhs(), c);
        case Kind::Con: return step == 0 ? Formula::con(c, f.rhs()) : Formula::con(f.lhs(), c);
        default: throw std::out_of_range("path leaves the formula");
    }
}
}  // namespace

Formula replace_at(const Formula& f, const Path& path, const Formula& replacement) {
    return replace_from(f, path, 0, replacement);
}

}  // namespace histnec
