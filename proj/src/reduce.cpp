#include "histnec/reduce.hpp"

#include <algorithm>
#include <map>
#include <optional>

namespace histnec {

const char* to_string(ReduceErrorKind kind) {
    switch (kind) {
        case ReduceErrorKind::NonXYAntecedent: return "NonXYAntecedent";
        case ReduceErrorKind::FragmentViolation: return "FragmentViolation";
        case ReduceErrorKind::StepLimit: return "StepLimit";
    }
    return "?";
}

namespace {

constexpr std::size_t kStepLimit = 20'000'000;

struct Chain {
    Direction direction = Direction::Future;
    std::size_t offset = 0;
    const Formula* base = nullptr;  // Atom or Bottom
};

// X^n a or Y^n a with a an atom or #f; n = 0 is the bare atom.
std::optional<Chain> as_chain(const Formula& f) {
    Chain c;
    const Formula* cur = &f;
    if (f.is(Kind::Next) || f.is(Kind::Yesterday)) {
        const Kind k = f.kind();
        c.direction = k == Kind::Next ? Direction::Future : Direction::Past;
        while (cur->is(k)) {
            ++c.offset;
            cur = &cur->lhs();
        }
    }
    if (!cur->is(Kind::Atom) && !cur->is(Kind::Bottom)) return std::nullopt;
    c.base = cur;
    return c;
}

class Kappa {
public:
    Formula run(const Formula& f) {
        tick();
        switch (f.kind()) {
            case Kind::Atom:
            case Kind::Bottom: return f;
            case Kind::Not: return Formula::negation(run(f.lhs()));
            case Kind::And: return Formula::conjunction(run(f.lhs()), run(f.rhs()));
            case Kind::Next: return push_x(run(f.lhs()));
            case Kind::Yesterday: return push_y(run(f.lhs()));
            case Kind::Con:
                if (!in_xy(f.lhs()))
                    throw ReduceError(ReduceErrorKind::NonXYAntecedent, print(f, {true}));
                return Formula::con(run(f.lhs()), run(f.rhs()));
        }
        return f;
    }

private:
    Formula push_x(const Formula& g) {
        tick();
        if (auto c = as_chain(g)) {
            if (c->direction == Direction::Past && c->offset > 0) return yesterday_n(c->offset - 1, *c->base);
            return next_n(c->offset + 1, *c->base);
        }
        switch (g.kind()) {
            case Kind::Not: return Formula::negation(push_x(g.lhs()));
            case Kind::And: return Formula::conjunction(push_x(g.lhs()), push_x(g.rhs()));
            case Kind::Con: return Formula::con(push_x(g.lhs()), push_x(g.rhs()));
            default: throw ReduceError(ReduceErrorKind::FragmentViolation, "unnormalized operand " + print(g));
        }
    }

    Formula push_y(const Formula& g) {
        tick();
        if (auto c = as_chain(g)) {
            if (c->direction == Direction::Future && c->offset > 0)
                return lor(Formula::yesterday(Formula::bottom()), next_n(c->offset - 1, *c->base));
            return yesterday_n(c->offset + 1, *c->base);
        }
        switch (g.kind()) {
            case Kind::Not: return lor(Formula::yesterday(Formula::bottom()), Formula::negation(push_y(g.lhs())));
            case Kind::And: return Formula::conjunction(push_y(g.lhs()), push_y(g.rhs()));
            case Kind::Con: return Formula::con(push_y(g.lhs()), push_y(g.rhs()));
            default: throw ReduceError(ReduceErrorKind::FragmentViolation, "unnormalized operand " + print(g));
        }
    }

    void tick() {
        if (++steps_ > kStepLimit) throw ReduceError(ReduceErrorKind::StepLimit, "kappa exceeded its step bound");
    }

    std::size_t steps_ = 0;
};

// Clause literal for the conditional-flattening step: an opaque piece with a sign.
struct Piece {
    Formula f;
    bool positive;
    friend bool operator==(const Piece& a, const Piece& b) { return a.positive == b.positive && a.f == b.f; }
};

using Clause = std::vector<Piece>;

class Mu {
public:
    Formula run(const Formula& f) {
        tick();
        switch (f.kind()) {
            case Kind::Atom:
            case Kind::Bottom:
            case Kind::Next:
            case Kind::Yesterday: return f;
            case Kind::Not: return Formula::negation(run(f.lhs()));
            case Kind::And: return Formula::conjunction(run(f.lhs()), run(f.rhs()));
            case Kind::Con: {
                const Formula body = run(f.rhs());
                if (modal_depth(body) == 0) return Formula::con(f.lhs(), body);
                return flatten(f.lhs(), body);
            }
        }
        return f;
    }

    // [a]b with a not #t becomes box(a -> b).
    Formula lower(const Formula& f) {
        tick();
        switch (f.kind()) {
            case Kind::Not: return Formula::negation(lower(f.lhs()));
            case Kind::And: return Formula::conjunction(lower(f.lhs()), lower(f.rhs()));
            case Kind::Con:
                if (is_top(f.lhs())) return f;
                return box(implies(f.lhs(), f.rhs()));
            default: return f;
        }
    }

private:
    Formula flatten(const Formula& alpha, const Formula& body) {
        std::vector<Formula> conjuncts;
        for (const Clause& clause : cnf(body, true)) {
            std::vector<Formula> betas;
            std::vector<Formula> disjuncts;
            bool emptied = false;
            for (const Piece& p : clause) {
                if (!p.f.is(Kind::Con)) betas.push_back(p.positive ? p.f : Formula::negation(p.f));
            }
            if (!betas.empty()) disjuncts.push_back(Formula::con(alpha, disjoin(betas)));
            for (const Piece& p : clause) {
                if (!p.f.is(Kind::Con)) continue;
                const Formula joint = Formula::conjunction(alpha, p.f.lhs());
                if (p.positive) {
                    disjuncts.push_back(Formula::con(joint, p.f.rhs()));
                } else {
                    if (!emptied) disjuncts.push_back(box(implies(alpha, Formula::bottom())));
                    emptied = true;
                    disjuncts.push_back(Formula::negation(Formula::con(joint, p.f.rhs())));
                }
            }
            conjuncts.push_back(disjuncts.empty() ? Formula::con(alpha, Formula::bottom()) : disjoin(disjuncts));
        }
        return conjoin(conjuncts);
    }

    // Opaque pieces: conditionals and maximal conditional-free subformulas.
    std::vector<Clause> cnf(const Formula& f, bool positive) {
        tick();
        if (f.is(Kind::Con) || modal_depth(f) == 0) return {Clause{Piece{f, positive}}};
        if (f.is(Kind::Not)) return cnf(f.lhs(), !positive);
        if (!f.is(Kind::And)) throw ReduceError(ReduceErrorKind::FragmentViolation, "conditional under a temporal operator: " + print(f));
        auto l = cnf(f.lhs(), positive);
        auto r = cnf(f.rhs(), positive);
        if (positive) {
            l.insert(l.end(), r.begin(), r.end());
            return l;
        }
        std::vector<Clause> out;
        for (const auto& a : l) {
            for (const auto& b : r) {
                Clause c = a;
                for (const auto& p : b)
                    if (std::find(c.begin(), c.end(), p) == c.end()) c.push_back(p);
                if (!tautological(c)) out.push_back(std::move(c));
                tick();
            }
        }
        return out;
    }

    static bool tautological(const Clause& c) {
        for (const auto& p : c)
            for (const auto& q : c)
                if (p.positive && !q.positive && p.f == q.f) return true;
        return false;
    }

    void tick() {
        if (++steps_ > kStepLimit) throw ReduceError(ReduceErrorKind::StepLimit, "mu exceeded its step bound");
    }

    std::size_t steps_ = 0;
};

NxyLiteral literal(Direction d, std::size_t offset, const Formula& base, bool positive) {
    NxyLiteral l;
    l.direction = offset == 0 ? Direction::Future : d;
    l.offset = offset;
    l.atom = base.is(Kind::Atom) ? base.name() : std::string();
    l.positive = positive;
    return l;
}

using Dnf = std::vector<std::vector<NxyLiteral>>;

Dnf dnf(const Formula& f, bool positive) {
    if (auto c = as_chain(f)) {
        const bool bottom = c->base->is(Kind::Bottom);
        if (positive) return {{literal(c->direction, c->offset, *c->base, true)}};
        if (bottom) {
            if (c->direction == Direction::Past && c->offset > 0) return {{literal(Direction::Past, c->offset, *c->base, false)}};
            return {{}};  // ~X^n #f
        }
        if (c->direction == Direction::Past && c->offset > 0)
            return {{literal(Direction::Past, c->offset, *c->base, false),
                     literal(Direction::Past, c->offset, Formula::bottom(), false)}};
        return {{literal(c->direction, c->offset, *c->base, false)}};
    }
    if (f.is(Kind::Not)) return dnf(f.lhs(), !positive);
    if (!f.is(Kind::And)) throw ReduceError(ReduceErrorKind::FragmentViolation, print(f, {true}) + " is not in the N_XY fragment");
    Dnf l = dnf(f.lhs(), positive);
    Dnf r = dnf(f.rhs(), positive);
    if (!positive) {
        l.insert(l.end(), r.begin(), r.end());
        return l;
    }
    Dnf out;
    for (const auto& a : l)
        for (const auto& b : r) {
            auto c = a;
            c.insert(c.end(), b.begin(), b.end());
            out.push_back(std::move(c));
        }
    return out;
}

}  // namespace

Formula kappa(const Formula& f) {
    Formula out = Kappa().run(f);
    if (!in_con_xy(out)) throw std::logic_error("kappa produced a formula outside Con_XY: " + print(out));
    return out;
}

Formula mu(const Formula& f) {
    if (!in_con_xy(f)) throw ReduceError(ReduceErrorKind::FragmentViolation, print(f, {true}) + " is not in the Con_XY fragment");
    Mu m;
    Formula out = m.lower(m.run(f));
    if (!in_one_box(out)) throw std::logic_error("mu produced a formula outside the one-box fragment: " + print(out));
    return out;
}

Element make_element(std::vector<NxyLiteral> literals) {
    std::sort(literals.begin(), literals.end());
    literals.erase(std::unique(literals.begin(), literals.end()), literals.end());
    return Element{std::move(literals)};
}

Element merge(const Element& a, const Element& b) {
    auto lits = a.literals;
    lits.insert(lits.end(), b.literals.begin(), b.literals.end());
    return make_element(std::move(lits));
}

Formula to_formula(const NxyLiteral& l) {
    const Formula base = l.is_bottom() ? Formula::bottom() : Formula::atom(l.atom);
    if (l.direction == Direction::Future) {
        const Formula pos = next_n(l.offset, base);
        return l.positive ? pos : Formula::negation(pos);
    }
    const Formula pos = yesterday_n(l.offset, base);
    if (l.positive || l.is_bottom()) return l.positive ? pos : Formula::negation(pos);
    // Y^n ~p, written over N_XY atoms.
    return lor(yesterday_n(l.offset, Formula::bottom()), Formula::negation(pos));
}

Formula to_formula(const Element& e) {
    std::vector<Formula> parts;
    for (const auto& l : e.literals) parts.push_back(to_formula(l));
    return conjoin(parts);
}

std::string to_string(const NxyLiteral& l) {
    std::string s = l.positive ? "+" : "-";
    if (l.offset > 0) s += std::string(l.direction == Direction::Future ? "X" : "Y") + "^" + std::to_string(l.offset) + " ";
    return s + (l.is_bottom() ? "#f" : l.atom);
}

std::string to_string(const Element& e) {
    std::string s = "{";
    for (std::size_t k = 0; k < e.literals.size(); ++k) s += (k ? ", " : "") + to_string(e.literals[k]);
    return s + "}";
}

std::size_t max_past_offset(const Element& e) {
    std::size_t m = 0;
    for (const auto& l : e.literals)
        if (l.direction == Direction::Past) m = std::max(m, l.offset);
    return m;
}

std::size_t max_future_offset(const Element& e) {
    std::size_t m = 0;
    for (const auto& l : e.literals)
        if (l.direction == Direction::Future) m = std::max(m, l.offset);
    return m;
}

std::set<std::size_t> element_sat_instants(const Element& e, std::size_t i_max) {
    std::set<std::size_t> out;
    for (std::size_t i = 0; i <= i_max; ++i) {
        bool ok = true;
        // position relative to the root -> atom -> required value
        std::map<long long, std::map<std::string, bool>> slots;
        for (const auto& l : e.literals) {
            if (l.is_bottom()) {
                if (l.direction == Direction::Future) ok = ok && !l.positive;
                else ok = ok && (l.positive ? i < l.offset : i >= l.offset);
                continue;
            }
            long long pos;
            if (l.direction == Direction::Future) pos = static_cast<long long>(i + l.offset);
            else if (l.offset <= i) pos = static_cast<long long>(i - l.offset);
            else continue;
            auto [it, fresh] = slots[pos].emplace(l.atom, l.positive);
            if (!fresh && it->second != l.positive) ok = false;
        }
        if (ok) out.insert(i);
    }
    return out;
}

std::vector<Element> dj(const Formula& beta) {
    std::vector<Element> out;
    for (auto& lits : dnf(beta, true)) {
        Element e = make_element(std::move(lits));
        if (element_sat_instants(e, max_past_offset(e) + 1).empty()) continue;
        if (std::find(out.begin(), out.end(), e) == out.end()) out.push_back(std::move(e));
    }
    return out;
}

}  // namespace histnec
