#include "histnec/decide.hpp"

#include <algorithm>
#include <map>

#include "histnec/semantics.hpp"

namespace histnec {

const char* to_string(DecideErrorKind kind) {
    switch (kind) {
        case DecideErrorKind::WitnessVerificationFailed: return "WitnessVerificationFailed";
        case DecideErrorKind::BudgetExceeded: return "BudgetExceeded";
        case DecideErrorKind::BadBounds: return "BadBounds";
    }
    return "?";
}

Formula to_formula(const CoreFormula& cf) {
    std::vector<Formula> parts{box(cf.h)};
    for (const auto& x : cf.i) parts.push_back(diamond(x));
    parts.push_back(cf.l);
    return conjoin(parts);
}

std::string to_string(const CoreFormula& cf) {
    std::string s = "H = " + print(cf.h, {true}) + "; I = (";
    for (std::size_t k = 0; k < cf.i.size(); ++k) s += (k ? ", " : "") + print(cf.i[k], {true});
    return s + "); L = " + print(cf.l, {true});
}

namespace {

// Constant folding over not/and; `target` (if given) is replaced by `value`.
Formula assign(const Formula& f, const Formula* target, bool value) {
    if (target && f == *target) return value ? top() : Formula::bottom();
    switch (f.kind()) {
        case Kind::Not: {
            Formula g = assign(f.lhs(), target, value);
            if (g.is(Kind::Bottom)) return top();
            if (is_top(g)) return Formula::bottom();
            return Formula::negation(g);
        }
        case Kind::And: {
            Formula l = assign(f.lhs(), target, value);
            if (l.is(Kind::Bottom)) return l;
            Formula r = assign(f.rhs(), target, value);
            if (r.is(Kind::Bottom)) return r;
            if (is_top(l)) return r;
            if (is_top(r)) return l;
            return Formula::conjunction(l, r);
        }
        default: return f;
    }
}

void collect_boxes(const Formula& f, std::vector<Formula>& out) {
    if (f.is(Kind::Con)) {
        if (std::find(out.begin(), out.end(), f) == out.end()) out.push_back(f);
        return;
    }
    for (std::size_t k = 0; k < f.arity(); ++k) collect_boxes(f.child(k), out);
}

bool occurs(const Formula& f, const Formula& g) {
    if (f == g) return true;
    for (std::size_t k = 0; k < f.arity(); ++k)
        if (occurs(f.child(k), g)) return true;
    return false;
}

void expand(const Formula& f, const std::vector<Formula>& boxes, std::size_t next, std::vector<Formula>& hs,
            std::vector<Formula>& is, std::vector<CoreFormula>& out) {
    if (f.is(Kind::Bottom)) return;
    while (next < boxes.size() && !occurs(f, boxes[next])) ++next;
    if (next == boxes.size()) {
        CoreFormula cf;
        cf.h = conjoin(hs);
        if (!is.empty()) cf.i = is;
        cf.l = f;
        out.push_back(std::move(cf));
        return;
    }
    const Formula& b = boxes[next];
    hs.push_back(b.rhs());
    expand(assign(f, &b, true), boxes, next + 1, hs, is, out);
    hs.pop_back();
    is.push_back(Formula::negation(b.rhs()));
    expand(assign(f, &b, false), boxes, next + 1, hs, is, out);
    is.pop_back();
}

// Root-slot literals of an element when the evaluation instant is i.
std::vector<const NxyLiteral*> root_literals(const Element& e, std::size_t i) {
    std::vector<const NxyLiteral*> out;
    for (const auto& l : e.literals) {
        if (l.is_bottom()) continue;
        if (i == 0 ? l.offset == 0 : (l.direction == Direction::Past && l.offset == i)) out.push_back(&l);
    }
    return out;
}

class CoreSearch {
public:
    CoreSearch(const CoreFormula& cf, std::size_t min_horizon) : cf_(cf), min_horizon_(min_horizon) {}

    std::optional<SatWitness> run() {
        dh_ = dj(kappa(cf_.h));
        for (const auto& x : cf_.i) di_.push_back(dj(kappa(x)));
        dl_ = dj(kappa(cf_.l));
        if (dh_.empty() || dl_.empty()) return std::nullopt;
        for (const auto& d : di_)
            if (d.empty()) return std::nullopt;
        std::size_t m = 0;
        auto widen = [&](const std::vector<Element>& es) {
            for (const auto& e : es) m = std::max(m, max_past_offset(e));
        };
        widen(dh_);
        widen(dl_);
        for (const auto& d : di_) widen(d);
        instants_ = m + 2;
        State s{std::vector<bool>(instants_, true), std::vector<std::map<std::string, bool>>(instants_)};
        if (!dfs(0, s)) return std::nullopt;
        return std::move(found_);
    }

private:
    struct State {
        std::vector<bool> alive;
        std::vector<std::map<std::string, bool>> root;
    };

    bool dfs(std::size_t level, const State& s) {
        const std::size_t k = cf_.i.size();
        if (level == k + 1) {
            for (std::size_t i = 0; i < instants_; ++i)
                if (s.alive[i]) {
                    found_ = build(i, s.root[i]);
                    return true;
                }
            return false;
        }
        const auto& partner = level < k ? di_[level] : dl_;
        for (const auto& h : dh_) {
            for (const auto& x : partner) {
                Element e = merge(h, x);
                State next = s;
                bool any = false;
                const auto sat = element_sat_instants(e, instants_ - 1);
                for (std::size_t i = 0; i < instants_; ++i) {
                    if (!next.alive[i]) continue;
                    bool ok = sat.count(i) > 0;
                    for (const NxyLiteral* l : ok ? root_literals(e, i) : std::vector<const NxyLiteral*>{}) {
                        auto [it, fresh] = next.root[i].emplace(l->atom, l->positive);
                        if (!fresh && it->second != l->positive) ok = false;
                    }
                    next.alive[i] = ok;
                    any = any || ok;
                }
                if (!any) continue;
                chosen_.push_back(std::move(e));
                if (dfs(level + 1, next)) return true;
                chosen_.pop_back();
            }
        }
        return false;
    }

    SatWitness build(std::size_t i, const std::map<std::string, bool>& root) {
        std::size_t max_x = 0;
        for (const auto& e : chosen_) max_x = std::max(max_x, max_future_offset(e));
        const std::size_t depth = std::max({std::size_t{1}, i + max_x, i + horizon(to_formula(cf_)), i + min_horizon_});
        const std::size_t branches = chosen_.size();

        // labels[b][level] for level >= 1
        std::vector<std::vector<std::map<std::string, bool>>> labels(branches, std::vector<std::map<std::string, bool>>(depth + 1));
        for (std::size_t b = 0; b < branches; ++b) {
            for (const auto& l : chosen_[b].literals) {
                if (l.is_bottom()) continue;
                std::size_t pos;
                if (l.direction == Direction::Future) pos = i + l.offset;
                else if (l.offset <= i) pos = i - l.offset;
                else continue;
                if (pos == 0) continue;
                labels[b][pos][l.atom] = l.positive;
            }
        }
        auto positives = [](const std::map<std::string, bool>& m) {
            std::vector<std::string> out;
            for (const auto& [a, v] : m)
                if (v) out.push_back(a);
            return out;
        };
        ModelSpec spec;
        spec.depth = depth;
        spec.root = "w0_1";
        spec.states.push_back({"w0_1", std::nullopt, positives(root)});
        for (std::size_t level = 1; level <= depth; ++level) {
            for (std::size_t b = 0; b < branches; ++b) {
                std::string parent = level == 1 ? "w0_1" : "w" + std::to_string(level - 1) + "_" + std::to_string(b + 1);
                spec.states.push_back({"w" + std::to_string(level) + "_" + std::to_string(b + 1), parent, positives(labels[b][level])});
            }
        }
        SatWitness w;
        w.model = std::make_shared<const Model>(Model::build(spec));
        w.timeline = branches - 1;
        w.instant = i;
        w.sequence = AtomicSequence{chosen_};
        return w;
    }

    const CoreFormula& cf_;
    std::size_t min_horizon_;
    std::vector<Element> dh_, dl_;
    std::vector<std::vector<Element>> di_;
    std::size_t instants_ = 0;
    std::vector<Element> chosen_;
    std::optional<SatWitness> found_;
};

void verify(const SatWitness& w, const Formula& f, const std::string& what) {
    if (!eval(w.point(), f).value)
        throw DecideError(DecideErrorKind::WitnessVerificationFailed, "witness for " + what + " does not satisfy " + print(f, {true}));
}

}  // namespace

std::vector<CoreFormula> to_cores(const Formula& f) {
    if (!in_one_box(f)) throw ReduceError(ReduceErrorKind::FragmentViolation, print(f, {true}) + " is not in the one-box fragment");
    std::vector<Formula> boxes;
    collect_boxes(f, boxes);
    std::vector<CoreFormula> out;
    std::vector<Formula> hs, is;
    expand(assign(f, nullptr, false), boxes, 0, hs, is, out);
    return out;
}

std::vector<Formula> basic_sequence(const CoreFormula& cf) {
    std::vector<Formula> out;
    for (const auto& x : cf.i) out.push_back(Formula::conjunction(cf.h, x));
    out.push_back(Formula::conjunction(cf.h, cf.l));
    return out;
}

std::optional<SatWitness> sat_core(const CoreFormula& cf, std::size_t min_horizon) {
    auto w = CoreSearch(cf, min_horizon).run();
    if (w) verify(*w, to_formula(cf), "core " + to_string(cf));
    return w;
}

std::optional<SatWitness> satisfiable(const Formula& f) {
    const Formula reduced = mu(kappa(f));
    const std::size_t h = horizon(f);
    for (const auto& cf : to_cores(reduced)) {
        if (auto w = sat_core(cf, h)) {
            verify(*w, f, print(f, {true}));
            return w;
        }
    }
    return std::nullopt;
}

ValidityResult valid(const Formula& f) {
    ValidityResult r;
    r.countermodel = satisfiable(Formula::negation(f));
    r.valid = !r.countermodel;
    return r;
}

}  // namespace histnec
