#include "histnec/semantics.hpp"

#include <algorithm>
#include <unordered_map>
#include <unordered_set>

namespace histnec {

const char* to_string(SemanticErrorKind kind) {
    switch (kind) {
        case SemanticErrorKind::HorizonExceeded: return "HorizonExceeded";
        case SemanticErrorKind::NonXYAntecedent: return "NonXYAntecedent";
    }
    return "?";
}

namespace {

void check_antecedents(const Formula& f) {
    if (f.is(Kind::Con) && !in_xy(f.lhs()))
        throw SemanticError(SemanticErrorKind::NonXYAntecedent, "antecedent of " + print(f, {true}) + " contains a conditional");
    for (std::size_t k = 0; k < f.arity(); ++k) check_antecedents(f.child(k));
}

struct ConKey {
    const void* node;
    std::size_t instant;
    TimelineSet at;
    bool operator==(const ConKey& o) const { return node == o.node && instant == o.instant && at == o.at; }
};

struct ConKeyHash {
    std::size_t operator()(const ConKey& k) const {
        return std::hash<const void*>{}(k.node) ^ (k.instant * 0x9e3779b97f4a7c15ULL) ^ (k.at.hash() << 1);
    }
};

class Evaluator {
public:
    Evaluator(const Model& m, bool trace) : m_(m), tracing_(trace) {}

    bool run(const Formula& f, const TimelineSet& at, std::size_t t, std::size_t i) { return visit(f, at, t, i, 0); }

    TimelineSet rule(const Formula& alpha, std::size_t i) {
        TimelineSet r(m_.timeline_count());
        const TimelineSet all = m_.all_timelines();
        for (std::size_t t = 0; t < m_.timeline_count(); ++t)
            if (visit(alpha, all, t, i, 0)) r.set(t);
        return r;
    }

    std::vector<TraceStep> trace;
    std::size_t deepest = 0;

private:
    bool visit(const Formula& f, const TimelineSet& at, std::size_t t, std::size_t i, std::size_t depth) {
        std::size_t slot = 0;
        if (tracing_) {
            slot = trace.size();
            trace.push_back({depth, i, t, f, false});
        }
        const bool v = compute(f, at, t, i, depth);
        if (tracing_) trace[slot].value = v;
        return v;
    }

    bool compute(const Formula& f, const TimelineSet& at, std::size_t t, std::size_t i, std::size_t depth) {
        switch (f.kind()) {
            case Kind::Atom: {
                deepest = std::max(deepest, i);
                auto a = m_.atom_index(f.name());
                return a && m_.holds(m_.state_on(t, i), *a);
            }
            case Kind::Bottom: return false;
            case Kind::Not: return !visit(f.lhs(), at, t, i, depth + 1);
            case Kind::And: return visit(f.lhs(), at, t, i, depth + 1) && visit(f.rhs(), at, t, i, depth + 1);
            case Kind::Next: return visit(f.lhs(), at, t, i + 1, depth + 1);
            case Kind::Yesterday: return i == 0 || visit(f.lhs(), at, t, i - 1, depth + 1);
            case Kind::Con: {
                ConKey key{f.identity(), i, at};
                if (!tracing_) {
                    auto it = memo_.find(key);
                    if (it != memo_.end()) return it->second;
                }
                TimelineSet updated = at;
                const TimelineSet all = m_.all_timelines();
                for (std::size_t u = 0; u < m_.timeline_count(); ++u)
                    if (updated.test(u) && !visit(f.lhs(), all, u, i, depth + 1)) updated.reset(u);
                bool v = true;
                for (std::size_t u = 0; u < m_.timeline_count() && v; ++u)
                    if (updated.test(u)) v = visit(f.rhs(), updated, u, i, depth + 1);
                if (!tracing_) memo_.emplace(std::move(key), v);
                return v;
            }
        }
        return false;
    }

    const Model& m_;
    bool tracing_;
    std::unordered_map<ConKey, bool, ConKeyHash> memo_;
};

}  // namespace

void check_evaluable(const Model& m, std::size_t instant, const Formula& f) {
    check_antecedents(f);
    const std::size_t h = horizon(f);
    if (instant + h > m.depth())
        throw SemanticError(SemanticErrorKind::HorizonExceeded, "instant " + std::to_string(instant) + " + horizon " +
                                                                    std::to_string(h) + " exceeds depth " +
                                                                    std::to_string(m.depth()));
}

Verdict eval(const Point& pt, const Formula& f, EvalOptions opts) {
    check_evaluable(*pt.model, pt.instant, f);
    Evaluator ev(*pt.model, opts.trace);
    Verdict out;
    out.value = ev.run(f, acceptable(*pt.model, pt.context), pt.timeline, pt.instant);
    out.deepest_read = ev.deepest;
    if (opts.trace) out.trace = std::move(ev.trace);
    return out;
}

bool holds_at(const Model& m, const TimelineSet& at, std::size_t timeline, std::size_t instant, const Formula& f) {
    check_evaluable(m, instant, f);
    Evaluator ev(m, false);
    return ev.run(f, at, timeline, instant);
}

Rule generated_rule(const Model& m, const Context&, const Formula& alpha, std::size_t instant) {
    if (!in_xy(alpha))
        throw SemanticError(SemanticErrorKind::NonXYAntecedent, print(alpha, {true}) + " contains a conditional");
    check_evaluable(m, instant, alpha);
    Evaluator ev(m, false);
    return Rule{"[" + print(alpha, {true}) + "]^" + std::to_string(instant), ev.rule(alpha, instant)};
}

Context update_context(const Model& m, const Context& c, const Formula& alpha, std::size_t instant) {
    Rule r = generated_rule(m, c, alpha, instant);
    std::unordered_set<std::string> taken;
    for (const auto& old : c.rules) taken.insert(old.name);
    const std::string base = r.name;
    for (std::size_t n = 2; taken.count(r.name); ++n) r.name = base + "#" + std::to_string(n);
    Context out;
    out.rules.push_back(std::move(r));
    out.rules.insert(out.rules.end(), c.rules.begin(), c.rules.end());
    return out;
}

std::string format_trace(const Model& m, const std::vector<TraceStep>& trace) {
    std::string out;
    for (const auto& s : trace) {
        out += std::to_string(s.depth) + ", " + std::to_string(s.instant) + ", " + m.leaf_id(s.timeline) + ", " +
               print(s.subformula, {true}) + ", " + (s.value ? "true" : "false") + "\n";
    }
    return out;
}

}  // namespace histnec
