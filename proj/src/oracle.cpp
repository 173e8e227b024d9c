#include <algorithm>
#include <cmath>
#include <functional>
#include <set>

#include "histnec/decide.hpp"
#include "histnec/semantics.hpp"

namespace histnec {

namespace {

using Mask = std::uint64_t;

// Subtree rooted at some level, with its leaves numbered left to right.
struct Sub {
    std::uint32_t label = 0;
    std::vector<std::uint32_t> kids;  // indices into the next level's list
    std::size_t leaves = 0;
    std::vector<Mask> masks;  // [level * atoms + atom] -> leaves whose state there holds the atom
};

struct Node {
    Kind kind;
    int a = -1;
    int b = -1;
    int atom = -1;  // index into the bound atoms, -1 for atoms outside them
};

class Compiled {
public:
    Compiled(const Formula& f, const std::vector<std::string>& atoms) : atoms_(atoms) { root_ = add(f); }

    int root() const { return root_; }
    const Node& node(int n) const { return nodes_[static_cast<std::size_t>(n)]; }

    void reads(int n, long long j, std::set<std::pair<int, std::size_t>>& out) const {
        const Node& nd = node(n);
        switch (nd.kind) {
            case Kind::Atom:
                if (nd.atom >= 0) out.emplace(nd.atom, static_cast<std::size_t>(j));
                return;
            case Kind::Bottom: return;
            case Kind::Next: reads(nd.a, j + 1, out); return;
            case Kind::Yesterday:
                if (j > 0) reads(nd.a, j - 1, out);
                return;
            default:
                reads(nd.a, j, out);
                if (nd.b >= 0) reads(nd.b, j, out);
        }
    }

private:
    int add(const Formula& f) {
        Node nd{f.kind()};
        if (f.is(Kind::Atom)) {
            auto it = std::find(atoms_.begin(), atoms_.end(), f.name());
            nd.atom = it == atoms_.end() ? -1 : static_cast<int>(it - atoms_.begin());
        }
        if (f.arity() > 0) nd.a = add(f.lhs());
        if (f.arity() > 1) nd.b = add(f.rhs());
        nodes_.push_back(nd);
        return static_cast<int>(nodes_.size() - 1);
    }

    const std::vector<std::string>& atoms_;
    std::vector<Node> nodes_;
    int root_ = -1;
};

// Truth set over the leaves of one tree, with acceptable set `at`.
class MaskEval {
public:
    MaskEval(const Compiled& c, const Mask* masks, std::size_t atoms, Mask all)
        : c_(c), masks_(masks), atoms_(atoms), all_(all) {}

    Mask run(int n, std::size_t j, Mask at) const {
        const Node& nd = c_.node(n);
        switch (nd.kind) {
            case Kind::Atom: return nd.atom < 0 ? 0 : masks_[j * atoms_ + static_cast<std::size_t>(nd.atom)];
            case Kind::Bottom: return 0;
            case Kind::Not: return ~run(nd.a, j, at) & all_;
            case Kind::And: {
                const Mask l = run(nd.a, j, at);
                return l ? l & run(nd.b, j, at) : 0;
            }
            case Kind::Next: return run(nd.a, j + 1, at);
            case Kind::Yesterday: return j == 0 ? all_ : run(nd.a, j - 1, at);
            case Kind::Con: {
                const Mask updated = at & run(nd.a, j, all_);
                return (run(nd.b, j, updated) & updated) == updated ? all_ : 0;
            }
        }
        return 0;
    }

private:
    const Compiled& c_;
    const Mask* masks_;
    std::size_t atoms_;
    Mask all_;
};

void check_antecedents(const Formula& f) {
    if (f.is(Kind::Con) && !in_xy(f.lhs()))
        throw SemanticError(SemanticErrorKind::NonXYAntecedent, "antecedent of " + print(f, {true}) + " contains a conditional");
    for (std::size_t k = 0; k < f.arity(); ++k) check_antecedents(f.child(k));
}

// Calls fn(indices) for every strictly increasing index tuple of size 1..max_size over [0, n).
template <class F>
bool combinations(std::size_t n, std::size_t max_size, F&& fn) {
    std::vector<std::uint32_t> idx;
    std::function<bool(std::size_t, std::size_t)> rec = [&](std::size_t start, std::size_t size) -> bool {
        if (idx.size() == size) return fn(idx);
        for (std::size_t k = start; k < n; ++k) {
            idx.push_back(static_cast<std::uint32_t>(k));
            if (rec(k + 1, size)) return true;
            idx.pop_back();
        }
        return false;
    };
    for (std::size_t size = 1; size <= max_size; ++size)
        if (rec(0, size)) return true;
    return false;
}

double choose_sum(std::size_t n, std::size_t k_max) {
    double total = 0;
    double c = 1;
    for (std::size_t k = 1; k <= k_max && k <= n; ++k) {
        c = c * static_cast<double>(n - k + 1) / static_cast<double>(k);
        total += c;
    }
    return total;
}

class Search {
public:
    Search(const Formula& f, const OracleBounds& b, std::vector<std::string> atoms)
        : f_(f), b_(b), atoms_(std::move(atoms)), compiled_(f, atoms_) {}

    OracleResult run() {
        const std::size_t h = horizon(f_);
        for (std::size_t i = 0; i <= b_.max_depth; ++i) {
            const std::size_t d = std::max<std::size_t>(1, i + h);
            if (d > b_.max_depth) break;
            if (search(i, d)) break;
        }
        return std::move(result_);
    }

private:
    bool search(std::size_t i, std::size_t d) {
        std::set<std::pair<int, std::size_t>> reads;
        compiled_.reads(compiled_.root(), static_cast<long long>(i), reads);
        std::vector<std::vector<std::uint32_t>> labels(d + 1);
        for (std::size_t level = 0; level <= d; ++level) {
            std::uint32_t readable = 0;
            for (const auto& [a, l] : reads)
                if (l == level) readable |= 1U << a;
            // every subset of the readable atoms
            for (std::uint32_t s = 0;; s = (s - readable) & readable) {
                labels[level].push_back(s);
                if (s == readable) break;
            }
            std::sort(labels[level].begin(), labels[level].end());
        }

        const std::size_t na = atoms_.size();
        levels_.assign(d + 1, {});
        for (std::uint32_t lab : labels[d]) {
            Sub s;
            s.label = lab;
            s.leaves = 1;
            s.masks.assign((d + 1) * na, 0);
            for (std::size_t a = 0; a < na; ++a)
                if (lab >> a & 1U) s.masks[d * na + a] = 1;
            levels_[d].push_back(std::move(s));
        }
        for (std::size_t level = d; level-- > 1;) {
            for (std::uint32_t lab : labels[level]) {
                combinations(levels_[level + 1].size(), b_.max_branch, [&](const std::vector<std::uint32_t>& kids) {
                    levels_[level].push_back(compose(level, lab, kids, d));
                    return false;
                });
            }
        }

        const double trees = static_cast<double>(labels[0].size()) * choose_sum(levels_[1].size(), b_.max_branch);
        if (trees > static_cast<double>(b_.budget))
            throw DecideError(DecideErrorKind::BudgetExceeded,
                              "about " + std::to_string(static_cast<long long>(trees)) + " trees at instant " + std::to_string(i));

        for (std::uint32_t lab : labels[0]) {
            const bool hit = combinations(levels_[1].size(), b_.max_branch, [&](const std::vector<std::uint32_t>& kids) {
                const Sub tree = compose(0, lab, kids, d);
                ++result_.trees;
                return check(tree, i, d);
            });
            if (hit) return true;
        }
        return false;
    }

    Sub compose(std::size_t level, std::uint32_t label, const std::vector<std::uint32_t>& kids, std::size_t d) const {
        const std::size_t na = atoms_.size();
        Sub s;
        s.label = label;
        s.kids = kids;
        s.masks.assign((d + 1) * na, 0);
        for (std::uint32_t k : kids) {
            const Sub& c = levels_[level + 1][k];
            for (std::size_t m = 0; m < s.masks.size(); ++m) s.masks[m] |= c.masks[m] << s.leaves;
            s.leaves += c.leaves;
        }
        const Mask all = s.leaves == 64 ? ~Mask{0} : (Mask{1} << s.leaves) - 1;
        for (std::size_t a = 0; a < na; ++a)
            if (label >> a & 1U) s.masks[level * na + a] = all;
        return s;
    }

    bool check(const Sub& tree, std::size_t i, std::size_t d) {
        const Mask all = tree.leaves == 64 ? ~Mask{0} : (Mask{1} << tree.leaves) - 1;
        const MaskEval ev(compiled_, tree.masks.data(), atoms_.size(), all);
        auto attempt = [&](Mask at) {
            if (++result_.contexts > b_.budget) throw DecideError(DecideErrorKind::BudgetExceeded, "context budget exhausted");
            const Mask failing = at & ~ev.run(compiled_.root(), i, at);
            if (!failing) return false;
            report(tree, d, i, at, static_cast<std::size_t>(__builtin_ctzll(failing)));
            return true;
        };
        return attempt(all);
    }

    void report(const Sub& tree, std::size_t d, std::size_t i, Mask at, std::size_t leaf) {
        ModelSpec spec;
        spec.depth = d;
        spec.root = "w0_1";
        auto names = [&](std::uint32_t label) {
            std::vector<std::string> out;
            for (std::size_t a = 0; a < atoms_.size(); ++a)
                if (label >> a & 1U) out.push_back(atoms_[a]);
            return out;
        };
        spec.states.push_back({"w0_1", std::nullopt, names(tree.label)});
        struct Open {
            const Sub* sub;
            std::string id;
        };
        std::vector<Open> frontier{{&tree, "w0_1"}};
        for (std::size_t level = 1; level <= d; ++level) {
            std::vector<Open> next;
            for (const auto& o : frontier) {
                for (std::uint32_t k : o.sub->kids) {
                    const Sub& c = levels_[level][k];
                    std::string id = "w" + std::to_string(level) + "_" + std::to_string(next.size() + 1);
                    spec.states.push_back({id, o.id, names(c.label)});
                    next.push_back({&c, id});
                }
            }
            frontier = std::move(next);
        }
        SatWitness w;
        w.model = std::make_shared<const Model>(Model::build(spec));
        if (b_.context_mode == ContextMode::SingleRule) {
            Rule r{"R", TimelineSet(w.model->timeline_count())};
            for (std::size_t t = 0; t < w.model->timeline_count(); ++t)
                if (at >> t & 1U) r.members.set(t);
            w.context.rules.push_back(std::move(r));
        }
        w.timeline = leaf;
        w.instant = i;
        if (eval(w.point(), f_).value)
            throw std::logic_error("oracle counterexample does not replay false for " + print(f_, {true}));
        result_.counterexample = std::move(w);
    }

    const Formula& f_;
    const OracleBounds& b_;
    std::vector<std::string> atoms_;
    Compiled compiled_;
    std::vector<std::vector<Sub>> levels_;
    OracleResult result_;
};

}  // namespace

OracleResult brute_force(const Formula& f, const OracleBounds& bounds) {
    check_antecedents(f);
    if (bounds.max_depth < 1 || bounds.max_branch < 1)
        throw DecideError(DecideErrorKind::BadBounds, "depth and branching must be at least 1");
    if (std::pow(static_cast<double>(bounds.max_branch), static_cast<double>(bounds.max_depth)) > 64)
        throw DecideError(DecideErrorKind::BadBounds, "more than 64 leaves per tree");
    std::vector<std::string> atoms = bounds.atoms;
    if (atoms.empty()) {
        for (const auto& a : atoms_of(f)) atoms.push_back(a);
    }
    if (atoms.size() > 16) throw DecideError(DecideErrorKind::BadBounds, "more than 16 atoms");
    return Search(f, bounds, std::move(atoms)).run();
}

}  // namespace histnec
