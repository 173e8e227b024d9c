#pragma once

#include <functional>
#include <string>
#include <vector>

#include "gen.hpp"
#include "histnec/semantics.hpp"

namespace histnec::testing {

struct Identity {
    std::string name;
    std::function<Formula(Gen&)> draw;
};

inline Formula closed(Gen& g) {
    Formula c = g.coin() ? box(g.any(g.below(3), 1)) : Formula::con(g.xy(g.below(3)), g.any(g.below(3), 1));
    if (g.coin(0.3)) c = Formula::negation(c);
    if (g.coin(0.3)) c = lor(c, Formula::con(g.xy(1), g.xy(1)));
    return c;
}

inline std::vector<Identity> shift_identities() {
    auto phi = [](Gen& g) { return g.any(g.below(4), 1); };
    auto alpha = [](Gen& g) { return g.xy(g.below(3)); };
    return {
        {"X ~phi <-> ~X phi", [=](Gen& g) { const Formula a = phi(g); return iff(Formula::next(Formula::negation(a)), Formula::negation(Formula::next(a))); }},
        {"X (phi & psi) <-> X phi & X psi",
         [=](Gen& g) {
             const Formula a = phi(g), b = phi(g);
             return iff(Formula::next(Formula::conjunction(a, b)), Formula::conjunction(Formula::next(a), Formula::next(b)));
         }},
        {"X Y phi <-> phi", [=](Gen& g) { const Formula a = phi(g); return iff(Formula::next(Formula::yesterday(a)), a); }},
        {"X [alpha] phi <-> [X alpha] X phi",
         [=](Gen& g) {
             const Formula a = alpha(g), b = phi(g);
             return iff(Formula::next(Formula::con(a, b)), Formula::con(Formula::next(a), Formula::next(b)));
         }},
        {"Y ~phi <-> Y #f | ~Y phi",
         [=](Gen& g) {
             const Formula a = phi(g);
             return iff(Formula::yesterday(Formula::negation(a)),
                        lor(Formula::yesterday(Formula::bottom()), Formula::negation(Formula::yesterday(a))));
         }},
        {"Y (phi & psi) <-> Y phi & Y psi",
         [=](Gen& g) {
             const Formula a = phi(g), b = phi(g);
             return iff(Formula::yesterday(Formula::conjunction(a, b)), Formula::conjunction(Formula::yesterday(a), Formula::yesterday(b)));
         }},
        {"Y X phi <-> Y #f | phi",
         [=](Gen& g) {
             const Formula a = phi(g);
             return iff(Formula::yesterday(Formula::next(a)), lor(Formula::yesterday(Formula::bottom()), a));
         }},
        {"Y [alpha] phi <-> [Y alpha] Y phi",
         [=](Gen& g) {
             const Formula a = alpha(g), b = phi(g);
             return iff(Formula::yesterday(Formula::con(a, b)), Formula::con(Formula::yesterday(a), Formula::yesterday(b)));
         }},
    };
}

inline std::vector<Identity> conditional_identities() {
    auto phi = [](Gen& g) { return g.any(g.below(4), 1); };
    auto alpha = [](Gen& g) { return g.xy(g.below(3)); };
    return {
        {"[alpha] (phi & psi) <-> [alpha] phi & [alpha] psi",
         [=](Gen& g) {
             const Formula a = alpha(g), b = phi(g), c = phi(g);
             return iff(Formula::con(a, Formula::conjunction(b, c)), Formula::conjunction(Formula::con(a, b), Formula::con(a, c)));
         }},
        {"[alpha] (phi | chi) <-> [alpha] phi | [alpha] chi, chi closed",
         [=](Gen& g) {
             const Formula a = alpha(g), b = phi(g), c = closed(g);
             return iff(Formula::con(a, lor(b, c)), lor(Formula::con(a, b), Formula::con(a, c)));
         }},
        {"[alpha] [beta] gamma <-> [alpha & beta] gamma",
         [=](Gen& g) {
             const Formula a = alpha(g), b = alpha(g), c = phi(g);
             return iff(Formula::con(a, Formula::con(b, c)), Formula::con(Formula::conjunction(a, b), c));
         }},
        {"[alpha] <beta> gamma <-> [alpha] #f | <alpha & beta> gamma",
         [=](Gen& g) {
             const Formula a = alpha(g), b = alpha(g), c = phi(g);
             return iff(Formula::con(a, dual(b, c)), lor(Formula::con(a, Formula::bottom()), dual(Formula::conjunction(a, b), c)));
         }},
        {"[alpha] beta <-> box (alpha -> beta)",
         [=](Gen& g) {
             const Formula a = alpha(g), b = alpha(g);
             return iff(Formula::con(a, b), box(implies(a, b)));
         }},
    };
}

/// Truth of every formula drawn from `draw` at `samples` random points; returns failures.
inline std::vector<std::string> pointwise(Gen& g, const std::function<Formula(Gen&)>& draw, int samples) {
    std::vector<std::string> failures;
    for (int k = 0; k < samples; ++k) {
        const Formula f = draw(g);
        const Point pt = g.point(horizon(f));
        if (!eval(pt, f).value) failures.push_back(print(f, {true}));
    }
    return failures;
}

// Direct clauses for the derived operators, phrased over contexts rather than through desugaring.

inline bool box_clause(const Point& pt, const Formula& phi) {
    bool all = true;
    acceptable(*pt.model, pt.context).for_each([&](std::size_t t) {
        all = all && eval(Point{pt.model, pt.context, t, pt.instant}, phi).value;
    });
    return all;
}

inline bool diamond_clause(const Point& pt, const Formula& phi) {
    bool some = false;
    acceptable(*pt.model, pt.context).for_each([&](std::size_t t) {
        some = some || eval(Point{pt.model, pt.context, t, pt.instant}, phi).value;
    });
    return some;
}

inline bool dual_clause(const Point& pt, const Formula& alpha, const Formula& phi) {
    Context updated = pt.context;
    TimelineSet members(pt.model->timeline_count());
    for (std::size_t t = 0; t < pt.model->timeline_count(); ++t)
        if (eval(Point{pt.model, Context{}, t, pt.instant}, alpha).value) members.set(t);
    updated.rules.push_back({"alpha", members});
    bool some = false;
    acceptable(*pt.model, updated).for_each([&](std::size_t t) {
        some = some || eval(Point{pt.model, updated, t, pt.instant}, phi).value;
    });
    return some;
}

}  // namespace histnec::testing
