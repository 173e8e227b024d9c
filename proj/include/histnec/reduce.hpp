#pragma once

#include <cstddef>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "histnec/syntax.hpp"

namespace histnec {

enum class ReduceErrorKind { NonXYAntecedent, FragmentViolation, StepLimit };

const char* to_string(ReduceErrorKind kind);

class ReduceError : public std::runtime_error {
public:
    ReduceError(ReduceErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}
    ReduceErrorKind kind() const { return kind_; }

private:
    ReduceErrorKind kind_;
};

/// Pushes X and Y inward until they only sit on atoms and #f.
/// Result is in the Con_XY fragment and equivalent to the input.
Formula kappa(const Formula& f);

/// Flattens nested conditionals of a Con_XY formula into the one-box fragment.
Formula mu(const Formula& f);

enum class Direction { Future, Past };

/// X^n(l) or Y^n(l) with l = +payload or -payload; payload is an atom or #f
/// (empty atom name). Offset 0 is the present and always uses Future.
/// For a #f payload the negative sign stands for the outer negation, so
/// -Y^n #f is the guard "instant >= n".
struct NxyLiteral {
    Direction direction = Direction::Future;
    std::size_t offset = 0;
    std::string atom;  // empty for #f
    bool positive = true;

    bool is_bottom() const { return atom.empty(); }
    friend auto operator<=>(const NxyLiteral&, const NxyLiteral&) = default;
};

/// Conjunction of literals, sorted and without duplicates; empty means #t.
struct Element {
    std::vector<NxyLiteral> literals;
    friend auto operator<=>(const Element&, const Element&) = default;
};

Element make_element(std::vector<NxyLiteral> literals);
Element merge(const Element& a, const Element& b);
Formula to_formula(const NxyLiteral& l);
Formula to_formula(const Element& e);
std::string to_string(const NxyLiteral& l);
std::string to_string(const Element& e);

std::size_t max_past_offset(const Element& e);
std::size_t max_future_offset(const Element& e);

/// Instants in {0..i_max} at which e holds on some linear model.
std::set<std::size_t> element_sat_instants(const Element& e, std::size_t i_max);

/// Disjuncts of the DNF of an N_XY formula over its literals, unsatisfiable
/// disjuncts dropped, first-occurrence order.
std::vector<Element> dj(const Formula& beta);

}  // namespace histnec
