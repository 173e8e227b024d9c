#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "histnec/model.hpp"
#include "histnec/syntax.hpp"

namespace histnec {

enum class SemanticErrorKind { HorizonExceeded, NonXYAntecedent };

const char* to_string(SemanticErrorKind kind);

class SemanticError : public std::runtime_error {
public:
    SemanticError(SemanticErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}
    SemanticErrorKind kind() const { return kind_; }

private:
    SemanticErrorKind kind_;
};

struct TraceStep {
    std::size_t depth;     // recursion depth of the visit
    std::size_t instant;
    std::size_t timeline;
    Formula subformula;
    bool value;
};

struct Verdict {
    bool value = false;
    /// Visits in pre-order; the first entry is the queried formula.
    std::optional<std::vector<TraceStep>> trace;
    /// Deepest instant at which a valuation was consulted (0 when none was).
    std::size_t deepest_read = 0;
};

struct EvalOptions {
    bool trace = false;
};

/// Throws SemanticError when the point's instant plus the horizon exceeds the
/// model depth, or when a conditional antecedent is not conditional-free.
Verdict eval(const Point& pt, const Formula& f, EvalOptions opts = {});

/// Truth at (m, context with acceptable set `at`, timeline, instant) without
/// requiring the timeline to be acceptable. Same preconditions as eval.
bool holds_at(const Model& m, const TimelineSet& at, std::size_t timeline, std::size_t instant, const Formula& f);

/// Timelines of the whole model on which a conditional-free alpha holds at i.
Rule generated_rule(const Model& m, const Context& c, const Formula& alpha, std::size_t instant);

/// c plus the rule generated by alpha at i, under a fresh name.
Context update_context(const Model& m, const Context& c, const Formula& alpha, std::size_t instant);

/// Rejects formulas that eval would reject at this instant.
void check_evaluable(const Model& m, std::size_t instant, const Formula& f);

std::string format_trace(const Model& m, const std::vector<TraceStep>& trace);

}  // namespace histnec
