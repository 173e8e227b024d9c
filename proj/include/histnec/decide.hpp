#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "histnec/model.hpp"
#include "histnec/reduce.hpp"
#include "histnec/syntax.hpp"

namespace histnec {

/// box H & dia I_1 & ... & dia I_k & L, every part in N_XY.
struct CoreFormula {
    Formula h = top();
    std::vector<Formula> i{top()};
    Formula l = top();
};

Formula to_formula(const CoreFormula& cf);
std::string to_string(const CoreFormula& cf);

/// Disjunction-equivalent list of cores for a one-box formula.
std::vector<CoreFormula> to_cores(const Formula& f);

/// (H & I_1, ..., H & I_k, H & L)
std::vector<Formula> basic_sequence(const CoreFormula& cf);

/// One element per diamond witness, then the element for the evaluation timeline.
struct AtomicSequence {
    std::vector<Element> witnesses;
};

/// A pointed model; the context of constructed witnesses is always empty.
struct SatWitness {
    std::shared_ptr<const Model> model;
    Context context;
    std::size_t timeline = 0;
    std::size_t instant = 0;
    std::optional<AtomicSequence> sequence;

    Point point() const { return Point{model, context, timeline, instant}; }
};

enum class DecideErrorKind { WitnessVerificationFailed, BudgetExceeded, BadBounds };

const char* to_string(DecideErrorKind kind);

class DecideError : public std::runtime_error {
public:
    DecideError(DecideErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}
    DecideErrorKind kind() const { return kind_; }

private:
    DecideErrorKind kind_;
};

/// Satisfying pointed model for the core, verified by evaluation. The model is
/// deep enough to evaluate formulas of horizon `min_horizon` at the instant.
/// Components may be any conditional-free formulas; kappa brings them into N_XY.
std::optional<SatWitness> sat_core(const CoreFormula& cf, std::size_t min_horizon = 0);

std::optional<SatWitness> satisfiable(const Formula& f);

struct ValidityResult {
    bool valid = false;
    std::optional<SatWitness> countermodel;  // satisfies the negation
};

ValidityResult valid(const Formula& f);

// Exhaustive search over small models -----------------------------------

enum class ContextMode { Empty, SingleRule };

struct OracleBounds {
    std::size_t max_depth = 3;
    std::size_t max_branch = 2;
    /// Atoms the valuation ranges over; empty means the atoms of the formula.
    std::vector<std::string> atoms;
    ContextMode context_mode = ContextMode::SingleRule;
    /// Cap on (tree, context) pairs examined.
    std::size_t budget = 200'000'000;
};

struct OracleResult {
    /// A point falsifying the formula, confirmed by eval.
    std::optional<SatWitness> counterexample;
    std::size_t trees = 0;
    std::size_t contexts = 0;
};

/// Enumerates every tree of depth at most max_depth and branching at most
/// max_branch, up to duplicate sibling subtrees and up to valuations of atoms
/// the formula cannot read, together with every instant the formula fits at
/// and every admissible context of the chosen mode. Order: instant ascending,
/// then root label, then child subtrees by count and index, then rules by
/// bitmask over leaves.
OracleResult brute_force(const Formula& f, const OracleBounds& bounds);

}  // namespace histnec
