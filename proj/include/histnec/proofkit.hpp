#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "histnec/model.hpp"
#include "histnec/syntax.hpp"

namespace histnec {

enum class ProofSystem { ConSHN_BT, OneBox_XY };

const char* to_string(ProofSystem s);

/// Metavariable name (phi, psi, chi, alpha, beta, gamma) to formula.
using Bindings = std::map<std::string, Formula>;

struct AxiomInstance {
    std::string schema;
    Bindings bindings;
};
struct ModusPonens {
    std::size_t minor;  // phi
    std::size_t major;  // phi -> psi
};
struct GenX {
    std::size_t from;
};
struct GenY {
    std::size_t from;
};
struct GenBox {
    std::size_t from;
};
struct ReplaceEquiv {
    std::size_t from;
    Path path;
};

using Justification = std::variant<AxiomInstance, ModusPonens, GenX, GenY, GenBox, ReplaceEquiv>;

/// Line references are 1-based.
struct ProofLine {
    Formula formula;
    Justification by;
};

struct Proof {
    ProofSystem system = ProofSystem::ConSHN_BT;
    std::vector<ProofLine> lines;
};

struct AxiomMatch {
    std::string schema;
    Bindings bindings;
};

/// Schema ids of each system, "PL" first.
std::vector<std::string> schema_ids(ProofSystem system);

/// Schema text over the metavariables, e.g. "box alpha -> alpha"; throws
/// std::invalid_argument for ids the system lacks (and for PL).
std::string schema_text(ProofSystem system, const std::string& id);

/// Every schema of the system that f instantiates with its side conditions met.
std::vector<AxiomMatch> match_axiom(const Formula& f, ProofSystem system);

/// Throws std::invalid_argument on unknown ids or unbound metavariables.
Formula instantiate(ProofSystem system, const std::string& schema, const Bindings& bindings);

/// Empty when the bindings meet the schema's side conditions.
std::string side_condition_violation(ProofSystem system, const std::string& schema, const Bindings& bindings);

/// Propositional tautology over maximal non-boolean subformulas.
bool is_tautology(const Formula& f);

enum class ProofErrorKind { BadSchema, BadSideCondition, BadReference, ShapeMismatch };

const char* to_string(ProofErrorKind kind);

struct ProofCheck {
    bool ok = true;
    std::size_t line = 0;  // 1-based, 0 when ok
    ProofErrorKind reason = ProofErrorKind::BadSchema;
    std::string message;
};

ProofCheck check_proof(const Proof& pr);

/// Renames the one-box axioms to their counterparts in the larger system.
Proof embed_onebox_proof(const Proof& pr);

class ProofFormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

Proof load_proof(const Json& doc);
Proof load_proof_file(const std::string& path);
Json proof_to_json(const Proof& pr);

}  // namespace histnec
