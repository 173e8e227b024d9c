#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace histnec {

enum class Kind : std::uint8_t { Atom, Bottom, Not, And, Next, Yesterday, Con };

struct FormulaNode;

/// Immutable formula node handle. Copies share structure; equality is structural.
///
/// Only the core connectives are represented. Derived operators (top, or,
/// implies, iff, box, diamond, dual conditional) are built by the helpers
/// below and never appear as node kinds.
class Formula {
public:
    Formula();  // Bottom

    static Formula atom(std::string name);
    static Formula bottom();
    static Formula negation(Formula f);
    static Formula conjunction(Formula lhs, Formula rhs);
    static Formula next(Formula f);
    static Formula yesterday(Formula f);
    static Formula con(Formula antecedent, Formula consequent);

    Kind kind() const;
    const std::string& name() const;
    /// Operand of Not/Next/Yesterday, left of And, antecedent of Con.
    const Formula& lhs() const;
    /// Right of And, consequent of Con.
    const Formula& rhs() const;
    std::size_t arity() const;
    const Formula& child(std::size_t i) const { return i == 0 ? lhs() : rhs(); }

    std::size_t hash() const;
    std::size_t size() const;
    const void* identity() const { return node_.get(); }

    bool is(Kind k) const { return kind() == k; }

    friend bool operator==(const Formula& a, const Formula& b);
    friend bool operator!=(const Formula& a, const Formula& b) { return !(a == b); }
    /// Total structural order (used for deterministic sets and maps).
    friend bool operator<(const Formula& a, const Formula& b);

private:
    explicit Formula(std::shared_ptr<const FormulaNode> n) : node_(std::move(n)) {}
    static Formula make(Kind k, std::string name, const Formula* lhs, const Formula* rhs);

    std::shared_ptr<const FormulaNode> node_;
};

struct FormulaNode {
    Kind kind = Kind::Bottom;
    std::string name;
    std::vector<Formula> children;
    std::size_t hash = 0;
    std::size_t size = 1;
};

inline Kind Formula::kind() const { return node_->kind; }
inline const std::string& Formula::name() const { return node_->name; }
inline const Formula& Formula::lhs() const { return node_->children[0]; }
inline const Formula& Formula::rhs() const { return node_->children[1]; }
inline std::size_t Formula::arity() const { return node_->children.size(); }
inline std::size_t Formula::hash() const { return node_->hash; }
inline std::size_t Formula::size() const { return node_->size; }

struct FormulaHash {
    std::size_t operator()(const Formula& f) const { return f.hash(); }
};

// Derived connectives, desugared exactly as the parser does.
Formula top();
Formula lor(const Formula& a, const Formula& b);
Formula implies(const Formula& a, const Formula& b);
Formula iff(const Formula& a, const Formula& b);
Formula box(const Formula& f);
Formula diamond(const Formula& f);
Formula dual(const Formula& antecedent, const Formula& f);
Formula next_n(std::size_t n, Formula f);
Formula yesterday_n(std::size_t n, Formula f);

/// Left-folded conjunction/disjunction; empty input gives top / bottom.
Formula conjoin(const std::vector<Formula>& parts);
Formula disjoin(const std::vector<Formula>& parts);

bool is_top(const Formula& f);
bool is_box(const Formula& f);  // Con with antecedent exactly ~#f

class SyntaxError : public std::runtime_error {
public:
    SyntaxError(std::size_t position, const std::string& what)
        : std::runtime_error(what + " at position " + std::to_string(position)), position_(position) {}
    std::size_t position() const { return position_; }

private:
    std::size_t position_;
};

Formula parse(std::string_view text);

struct PrintOptions {
    /// Render [~#f]f as "box f", ~[a]~f as "<a> f", and recognisable
    /// or / implies patterns; binary operands get explicit parentheses.
    bool resugar = false;
};

std::string print(const Formula& f, PrintOptions opts = {});

enum class Fragment : std::uint8_t { XY, N_XY, Con_XY, OneBox, ConSHN, Closed };

const char* to_string(Fragment tag);

using FragmentSet = std::set<Fragment>;

FragmentSet fragment_of(const Formula& f);

bool in_xy(const Formula& f);          // no conditional anywhere
bool in_pl(const Formula& f);          // atoms, bottom, not, and
bool in_nxy(const Formula& f);         // boolean combinations of X^n p, X^n #f, Y^n p, Y^n #f
bool in_con_xy(const Formula& f);
bool in_one_box(const Formula& f);
bool in_conshn(const Formula& f);      // every antecedent is conditional-free
bool is_closed(const Formula& f);

std::size_t horizon(const Formula& f);
std::size_t ydepth(const Formula& f);

/// Nesting depth of conditionals.
std::size_t modal_depth(const Formula& f);

std::set<std::string> atoms_of(const Formula& f);

/// Child-index path into a formula (Not/X/Y: 0; And: 0,1; Con: 0 antecedent, 1 consequent).
using Path = std::vector<std::size_t>;

/// Throws std::out_of_range when the path leaves the tree.
const Formula& subformula_at(const Formula& f, const Path& path);
Formula replace_at(const Formula& f, const Path& path, const Formula& replacement);

}  // namespace histnec
