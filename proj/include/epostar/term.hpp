#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace epostar {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Search/measure ran out of its configured budget.
class BudgetError : public Error {
public:
    explicit BudgetError(const std::string& msg) : Error(msg) {}
};

using SymbolId = std::int32_t;

enum class SymbolKind { Defined, Constructor };

struct FunctionSymbol {
    std::string name;
    int arity = 0;
    SymbolKind kind = SymbolKind::Constructor;
};

/// A set of function symbols with unique names and fixed arities.
class Signature {
public:
    SymbolId add(std::string name, int arity, SymbolKind kind);
    std::optional<SymbolId> find(const std::string& name) const;
    SymbolId require(const std::string& name) const;

    const FunctionSymbol& operator[](SymbolId id) const { return symbols_.at(static_cast<size_t>(id)); }
    FunctionSymbol& operator[](SymbolId id) { return symbols_.at(static_cast<size_t>(id)); }
    int size() const { return static_cast<int>(symbols_.size()); }

    std::vector<SymbolId> all() const;
    std::vector<SymbolId> defined() const;
    std::vector<SymbolId> constructors() const;
    /// Symbol ids sorted by name; keeps every emitted artifact byte-stable.
    std::vector<SymbolId> sorted_by_name() const;

    /// A name not yet present, derived from `base` by appending underscores.
    std::string fresh_name(const std::string& base) const;

private:
    std::vector<FunctionSymbol> symbols_;
    std::map<std::string, SymbolId> by_name_;
};

/// An immutable first-order term: a variable or a symbol applied to arguments.
/// Nodes are shared; copying a Term is cheap and thread-safe.
class Term {
public:
    static Term var(std::string name);
    static Term app(SymbolId sym, std::vector<Term> args = {});

    bool is_var() const { return node_->is_var; }
    bool is_app() const { return !node_->is_var; }
    const std::string& var_name() const;
    SymbolId symbol() const;
    const std::vector<Term>& args() const { return node_->args; }

    int size() const { return node_->size; }
    int depth() const { return node_->depth; }
    std::size_t hash() const { return node_->hash; }

    bool operator==(const Term& other) const;
    bool operator!=(const Term& other) const { return !(*this == other); }

    /// Total order (size, then structure); used for deterministic sets.
    static int compare(const Term& a, const Term& b);
    bool operator<(const Term& other) const { return compare(*this, other) < 0; }

    void collect_vars(std::vector<std::string>& out) const;
    std::vector<std::string> vars() const;
    bool is_ground() const;

    std::string render(const Signature& sig) const;

private:
    struct Node {
        bool is_var;
        std::string name;  // variables only
        SymbolId sym = -1;
        std::vector<Term> args;
        int size = 1;
        int depth = 0;
        std::size_t hash = 0;
    };
    explicit Term(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
    std::shared_ptr<const Node> node_;
};

struct TermHash {
    std::size_t operator()(const Term& t) const { return t.hash(); }
};

struct Rule {
    Term lhs;
    Term rhs;
};

/// A term rewrite system: signature plus ordered rules.
/// The defined/constructor split always reflects the rule lhs roots.
class Trs {
public:
    Trs() = default;
    Trs(Signature sig, std::vector<Rule> rules);

    const Signature& signature() const { return sig_; }
    Signature& signature() { return sig_; }
    const std::vector<Rule>& rules() const { return rules_; }

    void add_rule(Rule rule);

    bool is_constructor_trs() const;
    /// max { |r| : l -> r }, 0 when there are no rules.
    int max_rhs_size() const;

    std::string render() const;

private:
    Signature sig_;
    std::vector<Rule> rules_;
};

/// Finite mapping from variable names to terms; identity elsewhere.
class Substitution {
public:
    Substitution() = default;

    bool bind(const std::string& var, const Term& t);  // false on conflicting rebind
    const Term* lookup(const std::string& var) const;
    Term apply(const Term& t) const;
    bool empty() const { return map_.empty(); }
    const std::map<std::string, Term>& entries() const { return map_; }

private:
    std::map<std::string, Term> map_;
};

/// Minimal substitution sigma with pattern * sigma == subject, or nullopt.
std::optional<Substitution> match(const Term& pattern, const Term& subject);

struct TermStats {
    int size;
    int depth;
};
TermStats term_stats(const Term& t);

/// Root is defined and all arguments are constructor terms (variables allowed).
bool is_basic(const Term& t, const Trs& trs);

/// All symbols are constructors (variables allowed).
bool is_constructor_term(const Term& t, const Signature& sig);

}  // namespace epostar
