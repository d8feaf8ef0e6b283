#pragma once

#include "epostar/term.hpp"

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

namespace epostar {

using FormulaRef = std::int32_t;

enum class FOp : std::uint8_t { False, True, Atom, Not, And, Or, Implies, Iff };

struct FormulaNode {
    FOp op;
    std::int32_t atom = -1;  // for FOp::Atom
    std::vector<FormulaRef> kids;
};

/// Propositional formulas as a hash-consed DAG with constant folding:
/// structurally identical subformulas are one node, and composite nodes
/// never contain constant children.
class FormulaBuilder {
public:
    FormulaBuilder();

    FormulaRef ffalse() const { return 0; }
    FormulaRef ftrue() const { return 1; }
    FormulaRef constant(bool b) const { return b ? 1 : 0; }
    FormulaRef atom(std::int32_t atom_index);
    FormulaRef negate(FormulaRef a);
    FormulaRef conj(std::vector<FormulaRef> kids);
    FormulaRef disj(std::vector<FormulaRef> kids);
    FormulaRef conj2(FormulaRef a, FormulaRef b) { return conj({a, b}); }
    FormulaRef disj2(FormulaRef a, FormulaRef b) { return disj({a, b}); }
    FormulaRef implies(FormulaRef a, FormulaRef b);
    FormulaRef iff(FormulaRef a, FormulaRef b);

    const FormulaNode& node(FormulaRef r) const { return nodes_[static_cast<size_t>(r)]; }
    std::size_t size() const { return nodes_.size(); }

    /// Evaluates under a full assignment to atoms (indexed by atom id).
    bool eval(FormulaRef root, const std::vector<bool>& atom_values) const;

    /// Atom ids that actually occur under root, ascending.
    std::vector<std::int32_t> atoms_of(FormulaRef root) const;

private:
    FormulaRef intern(FormulaNode n);
    std::vector<FormulaNode> nodes_;
    std::unordered_map<std::string, FormulaRef> dedup_;
};

struct Cnf {
    int num_vars = 0;
    std::vector<std::vector<int>> clauses;
    std::vector<std::string> var_names;  // per variable, "" for auxiliaries

    std::string to_dimacs() const;
    bool satisfied_by(const std::vector<bool>& assignment) const;
};

/// Tseitin conversion: one auxiliary variable per composite DAG node.
/// Variables 1..num_atoms are the named atoms (in table order), auxiliaries
/// follow. The root is asserted.
Cnf to_cnf(const FormulaBuilder& fb, FormulaRef root, int num_atoms,
           const std::vector<std::string>& atom_names);

}  // namespace epostar
