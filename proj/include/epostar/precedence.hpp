#pragma once

#include "epostar/term.hpp"

#include <map>

namespace epostar {

/// A quasi-precedence represented as equivalence classes plus natural-number
/// ranks: f > g iff rank(class(f)) > rank(class(g)), f ~ g iff same class.
/// The strict part is well-founded by construction.
class Precedence {
public:
    /// Puts f into the class named by `class_id` (ids are caller-chosen).
    void assign(SymbolId f, int class_id) { class_of_[f] = class_id; }
    void set_rank(int class_id, long rank);

    bool has(SymbolId f) const { return class_of_.count(f) != 0; }
    int class_of(SymbolId f) const;
    long rank_value_of_class(int class_id) const;
    long rank_value(SymbolId f) const { return rank_value_of_class(class_of(f)); }

    bool gt(SymbolId f, SymbolId g) const { return rank_value(f) > rank_value(g); }
    bool eq(SymbolId f, SymbolId g) const { return class_of(f) == class_of(g); }
    bool geq(SymbolId f, SymbolId g) const { return gt(f, g) || eq(f, g); }

    /// Every symbol of the signature is assigned to a ranked class.
    bool covers(const Signature& sig) const;

    /// Admissible: every defined symbol ranks strictly above every constructor.
    bool admissible(const Signature& sig) const;

    /// Length of the longest strictly descending chain below f within sig:
    /// the number of occupied rank levels strictly below f's level.
    int rank(SymbolId f, const Signature& sig) const;

    const std::map<SymbolId, int>& assignments() const { return class_of_; }
    const std::map<int, long>& ranks() const { return ranks_; }

private:
    std::map<SymbolId, int> class_of_;
    std::map<int, long> ranks_;
};

}  // namespace epostar
