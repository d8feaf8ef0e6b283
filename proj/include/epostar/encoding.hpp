#pragma once

#include "epostar/certificate.hpp"
#include "epostar/formula.hpp"
#include "epostar/term.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace epostar {

enum class AtomKind { Level, PrecGt, PrecEq, Safe, Mu };

struct Atom {
    AtomKind kind;
    SymbolId f = -1;
    SymbolId g = -1;  // PrecGt / PrecEq
    int i = 0;        // position / bit index
    int k = 0;        // permutation target
};

/// Builds the propositional compatibility constraint for a TRS: precedence,
/// safe-mapping and permutation atoms, the recursive order encodings, and
/// the global axioms; decodes solver models back into certificates.
///
/// Precedence atoms over mixed or constructor pairs fold to constants, safe
/// atoms of constructors fold to true, and permutations of symbols with at
/// most one argument fold to the identity. Atom order is deterministic
/// (symbols by name, positions ascending), so emitted files are byte-stable.
class EpoStarEncoder {
public:
    explicit EpoStarEncoder(const Trs& trs);

    FormulaBuilder& builder() { return fb_; }
    const Trs& trs() const { return trs_; }

    int num_atoms() const { return static_cast<int>(atoms_.size()); }
    const std::vector<Atom>& atoms() const { return atoms_; }
    std::vector<std::string> atom_names() const;
    std::string atom_name(int index) const;
    std::optional<int> find_atom(const Atom& a) const;

    // Guarded atom lookups; constants where the table folds.
    FormulaRef prec_gt(SymbolId f, SymbolId g);
    FormulaRef prec_eq(SymbolId f, SymbolId g);
    FormulaRef safe(SymbolId f, int pos);
    FormulaRef mu(SymbolId f, int pos, int target);

    FormulaRef encode_equiv(const Term& s, const Term& t);
    FormulaRef encode_subepostar(const Term& s, const Term& t);
    FormulaRef encode_epostar(const Term& s, const Term& t);

    FormulaRef encode_axioms();
    /// axioms plus the orientation of every rule
    FormulaRef encode_compatibility();

    Cnf cnf(FormulaRef root) const;

    /// Reads a satisfying assignment (indexed by variable - 1) back into a
    /// certificate; rejects assignments that violate the axioms.
    Certificate decode(const std::vector<bool>& model) const;

private:
    FormulaRef encode_lex(const Term& s, const Term& t, int depth);
    FormulaRef level_gt(SymbolId f, SymbolId g);
    FormulaRef level_eq(SymbolId f, SymbolId g);
    int register_atom(const Atom& a);

    const Trs& trs_;
    FormulaBuilder fb_;
    std::vector<Atom> atoms_;
    std::map<std::tuple<int, SymbolId, SymbolId, int, int>, int> atom_index_;
    int level_bits_ = 0;

    struct PairHash {
        std::size_t operator()(const std::pair<Term, Term>& p) const {
            return p.first.hash() * 0x9e3779b97f4a7c15ULL + p.second.hash();
        }
    };
    std::unordered_map<std::pair<Term, Term>, FormulaRef, PairHash> equiv_memo_;
    std::unordered_map<std::pair<Term, Term>, FormulaRef, PairHash> sub_memo_;
    std::unordered_map<std::pair<Term, Term>, FormulaRef, PairHash> star_memo_;
    std::map<std::tuple<Term, Term, int>, FormulaRef> lex_memo_;
};

}  // namespace epostar
