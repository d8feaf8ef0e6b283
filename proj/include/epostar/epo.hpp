#pragma once

#include "epostar/precedence.hpp"
#include "epostar/term.hpp"

#include <optional>
#include <string>
#include <unordered_map>

namespace epostar {

/// A flat, possibly empty sequence of terms. A single term is identified
/// with its one-element sequence throughout.
using TermSequence = std::vector<Term>;

/// Symbol equivalence lifted to terms: equal, or same class, same argument
/// count, and argumentwise equivalent.
bool term_equiv(const Term& s, const Term& t, const Precedence& prec);

/// Elementwise lifting of term_equiv to equal-length sequences.
bool seq_equiv(const TermSequence& a, const TermSequence& b, const Precedence& prec);

/// Strict superterm modulo term equivalence: s = f(s...) and some argument
/// is a superterm-mod-equiv (or equivalent) of t.
bool superterm_modeq_strict(const Term& s, const Term& t, const Precedence& prec);
bool superterm_modeq(const Term& s, const Term& t, const Precedence& prec);

/// Decision procedure for the k-indexed order on term sequences.
///
/// Memoization keys canonicalize symbols to (class, kind, arity), so
/// equivalent terms over well-behaved precedences share entries.
class EpoOrder {
public:
    EpoOrder(const Signature& sig, const Precedence& prec, int k);

    int k() const { return k_; }
    const Precedence& precedence() const { return prec_; }

    bool gt(const TermSequence& a, const TermSequence& b);
    bool gt(const Term& s, const Term& t) { return gt(TermSequence{s}, TermSequence{t}); }
    bool geq(const TermSequence& a, const TermSequence& b);

    long calls() const { return calls_; }

    /// Stable key identifying t up to symbol classes (and kinds/arities);
    /// equivalent terms share keys.
    const std::string& canonical_key(const Term& t);

private:
    bool gt_uncached(const TermSequence& a, const TermSequence& b);
    bool case4(const TermSequence& a, const TermSequence& b);
    bool split_blocks(const TermSequence& a, size_t ia, const TermSequence& b, size_t ib,
                      bool strict_pending);
    std::string key(const TermSequence& a, const TermSequence& b);

    const Signature& sig_;
    const Precedence& prec_;
    int k_;
    long calls_ = 0;
    std::unordered_map<Term, std::string, TermHash> canon_cache_;
    std::unordered_map<std::string, bool> memo_;
};

struct SlowLimits {
    long max_universe = 5'000;       // candidate terms per measured term
    long max_order_calls = 5'000'000;
    long max_seq_states = 200'000;   // sequence nodes in the no-shortcut mode
};

/// Longest strictly descending chain length from a sequence, computed by
/// dynamic programming over a finite successor universe.
///
/// The universe for a term t contains (i) the subterms of t, and (ii) every
/// application g(u1..un) with n <= k, g ranking at or below the symbols of t
/// and arguments drawn from (i); sequence successors are folded in through
/// their component sums. Each case of the order definition only ever builds
/// successors of these shapes, which keeps the DP exact.
///
/// With `use_closed_forms` (the default) constructor terms evaluate to their
/// depth and sequences to the sum over their items; switching it off forces
/// the plain DP, which the tests compare against those laws.
class SlowMeasure {
public:
    SlowMeasure(const Signature& sig, const Precedence& prec, int k, SlowLimits limits = {},
                bool use_closed_forms = true);

    long value(const TermSequence& a);
    long value(const Term& t) { return value(TermSequence{t}); }

    /// Candidate successor terms considered for t (test hook).
    std::vector<Term> universe(const Term& t);

private:
    long value_term(const Term& t);
    long dp(const Term& u, const std::vector<Term>& universe);
    std::optional<long> best_seq(const Term& u, const std::vector<Term>& universe);
    long value_seq_plain(const TermSequence& a);
    void seq_successor_blocks(const Term& item, const std::vector<Term>& universe,
                              std::vector<TermSequence>& out);

    const Signature& sig_;
    const Precedence& prec_;
    int k_;
    SlowLimits limits_;
    bool closed_forms_;
    EpoOrder order_;
    std::unordered_map<std::string, long> term_memo_;   // canonical key -> value
    std::unordered_map<std::string, long> seq_memo_;
    std::unordered_map<std::string, bool> on_stack_;
    long seq_states_ = 0;
};

}  // namespace epostar
