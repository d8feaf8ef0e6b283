#pragma once

#include "epostar/term.hpp"

#include <optional>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace epostar {

enum class Strategy { Innermost, Full };

struct SearchLimits {
    long node_budget = 1'000'000;  // distinct term expansions
    long size_budget = 10'000;     // largest term explored
};

/// Result of the exhaustive longest-derivation search. When `truncated` is
/// set the height is a lower bound only; otherwise it is exact and the
/// witness is a maximal derivation (height + 1 terms).
struct DerivationRecord {
    Term start;
    Strategy strategy = Strategy::Innermost;
    long height = 0;
    std::vector<Term> witness;
    bool truncated = false;
};

/// One-step rewriting and exhaustive derivation-height search over a TRS.
///
/// With `with_bottom`, the engine rewrites modulo the bottom-completed
/// system: any subterm with defined root that is a normal form of the
/// original rules contracts to the fresh constructor `bottom` on the fly.
class RewriteEngine {
public:
    explicit RewriteEngine(Trs trs, bool with_bottom = false);

    const Trs& trs() const { return trs_; }
    bool with_bottom() const { return bottom_.has_value(); }
    SymbolId bottom_symbol() const;

    /// Exact set of one-step reducts, deterministically ordered.
    std::vector<Term> successors(const Term& t, Strategy strategy) const;

    /// Normal form w.r.t. the original rules (bottom rules not considered).
    bool is_normal_form(const Term& t) const;

    DerivationRecord derivation_height(const Term& t, Strategy strategy, const SearchLimits& limits,
                                       bool memoize = true);

private:
    struct MemoEntry {
        long height = 0;
        bool exact = true;
        std::optional<Term> best;
    };

    long visit(const Term& t, Strategy strategy, const SearchLimits& limits, bool memoize,
               bool& exact_out);

    bool root_rule_applies(const Term& t) const;
    void collect_successors(const Term& t, Strategy strategy, std::vector<Term>& out) const;

    Trs trs_;
    std::optional<SymbolId> bottom_;
    std::unordered_map<SymbolId, std::vector<const Rule*>> rules_by_root_;

    mutable std::unordered_map<Term, bool, TermHash> nf_cache_;
    std::unordered_map<Term, MemoEntry, TermHash> memo_;
    std::unordered_set<Term, TermHash> on_stack_;
    long nodes_expanded_ = 0;
    bool truncation_seen_ = false;
    Strategy memo_strategy_ = Strategy::Innermost;
};

struct RcRow {
    int size = 0;
    long height = 0;
    std::optional<Term> witness;
    bool truncated = false;
};

/// max derivation height over ground basic terms of size <= n, for each
/// n up to max_size. Empty when the signature has no constant constructor.
std::vector<RcRow> empirical_rc(const Trs& trs, int max_size, Strategy strategy,
                                const SearchLimits& limits, bool with_bottom = false);

/// Enumerates ground constructor terms, grouped by size (index = size).
std::vector<std::vector<Term>> ground_constructor_terms(const Signature& sig, int max_size);

/// Enumerates ground basic terms of size <= max_size, smallest first.
std::vector<Term> ground_basic_terms(const Trs& trs, int max_size);

/// Finite bottom-completion: extends the signature with a fresh constructor
/// `bot` and adds rules p -> bot for every defined-rooted pattern p (over
/// constructor arguments of depth <= depth_cap) all of whose constructor
/// instances are normal forms. Subsumed patterns are dropped.
Trs bottom_complete(const Trs& trs, int depth_cap);

}  // namespace epostar
