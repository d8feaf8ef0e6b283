#pragma once

#include "epostar/certificate.hpp"
#include "epostar/epo.hpp"
#include "epostar/term.hpp"

#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace epostar {

/// The main path order on terms induced by a certificate. Terms are compared
/// as given: the caller applies the argument permutation first (the safe
/// mapping refers to post-permutation positions).
class EpoStarOrder {
public:
    EpoStarOrder(const Signature& sig, const Certificate& cert);

    /// Term equivalence refined by the safe separation.
    bool equiv(const Term& s, const Term& t);
    /// The auxiliary order: descent through normal argument positions.
    bool sub_gt(const Term& s, const Term& t);
    bool gt(const Term& s, const Term& t);
    bool geq(const Term& s, const Term& t) { return equiv(s, t) || gt(s, t); }

    /// Root-level diagnosis: which case was attempted and where it broke.
    std::string explain_failure(const Term& s, const Term& t);

private:
    struct PairHash {
        std::size_t operator()(const std::pair<Term, Term>& p) const {
            return p.first.hash() * 0x9e3779b97f4a7c15ULL + p.second.hash();
        }
    };
    using PairMemo = std::unordered_map<std::pair<Term, Term>, bool, PairHash>;

    bool defined(const Term& t) const;
    std::vector<int> normals(SymbolId f) const { return cert_.safe.normal_positions(sig_, f); }
    std::vector<int> safes(SymbolId f) const { return cert_.safe.safe_positions(sig_, f); }

    const Signature& sig_;
    const Certificate& cert_;
    PairMemo equiv_memo_;
    PairMemo sub_memo_;
    PairMemo gt_memo_;
};

// Free-function forms of the three comparisons.
bool eqv_safe(const Term& s, const Term& t, const Certificate& cert, const Signature& sig);
bool subepostar_gt(const Term& s, const Term& t, const Certificate& cert, const Signature& sig);
bool epostar_gt(const Term& s, const Term& t, const Certificate& cert, const Signature& sig);

struct RuleVerdict {
    bool oriented = false;
    std::string lhs;
    std::string rhs;
    std::string trace;  // empty when oriented
};

struct CheckReport {
    bool constructor_trs = true;
    std::vector<std::string> certificate_issues;
    std::vector<RuleVerdict> rules;

    bool certificate_ok() const { return constructor_trs && certificate_issues.empty(); }
    bool all_oriented() const {
        if (!certificate_ok()) return false;
        for (const RuleVerdict& r : rules)
            if (!r.oriented) return false;
        return true;
    }
};

/// Validates the certificate, applies the permutation to the TRS, and checks
/// every rule for orientation.
CheckReport check_certificate(const Trs& trs, const Certificate& cert);

/// Membership in the closure set: constructor terms, and applications whose
/// normal arguments are constructor terms and safe arguments are members.
bool in_Tn(const Term& t, const Trs& trs, const SafeMapping& safe);

/// Maps terms to sequences over an extended signature in which each defined
/// symbol keeps only its normal arguments; constructor terms vanish.
class PredicativeInterpretation {
public:
    PredicativeInterpretation(const Trs& trs, const SafeMapping& safe, const Precedence& prec);

    const Signature& image_signature() const { return image_sig_; }
    const Precedence& image_precedence() const { return image_prec_; }
    SymbolId image_symbol(SymbolId f) const;

    /// Rejects terms outside the closure set.
    TermSequence image(const Term& t) const;

private:
    const Trs& trs_;
    const SafeMapping& safe_;
    Signature image_sig_;
    Precedence image_prec_;
    std::map<SymbolId, SymbolId> normal_variant_;
};

}  // namespace epostar
