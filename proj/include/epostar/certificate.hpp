#pragma once

#include "epostar/precedence.hpp"
#include "epostar/term.hpp"

#include <map>
#include <set>
#include <string>
#include <vector>

namespace epostar {

/// Malformed certificate document (unknown symbols, bad permutations, ...).
class CertificateError : public Error {
public:
    explicit CertificateError(const std::string& msg) : Error(msg) {}
};

/// Per-symbol split of argument positions into safe and normal (1-based).
/// Constructors are always all-safe; defined symbols default to all-normal.
class SafeMapping {
public:
    void set(SymbolId f, std::set<int> safe_positions) { safe_[f] = std::move(safe_positions); }

    bool is_safe(const Signature& sig, SymbolId f, int pos) const;
    std::set<int> safe_set(const Signature& sig, SymbolId f) const;
    /// Normal positions in ascending order.
    std::vector<int> normal_positions(const Signature& sig, SymbolId f) const;
    std::vector<int> safe_positions(const Signature& sig, SymbolId f) const;

    const std::map<SymbolId, std::set<int>>& explicit_entries() const { return safe_; }

private:
    std::map<SymbolId, std::set<int>> safe_;
};

/// Per-symbol argument permutation; perm[i-1] is the target position of
/// argument i. Identity when absent.
class ArgPermutation {
public:
    void set(SymbolId f, std::vector<int> perm) { perm_[f] = std::move(perm); }
    bool is_identity(SymbolId f) const;
    int target(SymbolId f, int pos) const;
    const std::map<SymbolId, std::vector<int>>& explicit_entries() const { return perm_; }

    Term apply(const Term& t) const;
    Trs apply(const Trs& trs) const;

private:
    std::map<SymbolId, std::vector<int>> perm_;
};

/// The compatibility witness: an admissible precedence, a safe mapping and an
/// argument permutation. The safe mapping refers to positions after the
/// permutation has been applied.
struct Certificate {
    Precedence precedence;
    SafeMapping safe;
    ArgPermutation mu;

    /// Structural problems relative to a TRS; empty when the certificate is
    /// well-formed and admissible.
    std::vector<std::string> validate(const Trs& trs) const;

    std::string to_json(const Trs& trs) const;
    static Certificate from_json(const std::string& text, const Trs& trs);
};

}  // namespace epostar
