#pragma once

// Shared fixtures, generators and reference oracles for the test suites.
// Oracles here are intentionally naive transcriptions, independent of the
// implementations they cross-check.

#include "epostar/parser.hpp"
#include "epostar/term.hpp"

#include <random>
#include <set>
#include <string>
#include <vector>

namespace testsupport {

using namespace epostar;

inline const char* kFibText =
    "(VAR x y)\n"
    "(RULES\n"
    "  fib(x) -> dfib(x,0)\n"
    "  dfib(0,y) -> s(y)\n"
    "  dfib(s(0),y) -> s(y)\n"
    "  dfib(s(s(x)),y) -> dfib(s(x),dfib(x,y))\n"
    ")\n";

inline const char* kDupText =
    "(VAR x y)\n"
    "(RULES\n"
    "  d(x) -> c(x,x)\n"
    "  f(0,y) -> y\n"
    "  f(s(x),y) -> f(x,d(f(x,y)))\n"
    ")\n";

inline const char* kAckermannText =
    "(VAR x y)\n"
    "(RULES\n"
    "  ack(0,y) -> s(y)\n"
    "  ack(s(x),0) -> ack(x,s(0))\n"
    "  ack(s(x),s(y)) -> ack(x,ack(s(x),y))\n"
    ")\n";

// g is defined on zero only; its other argument shapes are normal forms.
inline const char* kPartialText =
    "(VAR x)\n"
    "(RULES\n"
    "  g(0) -> s(0)\n"
    ")\n";

inline Trs fib_trs() { return parse_trs(kFibText); }
inline Trs dup_trs() { return parse_trs(kDupText); }
inline Trs ackermann_trs() { return parse_trs(kAckermannText); }
inline Trs partial_trs() { return parse_trs(kPartialText); }

inline Term tparse(const Trs& trs, const std::string& text,
                   const std::set<std::string>& vars = {"x", "y", "z"}) {
    return parse_term(text, trs.signature(), vars);
}

// s^n(0) over a signature containing s/1 and 0/0.
inline Term numeral(const Signature& sig, int n) {
    Term t = Term::app(sig.require("0"));
    SymbolId s = sig.require("s");
    for (int i = 0; i < n; ++i) t = Term::app(s, {t});
    return t;
}

// --------------------------------------------------------- random generation

struct TermGen {
    std::mt19937 rng;
    explicit TermGen(unsigned seed) : rng(seed) {}

    int pick(int n) { return static_cast<int>(rng() % static_cast<unsigned>(n)); }

    // Random term over the signature; leaves are constants or variables.
    Term term(const Signature& sig, int max_depth, const std::vector<std::string>& vars,
              bool allow_vars = true) {
        std::vector<SymbolId> nullary, others;
        for (SymbolId f : sig.all()) {
            (sig[f].arity == 0 ? nullary : others).push_back(f);
        }
        if (max_depth == 0 || (others.empty() && (!allow_vars || vars.empty()))) {
            if (allow_vars && !vars.empty() && (nullary.empty() || pick(3) == 0))
                return Term::var(vars[static_cast<size_t>(pick(static_cast<int>(vars.size())))]);
            if (nullary.empty()) throw Error("signature has no constant");
            return Term::app(nullary[static_cast<size_t>(pick(static_cast<int>(nullary.size())))]);
        }
        if (allow_vars && !vars.empty() && pick(5) == 0)
            return Term::var(vars[static_cast<size_t>(pick(static_cast<int>(vars.size())))]);
        if (!nullary.empty() && pick(3) == 0)
            return Term::app(nullary[static_cast<size_t>(pick(static_cast<int>(nullary.size())))]);
        SymbolId f = others[static_cast<size_t>(pick(static_cast<int>(others.size())))];
        std::vector<Term> args;
        for (int i = 0; i < sig[f].arity; ++i) args.push_back(term(sig, max_depth - 1, vars, allow_vars));
        return Term::app(f, std::move(args));
    }

    // Random ground constructor term.
    Term constructor_term(const Signature& sig, int max_depth) {
        std::vector<SymbolId> nullary, others;
        for (SymbolId f : sig.constructors()) {
            (sig[f].arity == 0 ? nullary : others).push_back(f);
        }
        if (nullary.empty()) throw Error("signature has no constant constructor");
        if (max_depth == 0 || others.empty() || pick(3) == 0)
            return Term::app(nullary[static_cast<size_t>(pick(static_cast<int>(nullary.size())))]);
        SymbolId f = others[static_cast<size_t>(pick(static_cast<int>(others.size())))];
        std::vector<Term> args;
        for (int i = 0; i < sig[f].arity; ++i) args.push_back(constructor_term(sig, max_depth - 1));
        return Term::app(f, std::move(args));
    }

    Substitution ground_constructor_subst(const Signature& sig, const std::vector<std::string>& vars,
                                          int max_depth) {
        Substitution sigma;
        for (const std::string& v : vars) sigma.bind(v, constructor_term(sig, max_depth));
        return sigma;
    }
};

// Enumerates all terms of size <= max_size over the given symbols/variables,
// smallest first. Used by exhaustive cross-checks.
inline std::vector<Term> enumerate_terms(const Signature& sig, int max_size,
                                         const std::vector<std::string>& vars) {
    std::vector<std::vector<Term>> by_size(static_cast<size_t>(max_size) + 1);
    for (const std::string& v : vars) by_size[1].push_back(Term::var(v));
    for (SymbolId f : sig.sorted_by_name())
        if (sig[f].arity == 0) by_size[1].push_back(Term::app(f));

    for (int size = 2; size <= max_size; ++size) {
        for (SymbolId f : sig.sorted_by_name()) {
            int n = sig[f].arity;
            if (n == 0 || n > size - 1) continue;
            // distribute size-1 over n argument slots
            std::vector<Term> args;
            auto rec = [&](auto&& self, int slot, int remaining) -> void {
                if (slot == n) {
                    if (remaining == 0)
                        by_size[static_cast<size_t>(size)].push_back(Term::app(f, args));
                    return;
                }
                int slots_left = n - slot - 1;
                for (int sz = 1; sz <= remaining - slots_left; ++sz) {
                    for (const Term& t : by_size[static_cast<size_t>(sz)]) {
                        args.push_back(t);
                        self(self, slot + 1, remaining - sz);
                        args.pop_back();
                    }
                }
            };
            rec(rec, 0, size - 1);
        }
    }
    std::vector<Term> out;
    for (auto& bucket : by_size)
        for (Term& t : bucket) out.push_back(std::move(t));
    return out;
}

}  // namespace testsupport
