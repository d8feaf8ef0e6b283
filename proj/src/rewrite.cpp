#include "epostar/rewrite.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace epostar {

RewriteEngine::RewriteEngine(Trs trs, bool with_bottom) : trs_(std::move(trs)) {
    if (with_bottom) {
        std::string name = trs_.signature().fresh_name("bot");
        bottom_ = trs_.signature().add(name, 0, SymbolKind::Constructor);
    }
    for (const Rule& r : trs_.rules()) rules_by_root_[r.lhs.symbol()].push_back(&r);
}

SymbolId RewriteEngine::bottom_symbol() const {
    if (!bottom_) throw Error("engine built without bottom extension");
    return *bottom_;
}

bool RewriteEngine::root_rule_applies(const Term& t) const {
    if (t.is_var()) return false;
    auto it = rules_by_root_.find(t.symbol());
    if (it == rules_by_root_.end()) return false;
    for (const Rule* r : it->second)
        if (match(r->lhs, t)) return true;
    return false;
}

bool RewriteEngine::is_normal_form(const Term& t) const {
    if (t.is_var()) return true;
    auto it = nf_cache_.find(t);
    if (it != nf_cache_.end()) return it->second;
    bool nf = !root_rule_applies(t);
    if (nf)
        for (const Term& a : t.args())
            if (!is_normal_form(a)) {
                nf = false;
                break;
            }
    nf_cache_.emplace(t, nf);
    return nf;
}

void RewriteEngine::collect_successors(const Term& t, Strategy strategy,
                                       std::vector<Term>& out) const {
    if (t.is_var()) return;

    // contractions strictly below the root
    for (size_t i = 0; i < t.args().size(); ++i) {
        std::vector<Term> inner;
        collect_successors(t.args()[i], strategy, inner);
        for (Term& u : inner) {
            std::vector<Term> args = t.args();
            args[i] = std::move(u);
            out.push_back(Term::app(t.symbol(), std::move(args)));
        }
    }

    // contractions at the root
    bool args_ok = true;
    if (strategy == Strategy::Innermost) {
        if (with_bottom()) {
            // innermost in the completed system: its normal forms are exactly
            // the constructor terms
            for (const Term& a : t.args())
                if (!is_constructor_term(a, trs_.signature())) {
                    args_ok = false;
                    break;
                }
        } else {
            for (const Term& a : t.args())
                if (!is_normal_form(a)) {
                    args_ok = false;
                    break;
                }
        }
    }
    if (!args_ok) return;

    auto it = rules_by_root_.find(t.symbol());
    if (it != rules_by_root_.end())
        for (const Rule* r : it->second)
            if (auto sigma = match(r->lhs, t)) out.push_back(sigma->apply(r->rhs));

    if (with_bottom() && trs_.signature()[t.symbol()].kind == SymbolKind::Defined) {
        bool is_bottom_redex;
        if (strategy == Strategy::Full) {
            is_bottom_redex = is_normal_form(t);
        } else {
            // arguments are constructor terms here, so only the root could
            // have been an original redex
            is_bottom_redex = !root_rule_applies(t);
        }
        if (is_bottom_redex) out.push_back(Term::app(*bottom_));
    }
}

std::vector<Term> RewriteEngine::successors(const Term& t, Strategy strategy) const {
    std::vector<Term> raw;
    collect_successors(t, strategy, raw);
    std::sort(raw.begin(), raw.end());
    raw.erase(std::unique(raw.begin(), raw.end()), raw.end());
    return raw;
}

long RewriteEngine::visit(const Term& t, Strategy strategy, const SearchLimits& limits,
                          bool memoize, bool& exact_out) {
    if (memoize) {
        auto it = memo_.find(t);
        if (it != memo_.end()) {
            exact_out = it->second.exact;
            return it->second.height;
        }
    }
    if (t.size() > limits.size_budget || nodes_expanded_ >= limits.node_budget ||
        on_stack_.count(t)) {
        // size cut, budget exhausted, or reduction cycle: lower bound only
        truncation_seen_ = true;
        exact_out = false;
        return 0;
    }
    ++nodes_expanded_;
    on_stack_.insert(t);

    long best = 0;
    bool exact = true;
    std::optional<Term> best_succ;
    for (const Term& u : successors(t, strategy)) {
        bool child_exact = true;
        long h = visit(u, strategy, limits, memoize, child_exact) + 1;
        exact = exact && child_exact;
        if (h > best) {
            best = h;
            best_succ = u;
        }
    }
    on_stack_.erase(t);

    if (memoize && exact) memo_[t] = MemoEntry{best, exact, best_succ};
    exact_out = exact;
    return best;
}

DerivationRecord RewriteEngine::derivation_height(const Term& t, Strategy strategy,
                                                  const SearchLimits& limits, bool memoize) {
    if (memo_strategy_ != strategy) {
        memo_.clear();
        memo_strategy_ = strategy;
    }
    nodes_expanded_ = 0;
    truncation_seen_ = false;

    DerivationRecord rec{t, strategy, 0, {}, false};
    bool exact = true;
    rec.height = visit(t, strategy, limits, memoize, exact);
    rec.truncated = !exact;

    rec.witness.push_back(t);
    Term cur = t;
    for (long step = 0; step < rec.height; ++step) {
        std::optional<Term> next;
        if (memoize) {
            auto it = memo_.find(cur);
            if (it != memo_.end() && it->second.best) next = it->second.best;
        }
        if (!next) {
            // re-derive the best child (non-memoized runs, truncated entries)
            long want = rec.height - step - 1;
            for (const Term& u : successors(cur, strategy)) {
                bool e = true;
                if (visit(u, strategy, limits, memoize, e) == want) {
                    next = u;
                    break;
                }
            }
        }
        if (!next) break;
        rec.witness.push_back(*next);
        cur = *next;
    }
    return rec;
}

// ----------------------------------------------------------- term enumeration

std::vector<std::vector<Term>> ground_constructor_terms(const Signature& sig, int max_size) {
    std::vector<std::vector<Term>> by_size(static_cast<size_t>(std::max(max_size, 0)) + 1);
    if (max_size < 1) return by_size;
    for (SymbolId c : sig.sorted_by_name())
        if (sig[c].kind == SymbolKind::Constructor && sig[c].arity == 0)
            by_size[1].push_back(Term::app(c));
    for (int size = 2; size <= max_size; ++size) {
        for (SymbolId c : sig.sorted_by_name()) {
            if (sig[c].kind != SymbolKind::Constructor) continue;
            int n = sig[c].arity;
            if (n == 0 || n > size - 1) continue;
            std::vector<Term> args;
            auto rec = [&](auto&& self, int slot, int remaining) -> void {
                if (slot == n) {
                    if (remaining == 0)
                        by_size[static_cast<size_t>(size)].push_back(Term::app(c, args));
                    return;
                }
                int slots_left = n - slot - 1;
                for (int sz = 1; sz <= remaining - slots_left; ++sz)
                    for (const Term& t : by_size[static_cast<size_t>(sz)]) {
                        args.push_back(t);
                        self(self, slot + 1, remaining - sz);
                        args.pop_back();
                    }
            };
            rec(rec, 0, size - 1);
        }
    }
    return by_size;
}

std::vector<Term> ground_basic_terms(const Trs& trs, int max_size) {
    std::vector<Term> out;
    auto cons = ground_constructor_terms(trs.signature(), std::max(max_size - 1, 0));
    for (SymbolId f : trs.signature().sorted_by_name()) {
        if (trs.signature()[f].kind != SymbolKind::Defined) continue;
        int n = trs.signature()[f].arity;
        if (n == 0) {
            if (max_size >= 1) out.push_back(Term::app(f));
            continue;
        }
        if (max_size - 1 < n) continue;
        std::vector<Term> args;
        auto rec = [&](auto&& self, int slot, int remaining) -> void {
            if (slot == n) {
                out.push_back(Term::app(f, args));
                return;
            }
            int slots_left = n - slot - 1;
            for (int sz = 1; sz <= remaining - slots_left; ++sz)
                for (const Term& t : cons[static_cast<size_t>(sz)]) {
                    args.push_back(t);
                    self(self, slot + 1, remaining - sz);
                    args.pop_back();
                }
        };
        rec(rec, 0, max_size - 1);
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<RcRow> empirical_rc(const Trs& trs, int max_size, Strategy strategy,
                                const SearchLimits& limits, bool with_bottom) {
    std::vector<RcRow> rows;
    std::vector<Term> basics = ground_basic_terms(trs, max_size);
    if (basics.empty() && trs.signature().defined().empty()) {
        // no defined symbols at all: report an all-zero table
        for (int n = 1; n <= max_size; ++n) rows.push_back(RcRow{n, 0, std::nullopt, false});
        return rows;
    }
    if (basics.empty()) return rows;

    RewriteEngine engine(trs, with_bottom);
    std::map<int, std::pair<long, std::optional<Term>>> best_by_size;
    std::map<int, bool> truncated_by_size;
    for (const Term& t : basics) {
        DerivationRecord rec = engine.derivation_height(t, strategy, limits);
        auto& slot = best_by_size[t.size()];
        if (!slot.second || rec.height > slot.first) slot = {rec.height, t};
        truncated_by_size[t.size()] = truncated_by_size[t.size()] || rec.truncated;
    }
    long running = 0;
    std::optional<Term> running_witness;
    bool running_trunc = false;
    for (int n = 1; n <= max_size; ++n) {
        auto it = best_by_size.find(n);
        if (it != best_by_size.end() && it->second.second &&
            (!running_witness || it->second.first > running)) {
            running = it->second.first;
            running_witness = it->second.second;
        }
        running_trunc = running_trunc || truncated_by_size[n];
        rows.push_back(RcRow{n, running_witness ? running : 0, running_witness, running_trunc});
    }
    return rows;
}

// -------------------------------------------------------------- bottom rules

namespace {

// Syntactic unification of constructor-argument patterns. Rule sides may be
// nonlinear; candidates are linear; the occurs check keeps it safe anyway.
class Unifier {
public:
    bool unify(const Term& a, const Term& b) {
        Term x = walk(a), y = walk(b);
        if (x.is_var() && y.is_var() && x.var_name() == y.var_name()) return true;
        if (x.is_var()) return bind(x.var_name(), y);
        if (y.is_var()) return bind(y.var_name(), x);
        if (x.symbol() != y.symbol()) return false;
        for (size_t i = 0; i < x.args().size(); ++i)
            if (!unify(x.args()[i], y.args()[i])) return false;
        return true;
    }

private:
    Term walk(Term t) {
        while (t.is_var()) {
            auto it = bindings_.find(t.var_name());
            if (it == bindings_.end()) break;
            t = it->second;
        }
        return t;
    }
    bool occurs(const std::string& v, const Term& t) {
        Term w = walk(t);
        if (w.is_var()) return w.var_name() == v;
        for (const Term& a : w.args())
            if (occurs(v, a)) return true;
        return false;
    }
    bool bind(const std::string& v, const Term& t) {
        if (occurs(v, t)) return false;
        bindings_.emplace(v, t);
        return true;
    }
    std::map<std::string, Term> bindings_;
};

bool unifiable(const Term& a, const Term& b) {
    Unifier u;
    return u.unify(a, b);
}

Term rename_vars_apart(const Term& t, int& counter) {
    if (t.is_var()) return Term::var("$" + std::to_string(counter++));
    std::vector<Term> args;
    args.reserve(t.args().size());
    for (const Term& a : t.args()) args.push_back(rename_vars_apart(a, counter));
    return Term::app(t.symbol(), std::move(args));
}

// Constructor patterns of depth <= cap; all variables share one placeholder
// name and are renamed apart once a candidate lhs is assembled.
std::vector<Term> constructor_patterns(const Signature& sig, int cap) {
    std::vector<Term> cur;
    cur.push_back(Term::var("_"));
    for (SymbolId c : sig.sorted_by_name())
        if (sig[c].kind == SymbolKind::Constructor && sig[c].arity == 0) cur.push_back(Term::app(c));
    for (int d = 1; d <= cap; ++d) {
        std::vector<Term> next = cur;
        for (SymbolId c : sig.sorted_by_name()) {
            if (sig[c].kind != SymbolKind::Constructor || sig[c].arity == 0) continue;
            std::vector<Term> args;
            auto rec = [&](auto&& self, int slot) -> void {
                if (slot == sig[c].arity) {
                    next.push_back(Term::app(c, args));
                    return;
                }
                for (const Term& p : cur) {
                    args.push_back(p);
                    self(self, slot + 1);
                    args.pop_back();
                }
            };
            rec(rec, 0);
        }
        std::sort(next.begin(), next.end());
        next.erase(std::unique(next.begin(), next.end()), next.end());
        cur = std::move(next);
    }
    return cur;
}

}  // namespace

Trs bottom_complete(const Trs& trs, int depth_cap) {
    Signature sig = trs.signature();
    SymbolId bottom = sig.add(sig.fresh_name("bot"), 0, SymbolKind::Constructor);

    std::vector<Term> patterns = constructor_patterns(sig, depth_cap);
    std::vector<Term> kept;
    for (SymbolId f : sig.sorted_by_name()) {
        if (sig[f].kind != SymbolKind::Defined) continue;
        int n = sig[f].arity;
        std::vector<Term> args;
        auto rec = [&](auto&& self, int slot) -> void {
            if (slot == n) {
                int counter = 0;
                Term candidate = rename_vars_apart(Term::app(f, args), counter);
                for (const Rule& r : trs.rules())
                    if (unifiable(r.lhs, candidate)) return;  // some instance reducible
                kept.push_back(candidate);
                return;
            }
            for (const Term& p : patterns) {
                args.push_back(p);
                self(self, slot + 1);
                args.pop_back();
            }
        };
        rec(rec, 0);
    }

    // drop candidates subsumed by a more general kept candidate
    std::sort(kept.begin(), kept.end());
    kept.erase(std::unique(kept.begin(), kept.end()), kept.end());
    std::vector<Term> minimal;
    for (const Term& c : kept) {
        bool subsumed = false;
        for (const Term& d : kept) {
            if (d == c) continue;
            if (match(d, c) && !match(c, d)) {
                subsumed = true;
                break;
            }
        }
        if (!subsumed) minimal.push_back(c);
    }

    Trs out(sig, trs.rules());
    for (const Term& lhs : minimal) {
        Substitution rename;
        int i = 1;
        for (const std::string& v : lhs.vars()) rename.bind(v, Term::var("x" + std::to_string(i++)));
        out.add_rule(Rule{rename.apply(lhs), Term::app(bottom)});
    }
    return out;
}

}  // namespace epostar
