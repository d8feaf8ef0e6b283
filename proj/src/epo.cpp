#include "epostar/epo.hpp"

#include <algorithm>

namespace epostar {

bool term_equiv(const Term& s, const Term& t, const Precedence& prec) {
    if (s == t) return true;
    if (s.is_var() || t.is_var()) return false;
    if (s.args().size() != t.args().size()) return false;
    if (!prec.eq(s.symbol(), t.symbol())) return false;
    for (size_t i = 0; i < s.args().size(); ++i)
        if (!term_equiv(s.args()[i], t.args()[i], prec)) return false;
    return true;
}

bool seq_equiv(const TermSequence& a, const TermSequence& b, const Precedence& prec) {
    if (a.size() != b.size()) return false;
    for (size_t i = 0; i < a.size(); ++i)
        if (!term_equiv(a[i], b[i], prec)) return false;
    return true;
}

bool superterm_modeq(const Term& s, const Term& t, const Precedence& prec) {
    return term_equiv(s, t, prec) || superterm_modeq_strict(s, t, prec);
}

bool superterm_modeq_strict(const Term& s, const Term& t, const Precedence& prec) {
    if (s.is_var()) return false;
    for (const Term& arg : s.args())
        if (superterm_modeq(arg, t, prec)) return true;
    return false;
}

// ------------------------------------------------------------------ EpoOrder

EpoOrder::EpoOrder(const Signature& sig, const Precedence& prec, int k)
    : sig_(sig), prec_(prec), k_(k) {
    if (k < 1) throw Error("order index k must be at least 1");
}

const std::string& EpoOrder::canonical_key(const Term& t) {
    auto it = canon_cache_.find(t);
    if (it != canon_cache_.end()) return it->second;
    std::string enc;
    if (t.is_var()) {
        enc = "v" + t.var_name() + ";";
    } else {
        const FunctionSymbol& f = sig_[t.symbol()];
        enc = "a" + std::to_string(prec_.class_of(t.symbol())) +
              (f.kind == SymbolKind::Defined ? "d" : "c") + std::to_string(f.arity) + "(";
        for (const Term& a : t.args()) enc += canonical_key(a);
        enc += ")";
    }
    return canon_cache_.emplace(t, std::move(enc)).first->second;
}

std::string EpoOrder::key(const TermSequence& a, const TermSequence& b) {
    std::string out;
    for (const Term& t : a) out += canonical_key(t);
    out += "|";
    for (const Term& t : b) out += canonical_key(t);
    return out;
}

bool EpoOrder::geq(const TermSequence& a, const TermSequence& b) {
    return seq_equiv(a, b, prec_) || gt(a, b);
}

bool EpoOrder::gt(const TermSequence& a, const TermSequence& b) {
    std::string k = key(a, b);
    auto it = memo_.find(k);
    if (it != memo_.end()) return it->second;
    ++calls_;
    bool result = gt_uncached(a, b);
    memo_.emplace(std::move(k), result);
    return result;
}

bool EpoOrder::gt_uncached(const TermSequence& a, const TermSequence& b) {
    if (a.size() != 1) return a.size() >= 2 && case4(a, b);

    const Term& s = a[0];
    if (s.is_var()) return false;
    const auto& args = s.args();
    bool s_defined = sig_[s.symbol()].kind == SymbolKind::Defined;

    // (1) some argument is >= the whole right-hand side
    for (const Term& si : args)
        if (geq(TermSequence{si}, b)) return true;

    // (2) right side is a sequence of length 0 or 2..k, every item below s
    if (s_defined && (b.empty() || (b.size() >= 2 && b.size() <= static_cast<size_t>(k_)))) {
        bool all = true;
        for (const Term& tj : b)
            if (!gt(a, TermSequence{tj})) {
                all = false;
                break;
            }
        if (all) return true;
    }

    if (b.size() == 1 && b[0].is_app()) {
        const Term& t = b[0];
        const auto& targs = t.args();
        if (s_defined && targs.size() <= static_cast<size_t>(k_)) {
            // (3) strictly smaller root, arguments strictly under s
            if (prec_.gt(s.symbol(), t.symbol())) {
                bool all = true;
                for (const Term& tj : targs)
                    if (!superterm_modeq_strict(s, tj, prec_)) {
                        all = false;
                        break;
                    }
                if (all) return true;
            }
            // (5) equivalent defined root with a lexicographic descent
            if (sig_[t.symbol()].kind == SymbolKind::Defined &&
                prec_.eq(s.symbol(), t.symbol())) {
                size_t bound = std::min(args.size(), targs.size());
                for (size_t j = 0; j < bound; ++j) {
                    bool ok = true;
                    for (size_t i = 0; i < j && ok; ++i)
                        ok = term_equiv(args[i], targs[i], prec_);
                    ok = ok && superterm_modeq_strict(args[j], targs[j], prec_);
                    for (size_t i = j + 1; i < targs.size() && ok; ++i)
                        ok = superterm_modeq_strict(s, targs[i], prec_);
                    if (ok) return true;
                }
            }
        }
    }
    return false;
}

// (4) split b into |a| blocks: an equivalence prefix, one strict block, then
// weakly decreasing blocks.
bool EpoOrder::case4(const TermSequence& a, const TermSequence& b) {
    return split_blocks(a, 0, b, 0, true);
}

bool EpoOrder::split_blocks(const TermSequence& a, size_t ia, const TermSequence& b, size_t ib,
                            bool strict_pending) {
    if (ia == a.size()) return !strict_pending && ib == b.size();
    const Term& head = a[ia];
    if (strict_pending) {
        // stay in the equivalence prefix
        if (ib < b.size() && term_equiv(head, b[ib], prec_) &&
            split_blocks(a, ia + 1, b, ib + 1, true))
            return true;
        // or place the strict block here
        for (size_t len = 0; len <= b.size() - ib; ++len) {
            TermSequence block(b.begin() + static_cast<long>(ib),
                               b.begin() + static_cast<long>(ib + len));
            if (gt(TermSequence{head}, block) && split_blocks(a, ia + 1, b, ib + len, false))
                return true;
        }
        return false;
    }
    for (size_t len = 0; len <= b.size() - ib; ++len) {
        TermSequence block(b.begin() + static_cast<long>(ib),
                           b.begin() + static_cast<long>(ib + len));
        bool weak_ok = (len == 1 && term_equiv(head, block[0], prec_)) ||
                       gt(TermSequence{head}, block);
        if (weak_ok && split_blocks(a, ia + 1, b, ib + len, false)) return true;
    }
    return false;
}

// --------------------------------------------------------------- SlowMeasure

SlowMeasure::SlowMeasure(const Signature& sig, const Precedence& prec, int k, SlowLimits limits,
                         bool use_closed_forms)
    : sig_(sig),
      prec_(prec),
      k_(k),
      limits_(limits),
      closed_forms_(use_closed_forms),
      order_(sig, prec, k) {}

long SlowMeasure::value(const TermSequence& a) {
    for (const Term& t : a)
        if (!t.is_ground()) throw Error("slow measure is only defined on ground sequences");
    if (a.size() == 1) return value_term(a[0]);
    if (closed_forms_) {
        long sum = 0;
        for (const Term& t : a) sum += value_term(t);
        return sum;
    }
    return value_seq_plain(a);
}

long SlowMeasure::value_term(const Term& t) {
    if (closed_forms_ && is_constructor_term(t, sig_)) return t.depth();
    std::string key = order_.canonical_key(t);
    auto it = term_memo_.find(key);
    if (it != term_memo_.end()) return it->second;
    std::vector<Term> uni = universe(t);
    long v = dp(t, uni);
    return v;
}

std::vector<Term> SlowMeasure::universe(const Term& t) {
    std::vector<Term> members;
    std::unordered_map<std::string, bool> seen;
    auto push = [&](const Term& u) {
        std::string key = order_.canonical_key(u);
        if (seen.emplace(std::move(key), true).second) members.push_back(u);
        if (static_cast<long>(members.size()) > limits_.max_universe)
            throw BudgetError("slow-measure universe exceeds the configured limit");
    };

    // (i) subterms
    long max_rank = 0;
    std::vector<Term> stack{t};
    while (!stack.empty()) {
        Term u = stack.back();
        stack.pop_back();
        push(u);
        if (u.is_app()) {
            max_rank = std::max(max_rank, prec_.rank_value(u.symbol()));
            for (const Term& a : u.args()) stack.push_back(a);
        }
    }
    std::vector<Term> pool = members;

    // (ii) applications of bounded rank over the subterm pool
    for (SymbolId g : sig_.sorted_by_name()) {
        int n = sig_[g].arity;
        if (n > k_ || prec_.rank_value(g) > max_rank) continue;
        std::vector<Term> args;
        auto rec = [&](auto&& self, int slot) -> void {
            if (slot == n) {
                push(Term::app(g, args));
                return;
            }
            for (const Term& p : pool) {
                args.push_back(p);
                self(self, slot + 1);
                args.pop_back();
            }
        };
        rec(rec, 0);
    }
    return members;
}

long SlowMeasure::dp(const Term& u, const std::vector<Term>& uni) {
    if (closed_forms_ && is_constructor_term(u, sig_)) return u.depth();
    std::string key = order_.canonical_key(u);
    auto it = term_memo_.find(key);
    if (it != term_memo_.end()) return it->second;
    if (on_stack_.count(key)) throw Error("slow measure hit a descending cycle; order not well-founded");
    on_stack_.emplace(key, true);
    if (order_.calls() > limits_.max_order_calls)
        throw BudgetError("slow-measure order-call budget exhausted");

    long best = 0;
    for (const Term& v : uni) {
        if (order_.canonical_key(v) == key) continue;
        if (order_.gt(TermSequence{u}, TermSequence{v})) best = std::max(best, dp(v, uni) + 1);
    }
    if (auto bs = best_seq(u, uni)) best = std::max(best, *bs + 1);

    on_stack_.erase(key);
    term_memo_.emplace(std::move(key), best);
    return best;
}

// Largest sum-of-values over sequence successors of u (lengths 0 or 2..k):
// either k copies of the best single successor when the root is defined, or
// a sequence successor of some argument, reached through case (1).
std::optional<long> SlowMeasure::best_seq(const Term& u, const std::vector<Term>& uni) {
    std::optional<long> result;
    if (u.is_app() && sig_[u.symbol()].kind == SymbolKind::Defined) {
        long case2 = 0;  // the empty sequence
        if (k_ >= 2) {
            long best_elem = -1;
            for (const Term& v : uni)
                if (order_.gt(TermSequence{u}, TermSequence{v}))
                    best_elem = std::max(best_elem, dp(v, uni));
            if (best_elem >= 0) case2 = std::max(case2, static_cast<long>(k_) * best_elem);
        }
        result = case2;
    }
    if (u.is_app())
        for (const Term& arg : u.args())
            if (auto sub = best_seq(arg, uni))
                result = std::max(result.value_or(-1), *sub);
    return result;
}

// Sequences b with item > b, used as case-4 blocks in the plain mode:
// the empty sequence, single successors, bounded repetitions of single
// successors, and recursively the blocks of arguments. Everything is
// re-checked against the order before use.
void SlowMeasure::seq_successor_blocks(const Term& item, const std::vector<Term>& uni,
                                       std::vector<TermSequence>& out) {
    TermSequence lhs{item};
    if (order_.gt(lhs, TermSequence{})) out.push_back(TermSequence{});
    std::vector<Term> singles;
    for (const Term& v : uni)
        if (order_.gt(lhs, TermSequence{v})) {
            singles.push_back(v);
            out.push_back(TermSequence{v});
        }
    // multi-element blocks (case 2 shapes)
    for (int len = 2; len <= k_; ++len) {
        std::vector<TermSequence> tuples{{}};
        for (int i = 0; i < len; ++i) {
            std::vector<TermSequence> next;
            for (const TermSequence& partial : tuples)
                for (const Term& v : singles) {
                    TermSequence ext = partial;
                    ext.push_back(v);
                    next.push_back(std::move(ext));
                }
            tuples = std::move(next);
            if (tuples.size() > 4'000) throw BudgetError("sequence block enumeration too large");
        }
        for (TermSequence& tup : tuples)
            if (order_.gt(lhs, tup)) out.push_back(std::move(tup));
    }
    if (item.is_app())
        for (const Term& arg : item.args()) {
            std::vector<TermSequence> inner;
            seq_successor_blocks(arg, uni, inner);
            for (TermSequence& b : inner)
                if (order_.gt(lhs, b)) out.push_back(std::move(b));
        }
}

long SlowMeasure::value_seq_plain(const TermSequence& a) {
    if (a.empty()) return 0;
    if (a.size() == 1) return value_term(a[0]);
    std::string key;
    for (const Term& t : a) key += order_.canonical_key(t) + "|";
    auto it = seq_memo_.find(key);
    if (it != seq_memo_.end()) return it->second;
    if (++seq_states_ > limits_.max_seq_states)
        throw BudgetError("slow-measure sequence-state budget exhausted");

    // per-item universes and block choices
    std::vector<std::vector<TermSequence>> strict_blocks(a.size());
    for (size_t i = 0; i < a.size(); ++i) {
        std::vector<Term> uni = universe(a[i]);
        seq_successor_blocks(a[i], uni, strict_blocks[i]);
    }

    long best = 0;
    // choose the strict position j; earlier positions stay fixed (the
    // equivalence prefix), later ones may weakly decrease
    for (size_t j = 0; j < a.size(); ++j) {
        std::vector<TermSequence> blocks;
        for (size_t i = 0; i < j; ++i) blocks.push_back(TermSequence{a[i]});
        auto weak_tail = [&](auto&& self, size_t pos) -> void {
            if (pos == a.size()) {
                TermSequence concat;
                for (const TermSequence& blk : blocks)
                    concat.insert(concat.end(), blk.begin(), blk.end());
                best = std::max(best, value_seq_plain(concat) + 1);
                return;
            }
            blocks.push_back(TermSequence{a[pos]});
            self(self, pos + 1);
            blocks.pop_back();
            for (const TermSequence& wopt : strict_blocks[pos]) {
                blocks.push_back(wopt);
                self(self, pos + 1);
                blocks.pop_back();
            }
        };
        for (const TermSequence& opt : strict_blocks[j]) {
            blocks.push_back(opt);
            weak_tail(weak_tail, j + 1);
            blocks.pop_back();
        }
    }
    seq_memo_.emplace(std::move(key), best);
    return best;
}

}  // namespace epostar
