#include "epostar/encoding.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace epostar {

namespace {

int bits_for(int count) {
    int bits = 0;
    while ((1 << bits) < count + 1) ++bits;
    return std::max(bits, 1);
}

}  // namespace

EpoStarEncoder::EpoStarEncoder(const Trs& trs) : trs_(trs) {
    const Signature& sig = trs.signature();
    std::vector<SymbolId> defined;
    for (SymbolId f : sig.sorted_by_name())
        if (sig[f].kind == SymbolKind::Defined) defined.push_back(f);

    if (!defined.empty()) level_bits_ = bits_for(static_cast<int>(defined.size()));
    for (SymbolId f : defined)
        for (int b = 0; b < level_bits_; ++b) register_atom(Atom{AtomKind::Level, f, -1, b, 0});
    for (SymbolId f : defined)
        for (SymbolId g : defined)
            if (f != g) register_atom(Atom{AtomKind::PrecGt, f, g, 0, 0});
    for (size_t a = 0; a < defined.size(); ++a)
        for (size_t b = a + 1; b < defined.size(); ++b) {
            SymbolId f = defined[a], g = defined[b];
            if (sig[f].arity != sig[g].arity) continue;  // folded to false
            register_atom(
                Atom{AtomKind::PrecEq, std::min(f, g), std::max(f, g), 0, 0});
        }
    for (SymbolId f : defined)
        for (int i = 1; i <= sig[f].arity; ++i) register_atom(Atom{AtomKind::Safe, f, -1, i, 0});
    for (SymbolId f : sig.sorted_by_name()) {
        if (sig[f].arity < 2) continue;
        for (int i = 1; i <= sig[f].arity; ++i)
            for (int k = 1; k <= sig[f].arity; ++k)
                register_atom(Atom{AtomKind::Mu, f, -1, i, k});
    }
}

int EpoStarEncoder::register_atom(const Atom& a) {
    auto key = std::make_tuple(static_cast<int>(a.kind), a.f, a.g, a.i, a.k);
    auto it = atom_index_.find(key);
    if (it != atom_index_.end()) return it->second;
    int index = static_cast<int>(atoms_.size());
    atoms_.push_back(a);
    atom_index_.emplace(key, index);
    return index;
}

std::optional<int> EpoStarEncoder::find_atom(const Atom& a) const {
    auto it = atom_index_.find(std::make_tuple(static_cast<int>(a.kind), a.f, a.g, a.i, a.k));
    if (it == atom_index_.end()) return std::nullopt;
    return it->second;
}

std::string EpoStarEncoder::atom_name(int index) const {
    const Signature& sig = trs_.signature();
    const Atom& a = atoms_.at(static_cast<size_t>(index));
    std::ostringstream out;
    switch (a.kind) {
        case AtomKind::Level: out << "level(" << sig[a.f].name << "," << a.i << ")"; break;
        case AtomKind::PrecGt: out << "gt(" << sig[a.f].name << "," << sig[a.g].name << ")"; break;
        case AtomKind::PrecEq: out << "eq(" << sig[a.f].name << "," << sig[a.g].name << ")"; break;
        case AtomKind::Safe: out << "safe(" << sig[a.f].name << "," << a.i << ")"; break;
        case AtomKind::Mu: out << "mu(" << sig[a.f].name << "," << a.i << "," << a.k << ")"; break;
    }
    return out.str();
}

std::vector<std::string> EpoStarEncoder::atom_names() const {
    std::vector<std::string> names;
    names.reserve(atoms_.size());
    for (int i = 0; i < num_atoms(); ++i) names.push_back(atom_name(i));
    return names;
}

FormulaRef EpoStarEncoder::prec_gt(SymbolId f, SymbolId g) {
    const Signature& sig = trs_.signature();
    bool fd = sig[f].kind == SymbolKind::Defined;
    bool gd = sig[g].kind == SymbolKind::Defined;
    if (fd && !gd) return fb_.ftrue();
    if (!fd) return fb_.ffalse();
    if (f == g) return fb_.ffalse();
    return fb_.atom(*find_atom(Atom{AtomKind::PrecGt, f, g, 0, 0}));
}

FormulaRef EpoStarEncoder::prec_eq(SymbolId f, SymbolId g) {
    const Signature& sig = trs_.signature();
    bool fd = sig[f].kind == SymbolKind::Defined;
    bool gd = sig[g].kind == SymbolKind::Defined;
    if (!fd && !gd) return fb_.ftrue();
    if (fd != gd) return fb_.ffalse();
    if (f == g) return fb_.ftrue();
    if (sig[f].arity != sig[g].arity) return fb_.ffalse();
    return fb_.atom(*find_atom(Atom{AtomKind::PrecEq, std::min(f, g), std::max(f, g), 0, 0}));
}

FormulaRef EpoStarEncoder::safe(SymbolId f, int pos) {
    if (trs_.signature()[f].kind == SymbolKind::Constructor) return fb_.ftrue();
    return fb_.atom(*find_atom(Atom{AtomKind::Safe, f, -1, pos, 0}));
}

FormulaRef EpoStarEncoder::mu(SymbolId f, int pos, int target) {
    if (trs_.signature()[f].arity < 2) return fb_.constant(pos == target);
    return fb_.atom(*find_atom(Atom{AtomKind::Mu, f, -1, pos, target}));
}

FormulaRef EpoStarEncoder::encode_equiv(const Term& s, const Term& t) {
    if (s == t) return fb_.ftrue();
    if (s.is_var() || t.is_var()) return fb_.ffalse();
    if (s.args().size() != t.args().size()) return fb_.ffalse();
    auto key = std::make_pair(s, t);
    auto it = equiv_memo_.find(key);
    if (it != equiv_memo_.end()) return it->second;

    int n = static_cast<int>(s.args().size());
    std::vector<FormulaRef> parts{prec_eq(s.symbol(), t.symbol())};
    for (int i = 1; i <= n; ++i)
        for (int j = 1; j <= n; ++j)
            for (int k = 1; k <= n; ++k)
                parts.push_back(fb_.implies(
                    fb_.conj2(mu(s.symbol(), i, k), mu(t.symbol(), j, k)),
                    encode_equiv(s.args()[static_cast<size_t>(i) - 1],
                                 t.args()[static_cast<size_t>(j) - 1])));
    FormulaRef result = fb_.conj(std::move(parts));
    equiv_memo_.emplace(std::move(key), result);
    return result;
}

FormulaRef EpoStarEncoder::encode_subepostar(const Term& s, const Term& t) {
    if (s.is_var()) return fb_.ffalse();
    auto key = std::make_pair(s, t);
    auto it = sub_memo_.find(key);
    if (it != sub_memo_.end()) return it->second;

    bool defined = trs_.signature()[s.symbol()].kind == SymbolKind::Defined;
    std::vector<FormulaRef> branches;
    for (int i = 1; i <= static_cast<int>(s.args().size()); ++i) {
        const Term& si = s.args()[static_cast<size_t>(i) - 1];
        FormulaRef guard = defined ? fb_.negate(safe(s.symbol(), i)) : fb_.ftrue();
        branches.push_back(
            fb_.conj2(guard, fb_.disj2(encode_subepostar(si, t), encode_equiv(si, t))));
    }
    FormulaRef result = fb_.disj(std::move(branches));
    sub_memo_.emplace(std::move(key), result);
    return result;
}

FormulaRef EpoStarEncoder::encode_epostar(const Term& s, const Term& t) {
    if (s.is_var()) return fb_.ffalse();
    auto key = std::make_pair(s, t);
    auto it = star_memo_.find(key);
    if (it != star_memo_.end()) return it->second;

    std::vector<FormulaRef> case1;
    for (const Term& si : s.args())
        case1.push_back(fb_.disj2(encode_epostar(si, t), encode_equiv(si, t)));
    FormulaRef result = fb_.disj(std::move(case1));

    if (t.is_app()) {
        SymbolId f = s.symbol(), g = t.symbol();
        FormulaRef head =
            fb_.disj2(prec_gt(f, g), fb_.conj2(prec_eq(f, g), encode_lex(s, t, 1)));
        std::vector<FormulaRef> parts{head};
        for (int j = 1; j <= static_cast<int>(t.args().size()); ++j) {
            const Term& tj = t.args()[static_cast<size_t>(j) - 1];
            parts.push_back(fb_.implies(safe(g, j), encode_epostar(s, tj)));
            parts.push_back(fb_.implies(fb_.negate(safe(g, j)), encode_subepostar(s, tj)));
        }
        result = fb_.disj2(result, fb_.conj(std::move(parts)));
    }
    star_memo_.emplace(std::move(key), result);
    return result;
}

// Lexicographic walk over permutation targets: safe positions are skipped,
// the first normal position must strictly decrease or be equivalent with the
// walk continuing one target further.
FormulaRef EpoStarEncoder::encode_lex(const Term& s, const Term& t, int depth) {
    int n = static_cast<int>(s.args().size());
    if (t.args().size() != static_cast<size_t>(n)) return fb_.ffalse();
    if (depth > n) return fb_.ffalse();
    auto key = std::make_tuple(s, t, depth);
    auto it = lex_memo_.find(key);
    if (it != lex_memo_.end()) return it->second;

    FormulaRef deeper = encode_lex(s, t, depth + 1);
    std::vector<FormulaRef> parts;
    for (int i = 1; i <= n; ++i)
        for (int j = 1; j <= n; ++j) {
            FormulaRef ante = fb_.conj2(mu(s.symbol(), i, depth), mu(t.symbol(), j, depth));
            const Term& si = s.args()[static_cast<size_t>(i) - 1];
            const Term& tj = t.args()[static_cast<size_t>(j) - 1];
            FormulaRef strict_or_continue = fb_.disj2(
                encode_subepostar(si, tj), fb_.conj2(encode_equiv(si, tj), deeper));
            FormulaRef cons =
                fb_.conj2(fb_.implies(safe(s.symbol(), i), deeper),
                          fb_.implies(fb_.negate(safe(s.symbol(), i)), strict_or_continue));
            parts.push_back(fb_.implies(ante, cons));
        }
    FormulaRef result = fb_.conj(std::move(parts));
    lex_memo_.emplace(std::move(key), result);
    return result;
}

FormulaRef EpoStarEncoder::level_gt(SymbolId f, SymbolId g) {
    FormulaRef gt = fb_.ffalse();
    FormulaRef eq_prefix = fb_.ftrue();
    for (int b = level_bits_ - 1; b >= 0; --b) {
        FormulaRef fb_bit = fb_.atom(*find_atom(Atom{AtomKind::Level, f, -1, b, 0}));
        FormulaRef gb_bit = fb_.atom(*find_atom(Atom{AtomKind::Level, g, -1, b, 0}));
        gt = fb_.disj2(gt, fb_.conj({eq_prefix, fb_bit, fb_.negate(gb_bit)}));
        eq_prefix = fb_.conj2(eq_prefix, fb_.iff(fb_bit, gb_bit));
    }
    return gt;
}

FormulaRef EpoStarEncoder::level_eq(SymbolId f, SymbolId g) {
    FormulaRef eq = fb_.ftrue();
    for (int b = 0; b < level_bits_; ++b) {
        FormulaRef fb_bit = fb_.atom(*find_atom(Atom{AtomKind::Level, f, -1, b, 0}));
        FormulaRef gb_bit = fb_.atom(*find_atom(Atom{AtomKind::Level, g, -1, b, 0}));
        eq = fb_.conj2(eq, fb_.iff(fb_bit, gb_bit));
    }
    return eq;
}

FormulaRef EpoStarEncoder::encode_axioms() {
    const Signature& sig = trs_.signature();
    std::vector<SymbolId> defined;
    for (SymbolId f : sig.sorted_by_name())
        if (sig[f].kind == SymbolKind::Defined) defined.push_back(f);

    std::vector<FormulaRef> parts;

    // safe argument positions coincide across equivalent symbols (after mu)
    std::vector<SymbolId> all = sig.sorted_by_name();
    for (size_t a = 0; a < all.size(); ++a)
        for (size_t b = a + 1; b < all.size(); ++b) {
            SymbolId f = all[a], g = all[b];
            if (sig[f].arity != sig[g].arity) continue;
            int n = sig[f].arity;
            std::vector<FormulaRef> inner;
            for (int i = 1; i <= n; ++i)
                for (int j = 1; j <= n; ++j)
                    for (int k = 1; k <= n; ++k)
                        inner.push_back(fb_.implies(fb_.conj2(mu(f, i, k), mu(g, j, k)),
                                                    fb_.iff(safe(f, i), safe(g, j))));
            parts.push_back(fb_.implies(prec_eq(f, g), fb_.conj(std::move(inner))));
        }

    // precedence atoms are comparisons of per-symbol level counters
    for (SymbolId f : defined)
        for (SymbolId g : defined) {
            if (f == g) continue;
            parts.push_back(fb_.iff(prec_gt(f, g), level_gt(f, g)));
        }
    for (size_t a = 0; a < defined.size(); ++a)
        for (size_t b = a + 1; b < defined.size(); ++b) {
            SymbolId f = defined[a], g = defined[b];
            if (sig[f].arity != sig[g].arity) continue;
            parts.push_back(fb_.iff(prec_eq(f, g), level_eq(f, g)));
        }

    // each permutation row and column holds exactly one true variable
    auto exactly_one = [&](const std::vector<FormulaRef>& lits) {
        std::vector<FormulaRef> out{fb_.disj(lits)};
        for (size_t x = 0; x < lits.size(); ++x)
            for (size_t y = x + 1; y < lits.size(); ++y)
                out.push_back(fb_.disj2(fb_.negate(lits[x]), fb_.negate(lits[y])));
        return fb_.conj(std::move(out));
    };
    for (SymbolId f : sig.sorted_by_name()) {
        int n = sig[f].arity;
        if (n < 2) continue;
        for (int i = 1; i <= n; ++i) {
            std::vector<FormulaRef> row, col;
            for (int k = 1; k <= n; ++k) {
                row.push_back(mu(f, i, k));
                col.push_back(mu(f, k, i));
            }
            parts.push_back(exactly_one(row));
            parts.push_back(exactly_one(col));
        }
    }
    return fb_.conj(std::move(parts));
}

FormulaRef EpoStarEncoder::encode_compatibility() {
    std::vector<FormulaRef> parts{encode_axioms()};
    for (const Rule& r : trs_.rules()) parts.push_back(encode_epostar(r.lhs, r.rhs));
    return fb_.conj(std::move(parts));
}

Cnf EpoStarEncoder::cnf(FormulaRef root) const { return to_cnf(fb_, root, num_atoms(), atom_names()); }

Certificate EpoStarEncoder::decode(const std::vector<bool>& model) const {
    const Signature& sig = trs_.signature();
    if (model.size() < atoms_.size()) throw Error("model does not cover the atom table");
    auto value = [&](const Atom& a) {
        auto idx = find_atom(a);
        if (!idx) throw Error("model decoding hit an unregistered atom");
        return model[static_cast<size_t>(*idx)];
    };

    std::map<SymbolId, long> level;
    for (SymbolId f : sig.defined()) {
        long v = 0;
        for (int b = 0; b < level_bits_; ++b)
            if (value(Atom{AtomKind::Level, f, -1, b, 0})) v |= 1L << b;
        level[f] = v;
    }

    // the model must agree with the level comparisons
    for (SymbolId f : sig.defined())
        for (SymbolId g : sig.defined()) {
            if (f != g && value(Atom{AtomKind::PrecGt, f, g, 0, 0}) != (level[f] > level[g]))
                throw Error("inconsistent model: precedence atom contradicts levels");
            if (f < g && sig[f].arity == sig[g].arity &&
                value(Atom{AtomKind::PrecEq, f, g, 0, 0}) != (level[f] == level[g]))
                throw Error("inconsistent model: equivalence atom contradicts levels");
        }

    Certificate cert;
    // constructors share the bottom class
    cert.precedence.set_rank(0, 0);
    for (SymbolId c : sig.constructors()) cert.precedence.assign(c, 0);
    // defined classes group equal levels of equal arity
    std::map<std::pair<long, int>, int> class_ids;
    for (SymbolId f : sig.defined()) {
        auto key = std::make_pair(level[f], sig[f].arity);
        auto it = class_ids.find(key);
        if (it == class_ids.end()) {
            int id = static_cast<int>(class_ids.size()) + 1;
            it = class_ids.emplace(key, id).first;
            cert.precedence.set_rank(id, level[f] + 1);
        }
        cert.precedence.assign(f, it->second);
    }

    // permutations, with bijectivity rechecked
    std::map<SymbolId, std::vector<int>> perms;
    for (SymbolId f : sig.all()) {
        int n = sig[f].arity;
        std::vector<int> perm(static_cast<size_t>(std::max(n, 0)));
        for (int i = 1; i <= n; ++i) perm[static_cast<size_t>(i) - 1] = i;
        if (n >= 2) {
            std::vector<bool> seen(static_cast<size_t>(n), false);
            for (int i = 1; i <= n; ++i) {
                int target = 0;
                for (int k = 1; k <= n; ++k)
                    if (value(Atom{AtomKind::Mu, f, -1, i, k})) {
                        if (target != 0) throw Error("inconsistent model: duplicate permutation target");
                        target = k;
                    }
                if (target == 0 || seen[static_cast<size_t>(target) - 1])
                    throw Error("inconsistent model: permutation row is not a bijection");
                seen[static_cast<size_t>(target) - 1] = true;
                perm[static_cast<size_t>(i) - 1] = target;
            }
        }
        perms[f] = perm;
        bool identity = true;
        for (int i = 1; i <= n; ++i)
            if (perm[static_cast<size_t>(i) - 1] != i) identity = false;
        if (!identity) cert.mu.set(f, perm);
    }

    // safe positions, mapped through the permutation
    for (SymbolId f : sig.defined()) {
        std::set<int> safe_positions;
        for (int i = 1; i <= sig[f].arity; ++i)
            if (value(Atom{AtomKind::Safe, f, -1, i, 0}))
                safe_positions.insert(perms[f][static_cast<size_t>(i) - 1]);
        cert.safe.set(f, std::move(safe_positions));
    }
    return cert;
}

}  // namespace epostar
