#include "epostar/epostar_order.hpp"

#include <algorithm>
#include <sstream>

namespace epostar {

EpoStarOrder::EpoStarOrder(const Signature& sig, const Certificate& cert)
    : sig_(sig), cert_(cert) {}

bool EpoStarOrder::defined(const Term& t) const {
    return t.is_app() && sig_[t.symbol()].kind == SymbolKind::Defined;
}

bool EpoStarOrder::equiv(const Term& s, const Term& t) {
    if (s == t) return true;
    if (s.is_var() || t.is_var()) return false;
    auto key = std::make_pair(s, t);
    auto it = equiv_memo_.find(key);
    if (it != equiv_memo_.end()) return it->second;

    bool result = false;
    if (s.args().size() == t.args().size() && cert_.precedence.eq(s.symbol(), t.symbol()) &&
        cert_.safe.safe_set(sig_, s.symbol()) == cert_.safe.safe_set(sig_, t.symbol())) {
        result = true;
        for (size_t i = 0; i < s.args().size() && result; ++i)
            result = equiv(s.args()[i], t.args()[i]);
    }
    equiv_memo_.emplace(std::move(key), result);
    return result;
}

bool EpoStarOrder::sub_gt(const Term& s, const Term& t) {
    if (s.is_var()) return false;
    auto key = std::make_pair(s, t);
    auto it = sub_memo_.find(key);
    if (it != sub_memo_.end()) return it->second;

    // defined roots descend through normal positions only, constructors
    // through all of them
    bool result = false;
    const std::vector<int> positions = defined(s)
                                           ? normals(s.symbol())
                                           : [&] {
                                                 std::vector<int> all;
                                                 for (int i = 1; i <= sig_[s.symbol()].arity; ++i)
                                                     all.push_back(i);
                                                 return all;
                                             }();
    for (int pos : positions) {
        const Term& si = s.args()[static_cast<size_t>(pos) - 1];
        if (sub_gt(si, t) || equiv(si, t)) {
            result = true;
            break;
        }
    }
    sub_memo_.emplace(std::move(key), result);
    return result;
}

bool EpoStarOrder::gt(const Term& s, const Term& t) {
    if (s.is_var()) return false;
    auto key = std::make_pair(s, t);
    auto it = gt_memo_.find(key);
    if (it != gt_memo_.end()) return it->second;

    bool result = false;
    // case 1: some argument dominates t
    for (const Term& si : s.args())
        if (gt(si, t) || equiv(si, t)) {
            result = true;
            break;
        }

    if (!result && t.is_app()) {
        SymbolId f = s.symbol(), g = t.symbol();
        auto check_safe_args = [&] {
            for (int pos : safes(g))
                if (!gt(s, t.args()[static_cast<size_t>(pos) - 1])) return false;
            return true;
        };
        if (cert_.precedence.gt(f, g)) {
            // case 2: all normal arguments strictly below via sub_gt,
            // safe arguments below via gt
            bool ok = true;
            for (int pos : normals(g))
                if (!sub_gt(s, t.args()[static_cast<size_t>(pos) - 1])) {
                    ok = false;
                    break;
                }
            result = ok && check_safe_args();
        } else if (cert_.precedence.eq(f, g)) {
            // case 3: lexicographic descent over the normal argument lists
            std::vector<int> sn = normals(f), tn = normals(g);
            size_t bound = std::min(sn.size(), tn.size());
            bool ok = false;
            for (size_t i = 0; i < bound && !ok; ++i) {
                bool branch = true;
                for (size_t p = 0; p < i && branch; ++p)
                    branch = equiv(s.args()[static_cast<size_t>(sn[p]) - 1],
                                   t.args()[static_cast<size_t>(tn[p]) - 1]);
                branch = branch && sub_gt(s.args()[static_cast<size_t>(sn[i]) - 1],
                                          t.args()[static_cast<size_t>(tn[i]) - 1]);
                for (size_t p = i + 1; p < tn.size() && branch; ++p)
                    branch = sub_gt(s, t.args()[static_cast<size_t>(tn[p]) - 1]);
                ok = branch;
            }
            result = ok && check_safe_args();
        }
    }
    gt_memo_.emplace(std::move(key), result);
    return result;
}

std::string EpoStarOrder::explain_failure(const Term& s, const Term& t) {
    std::ostringstream out;
    if (s.is_var()) return "left-hand side is a variable";
    if (!t.is_app()) {
        out << "case 1 failed: no argument covers the right-hand side";
        return out.str();
    }
    SymbolId f = s.symbol(), g = t.symbol();
    if (cert_.precedence.gt(f, g)) {
        for (int pos : normals(g))
            if (!sub_gt(s, t.args()[static_cast<size_t>(pos) - 1])) {
                out << "case 2 failed at normal argument " << pos;
                return out.str();
            }
        for (int pos : safes(g))
            if (!gt(s, t.args()[static_cast<size_t>(pos) - 1])) {
                out << "case 2 failed at safe argument " << pos;
                return out.str();
            }
    } else if (cert_.precedence.eq(f, g)) {
        for (int pos : safes(g))
            if (!gt(s, t.args()[static_cast<size_t>(pos) - 1])) {
                out << "case 3 failed at safe argument " << pos;
                return out.str();
            }
        out << "case 3 failed: no lexicographic descent through the normal arguments";
        return out.str();
    }
    out << "case 1 failed: no argument covers the right-hand side (roots unrelated)";
    return out.str();
}

bool eqv_safe(const Term& s, const Term& t, const Certificate& cert, const Signature& sig) {
    EpoStarOrder order(sig, cert);
    return order.equiv(s, t);
}

bool subepostar_gt(const Term& s, const Term& t, const Certificate& cert, const Signature& sig) {
    EpoStarOrder order(sig, cert);
    return order.sub_gt(s, t);
}

bool epostar_gt(const Term& s, const Term& t, const Certificate& cert, const Signature& sig) {
    EpoStarOrder order(sig, cert);
    return order.gt(s, t);
}

CheckReport check_certificate(const Trs& trs, const Certificate& cert) {
    CheckReport report;
    report.constructor_trs = trs.is_constructor_trs();
    report.certificate_issues = cert.validate(trs);
    if (!report.certificate_ok()) return report;

    Trs permuted = cert.mu.apply(trs);
    EpoStarOrder order(trs.signature(), cert);
    for (const Rule& r : permuted.rules()) {
        RuleVerdict verdict;
        verdict.lhs = r.lhs.render(trs.signature());
        verdict.rhs = r.rhs.render(trs.signature());
        verdict.oriented = order.gt(r.lhs, r.rhs);
        if (!verdict.oriented) verdict.trace = order.explain_failure(r.lhs, r.rhs);
        report.rules.push_back(std::move(verdict));
    }
    return report;
}

bool in_Tn(const Term& t, const Trs& trs, const SafeMapping& safe) {
    const Signature& sig = trs.signature();
    if (is_constructor_term(t, sig)) return true;
    if (t.is_var()) return true;
    for (int pos : safe.normal_positions(sig, t.symbol()))
        if (!is_constructor_term(t.args()[static_cast<size_t>(pos) - 1], sig)) return false;
    for (int pos : safe.safe_positions(sig, t.symbol()))
        if (!in_Tn(t.args()[static_cast<size_t>(pos) - 1], trs, safe)) return false;
    return true;
}

PredicativeInterpretation::PredicativeInterpretation(const Trs& trs, const SafeMapping& safe,
                                                     const Precedence& prec)
    : trs_(trs), safe_(safe), image_sig_(trs.signature()), image_prec_(prec) {
    for (SymbolId f : trs.signature().sorted_by_name()) {
        if (trs.signature()[f].kind != SymbolKind::Defined) continue;
        int arity = static_cast<int>(safe.normal_positions(trs.signature(), f).size());
        SymbolId fn = image_sig_.add(image_sig_.fresh_name(trs.signature()[f].name + "#"), arity,
                                     SymbolKind::Defined);
        normal_variant_.emplace(f, fn);
        image_prec_.assign(fn, prec.class_of(f));
    }
}

SymbolId PredicativeInterpretation::image_symbol(SymbolId f) const {
    auto it = normal_variant_.find(f);
    if (it == normal_variant_.end()) throw Error("symbol has no normal-argument variant");
    return it->second;
}

TermSequence PredicativeInterpretation::image(const Term& t) const {
    if (is_constructor_term(t, trs_.signature())) return {};
    if (!in_Tn(t, trs_, safe_)) throw Error("term outside the closure set has no image");
    TermSequence out;
    if (trs_.signature()[t.symbol()].kind == SymbolKind::Defined) {
        std::vector<Term> normal_args;
        for (int pos : safe_.normal_positions(trs_.signature(), t.symbol()))
            normal_args.push_back(t.args()[static_cast<size_t>(pos) - 1]);
        out.push_back(Term::app(image_symbol(t.symbol()), std::move(normal_args)));
    }
    // constructor roots contribute nothing themselves; all their positions
    // are safe
    for (int pos : safe_.safe_positions(trs_.signature(), t.symbol())) {
        TermSequence sub = image(t.args()[static_cast<size_t>(pos) - 1]);
        out.insert(out.end(), sub.begin(), sub.end());
    }
    return out;
}

}  // namespace epostar
