#include "epostar/certificate.hpp"

#include <json.hpp>

#include <algorithm>
#include <sstream>

namespace epostar {

using nlohmann::json;

// ---------------------------------------------------------------- SafeMapping

bool SafeMapping::is_safe(const Signature& sig, SymbolId f, int pos) const {
    auto it = safe_.find(f);
    if (it != safe_.end()) return it->second.count(pos) != 0;
    return sig[f].kind == SymbolKind::Constructor;  // defaults
}

std::set<int> SafeMapping::safe_set(const Signature& sig, SymbolId f) const {
    auto it = safe_.find(f);
    if (it != safe_.end()) return it->second;
    std::set<int> out;
    if (sig[f].kind == SymbolKind::Constructor)
        for (int i = 1; i <= sig[f].arity; ++i) out.insert(i);
    return out;
}

std::vector<int> SafeMapping::normal_positions(const Signature& sig, SymbolId f) const {
    std::vector<int> out;
    for (int i = 1; i <= sig[f].arity; ++i)
        if (!is_safe(sig, f, i)) out.push_back(i);
    return out;
}

std::vector<int> SafeMapping::safe_positions(const Signature& sig, SymbolId f) const {
    std::vector<int> out;
    for (int i = 1; i <= sig[f].arity; ++i)
        if (is_safe(sig, f, i)) out.push_back(i);
    return out;
}

// -------------------------------------------------------------- ArgPermutation

bool ArgPermutation::is_identity(SymbolId f) const {
    auto it = perm_.find(f);
    if (it == perm_.end()) return true;
    for (size_t i = 0; i < it->second.size(); ++i)
        if (it->second[i] != static_cast<int>(i) + 1) return false;
    return true;
}

int ArgPermutation::target(SymbolId f, int pos) const {
    auto it = perm_.find(f);
    if (it == perm_.end()) return pos;
    return it->second.at(static_cast<size_t>(pos) - 1);
}

Term ArgPermutation::apply(const Term& t) const {
    if (t.is_var()) return t;
    std::vector<Term> args(t.args().size(), t);  // placeholders, overwritten below
    for (size_t i = 0; i < t.args().size(); ++i)
        args[static_cast<size_t>(target(t.symbol(), static_cast<int>(i) + 1)) - 1] =
            apply(t.args()[i]);
    return Term::app(t.symbol(), std::move(args));
}

Trs ArgPermutation::apply(const Trs& trs) const {
    Trs out(trs.signature(), {});
    for (const Rule& r : trs.rules()) out.add_rule(Rule{apply(r.lhs), apply(r.rhs)});
    return out;
}

// ----------------------------------------------------------------- Certificate

std::vector<std::string> Certificate::validate(const Trs& trs) const {
    const Signature& sig = trs.signature();
    std::vector<std::string> issues;

    if (!trs.is_constructor_trs()) issues.push_back("not a constructor TRS");
    if (!precedence.covers(sig)) {
        issues.push_back("precedence does not cover every symbol");
        return issues;  // everything below needs classes
    }
    if (!precedence.admissible(sig)) issues.push_back("precedence not admissible");

    for (const auto& [f, positions] : safe.explicit_entries()) {
        for (int p : positions)
            if (p < 1 || p > sig[f].arity)
                issues.push_back("safe position " + std::to_string(p) + " out of range for '" +
                                 sig[f].name + "'");
        if (sig[f].kind == SymbolKind::Constructor &&
            static_cast<int>(positions.size()) != sig[f].arity)
            issues.push_back("constructor '" + sig[f].name + "' must have all positions safe");
    }

    for (const auto& [f, perm] : mu.explicit_entries()) {
        if (static_cast<int>(perm.size()) != sig[f].arity) {
            issues.push_back("permutation arity mismatch for '" + sig[f].name + "'");
            continue;
        }
        std::vector<bool> seen(perm.size(), false);
        for (int img : perm) {
            if (img < 1 || img > static_cast<int>(perm.size()) || seen[static_cast<size_t>(img) - 1]) {
                issues.push_back("permutation for '" + sig[f].name + "' is not a bijection");
                break;
            }
            seen[static_cast<size_t>(img) - 1] = true;
        }
    }

    // equivalent symbols of equal arity must agree on safe positions; for
    // equivalent defined symbols the normal-argument counts must match either
    // way, otherwise the lexicographic case has no meaning
    auto symbols = sig.all();
    for (SymbolId f : symbols)
        for (SymbolId g : symbols) {
            if (f >= g || !precedence.eq(f, g)) continue;
            if (sig[f].arity == sig[g].arity && safe.safe_set(sig, f) != safe.safe_set(sig, g))
                issues.push_back("equivalent symbols '" + sig[f].name + "' and '" + sig[g].name +
                                 "' disagree on safe positions");
            if (sig[f].kind == SymbolKind::Defined && sig[g].kind == SymbolKind::Defined &&
                safe.normal_positions(sig, f).size() != safe.normal_positions(sig, g).size())
                issues.push_back("equivalent defined symbols '" + sig[f].name + "' and '" +
                                 sig[g].name + "' have different normal-argument counts");
        }
    return issues;
}

std::string Certificate::to_json(const Trs& trs) const {
    const Signature& sig = trs.signature();
    json doc;
    json classes = json::object();
    json ranks = json::object();
    for (SymbolId f : sig.sorted_by_name()) {
        int cls = precedence.class_of(f);
        std::string cname = "c" + std::to_string(cls);
        classes[sig[f].name] = cname;
        ranks[cname] = precedence.rank_value_of_class(cls);
    }
    json safe_doc = json::object();
    for (SymbolId f : sig.sorted_by_name()) {
        std::set<int> s = safe.safe_set(sig, f);
        safe_doc[sig[f].name] = std::vector<int>(s.begin(), s.end());
    }
    json mu_doc = json::object();
    for (SymbolId f : sig.sorted_by_name())
        if (!mu.is_identity(f)) mu_doc[sig[f].name] = mu.explicit_entries().at(f);
    doc["classes"] = classes;
    doc["ranks"] = ranks;
    doc["safe"] = safe_doc;
    doc["mu"] = mu_doc;
    return doc.dump(2) + "\n";
}

Certificate Certificate::from_json(const std::string& text, const Trs& trs) {
    const Signature& sig = trs.signature();
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw CertificateError(std::string("certificate is not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw CertificateError("certificate must be a JSON object");

    auto require_symbol = [&](const std::string& name) -> SymbolId {
        auto id = sig.find(name);
        if (!id) throw CertificateError("certificate mentions unknown symbol '" + name + "'");
        return *id;
    };

    Certificate cert;
    if (!doc.contains("classes") || !doc["classes"].is_object())
        throw CertificateError("certificate needs a 'classes' object");
    if (!doc.contains("ranks") || !doc["ranks"].is_object())
        throw CertificateError("certificate needs a 'ranks' object");

    std::map<std::string, int> class_ids;
    for (auto it = doc["ranks"].begin(); it != doc["ranks"].end(); ++it) {
        if (!it.value().is_number_integer() || it.value().get<long>() < 0)
            throw CertificateError("rank of class '" + it.key() + "' must be a nonnegative integer");
        int id = static_cast<int>(class_ids.size());
        class_ids.emplace(it.key(), id);
        cert.precedence.set_rank(class_ids[it.key()], it.value().get<long>());
    }
    for (auto it = doc["classes"].begin(); it != doc["classes"].end(); ++it) {
        SymbolId f = require_symbol(it.key());
        if (!it.value().is_string())
            throw CertificateError("class of '" + it.key() + "' must be a string");
        std::string cname = it.value().get<std::string>();
        auto cit = class_ids.find(cname);
        if (cit == class_ids.end())
            throw CertificateError("class '" + cname + "' has no rank entry");
        cert.precedence.assign(f, cit->second);
    }
    for (SymbolId f : sig.all())
        if (!cert.precedence.has(f))
            throw CertificateError("symbol '" + sig[f].name + "' missing from 'classes'");

    if (doc.contains("safe")) {
        if (!doc["safe"].is_object()) throw CertificateError("'safe' must be an object");
        for (auto it = doc["safe"].begin(); it != doc["safe"].end(); ++it) {
            SymbolId f = require_symbol(it.key());
            if (!it.value().is_array())
                throw CertificateError("safe positions of '" + it.key() + "' must be a list");
            std::set<int> positions;
            int prev = 0;
            for (const auto& v : it.value()) {
                if (!v.is_number_integer())
                    throw CertificateError("safe positions of '" + it.key() + "' must be integers");
                int p = v.get<int>();
                if (p <= prev)
                    throw CertificateError("safe positions of '" + it.key() +
                                           "' must be strictly ascending");
                if (p < 1 || p > sig[f].arity)
                    throw CertificateError("safe position " + std::to_string(p) +
                                           " out of range for '" + it.key() + "'");
                positions.insert(p);
                prev = p;
            }
            cert.safe.set(f, std::move(positions));
        }
    }

    if (doc.contains("mu")) {
        if (!doc["mu"].is_object()) throw CertificateError("'mu' must be an object");
        for (auto it = doc["mu"].begin(); it != doc["mu"].end(); ++it) {
            SymbolId f = require_symbol(it.key());
            if (!it.value().is_array() ||
                static_cast<int>(it.value().size()) != sig[f].arity)
                throw CertificateError("permutation of '" + it.key() + "' must list " +
                                       std::to_string(sig[f].arity) + " positions");
            std::vector<int> perm;
            std::vector<bool> seen(it.value().size(), false);
            for (const auto& v : it.value()) {
                if (!v.is_number_integer())
                    throw CertificateError("permutation of '" + it.key() + "' must be integers");
                int img = v.get<int>();
                if (img < 1 || img > sig[f].arity || seen[static_cast<size_t>(img) - 1])
                    throw CertificateError("permutation of '" + it.key() + "' is not a bijection");
                seen[static_cast<size_t>(img) - 1] = true;
                perm.push_back(img);
            }
            cert.mu.set(f, std::move(perm));
        }
    }
    return cert;
}

}  // namespace epostar
