#include "epostar/term.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace epostar {

// ---------------------------------------------------------------- Signature

SymbolId Signature::add(std::string name, int arity, SymbolKind kind) {
    auto it = by_name_.find(name);
    if (it != by_name_.end()) {
        const FunctionSymbol& have = symbols_[static_cast<size_t>(it->second)];
        if (have.arity != arity)
            throw Error("symbol '" + name + "' used with arities " + std::to_string(have.arity) +
                        " and " + std::to_string(arity));
        return it->second;
    }
    SymbolId id = static_cast<SymbolId>(symbols_.size());
    symbols_.push_back(FunctionSymbol{name, arity, kind});
    by_name_.emplace(std::move(name), id);
    return id;
}

std::optional<SymbolId> Signature::find(const std::string& name) const {
    auto it = by_name_.find(name);
    if (it == by_name_.end()) return std::nullopt;
    return it->second;
}

SymbolId Signature::require(const std::string& name) const {
    auto id = find(name);
    if (!id) throw Error("unknown symbol '" + name + "'");
    return *id;
}

std::vector<SymbolId> Signature::all() const {
    std::vector<SymbolId> out(symbols_.size());
    for (size_t i = 0; i < symbols_.size(); ++i) out[i] = static_cast<SymbolId>(i);
    return out;
}

std::vector<SymbolId> Signature::defined() const {
    std::vector<SymbolId> out;
    for (size_t i = 0; i < symbols_.size(); ++i)
        if (symbols_[i].kind == SymbolKind::Defined) out.push_back(static_cast<SymbolId>(i));
    return out;
}

std::vector<SymbolId> Signature::constructors() const {
    std::vector<SymbolId> out;
    for (size_t i = 0; i < symbols_.size(); ++i)
        if (symbols_[i].kind == SymbolKind::Constructor) out.push_back(static_cast<SymbolId>(i));
    return out;
}

std::vector<SymbolId> Signature::sorted_by_name() const {
    std::vector<SymbolId> out;
    out.reserve(by_name_.size());
    for (const auto& [name, id] : by_name_) out.push_back(id);
    return out;
}

std::string Signature::fresh_name(const std::string& base) const {
    std::string candidate = base;
    while (by_name_.count(candidate)) candidate += "_";
    return candidate;
}

// --------------------------------------------------------------------- Term

namespace {

std::size_t combine(std::size_t seed, std::size_t v) {
    return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

}  // namespace

Term Term::var(std::string name) {
    auto node = std::make_shared<Node>();
    node->is_var = true;
    node->hash = combine(0x5bd1e995, std::hash<std::string>{}(name));
    node->name = std::move(name);
    node->size = 1;
    node->depth = 0;
    return Term(std::move(node));
}

Term Term::app(SymbolId sym, std::vector<Term> args) {
    auto node = std::make_shared<Node>();
    node->is_var = false;
    node->sym = sym;
    node->size = 1;
    node->depth = 0;
    std::size_t h = combine(0x1000193, static_cast<std::size_t>(sym));
    for (const Term& a : args) {
        node->size += a.size();
        node->depth = std::max(node->depth, 1 + a.depth());
        h = combine(h, a.hash());
    }
    node->hash = h;
    node->args = std::move(args);
    return Term(std::move(node));
}

const std::string& Term::var_name() const {
    if (!node_->is_var) throw Error("var_name() on application term");
    return node_->name;
}

SymbolId Term::symbol() const {
    if (node_->is_var) throw Error("symbol() on variable term");
    return node_->sym;
}

bool Term::operator==(const Term& other) const {
    if (node_ == other.node_) return true;
    if (node_->hash != other.node_->hash || node_->size != other.node_->size) return false;
    if (node_->is_var != other.node_->is_var) return false;
    if (node_->is_var) return node_->name == other.node_->name;
    if (node_->sym != other.node_->sym || node_->args.size() != other.node_->args.size()) return false;
    for (size_t i = 0; i < node_->args.size(); ++i)
        if (!(node_->args[i] == other.node_->args[i])) return false;
    return true;
}

int Term::compare(const Term& a, const Term& b) {
    if (a.node_ == b.node_) return 0;
    if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
    if (a.is_var() != b.is_var()) return a.is_var() ? -1 : 1;
    if (a.is_var()) return a.var_name().compare(b.var_name());
    if (a.symbol() != b.symbol()) return a.symbol() < b.symbol() ? -1 : 1;
    for (size_t i = 0; i < a.args().size(); ++i) {
        int c = compare(a.args()[i], b.args()[i]);
        if (c != 0) return c;
    }
    return 0;
}

void Term::collect_vars(std::vector<std::string>& out) const {
    if (is_var()) {
        out.push_back(var_name());
        return;
    }
    for (const Term& a : args()) a.collect_vars(out);
}

std::vector<std::string> Term::vars() const {
    std::vector<std::string> out;
    collect_vars(out);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

bool Term::is_ground() const {
    if (is_var()) return false;
    for (const Term& a : args())
        if (!a.is_ground()) return false;
    return true;
}

std::string Term::render(const Signature& sig) const {
    if (is_var()) return var_name();
    const FunctionSymbol& f = sig[symbol()];
    if (args().empty()) return f.name;  // constants without parentheses
    std::string out = f.name + "(";
    for (size_t i = 0; i < args().size(); ++i) {
        if (i) out += ",";
        out += args()[i].render(sig);
    }
    out += ")";
    return out;
}

// ---------------------------------------------------------------------- Trs

Trs::Trs(Signature sig, std::vector<Rule> rules) : sig_(std::move(sig)), rules_(std::move(rules)) {}

void Trs::add_rule(Rule rule) { rules_.push_back(std::move(rule)); }

bool Trs::is_constructor_trs() const {
    for (const Rule& r : rules_) {
        if (!r.lhs.is_app()) return false;
        for (const Term& a : r.lhs.args())
            if (!is_constructor_term(a, sig_)) return false;
    }
    return true;
}

int Trs::max_rhs_size() const {
    int m = 0;
    for (const Rule& r : rules_) m = std::max(m, r.rhs.size());
    return m;
}

std::string Trs::render() const {
    std::set<std::string> vars;
    for (const Rule& r : rules_)
        for (const std::string& v : r.lhs.vars()) vars.insert(v);
    std::ostringstream out;
    out << "(VAR";
    for (const std::string& v : vars) out << " " << v;
    out << ")\n(RULES\n";
    for (const Rule& r : rules_)
        out << "  " << r.lhs.render(sig_) << " -> " << r.rhs.render(sig_) << "\n";
    out << ")\n";
    return out.str();
}

// ------------------------------------------------------------- Substitution

bool Substitution::bind(const std::string& var, const Term& t) {
    auto [it, inserted] = map_.emplace(var, t);
    return inserted || it->second == t;
}

const Term* Substitution::lookup(const std::string& var) const {
    auto it = map_.find(var);
    return it == map_.end() ? nullptr : &it->second;
}

Term Substitution::apply(const Term& t) const {
    if (t.is_var()) {
        const Term* bound = lookup(t.var_name());
        return bound ? *bound : t;
    }
    if (t.is_ground()) return t;
    std::vector<Term> args;
    args.reserve(t.args().size());
    for (const Term& a : t.args()) args.push_back(apply(a));
    return Term::app(t.symbol(), std::move(args));
}

// --------------------------------------------------------------- operations

namespace {

bool match_into(const Term& pattern, const Term& subject, Substitution& sigma) {
    if (pattern.is_var()) return sigma.bind(pattern.var_name(), subject);
    if (subject.is_var()) return false;
    if (pattern.symbol() != subject.symbol()) return false;
    for (size_t i = 0; i < pattern.args().size(); ++i)
        if (!match_into(pattern.args()[i], subject.args()[i], sigma)) return false;
    return true;
}

}  // namespace

std::optional<Substitution> match(const Term& pattern, const Term& subject) {
    Substitution sigma;
    if (!match_into(pattern, subject, sigma)) return std::nullopt;
    return sigma;
}

TermStats term_stats(const Term& t) { return TermStats{t.size(), t.depth()}; }

bool is_constructor_term(const Term& t, const Signature& sig) {
    if (t.is_var()) return true;
    if (sig[t.symbol()].kind != SymbolKind::Constructor) return false;
    for (const Term& a : t.args())
        if (!is_constructor_term(a, sig)) return false;
    return true;
}

bool is_basic(const Term& t, const Trs& trs) {
    if (t.is_var()) return false;
    if (trs.signature()[t.symbol()].kind != SymbolKind::Defined) return false;
    for (const Term& a : t.args())
        if (!is_constructor_term(a, trs.signature())) return false;
    return true;
}

}  // namespace epostar
