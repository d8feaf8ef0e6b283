#include "epostar/formula.hpp"

#include <algorithm>
#include <sstream>

namespace epostar {

FormulaBuilder::FormulaBuilder() {
    nodes_.push_back(FormulaNode{FOp::False, -1, {}});
    nodes_.push_back(FormulaNode{FOp::True, -1, {}});
}

FormulaRef FormulaBuilder::intern(FormulaNode n) {
    std::string key;
    key.reserve(8 + n.kids.size() * 4);
    key.push_back(static_cast<char>(n.op));
    key.append(reinterpret_cast<const char*>(&n.atom), sizeof(n.atom));
    for (FormulaRef k : n.kids) key.append(reinterpret_cast<const char*>(&k), sizeof(k));
    auto it = dedup_.find(key);
    if (it != dedup_.end()) return it->second;
    FormulaRef ref = static_cast<FormulaRef>(nodes_.size());
    nodes_.push_back(std::move(n));
    dedup_.emplace(std::move(key), ref);
    return ref;
}

FormulaRef FormulaBuilder::atom(std::int32_t atom_index) {
    return intern(FormulaNode{FOp::Atom, atom_index, {}});
}

FormulaRef FormulaBuilder::negate(FormulaRef a) {
    if (a == ffalse()) return ftrue();
    if (a == ftrue()) return ffalse();
    if (node(a).op == FOp::Not) return node(a).kids[0];
    return intern(FormulaNode{FOp::Not, -1, {a}});
}

FormulaRef FormulaBuilder::conj(std::vector<FormulaRef> kids) {
    std::vector<FormulaRef> flat;
    for (FormulaRef k : kids) {
        if (k == ffalse()) return ffalse();
        if (k == ftrue()) continue;
        if (node(k).op == FOp::And)
            flat.insert(flat.end(), node(k).kids.begin(), node(k).kids.end());
        else
            flat.push_back(k);
    }
    std::sort(flat.begin(), flat.end());
    flat.erase(std::unique(flat.begin(), flat.end()), flat.end());
    if (flat.empty()) return ftrue();
    if (flat.size() == 1) return flat[0];
    return intern(FormulaNode{FOp::And, -1, std::move(flat)});
}

FormulaRef FormulaBuilder::disj(std::vector<FormulaRef> kids) {
    std::vector<FormulaRef> flat;
    for (FormulaRef k : kids) {
        if (k == ftrue()) return ftrue();
        if (k == ffalse()) continue;
        if (node(k).op == FOp::Or)
            flat.insert(flat.end(), node(k).kids.begin(), node(k).kids.end());
        else
            flat.push_back(k);
    }
    std::sort(flat.begin(), flat.end());
    flat.erase(std::unique(flat.begin(), flat.end()), flat.end());
    if (flat.empty()) return ffalse();
    if (flat.size() == 1) return flat[0];
    return intern(FormulaNode{FOp::Or, -1, std::move(flat)});
}

FormulaRef FormulaBuilder::implies(FormulaRef a, FormulaRef b) {
    if (a == ftrue()) return b;
    if (a == ffalse() || b == ftrue()) return ftrue();
    if (b == ffalse()) return negate(a);
    if (a == b) return ftrue();
    return intern(FormulaNode{FOp::Implies, -1, {a, b}});
}

FormulaRef FormulaBuilder::iff(FormulaRef a, FormulaRef b) {
    if (a == b) return ftrue();
    if (a == ftrue()) return b;
    if (b == ftrue()) return a;
    if (a == ffalse()) return negate(b);
    if (b == ffalse()) return negate(a);
    if (a > b) std::swap(a, b);
    return intern(FormulaNode{FOp::Iff, -1, {a, b}});
}

bool FormulaBuilder::eval(FormulaRef root, const std::vector<bool>& atom_values) const {
    std::vector<char> value(static_cast<size_t>(root) + 1, 0);
    for (FormulaRef r = 0; r <= root; ++r) {
        const FormulaNode& n = nodes_[static_cast<size_t>(r)];
        switch (n.op) {
            case FOp::False: value[r] = 0; break;
            case FOp::True: value[r] = 1; break;
            case FOp::Atom: value[r] = atom_values.at(static_cast<size_t>(n.atom)) ? 1 : 0; break;
            case FOp::Not: value[r] = !value[n.kids[0]]; break;
            case FOp::And: {
                char v = 1;
                for (FormulaRef k : n.kids) v = static_cast<char>(v && value[k]);
                value[r] = v;
                break;
            }
            case FOp::Or: {
                char v = 0;
                for (FormulaRef k : n.kids) v = static_cast<char>(v || value[k]);
                value[r] = v;
                break;
            }
            case FOp::Implies: value[r] = static_cast<char>(!value[n.kids[0]] || value[n.kids[1]]); break;
            case FOp::Iff: value[r] = static_cast<char>(value[n.kids[0]] == value[n.kids[1]]); break;
        }
    }
    return value[static_cast<size_t>(root)] != 0;
}

std::vector<std::int32_t> FormulaBuilder::atoms_of(FormulaRef root) const {
    std::vector<char> reach(static_cast<size_t>(root) + 1, 0);
    reach[static_cast<size_t>(root)] = 1;
    std::vector<std::int32_t> atoms;
    for (FormulaRef r = root; r >= 0; --r) {
        if (!reach[static_cast<size_t>(r)]) continue;
        const FormulaNode& n = nodes_[static_cast<size_t>(r)];
        if (n.op == FOp::Atom) atoms.push_back(n.atom);
        for (FormulaRef k : n.kids) reach[static_cast<size_t>(k)] = 1;
    }
    std::sort(atoms.begin(), atoms.end());
    atoms.erase(std::unique(atoms.begin(), atoms.end()), atoms.end());
    return atoms;
}

// ------------------------------------------------------------------- Tseitin

Cnf to_cnf(const FormulaBuilder& fb, FormulaRef root, int num_atoms,
           const std::vector<std::string>& atom_names) {
    Cnf cnf;
    cnf.num_vars = num_atoms;
    cnf.var_names.assign(static_cast<size_t>(num_atoms), "");
    for (size_t i = 0; i < atom_names.size() && i < cnf.var_names.size(); ++i)
        cnf.var_names[i] = atom_names[i];

    if (root == fb.ffalse()) {
        cnf.clauses.push_back({});
        return cnf;
    }
    if (root == fb.ftrue()) return cnf;

    // literal per reachable node: atoms map to their variable, composite
    // nodes get fresh auxiliaries, negations reuse the child literal
    std::vector<char> reach(static_cast<size_t>(root) + 1, 0);
    reach[static_cast<size_t>(root)] = 1;
    for (FormulaRef r = root; r >= 0; --r) {
        if (!reach[static_cast<size_t>(r)]) continue;
        for (FormulaRef k : fb.node(r).kids) reach[static_cast<size_t>(k)] = 1;
    }

    std::vector<int> lit(static_cast<size_t>(root) + 1, 0);
    for (FormulaRef r = 0; r <= root; ++r) {
        if (!reach[static_cast<size_t>(r)]) continue;
        const FormulaNode& n = fb.node(r);
        switch (n.op) {
            case FOp::False:
            case FOp::True:
                throw Error("constant below a composite node");  // folded away at build time
            case FOp::Atom:
                lit[static_cast<size_t>(r)] = n.atom + 1;
                break;
            case FOp::Not:
                lit[static_cast<size_t>(r)] = -lit[static_cast<size_t>(n.kids[0])];
                break;
            default: {
                ++cnf.num_vars;
                cnf.var_names.push_back("");
                int v = cnf.num_vars;
                lit[static_cast<size_t>(r)] = v;
                std::vector<int> ks;
                for (FormulaRef k : n.kids) ks.push_back(lit[static_cast<size_t>(k)]);
                if (n.op == FOp::And) {
                    std::vector<int> big{v};
                    for (int k : ks) {
                        cnf.clauses.push_back({-v, k});
                        big.push_back(-k);
                    }
                    cnf.clauses.push_back(std::move(big));
                } else if (n.op == FOp::Or) {
                    std::vector<int> big{-v};
                    for (int k : ks) {
                        cnf.clauses.push_back({v, -k});
                        big.push_back(k);
                    }
                    cnf.clauses.push_back(std::move(big));
                } else if (n.op == FOp::Implies) {
                    cnf.clauses.push_back({-v, -ks[0], ks[1]});
                    cnf.clauses.push_back({v, ks[0]});
                    cnf.clauses.push_back({v, -ks[1]});
                } else {  // Iff
                    cnf.clauses.push_back({-v, -ks[0], ks[1]});
                    cnf.clauses.push_back({-v, ks[0], -ks[1]});
                    cnf.clauses.push_back({v, ks[0], ks[1]});
                    cnf.clauses.push_back({v, -ks[0], -ks[1]});
                }
            }
        }
    }
    cnf.clauses.push_back({lit[static_cast<size_t>(root)]});
    return cnf;
}

std::string Cnf::to_dimacs() const {
    std::ostringstream out;
    for (size_t i = 0; i < var_names.size(); ++i)
        if (!var_names[i].empty()) out << "c " << (i + 1) << " " << var_names[i] << "\n";
    out << "p cnf " << num_vars << " " << clauses.size() << "\n";
    for (const auto& clause : clauses) {
        for (int l : clause) out << l << " ";
        out << "0\n";
    }
    return out.str();
}

bool Cnf::satisfied_by(const std::vector<bool>& assignment) const {
    for (const auto& clause : clauses) {
        bool sat = false;
        for (int l : clause) {
            size_t v = static_cast<size_t>(std::abs(l)) - 1;
            if (v < assignment.size() && assignment[v] == (l > 0)) {
                sat = true;
                break;
            }
        }
        if (!sat) return false;
    }
    return true;
}

}  // namespace epostar
