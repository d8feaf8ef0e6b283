#include "epostar/precedence.hpp"

#include <set>

namespace epostar {

void Precedence::set_rank(int class_id, long rank) {
    if (rank < 0) throw Error("class rank must be a natural number");
    ranks_[class_id] = rank;
}

int Precedence::class_of(SymbolId f) const {
    auto it = class_of_.find(f);
    if (it == class_of_.end()) throw Error("symbol not covered by the precedence");
    return it->second;
}

long Precedence::rank_value_of_class(int class_id) const {
    auto it = ranks_.find(class_id);
    if (it == ranks_.end()) throw Error("precedence class without a rank");
    return it->second;
}

bool Precedence::covers(const Signature& sig) const {
    for (SymbolId f : sig.all()) {
        auto it = class_of_.find(f);
        if (it == class_of_.end() || !ranks_.count(it->second)) return false;
    }
    return true;
}

bool Precedence::admissible(const Signature& sig) const {
    if (!covers(sig)) return false;
    for (SymbolId f : sig.defined())
        for (SymbolId c : sig.constructors())
            if (!gt(f, c)) return false;
    return true;
}

int Precedence::rank(SymbolId f, const Signature& sig) const {
    long mine = rank_value(f);
    std::set<long> below;
    for (SymbolId g : sig.all()) {
        long r = rank_value(g);
        if (r < mine) below.insert(r);
    }
    return static_cast<int>(below.size());
}

}  // namespace epostar
