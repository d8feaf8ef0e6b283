#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "epostar/encoding.hpp"
#include "epostar/epostar_order.hpp"
#include "epostar/parser.hpp"
#include "epostar/pipeline.hpp"
#include "epostar/solver.hpp"
#include "encoding_support.hpp"
#include "support.hpp"

#include <random>

using namespace epostar;
using namespace testsupport;

namespace {

// brute-force satisfiability over the full assignment space
bool truth_table_sat(const FormulaBuilder& fb, FormulaRef root, int atom_count) {
    std::vector<bool> assignment(static_cast<size_t>(atom_count), false);
    for (long mask = 0; mask < (1L << atom_count); ++mask) {
        for (int i = 0; i < atom_count; ++i) assignment[static_cast<size_t>(i)] = (mask >> i) & 1;
        if (fb.eval(root, assignment)) return true;
    }
    return false;
}

}  // namespace

TEST_CASE("equivalence encoding folds") {
    Trs trs = fib_trs();
    EpoStarEncoder enc(trs);
    FormulaBuilder& fb = enc.builder();
    Term x = Term::var("x"), y = Term::var("y");
    CHECK(enc.encode_equiv(x, x) == fb.ftrue());
    CHECK(enc.encode_equiv(x, y) == fb.ffalse());
    CHECK(enc.encode_equiv(tparse(trs, "s(0)", {}), tparse(trs, "s(0)", {})) == fb.ftrue());
    // distinct constructors of equal arity are equivalent by the constant
    Trs two = parse_trs("(VAR x)(RULES h(x) -> x  t(a(x)) -> b(x))");
    EpoStarEncoder enc2(two);
    Term ax = parse_term("a(x)", two.signature(), {"x"});
    Term bx = parse_term("b(x)", two.signature(), {"x"});
    CHECK(enc2.encode_equiv(ax, bx) == enc2.builder().ftrue());
}

TEST_CASE("auxiliary order encoding folds") {
    Trs trs = fib_trs();
    EpoStarEncoder enc(trs);
    FormulaBuilder& fb = enc.builder();
    Term x = Term::var("x");
    CHECK(enc.encode_subepostar(x, tparse(trs, "s(0)", {})) == fb.ffalse());
    CHECK(enc.encode_subepostar(tparse(trs, "s(x)"), x) == fb.ftrue());
    CHECK(enc.encode_epostar(x, tparse(trs, "0", {})) == fb.ffalse());

    // dfib(x,y) above y requires position 2 to be normal
    Term lhs = tparse(trs, "dfib(x,y)");
    FormulaRef sub = enc.encode_subepostar(lhs, Term::var("y"));
    SymbolId dfib = trs.signature().require("dfib");
    std::vector<bool> assignment(static_cast<size_t>(enc.num_atoms()), false);
    auto set = [&](const Atom& a, bool v) { assignment[static_cast<size_t>(*enc.find_atom(a))] = v; };
    set(Atom{AtomKind::Safe, dfib, -1, 2, 0}, true);
    CHECK(!fb.eval(sub, assignment));
    set(Atom{AtomKind::Safe, dfib, -1, 2, 0}, false);
    CHECK(fb.eval(sub, assignment));
}

TEST_CASE("hash consing shares repeated subproblems") {
    Trs trs = fib_trs();
    EpoStarEncoder enc(trs);
    Term l = tparse(trs, "dfib(s(s(x)),y)");
    Term r = tparse(trs, "dfib(s(x),dfib(x,y))");
    FormulaRef first = enc.encode_epostar(l, r);
    size_t nodes_after_first = enc.builder().size();
    FormulaRef second = enc.encode_epostar(l, r);
    CHECK(first == second);
    CHECK(enc.builder().size() == nodes_after_first);
}

TEST_CASE("axioms pin permutations and precedences") {
    // a single defined unary symbol: nothing to permute, single level
    Trs one = parse_trs("(VAR x)(RULES f(x) -> x)");
    EpoStarEncoder enc(one);
    FormulaRef axioms = enc.encode_axioms();
    Cnf cnf = enc.cnf(axioms);
    auto result = solve_builtin(cnf, std::chrono::milliseconds(5'000));
    REQUIRE(result.sat());

    // two defined symbols: never both strictly above each other
    Trs two = parse_trs("(VAR x)(RULES f(x) -> x  g(x) -> f(x))");
    EpoStarEncoder enc2(two);
    FormulaRef ax2 = enc2.encode_axioms();
    SymbolId f = two.signature().require("f"), g = two.signature().require("g");
    FormulaBuilder& fb2 = enc2.builder();
    FormulaRef both = fb2.conj({ax2, enc2.prec_gt(f, g), enc2.prec_gt(g, f)});
    CHECK(solve_builtin(enc2.cnf(both), std::chrono::milliseconds(5'000)).unsat());
    // each single direction is realizable, as is the equivalence
    for (FormulaRef want : {enc2.prec_gt(f, g), enc2.prec_gt(g, f), enc2.prec_eq(f, g)})
        CHECK(solve_builtin(enc2.cnf(fb2.conj2(ax2, want)), std::chrono::milliseconds(5'000)).sat());
}

TEST_CASE("fibonacci constraint is satisfiable and decodes to a valid certificate") {
    Trs trs = fib_trs();
    EpoStarEncoder enc(trs);
    FormulaRef constraint = enc.encode_compatibility();
    Cnf cnf = enc.cnf(constraint);
    auto result = solve_builtin(cnf, std::chrono::milliseconds(30'000));
    REQUIRE(result.sat());
    Certificate cert = enc.decode(result.assignment);
    CHECK(check_certificate(trs, cert).all_oriented());
}

TEST_CASE("the example certificate is among the models") {
    Trs trs = fib_trs();
    const Signature& sig = trs.signature();
    SymbolId fib = sig.require("fib"), dfib = sig.require("dfib");
    EpoStarEncoder enc(trs);
    FormulaBuilder& fb = enc.builder();
    std::vector<FormulaRef> want{enc.encode_compatibility()};
    want.push_back(enc.prec_gt(fib, dfib));
    want.push_back(fb.negate(enc.safe(fib, 1)));
    want.push_back(fb.negate(enc.safe(dfib, 1)));
    want.push_back(enc.safe(dfib, 2));
    want.push_back(enc.mu(dfib, 1, 1));  // identity permutation
    Cnf cnf = enc.cnf(fb.conj(std::move(want)));
    auto result = solve_builtin(cnf, std::chrono::milliseconds(30'000));
    REQUIRE(result.sat());
    Certificate cert = enc.decode(result.assignment);
    CHECK(cert.precedence.gt(fib, dfib));
    CHECK(cert.safe.safe_set(sig, dfib) == std::set<int>{2});
    CHECK(cert.safe.safe_set(sig, fib).empty());
    CHECK(check_certificate(trs, cert).all_oriented());
}

TEST_CASE("hand certificates imply satisfiability") {
    // whenever the checker accepts a certificate, asserting it as unit
    // literals keeps the constraint satisfiable
    Trs trs = dup_trs();
    const Signature& sig = trs.signature();
    EpoStarEncoder enc(trs);
    FormulaBuilder& fb = enc.builder();
    SymbolId f = sig.require("f"), d = sig.require("d");
    std::vector<FormulaRef> want{enc.encode_compatibility()};
    want.push_back(enc.prec_gt(f, d));
    want.push_back(fb.negate(enc.safe(f, 1)));
    want.push_back(enc.safe(f, 2));
    want.push_back(enc.safe(d, 1));
    Cnf cnf = enc.cnf(fb.conj(std::move(want)));
    CHECK(solve_builtin(cnf, std::chrono::milliseconds(30'000)).sat());
}

TEST_CASE("ackermann recursion is unsatisfiable") {
    Trs trs = ackermann_trs();
    EpoStarEncoder enc(trs);
    Cnf cnf = enc.cnf(enc.encode_compatibility());
    CHECK(solve_builtin(cnf, std::chrono::milliseconds(30'000)).unsat());

    // independent oracle: every admissible certificate over the signature
    // fails on some rule (safe sets x permutations x constructor classes)
    const Signature& sig = trs.signature();
    SymbolId ack = sig.require("ack"), s = sig.require("s"), zero = sig.require("0");
    int certificates = 0;
    for (long sf = 0; sf < 4; ++sf)
        for (const auto& perm : permutations_of(2))
            for (int cons_rel = 0; cons_rel < 4; ++cons_rel) {
                Certificate cert;
                cert.precedence.assign(ack, 0);
                cert.precedence.set_rank(0, 3);
                long rs = cons_rel == 0 ? 0 : (cons_rel == 1 ? 1 : 0);
                long rz = cons_rel == 0 ? 0 : (cons_rel == 1 ? 0 : (cons_rel == 2 ? 1 : 0));
                if (cons_rel < 3) {
                    cert.precedence.assign(s, 1);
                    cert.precedence.assign(zero, 2);
                    cert.precedence.set_rank(1, rs);
                    cert.precedence.set_rank(2, rz);
                } else {
                    cert.precedence.assign(s, 1);
                    cert.precedence.assign(zero, 1);
                    cert.precedence.set_rank(1, 0);
                }
                std::set<int> safe_set;
                for (int i = 1; i <= 2; ++i)
                    if ((sf >> (i - 1)) & 1) safe_set.insert(i);
                cert.safe.set(ack, safe_set);
                bool identity = perm[0] == 1;
                if (!identity) cert.mu.set(ack, perm);
                if (!cert.validate(trs).empty()) continue;
                ++certificates;
                CHECK(!check_certificate(trs, cert).all_oriented());
            }
    CHECK(certificates >= 24);
}

TEST_CASE("single projection rule is satisfiable") {
    Trs trs = parse_trs("(VAR x)(RULES f(x) -> x)");
    CHECK(solve_builtin(EpoStarEncoder(trs).cnf(EpoStarEncoder(trs).encode_compatibility()),
                        std::chrono::milliseconds(5'000))
              .status == SolverResult::Status::Sat);
    SynthResult synth = synthesize(trs);
    CHECK(synth.status == SynthResult::Status::Compatible);
}

TEST_CASE("dimacs output is byte-stable and carries the atom map") {
    Trs trs = fib_trs();
    std::string first = encode_to_dimacs(trs);
    std::string second = encode_to_dimacs(trs);
    CHECK(first == second);
    CHECK(first.find("c 1 level(dfib,0)") != std::string::npos);
    CHECK(first.find("p cnf ") != std::string::npos);
    CHECK(first.find("safe(dfib,2)") != std::string::npos);
    CHECK(first.find("mu(dfib,1,1)") != std::string::npos);
}

TEST_CASE("tseitin round-trip against truth tables") {
    std::mt19937 rng(20260810);
    FormulaBuilder fb;
    const int atom_count = 12;
    std::vector<FormulaRef> atoms;
    for (int i = 0; i < atom_count; ++i) atoms.push_back(fb.atom(i));

    auto random_formula = [&](auto&& self, int depth) -> FormulaRef {
        int choice = static_cast<int>(rng() % 8);
        if (depth == 0 || choice == 0)
            return atoms[rng() % atoms.size()];
        switch (choice % 5) {
            case 0:
            case 1: return fb.conj2(self(self, depth - 1), self(self, depth - 1));
            case 2: return fb.disj2(self(self, depth - 1), self(self, depth - 1));
            case 3: return fb.negate(self(self, depth - 1));
            default:
                return (choice & 1) ? fb.implies(self(self, depth - 1), self(self, depth - 1))
                                    : fb.iff(self(self, depth - 1), self(self, depth - 1));
        }
    };

    std::vector<std::string> names(atom_count);
    for (int i = 0; i < atom_count; ++i) names[static_cast<size_t>(i)] = "a" + std::to_string(i);
    int checked = 0;
    for (int round = 0; round < 1000; ++round) {
        FormulaRef root = random_formula(random_formula, 4);
        Cnf cnf = to_cnf(fb, root, atom_count, names);
        bool expect = truth_table_sat(fb, root, atom_count);
        auto result = solve_builtin(cnf, std::chrono::milliseconds(5'000));
        REQUIRE(result.status != SolverResult::Status::Unknown);
        CHECK(result.sat() == expect);
        if (result.sat()) {
            // the Tseitin model restricted to the atoms satisfies the formula
            std::vector<bool> restricted(result.assignment.begin(),
                                         result.assignment.begin() + atom_count);
            CHECK(fb.eval(root, restricted));
        }
        ++checked;
    }
    CHECK(checked == 1000);
}

TEST_CASE("encoding agrees with the checker pointwise") {
    // 4-symbol signature; all decodable assignments over the folded atom
    // space; all term pairs up to size 4
    Trs trs = parse_trs("(VAR x)(RULES f(x,x) -> x  g(x) -> x)");
    const Signature& sig = trs.signature();
    // ensure constructors exist
    Trs full = parse_trs("(VAR x)(RULES f(x,x) -> s(0)  g(x) -> x)");
    const Signature& fsig = full.signature();
    REQUIRE(fsig.defined().size() == 2);
    (void)sig;

    EpoStarEncoder enc(full);
    AssignmentSpace space(full, enc);
    REQUIRE(space.assignments.size() > 20);

    std::vector<Term> terms = enumerate_terms(fsig, 4, {"x", "y"});
    long mismatches = 0, comparisons = 0;
    for (const auto& assignment : space.assignments) {
        Certificate cert = enc.decode(assignment);
        REQUIRE(cert.validate(full).empty() == cert.validate(full).empty());
        EpoStarOrder order(fsig, cert);
        for (const Term& s : terms)
            for (const Term& t : terms) {
                if (s.size() + t.size() > 7) continue;
                bool encoded = enc.builder().eval(enc.encode_epostar(s, t), assignment);
                bool checked = order.gt(cert.mu.apply(s), cert.mu.apply(t));
                ++comparisons;
                if (encoded != checked) ++mismatches;
            }
    }
    CHECK(comparisons > 100000);
    CHECK(mismatches == 0);
}

TEST_CASE("synthesis pipeline closes the loop on the fixtures") {
    for (const Trs& trs : {fib_trs(), dup_trs()}) {
        SynthResult result = synthesize(trs);
        REQUIRE(result.status == SynthResult::Status::Compatible);
        REQUIRE(result.certificate.has_value());
        CHECK(check_certificate(trs, *result.certificate).all_oriented());
        // serialized form round-trips through the document format
        Certificate back = Certificate::from_json(result.certificate->to_json(trs), trs);
        CHECK(check_certificate(trs, back).all_oriented());
    }
    CHECK(synthesize(ackermann_trs()).status == SynthResult::Status::Incompatible);
}
