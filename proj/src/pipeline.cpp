#include "epostar/pipeline.hpp"

#include "epostar/epostar_order.hpp"

namespace epostar {

SynthResult synthesize(const Trs& trs, const SolverConfig& solver) {
    SynthResult out;
    EpoStarEncoder encoder(trs);
    FormulaRef constraint = encoder.encode_compatibility();
    Cnf cnf = encoder.cnf(constraint);
    SolverResult sat = solve(cnf, solver);

    if (sat.unsat()) {
        out.status = SynthResult::Status::Incompatible;
        return out;
    }
    if (!sat.sat()) {
        out.status = SynthResult::Status::Unknown;
        out.detail = sat.reason;
        return out;
    }

    Certificate cert = encoder.decode(sat.assignment);
    CheckReport report = check_certificate(trs, cert);
    if (!report.all_oriented()) {
        // decoding and checking disagree; surface it instead of guessing
        out.status = SynthResult::Status::Unknown;
        out.detail = "decoded certificate failed re-validation";
        return out;
    }
    out.status = SynthResult::Status::Compatible;
    out.certificate = std::move(cert);
    return out;
}

std::string encode_to_dimacs(const Trs& trs) {
    EpoStarEncoder encoder(trs);
    FormulaRef constraint = encoder.encode_compatibility();
    return encoder.cnf(constraint).to_dimacs();
}

}  // namespace epostar
