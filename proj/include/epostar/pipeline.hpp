#pragma once

#include "epostar/certificate.hpp"
#include "epostar/encoding.hpp"
#include "epostar/solver.hpp"

#include <optional>
#include <string>

namespace epostar {

struct SynthResult {
    enum class Status { Compatible, Incompatible, Unknown };
    Status status = Status::Unknown;
    std::optional<Certificate> certificate;  // Compatible only, already re-checked
    std::string detail;
};

/// Encodes the compatibility constraint, solves it, decodes the model and
/// re-validates the certificate against the rules before returning it.
SynthResult synthesize(const Trs& trs, const SolverConfig& solver = {});

/// The DIMACS text of the full compatibility constraint (byte-stable).
std::string encode_to_dimacs(const Trs& trs);

}  // namespace epostar
