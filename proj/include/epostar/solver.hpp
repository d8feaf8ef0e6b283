#pragma once

#include "epostar/formula.hpp"

#include <chrono>
#include <optional>
#include <string>
#include <vector>

namespace epostar {

struct SolverResult {
    enum class Status { Sat, Unsat, Unknown };
    Status status = Status::Unknown;
    std::vector<bool> assignment;  // indexed by variable - 1, Sat only
    std::string reason;            // Unknown only

    bool sat() const { return status == Status::Sat; }
    bool unsat() const { return status == Status::Unsat; }
};

struct SolverConfig {
    std::optional<std::string> external_path;  // run the builtin solver when absent
    std::chrono::milliseconds timeout{60'000};
};

/// Decides the CNF with the builtin solver or an external process speaking
/// the DIMACS protocol. Satisfying assignments are verified against every
/// clause before being returned.
SolverResult solve(const Cnf& cnf, const SolverConfig& config = {});

/// Clause learning solver with watched literals, activity-driven branching
/// and restarts; enough for the constraint sizes this tool produces.
SolverResult solve_builtin(const Cnf& cnf, std::chrono::milliseconds timeout);

/// Writes DIMACS to the process stdin and parses the `s`/`v` answer lines.
SolverResult solve_external(const Cnf& cnf, const std::string& path,
                            std::chrono::milliseconds timeout);

}  // namespace epostar
