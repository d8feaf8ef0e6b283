#include "epostar/solver.hpp"

#include <algorithm>
#include <cmath>
#include <csignal>
#include <cstring>
#include <sstream>

#include <fcntl.h>
#include <poll.h>
#include <sys/wait.h>
#include <unistd.h>

namespace epostar {

namespace {

using Clock = std::chrono::steady_clock;

// ------------------------------------------------------------- CDCL solver

class MiniCdcl {
public:
    MiniCdcl(const Cnf& cnf, Clock::time_point deadline) : deadline_(deadline) {
        nvars_ = cnf.num_vars;
        assign_.assign(static_cast<size_t>(nvars_) + 1, 0);
        level_.assign(static_cast<size_t>(nvars_) + 1, 0);
        reason_.assign(static_cast<size_t>(nvars_) + 1, -1);
        activity_.assign(static_cast<size_t>(nvars_) + 1, 0.0);
        phase_.assign(static_cast<size_t>(nvars_) + 1, false);
        watches_.assign(2 * (static_cast<size_t>(nvars_) + 1), {});

        for (const auto& clause : cnf.clauses) {
            std::vector<int> lits = clause;
            std::sort(lits.begin(), lits.end());
            lits.erase(std::unique(lits.begin(), lits.end()), lits.end());
            bool taut = false;
            for (size_t i = 0; i + 1 < lits.size(); ++i)
                if (lits[i] == -lits[i + 1]) taut = true;
            if (taut) continue;
            if (lits.empty()) {
                empty_clause_ = true;
                return;
            }
            add_clause(std::move(lits));
        }
    }

    SolverResult run() {
        SolverResult result;
        if (empty_clause_) {
            result.status = SolverResult::Status::Unsat;
            return result;
        }
        // top-level units
        for (int unit : pending_units_)
            if (!enqueue(unit, -1)) {
                result.status = SolverResult::Status::Unsat;
                return result;
            }
        long conflicts_until_restart = 64;
        long restarts = 0;
        while (true) {
            if (Clock::now() > deadline_) {
                result.status = SolverResult::Status::Unknown;
                result.reason = "timeout";
                return result;
            }
            int conflict = propagate();
            if (conflict >= 0) {
                if (decision_level() == 0) {
                    result.status = SolverResult::Status::Unsat;
                    return result;
                }
                std::vector<int> learnt;
                int back_level = analyze(conflict, learnt);
                backtrack(back_level);
                int idx = add_clause(learnt);
                enqueue(learnt[0], idx);
                decay_activities();
                if (--conflicts_until_restart <= 0) {
                    ++restarts;
                    conflicts_until_restart = 64L << std::min(restarts, 20L);
                    backtrack(0);
                }
                continue;
            }
            int branch = pick_branch();
            if (branch == 0) {
                result.status = SolverResult::Status::Sat;
                result.assignment.assign(static_cast<size_t>(nvars_), false);
                for (int v = 1; v <= nvars_; ++v)
                    result.assignment[static_cast<size_t>(v) - 1] = assign_[static_cast<size_t>(v)] > 0;
                return result;
            }
            trail_lim_.push_back(static_cast<int>(trail_.size()));
            enqueue(branch, -1);
        }
    }

private:
    static size_t widx(int lit) {
        return 2 * static_cast<size_t>(std::abs(lit)) + (lit > 0 ? 0 : 1);
    }

    int add_clause(std::vector<int> lits) {
        if (lits.size() == 1) {
            pending_units_.push_back(lits[0]);
            // still store it so reasons can point at learnt units
        }
        int idx = static_cast<int>(clauses_.size());
        clauses_.push_back(std::move(lits));
        const auto& c = clauses_.back();
        if (c.size() >= 2) {
            watches_[widx(c[0])].push_back(idx);
            watches_[widx(c[1])].push_back(idx);
        }
        return idx;
    }

    int decision_level() const { return static_cast<int>(trail_lim_.size()); }

    int8_t value(int lit) const {
        int8_t v = assign_[static_cast<size_t>(std::abs(lit))];
        return lit > 0 ? v : static_cast<int8_t>(-v);
    }

    bool enqueue(int lit, int reason) {
        if (value(lit) > 0) return true;
        if (value(lit) < 0) return false;
        int v = std::abs(lit);
        assign_[static_cast<size_t>(v)] = lit > 0 ? 1 : -1;
        level_[static_cast<size_t>(v)] = decision_level();
        reason_[static_cast<size_t>(v)] = reason;
        phase_[static_cast<size_t>(v)] = lit > 0;
        trail_.push_back(lit);
        return true;
    }

    // two-watched-literal propagation; returns a conflicting clause index
    int propagate() {
        while (qhead_ < trail_.size()) {
            int lit = trail_[qhead_++];
            int false_lit = -lit;
            auto& watch_list = watches_[widx(false_lit)];
            size_t keep = 0;
            for (size_t wi = 0; wi < watch_list.size(); ++wi) {
                int ci = watch_list[wi];
                auto& c = clauses_[static_cast<size_t>(ci)];
                if (c[0] == false_lit) std::swap(c[0], c[1]);
                if (value(c[0]) > 0) {
                    watch_list[keep++] = ci;
                    continue;
                }
                bool moved = false;
                for (size_t k = 2; k < c.size(); ++k)
                    if (value(c[k]) >= 0) {
                        std::swap(c[1], c[k]);
                        watches_[widx(c[1])].push_back(ci);
                        moved = true;
                        break;
                    }
                if (moved) continue;
                watch_list[keep++] = ci;
                if (!enqueue(c[0], ci)) {
                    for (size_t rest = wi + 1; rest < watch_list.size(); ++rest)
                        watch_list[keep++] = watch_list[rest];
                    watch_list.resize(keep);
                    return ci;
                }
            }
            watch_list.resize(keep);
        }
        return -1;
    }

    void bump(int var) {
        activity_[static_cast<size_t>(var)] += activity_inc_;
        if (activity_[static_cast<size_t>(var)] > 1e100) {
            for (double& a : activity_) a *= 1e-100;
            activity_inc_ *= 1e-100;
        }
    }
    void decay_activities() { activity_inc_ /= 0.95; }

    // first-UIP learning
    int analyze(int conflict, std::vector<int>& learnt) {
        std::vector<char> seen(static_cast<size_t>(nvars_) + 1, 0);
        int counter = 0;
        int lit = 0;
        size_t trail_pos = trail_.size();
        learnt.push_back(0);  // slot for the asserting literal
        int clause_idx = conflict;
        do {
            const auto& c = clauses_[static_cast<size_t>(clause_idx)];
            for (size_t k = (lit == 0 ? 0 : 1); k < c.size(); ++k) {
                int q = c[k];
                int v = std::abs(q);
                if (seen[static_cast<size_t>(v)] || level_[static_cast<size_t>(v)] == 0) continue;
                seen[static_cast<size_t>(v)] = 1;
                bump(v);
                if (level_[static_cast<size_t>(v)] == decision_level())
                    ++counter;
                else
                    learnt.push_back(q);
            }
            while (trail_pos > 0 && !seen[static_cast<size_t>(std::abs(trail_[trail_pos - 1]))])
                --trail_pos;
            lit = trail_[trail_pos - 1];
            --trail_pos;
            seen[static_cast<size_t>(std::abs(lit))] = 0;
            clause_idx = reason_[static_cast<size_t>(std::abs(lit))];
            --counter;
        } while (counter > 0);
        learnt[0] = -lit;

        int back = 0;
        size_t second = 1;
        for (size_t k = 1; k < learnt.size(); ++k) {
            int lv = level_[static_cast<size_t>(std::abs(learnt[k]))];
            if (lv > back) {
                back = lv;
                second = k;
            }
        }
        if (learnt.size() > 1) std::swap(learnt[1], learnt[second]);
        return back;
    }

    void backtrack(int target_level) {
        while (decision_level() > target_level) {
            int bound = trail_lim_.back();
            trail_lim_.pop_back();
            while (static_cast<int>(trail_.size()) > bound) {
                int v = std::abs(trail_.back());
                assign_[static_cast<size_t>(v)] = 0;
                reason_[static_cast<size_t>(v)] = -1;
                trail_.pop_back();
            }
        }
        qhead_ = std::min(qhead_, trail_.size());
        if (target_level == 0) qhead_ = 0;
    }

    int pick_branch() {
        int best = 0;
        double best_act = -1.0;
        for (int v = 1; v <= nvars_; ++v)
            if (assign_[static_cast<size_t>(v)] == 0 && activity_[static_cast<size_t>(v)] > best_act) {
                best_act = activity_[static_cast<size_t>(v)];
                best = v;
            }
        if (best == 0) return 0;
        return phase_[static_cast<size_t>(best)] ? best : -best;
    }

    int nvars_ = 0;
    bool empty_clause_ = false;
    std::vector<std::vector<int>> clauses_;
    std::vector<int> pending_units_;
    std::vector<std::vector<int>> watches_;
    std::vector<int8_t> assign_;
    std::vector<int> level_;
    std::vector<int> reason_;
    std::vector<double> activity_;
    std::vector<bool> phase_;
    double activity_inc_ = 1.0;
    std::vector<int> trail_;
    std::vector<int> trail_lim_;
    size_t qhead_ = 0;
    Clock::time_point deadline_;
};

SolverResult verify_sat(const Cnf& cnf, SolverResult result) {
    if (result.status != SolverResult::Status::Sat) return result;
    if (static_cast<int>(result.assignment.size()) < cnf.num_vars)
        result.assignment.resize(static_cast<size_t>(cnf.num_vars), false);
    if (!cnf.satisfied_by(result.assignment)) {
        result.status = SolverResult::Status::Unknown;
        result.reason = "solver returned an assignment that does not satisfy the clauses";
        result.assignment.clear();
    }
    return result;
}

}  // namespace

SolverResult solve_builtin(const Cnf& cnf, std::chrono::milliseconds timeout) {
    MiniCdcl solver(cnf, Clock::now() + timeout);
    return verify_sat(cnf, solver.run());
}

SolverResult solve_external(const Cnf& cnf, const std::string& path,
                            std::chrono::milliseconds timeout) {
    SolverResult result;
    int to_child[2], from_child[2];
    if (pipe(to_child) != 0 || pipe(from_child) != 0) {
        result.reason = "pipe creation failed";
        return result;
    }
    pid_t pid = fork();
    if (pid < 0) {
        result.reason = "fork failed";
        return result;
    }
    if (pid == 0) {
        dup2(to_child[0], STDIN_FILENO);
        dup2(from_child[1], STDOUT_FILENO);
        close(to_child[0]);
        close(to_child[1]);
        close(from_child[0]);
        close(from_child[1]);
        execlp(path.c_str(), path.c_str(), static_cast<char*>(nullptr));
        _exit(127);
    }
    close(to_child[0]);
    close(from_child[1]);

    std::string input = cnf.to_dimacs();
    size_t written = 0;
    while (written < input.size()) {
        ssize_t n = write(to_child[1], input.data() + written, input.size() - written);
        if (n <= 0) break;
        written += static_cast<size_t>(n);
    }
    close(to_child[1]);

    std::string output;
    auto deadline = Clock::now() + timeout;
    char buf[4096];
    bool timed_out = false;
    while (true) {
        auto remaining = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - Clock::now());
        if (remaining.count() <= 0) {
            timed_out = true;
            break;
        }
        struct pollfd pfd{from_child[0], POLLIN, 0};
        int pr = poll(&pfd, 1, static_cast<int>(std::min<long long>(remaining.count(), 1000)));
        if (pr < 0) break;
        if (pr == 0) continue;
        ssize_t n = read(from_child[0], buf, sizeof(buf));
        if (n <= 0) break;
        output.append(buf, static_cast<size_t>(n));
    }
    close(from_child[0]);
    if (timed_out) kill(pid, SIGKILL);
    int status = 0;
    waitpid(pid, &status, 0);

    if (timed_out) {
        result.reason = "external solver timed out";
        return result;
    }
    if (WIFEXITED(status) && WEXITSTATUS(status) == 127) {
        result.reason = "external solver could not be started";
        return result;
    }

    // parse the status and literal lines
    std::istringstream lines(output);
    std::string line;
    bool saw_status = false;
    std::vector<bool> assignment(static_cast<size_t>(cnf.num_vars), false);
    while (std::getline(lines, line)) {
        if (line.empty() || line[0] == 'c') continue;
        if (line[0] == 's') {
            saw_status = true;
            if (line.find("UNSATISFIABLE") != std::string::npos)
                result.status = SolverResult::Status::Unsat;
            else if (line.find("SATISFIABLE") != std::string::npos)
                result.status = SolverResult::Status::Sat;
            else {
                result.status = SolverResult::Status::Unknown;
                result.reason = "external solver reported: " + line;
            }
        } else if (line[0] == 'v') {
            std::istringstream vals(line.substr(1));
            long lit;
            while (vals >> lit) {
                if (lit == 0) continue;
                size_t v = static_cast<size_t>(std::labs(lit));
                if (v >= 1 && v <= static_cast<size_t>(cnf.num_vars)) assignment[v - 1] = lit > 0;
            }
        }
    }
    if (!saw_status) {
        result.status = SolverResult::Status::Unknown;
        result.reason = "external solver produced no status line";
        return result;
    }
    if (result.status == SolverResult::Status::Sat) result.assignment = std::move(assignment);
    return verify_sat(cnf, result);
}

SolverResult solve(const Cnf& cnf, const SolverConfig& config) {
    if (config.external_path) return solve_external(cnf, *config.external_path, config.timeout);
    return solve_builtin(cnf, config.timeout);
}

}  // namespace epostar
