#include "epostar/epostar_order.hpp"
#include "epostar/parser.hpp"
#include "epostar/pipeline.hpp"
#include "epostar/rewrite.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using namespace epostar;
using nlohmann::json;

constexpr int kExitCompatible = 0;
constexpr int kExitIncompatible = 1;
constexpr int kExitUnknown = 2;
constexpr int kExitInputError = 3;

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write '" + path + "'");
    out << content;
}

void emit(const std::string& path_or_empty, const std::string& content) {
    if (path_or_empty.empty())
        std::cout << content;
    else
        write_file(path_or_empty, content);
}

json json_line(const std::string& command) {
    json line;
    line["format_version"] = 1;
    line["command"] = command;
    return line;
}

struct SynthOptions {
    std::string file;
    std::string solver;
    double timeout_s = 60.0;
    std::string out;
};

int run_synth(const SynthOptions& opt, bool json_out) {
    Trs trs = parse_trs(read_file(opt.file));
    if (!trs.is_constructor_trs()) throw Error("input is not a constructor TRS");

    SolverConfig config;
    config.timeout = std::chrono::milliseconds(static_cast<long>(opt.timeout_s * 1000));
    if (!opt.solver.empty() && opt.solver != "builtin") config.external_path = opt.solver;

    SynthResult result = synthesize(trs, config);
    if (result.status == SynthResult::Status::Compatible) {
        std::string doc = result.certificate->to_json(trs);
        if (json_out) {
            json line = json_line("synth");
            line["status"] = "compatible";
            line["certificate"] = json::parse(doc);
            std::cout << line.dump() << "\n";
            if (!opt.out.empty()) write_file(opt.out, doc);
        } else {
            emit(opt.out, doc);
            std::cerr << "compatible: certificate synthesized and re-checked\n";
        }
        return kExitCompatible;
    }
    if (result.status == SynthResult::Status::Incompatible) {
        if (json_out) {
            json line = json_line("synth");
            line["status"] = "incompatible";
            std::cout << line.dump() << "\n";
        } else {
            std::cout << "incompatible\n";
        }
        return kExitIncompatible;
    }
    if (json_out) {
        json line = json_line("synth");
        line["status"] = "unknown";
        line["detail"] = result.detail;
        std::cout << line.dump() << "\n";
    } else {
        std::cout << "unknown: " << result.detail << "\n";
    }
    return kExitUnknown;
}

int run_check(const std::string& file, const std::string& cert_path, bool json_out) {
    Trs trs = parse_trs(read_file(file));
    Certificate cert = Certificate::from_json(read_file(cert_path), trs);
    CheckReport report = check_certificate(trs, cert);

    if (json_out) {
        for (const std::string& issue : report.certificate_issues) {
            json line = json_line("check");
            line["issue"] = issue;
            std::cout << line.dump() << "\n";
        }
        for (size_t i = 0; i < report.rules.size(); ++i) {
            json line = json_line("check");
            line["rule"] = i + 1;
            line["lhs"] = report.rules[i].lhs;
            line["rhs"] = report.rules[i].rhs;
            line["oriented"] = report.rules[i].oriented;
            if (!report.rules[i].oriented) line["trace"] = report.rules[i].trace;
            std::cout << line.dump() << "\n";
        }
        json summary = json_line("check");
        summary["compatible"] = report.all_oriented();
        std::cout << summary.dump() << "\n";
    } else {
        for (const std::string& issue : report.certificate_issues)
            std::cout << "certificate issue: " << issue << "\n";
        for (size_t i = 0; i < report.rules.size(); ++i) {
            const RuleVerdict& v = report.rules[i];
            std::cout << "rule " << (i + 1) << ": " << v.lhs << " -> " << v.rhs << ": "
                      << (v.oriented ? "oriented" : "NOT oriented (" + v.trace + ")") << "\n";
        }
        std::cout << (report.all_oriented() ? "compatible" : "incompatible") << "\n";
    }
    return report.all_oriented() ? kExitCompatible : kExitIncompatible;
}

struct MeasureOptions {
    std::string file;
    int max_size = 0;
    std::string strategy = "innermost";
    long node_budget = 1'000'000;
    long size_budget = 10'000;
    bool bottom = false;
    bool derivation = false;
};

int run_measure(const MeasureOptions& opt, bool json_out) {
    Trs trs = parse_trs(read_file(opt.file));
    Strategy strategy = opt.strategy == "full" ? Strategy::Full : Strategy::Innermost;
    SearchLimits limits{opt.node_budget, opt.size_budget};
    auto rows = empirical_rc(trs, opt.max_size, strategy, limits, opt.bottom);

    RewriteEngine engine(trs, opt.bottom);
    const Signature& sig = engine.trs().signature();
    for (const RcRow& row : rows) {
        std::string witness = row.witness ? row.witness->render(sig) : "-";
        if (json_out) {
            json line = json_line("measure");
            line["n"] = row.size;
            line["height"] = row.height;
            line["witness"] = row.witness ? json(witness) : json(nullptr);
            line["truncated"] = row.truncated;
            if (opt.derivation && row.witness) {
                DerivationRecord rec = engine.derivation_height(*row.witness, strategy, limits);
                json steps = json::array();
                for (const Term& t : rec.witness) steps.push_back(t.render(sig));
                line["derivation"] = steps;
            }
            std::cout << line.dump() << "\n";
        } else {
            std::cout << "n=" << row.size << "  height=" << row.height << "  witness=" << witness
                      << (row.truncated ? "  (truncated)" : "") << "\n";
        }
    }
    return kExitCompatible;
}

int run_encode(const std::string& file, const std::string& out, bool json_out) {
    Trs trs = parse_trs(read_file(file));
    std::string dimacs = encode_to_dimacs(trs);
    if (json_out) {
        json line = json_line("encode");
        line["variables"] = 0;  // filled below from the header line
        std::istringstream in(dimacs);
        std::string word;
        while (in >> word)
            if (word == "p") {
                in >> word;  // cnf
                long vars, clauses;
                in >> vars >> clauses;
                line["variables"] = vars;
                line["clauses"] = clauses;
                break;
            }
        std::cout << line.dump() << "\n";
        if (!out.empty()) write_file(out, dimacs);
    } else {
        emit(out, dimacs);
    }
    return kExitCompatible;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"EPO* compatibility certificates for term rewrite systems"};
    app.require_subcommand(1);
    bool json_out = false;
    app.add_flag("--json", json_out, "line-delimited JSON output");

    SynthOptions synth_opt;
    const char* env_solver = std::getenv("EPOSTAR_SOLVER");
    synth_opt.solver = env_solver ? env_solver : "builtin";
    auto* synth = app.add_subcommand("synth", "synthesize a certificate");
    synth->add_option("file", synth_opt.file, "TRS input file")->required();
    synth->add_option("--solver", synth_opt.solver, "'builtin' or path to a DIMACS solver");
    synth->add_option("--timeout", synth_opt.timeout_s, "solver timeout in seconds");
    synth->add_option("--out", synth_opt.out, "write the certificate here");

    std::string check_file, check_cert;
    auto* check = app.add_subcommand("check", "check a certificate against a TRS");
    check->add_option("file", check_file, "TRS input file")->required();
    check->add_option("--cert", check_cert, "certificate file")->required();

    MeasureOptions measure_opt;
    auto* measure = app.add_subcommand("measure", "empirical runtime complexity");
    measure->add_option("file", measure_opt.file, "TRS input file")->required();
    measure->add_option("--max-size", measure_opt.max_size, "largest basic-term size")->required();
    measure->add_option("--strategy", measure_opt.strategy, "innermost or full")
        ->check(CLI::IsMember({"innermost", "full"}));
    measure->add_option("--node-budget", measure_opt.node_budget, "search node budget");
    measure->add_option("--size-budget", measure_opt.size_budget, "term size budget");
    measure->add_flag("--bottom", measure_opt.bottom, "rewrite stuck defined terms to bottom");
    measure->add_flag("--derivation", measure_opt.derivation,
                      "include witness derivations (JSON output)");

    std::string encode_file, encode_out;
    auto* encode = app.add_subcommand("encode", "emit the DIMACS constraint");
    encode->add_option("file", encode_file, "TRS input file")->required();
    encode->add_option("--out", encode_out, "write the CNF here");

    for (CLI::App* sub : app.get_subcommands({})) sub->fallthrough();
    CLI11_PARSE(app, argc, argv);

    try {
        if (synth->parsed()) return run_synth(synth_opt, json_out);
        if (check->parsed()) return run_check(check_file, check_cert, json_out);
        if (measure->parsed()) return run_measure(measure_opt, json_out);
        if (encode->parsed()) return run_encode(encode_file, encode_out, json_out);
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kExitInputError;
    } catch (const CertificateError& e) {
        std::cerr << "certificate error: " << e.what() << "\n";
        return kExitInputError;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    }
    return kExitInputError;
}
