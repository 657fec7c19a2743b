#include "bltab/degree.hpp"
#include "bltab/error.hpp"
#include "bltab/formula.hpp"
#include "bltab/kset.hpp"
#include "bltab/model.hpp"
#include "bltab/solver.hpp"
#include "bltab/tableau.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

namespace {

using namespace bltab;
using nlohmann::ordered_json;

constexpr int kExitSat = 0;
constexpr int kExitUnsat = 1;
constexpr int kExitUnknown = 2;
constexpr int kExitUsage = 64;
constexpr int kExitNoInput = 66;
constexpr int kExitInternal = 70;
constexpr int kExitIo = 74;

int usage_error(const std::string& msg) {
    std::cerr << "error: " << msg << "\n";
    return kExitUsage;
}

// True when the first word of `cmd` names an executable (a path, or found
// on PATH). Used only to pick the default backend.
bool command_resolvable(const std::string& cmd) {
    std::istringstream in(cmd);
    std::string name;
    if (!(in >> name)) return false;
    if (name.find('/') != std::string::npos) return ::access(name.c_str(), X_OK) == 0;
    const char* path = std::getenv("PATH");
    if (!path) return false;
    std::string dirs(path);
    std::size_t start = 0;
    while (start <= dirs.size()) {
        std::size_t end = dirs.find(':', start);
        if (end == std::string::npos) end = dirs.size();
        std::string dir = dirs.substr(start, end - start);
        if (dir.empty()) dir = ".";
        if (::access((dir + "/" + name).c_str(), X_OK) == 0) return true;
        if (end == dirs.size()) break;
        start = end + 1;
    }
    return false;
}

std::string verdict_word(VerdictStatus s) {
    switch (s) {
        case VerdictStatus::Satisfiable: return "sat";
        case VerdictStatus::Unsatisfiable: return "unsat";
        default: return "unknown";
    }
}

std::string attained_word(Attained a) {
    switch (a) {
        case Attained::Yes: return "yes";
        case Attained::No: return "no";
        default: return "unknown";
    }
}

ordered_json stats_json(const ExploreStats& st, std::uint64_t elapsed_ms) {
    ordered_json j;
    j["nodes"] = st.nodes;
    j["leaves"] = st.leaves;
    j["solver_calls"] = st.solver_calls;
    j["elapsed_ms"] = elapsed_ms;
    return j;
}

std::string render_tnorm(const OrdinalSum& t) {
    if (t.components.empty()) return "min";
    std::string out;
    for (std::size_t i = 0; i < t.components.size(); ++i) {
        if (i) out += " + ";
        const Component& c = t.components[i];
        out += (c.kind == CompKind::Lukasiewicz ? "L[" : "P[");
        out += rat_to_string(c.lo) + "," + rat_to_string(c.hi) + "]";
    }
    return out;
}

// Undecided-leaf entries look like "<leaf id>: <reason>" and repeat the same
// reason across many leaves; group them so the output stays readable.
std::vector<std::string> summarize_diagnostics(const std::vector<std::string>& raw) {
    auto looks_like_id = [](const std::string& s) {
        if (s.empty()) return false;
        for (char c : s)
            if (c != '.' && (c < '0' || c > '9')) return false;
        return true;
    };
    std::vector<std::string> order;
    std::map<std::string, std::pair<std::string, std::size_t>> info;  // reason -> (first id, n)
    for (const std::string& s : raw) {
        std::size_t sep = s.find(": ");
        std::string id, reason = s;
        if (sep != std::string::npos && looks_like_id(s.substr(0, sep))) {
            id = s.substr(0, sep);
            reason = s.substr(sep + 2);
        }
        auto [it, fresh] = info.try_emplace(reason, id, std::size_t{0});
        if (fresh) order.push_back(reason);
        ++it->second.second;
    }
    std::vector<std::string> out;
    for (const std::string& r : order) {
        const auto& [id, n] = info[r];
        if (id.empty())
            out.push_back(r);
        else if (n == 1)
            out.push_back(r + " (leaf " + id + ")");
        else
            out.push_back(r + " (" + std::to_string(n) + " leaves, first " + id + ")");
    }
    return out;
}

void print_human_verdict(const Verdict& v, const ExploreStats& st, std::uint64_t elapsed_ms) {
    std::cout << "verdict: " << verdict_word(v.status) << "\n";
    if (v.model) {
        std::cout << "t-norm: " << render_tnorm(v.model->tnorm) << "\n";
        std::cout << "valuation:";
        for (const auto& [atom, value] : v.model->valuation)
            std::cout << " " << atom << "=" << rat_to_string(value);
        if (v.model->valuation.empty()) std::cout << " (none)";
        std::cout << "\n";
        if (!v.model->exact)
            std::cout << "precision: within " << rat_to_string(v.model->precision)
                      << " of each reported value\n";
    }
    for (const std::string& d : summarize_diagnostics(v.undecided))
        std::cout << "undecided: " << d << "\n";
    std::cout << "stats: nodes=" << st.nodes << " leaves=" << st.leaves
              << " solver_calls=" << st.solver_calls << " elapsed_ms=" << elapsed_ms << "\n";
}

struct ParsedFormulas {
    std::vector<FormulaPtr> psis;
    std::optional<int> error;  // exit code when parsing failed
};

void strip_comment_and_trim(std::string& line) {
    std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::size_t b = line.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) {
        line.clear();
        return;
    }
    std::size_t e = line.find_last_not_of(" \t\r\n");
    line = line.substr(b, e - b + 1);
}

ParsedFormulas collect_formulas(const std::string& file,
                                const std::vector<std::string>& inline_texts) {
    ParsedFormulas out;
    if (!file.empty()) {
        std::ifstream in(file);
        if (!in) {
            std::cerr << "error: cannot open formula file '" << file << "'\n";
            out.error = kExitNoInput;
            return out;
        }
        std::string line;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            strip_comment_and_trim(line);
            if (line.empty()) continue;
            try {
                out.psis.push_back(parse_formula(line));
            } catch (const ParseError& e) {
                std::cerr << "error: " << file << ":" << lineno << ": " << e.what() << "\n";
                out.error = kExitUsage;
                return out;
            }
        }
    }
    for (std::size_t i = 0; i < inline_texts.size(); ++i) {
        try {
            out.psis.push_back(parse_formula(inline_texts[i]));
        } catch (const ParseError& e) {
            std::cerr << "error: formula " << (i + 1) << ": " << e.what() << "\n";
            out.error = kExitUsage;
            return out;
        }
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Tableau-based K-satisfiability solver for propositional fuzzy logic "
                 "with Delta and involutive negation"};
    app.require_subcommand(1);

    auto* cmd = app.add_subcommand(
        "solve", "Decide satisfiability over a truth-value set, or bracket the consistency degree");
    std::vector<std::string> inline_texts;
    std::string ktext, file, weak_text, strong_text, degree_text, tol_text;
    std::string backend_text, smt_cmd, trace_path, format = "json";
    double timeout_s = 10.0;
    long long grid_den = 4;
    bool prune = false;

    cmd->add_option("formulas", inline_texts, "Formulas, one per argument");
    cmd->add_option("--k", ktext, "Truth-value set K, e.g. \"[1/2,3/4] u {1}\"");
    cmd->add_option("--file", file, "Read formulas from a file (one per line, # starts a comment)");
    cmd->add_option("--weak", weak_text, "Weak r-satisfiability: K = [r,1]");
    cmd->add_option("--strong", strong_text, "Strong r-satisfiability: K = {r}");
    cmd->add_option("--degree", degree_text, "Bracket the consistency degree (weak or strong)")
        ->check(CLI::IsMember({"weak", "strong"}));
    cmd->add_option("--tol", tol_text, "Bracket width for --degree, e.g. 1/16");
    cmd->add_option("--backend", backend_text, "Constraint backend (default: smt when a solver command is available, else grid)")
        ->check(CLI::IsMember({"smt", "grid"}));
    cmd->add_option("--smt-cmd", smt_cmd,
                    "External SMT-LIB2 solver command (default: $BLTAB_SMT_CMD)");
    cmd->add_option("--timeout", timeout_s, "Per-solver-call timeout in seconds (default 10)");
    cmd->add_option("--grid-denominator", grid_den, "Grid backend denominator (default 4)");
    cmd->add_flag("--prune", prune, "Cut branches whose accumulated constraints are already unsolvable");
    cmd->add_option("--trace", trace_path, "Write one JSON edge record per line to this file");
    cmd->add_option("--format", format, "Output format (json or human)")
        ->check(CLI::IsMember({"json", "human"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    // Exactly one mode: plain K-satisfiability (--k), --weak, --strong, or --degree.
    const bool has_weak = cmd->count("--weak") > 0;
    const bool has_strong = cmd->count("--strong") > 0;
    const bool has_degree = cmd->count("--degree") > 0;
    const int picked = int(has_weak) + int(has_strong) + int(has_degree);
    if (picked > 1) return usage_error("choose at most one of --weak, --strong, --degree");
    if (picked == 1 && cmd->count("--k") > 0)
        return usage_error("--k only applies to plain K-satisfiability");
    if (picked == 0 && cmd->count("--k") == 0)
        return usage_error("--k is required unless --weak, --strong, or --degree is given");
    if (has_degree && cmd->count("--tol") == 0) return usage_error("--degree requires --tol");
    if (!has_degree && cmd->count("--tol") > 0) return usage_error("--tol only applies to --degree");
    if (timeout_s <= 0) return usage_error("--timeout must be positive");
    if (grid_den < 1) return usage_error("--grid-denominator must be at least 1");

    std::optional<KSet> kset;
    if (picked == 0) {
        try {
            kset = parse_kset(ktext);
        } catch (const std::exception& e) {
            return usage_error(std::string("--k: ") + e.what());
        }
    }
    Rat r = 0;
    if (has_weak || has_strong) {
        try {
            r = rat_from_string(has_weak ? weak_text : strong_text);
        } catch (const std::exception& e) {
            return usage_error(std::string("r: ") + e.what());
        }
        if (!rat_in_unit(r)) return usage_error("r must lie in [0,1]");
    }
    Rat tol = 0;
    if (has_degree) {
        try {
            tol = rat_from_string(tol_text);
        } catch (const std::exception& e) {
            return usage_error(std::string("--tol: ") + e.what());
        }
        if (tol <= 0) return usage_error("--tol must be positive");
    }

    ParsedFormulas parsed = collect_formulas(file, inline_texts);
    if (parsed.error) return *parsed.error;

    SolverConfig sc;
    sc.smt_cmd = smt_cmd;
    if (sc.smt_cmd.empty()) {
        if (const char* env = std::getenv("BLTAB_SMT_CMD")) sc.smt_cmd = env;
    }
    if (backend_text == "smt")
        sc.backend = Backend::Smt;
    else if (backend_text == "grid")
        sc.backend = Backend::Grid;
    else
        sc.backend = command_resolvable(sc.smt_cmd) ? Backend::Smt : Backend::Grid;
    sc.timeout_ms = static_cast<std::uint64_t>(timeout_s * 1000.0 + 0.5);
    sc.grid_denominator = static_cast<long>(grid_den);

    ExploreStats stats;
    ExploreConfig ec;
    ec.solver = sc;
    ec.prune = prune;
    ec.stats = &stats;
    std::ofstream trace_out;
    if (!trace_path.empty()) {
        trace_out.open(trace_path);
        if (!trace_out) {
            std::cerr << "error: cannot open trace file '" << trace_path << "'\n";
            return kExitIo;
        }
        ec.trace = &trace_out;
    }

    const bool human = format == "human";
    const auto t0 = std::chrono::steady_clock::now();
    auto elapsed_ms = [&t0]() {
        return static_cast<std::uint64_t>(std::chrono::duration_cast<std::chrono::milliseconds>(
                                              std::chrono::steady_clock::now() - t0)
                                              .count());
    };

    try {
        if (has_degree) {
            DegreeMode mode = degree_text == "weak" ? DegreeMode::Weak : DegreeMode::Strong;
            DegreeBracket b = consistency_degree(parsed.psis, mode, tol, ec);
            std::uint64_t ms = elapsed_ms();
            if (human) {
                std::cout << "degree (" << degree_text << "): lo=" << rat_to_string(b.lo)
                          << " hi=" << rat_to_string(b.hi) << " attained=" << attained_word(b.attained)
                          << " complete=" << (b.complete ? "yes" : "no") << "\n";
                if (!b.note.empty()) std::cout << "note: " << b.note << "\n";
                std::cout << "stats: nodes=" << stats.nodes << " leaves=" << stats.leaves
                          << " solver_calls=" << stats.solver_calls << " elapsed_ms=" << ms << "\n";
            } else {
                ordered_json out;
                out["mode"] = degree_text;
                out["lo"] = rat_to_string(b.lo);
                out["hi"] = rat_to_string(b.hi);
                out["attained"] = attained_word(b.attained);
                out["complete"] = b.complete;
                if (!b.note.empty()) out["note"] = b.note;
                out["stats"] = stats_json(stats, ms);
                std::cout << out.dump() << "\n";
            }
            return b.complete ? kExitSat : kExitUnknown;
        }

        Verdict v;
        KSet check_k = kset ? *kset
                            : (has_weak ? KSet({make_interval(r, 1, true, true)})
                                        : KSet({make_interval(r, r, true, true)}));
        if (kset)
            v = explore(parsed.psis, *kset, ec);
        else if (has_weak)
            v = weak_r_sat(parsed.psis, r, ec);
        else
            v = strong_r_sat(parsed.psis, r, ec);
        std::uint64_t ms = elapsed_ms();

        if (v.status == VerdictStatus::Satisfiable) {
            if (!v.model) throw InternalError("satisfiable verdict carries no model");
            std::string why;
            if (!verify_model(parsed.psis, check_k, *v.model, &why))
                throw InternalError("model failed re-verification before output: " + why);
        }

        if (human) {
            print_human_verdict(v, stats, ms);
        } else {
            ordered_json out;
            out["verdict"] = verdict_word(v.status);
            out["model"] = v.model ? model_json(*v.model) : ordered_json(nullptr);
            if (v.status == VerdictStatus::Unknown)
                out["diagnostics"] = summarize_diagnostics(v.undecided);
            out["stats"] = stats_json(stats, ms);
            std::cout << out.dump() << "\n";
        }
        switch (v.status) {
            case VerdictStatus::Satisfiable: return kExitSat;
            case VerdictStatus::Unsatisfiable: return kExitUnsat;
            default: return kExitUnknown;
        }
    } catch (const InternalError& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitInternal;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitInternal;
    }
}
