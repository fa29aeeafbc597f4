#include "erx/dimacs.hpp"

#include "erx/corpus.hpp"

#include <array>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <sstream>
#include <sys/wait.h>
#include <unistd.h>

namespace erx {

std::string write_dimacs(const CnfInstance& cnf)
{
    std::string out;
    out.reserve(cnf.literal_count() * 6 + cnf.clause_count() * 2 + 64);
    if (cnf.width() > 0) {
        out += "c erx grid " + std::to_string(cnf.width()) + "x" + std::to_string(cnf.height()) + " tiles "
             + std::to_string(cnf.tile_count()) + "\n";
        out += "c primary vars 1.." + std::to_string(cnf.primary_var_count())
             + ": var = (row * width + col) * tiles + tile + 1\n";
        out += "c aux selectors " + std::to_string(cnf.selector_vars) + " indicators "
             + std::to_string(cnf.indicator_vars) + " counters " + std::to_string(cnf.counter_vars) + "\n";
    }
    out += "p cnf " + std::to_string(cnf.var_count()) + " " + std::to_string(cnf.clause_count()) + "\n";
    for (std::size_t i = 0; i < cnf.clause_count(); ++i) {
        for (Lit l : cnf.clause(i)) {
            out += std::to_string(l);
            out += ' ';
        }
        out += "0\n";
    }
    return out;
}

CnfInstance parse_dimacs(std::string_view text)
{
    std::istringstream in{std::string(text)};
    std::string line;
    int vars = -1;
    long long expected = -1;
    CnfInstance cnf;
    std::vector<Lit> clause;
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        std::string first;
        if (!(ls >> first) || first == "c" || first[0] == 'c' || first == "%")
            continue;
        if (first == "p") {
            std::string fmt;
            if (!(ls >> fmt >> vars >> expected) || fmt != "cnf" || vars < 0 || expected < 0)
                throw Error("dimacs: malformed header '" + line + "'");
            cnf = CnfInstance(vars);
            continue;
        }
        if (vars < 0)
            throw Error("dimacs: clause before 'p cnf' header");
        std::istringstream cs(line);
        long long v = 0;
        while (cs >> v) {
            if (v == 0) {
                if (clause.empty())
                    throw Error("dimacs: empty clause");
                cnf.add_clause(clause);
                clause.clear();
            } else {
                if (v > vars || -v > vars)
                    throw Error("dimacs: literal " + std::to_string(v) + " exceeds variable count");
                clause.push_back(static_cast<Lit>(v));
            }
        }
        if (!cs.eof())
            throw Error("dimacs: unexpected token in '" + line + "'");
    }
    if (vars < 0)
        throw Error("dimacs: missing 'p cnf' header");
    if (!clause.empty())
        throw Error("dimacs: last clause not terminated by 0");
    if (static_cast<long long>(cnf.clause_count()) != expected)
        throw Error("dimacs: header declares " + std::to_string(expected) + " clauses, found "
                    + std::to_string(cnf.clause_count()));
    return cnf;
}

ExternalModel parse_external_model(std::string_view text, int var_count)
{
    std::istringstream in{std::string(text)};
    std::string line;
    std::optional<bool> status;
    std::vector<char> assigned(static_cast<std::size_t>(var_count), 0);
    ExternalModel result;
    result.model.assign(static_cast<std::size_t>(var_count), false);
    bool terminated = false;
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        std::string tag;
        if (!(ls >> tag))
            continue;
        if (tag == "s") {
            std::string word;
            ls >> word;
            if (word == "SATISFIABLE")
                status = true;
            else if (word == "UNSATISFIABLE")
                status = false;
            else
                throw Error("solver output: unknown status '" + word + "'");
        } else if (tag == "v") {
            long long v = 0;
            while (ls >> v) {
                if (v == 0) {
                    terminated = true;
                    continue;
                }
                long long a = v > 0 ? v : -v;
                if (a > var_count)
                    throw Error("solver output: variable " + std::to_string(a) + " out of range");
                result.model[static_cast<std::size_t>(a - 1)] = v > 0;
                assigned[static_cast<std::size_t>(a - 1)] = 1;
            }
            if (!ls.eof())
                throw Error("solver output: malformed value line '" + line + "'");
        }
    }
    if (!status)
        throw Error("solver output: no 's' status line");
    result.satisfiable = *status;
    if (!result.satisfiable) {
        result.model.clear();
        return result;
    }
    if (!terminated)
        throw Error("solver output: value lines not terminated by 0");
    for (std::size_t i = 0; i < assigned.size(); ++i)
        if (!assigned[i])
            throw Error("solver output: incomplete model (variable " + std::to_string(i + 1) + " missing)");
    return result;
}

SolveOutcome solve_external(const std::string& command, const CnfInstance& cnf,
                            std::optional<double> deadline_seconds)
{
    namespace fs = std::filesystem;
    const auto start = std::chrono::steady_clock::now();
    std::string tmpl = (fs::temp_directory_path() / "erx-XXXXXX.cnf").string();
    int fd = mkstemps(tmpl.data(), 4);
    if (fd < 0)
        throw Error("external solver: cannot create temporary file");
    close(fd);
    write_text_file(tmpl, write_dimacs(cnf));

    std::string cmd;
    if (deadline_seconds)
        cmd = "timeout --signal=KILL " + std::to_string(std::max(*deadline_seconds, 0.001)) + " ";
    cmd += command + " '" + tmpl + "' 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) {
        fs::remove(tmpl);
        throw Error("external solver: cannot start '" + command + "'");
    }
    std::string output;
    std::array<char, 4096> buf{};
    std::size_t got = 0;
    while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0)
        output.append(buf.data(), got);
    int status = pclose(pipe);
    fs::remove(tmpl);

    SolveOutcome out;
    out.elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    int code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    if (deadline_seconds && (code == 124 || code == 137 || (WIFSIGNALED(status) && WTERMSIG(status) == SIGKILL))) {
        out.status = SolveStatus::timeout;
        return out;
    }
    auto parsed = parse_external_model(output, cnf.var_count());
    out.status = parsed.satisfiable ? SolveStatus::sat : SolveStatus::unsat;
    out.model = std::move(parsed.model);
    return out;
}

}  // namespace erx
