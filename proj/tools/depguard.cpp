// depguard command-line frontend.

#include "depguard/analysis.hpp"
#include "depguard/error.hpp"
#include "depguard/frontend.hpp"
#include "depguard/oracle.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <thread>

using namespace depguard;
using json = nlohmann::json;

namespace
{
constexpr int kExitMatched = 0;
constexpr int kExitNotMatched = 1;
constexpr int kExitError = 2;

struct AnalyzeFlags
{
    std::string pattern = "ts";
    uint64_t timeout_ms = 60'000;
    std::string dump_facts;
    std::string dot;
    std::string format = "json";
    uint64_t seed = 0;
    bool no_timing = false;
    unsigned jobs = 1;
};

uint64_t default_timeout()
{
    if (const char* env = std::getenv("DEPGUARD_TIMEOUT_MS"))
    {
        try
        {
            return std::stoull(env);
        }
        catch (const std::exception&)
        {
            std::cerr << "warning: ignoring malformed DEPGUARD_TIMEOUT_MS='" << env << "'\n";
        }
    }
    return 60'000;
}

json error_json(const std::exception& e)
{
    json err = {{"message", e.what()}};
    if (const auto* de = dynamic_cast<const Error*>(&e))
    {
        err["kind"] = to_string(de->kind());
        if (de->pc())
            err["pc"] = *de->pc();
    }
    else
        err["kind"] = "Usage";
    return err;
}

std::vector<std::string> strs(const std::vector<DepFact>& facts)
{
    std::vector<std::string> out;
    out.reserve(facts.size());
    for (const auto& f : facts)
        out.push_back(f.str());
    return out;
}

void write_file(const std::string& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot write " + path);
    out << text;
}

struct Outcome
{
    json report;
    int code = kExitError;
};

Outcome analyze_one(const std::string& path, const AnalyzeFlags& fl)
{
    const auto t0 = std::chrono::steady_clock::now();
    json r = {{"schema", 1}, {"contract", path}, {"pattern", fl.pattern}};
    try
    {
        const Contract c = load_contract_file(path);
        r["source_hash"] = c.source_hash;
        r["warnings"] = c.warnings;
        const Pattern p = make_pattern(fl.pattern, c);

        AnalysisOptions opt;
        opt.timeout_ms = fl.timeout_ms;
        opt.seed = fl.seed;
        const Analysis a = analyze(c, opt);
        const Verdict v = check_pattern(p, a.lfp);

        if (!fl.dump_facts.empty())
        {
            std::string text;
            for (const auto& line : a.dump())
                text += line + "\n";
            write_file(fl.dump_facts, text);
        }
        if (!fl.dot.empty())
            write_file(fl.dot, a.cfg.to_dot());

        r["pattern"] = p.name;
        r["matched"] = v.matched;
        r["witnesses"] = strs(v.witnesses);
        r["pattern_facts"] = p.facts().size();
        if (p.polarity == Polarity::ViolationByAbsence)
        {
            json groups = json::array();
            for (const auto& g : v.groups)
                groups.push_back({{"pc", g.pc}, {"violation", g.matched}, {"witnesses", strs(g.witnesses)}});
            r["sstores"] = groups;
        }
        r["fact_counts"] = a.counts();
        r["gas_dependencies"] = a.gas_tags();
        r["msize_dependencies"] = a.msize_tags();
        r["instructions"] = c.code.size();
        r["cfg"] = {{"nodes", a.cfg.nodes().size()}, {"edges", a.cfg.edges().size()}};
        r["fixpoint"] = {{"rounds", a.lfp.stats.rounds}, {"derivations", a.lfp.stats.derivations}};
        json timings = json::object();
        for (const auto& [phase, ms] : a.phase_ms)
            timings[phase] = fl.no_timing ? 0.0 : ms;
        r["timings_ms"] = timings;
        const auto elapsed =
            std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0).count();
        r["elapsed_ms"] = fl.no_timing ? 0 : elapsed;
        return {r, v.matched ? kExitMatched : kExitNotMatched};
    }
    catch (const std::exception& e)
    {
        r["error"] = error_json(e);
        return {r, kExitError};
    }
}

std::string render_text(const json& r)
{
    std::string out = r.at("contract").get<std::string>() + ": ";
    if (r.contains("error"))
        return out + "error: " + r["error"]["message"].get<std::string>() + "\n";
    out += "pattern " + r["pattern"].get<std::string>() + " " + (r["matched"].get<bool>() ? "matched" : "not matched");
    out += " (" + std::to_string(r["elapsed_ms"].get<int64_t>()) + " ms)\n";
    for (const auto& w : r["witnesses"])
        out += "  witness " + w.get<std::string>() + "\n";
    return out;
}

int cmd_analyze(const std::vector<std::string>& paths, const AnalyzeFlags& fl)
{
    if ((!fl.dump_facts.empty() || !fl.dot.empty()) && paths.size() > 1)
    {
        std::cerr << "error: --dump-facts and --dot take a single contract\n";
        return kExitError;
    }
    std::vector<Outcome> results(paths.size());
    std::atomic<size_t> next{0};
    const auto worker = [&] {
        for (size_t i = next++; i < paths.size(); i = next++)
            results[i] = analyze_one(paths[i], fl);
    };
    const unsigned n = std::max(1u, std::min<unsigned>(fl.jobs, static_cast<unsigned>(paths.size())));
    std::vector<std::thread> pool;
    for (unsigned i = 1; i < n; ++i)
        pool.emplace_back(worker);
    worker();
    for (auto& t : pool)
        t.join();

    int code = kExitMatched;
    for (const auto& res : results)
    {
        if (fl.format == "text")
            std::cout << render_text(res.report);
        else
            std::cout << res.report.dump() << "\n";
        if (res.report.contains("error"))
            std::cerr << "error: " << res.report["contract"].get<std::string>() << ": "
                      << res.report["error"]["message"].get<std::string>() << "\n";
        code = std::max(code, res.code);
    }
    return code;
}

json hex(const u256& v)
{
    return v.hex();
}

json env_json(const TxEnv& e)
{
    return {{"origin", hex(e.origin)},         {"gasprice", hex(e.gasprice)},     {"parent", hex(e.parent)},
            {"coinbase", hex(e.beneficiary)},  {"difficulty", hex(e.difficulty)}, {"number", hex(e.number)},
            {"gaslimit", hex(e.gaslimit)},     {"timestamp", hex(e.timestamp)}};
}

json frame_json(const ExecState& s)
{
    return {{"actor", hex(s.actor)},  {"sender", hex(s.sender)}, {"value", hex(s.value)},
            {"gas", hex(s.gas)},      {"input", to_hex(s.input)}, {"world_seed", hex(s.world.seed)}};
}

json trace_json(const Trace& t)
{
    json out = json::array();
    for (const auto& e : t)
    {
        json args = json::array();
        for (const auto& a : e.args)
            args.push_back(a.hex());
        out.push_back({{"pc", e.pc}, {"op", std::string(op_name(e.op))}, {"args", args}});
    }
    return out;
}

int cmd_oracle(const std::string& path, const std::string& z, const std::string& f, size_t trials, uint64_t seed)
{
    json r = {{"schema", 1}, {"contract", path}, {"z", z}, {"f", f}, {"seed", seed}};
    try
    {
        const Contract c = load_contract_file(path);
        const DiffReport rep = differential_test(c, parse_components(z), parse_opset(f), trials, seed);
        r["trials"] = rep.trials;
        r["compared"] = rep.compared;
        r["discarded"] = rep.discarded;
        json ces = json::array();
        for (const auto& ce : rep.counterexamples)
            ces.push_back({{"env_a", env_json(ce.env_a)},
                           {"env_b", env_json(ce.env_b)},
                           {"frame_a", frame_json(ce.state_a)},
                           {"frame_b", frame_json(ce.state_b)},
                           {"trace_a", trace_json(ce.trace_a)},
                           {"trace_b", trace_json(ce.trace_b)}});
        r["counterexamples"] = ces;
        std::cout << r.dump() << "\n";
        return rep.counterexamples.empty() ? 0 : 1;
    }
    catch (const std::exception& e)
    {
        r["error"] = error_json(e);
        std::cout << r.dump() << "\n";
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    }
}

/// Runs a simple subcommand, mapping exceptions to exit code 2.
template <typename F>
int guarded(F&& f)
{
    try
    {
        f();
        return 0;
    }
    catch (const Error& e)
    {
        std::cerr << "error: " << to_string(e.kind()) << ": " << e.what();
        if (e.pc())
            std::cerr << " (pc " << *e.pc() << ")";
        std::cerr << "\n";
    }
    catch (const std::exception& e)
    {
        std::cerr << "error: " << e.what() << "\n";
    }
    return kExitError;
}
}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Dependency-based security pattern checker for EVM bytecode"};
    app.require_subcommand(1);

    std::string path;
    auto* disasm = app.add_subcommand("disasm", "Print the linearized assembly listing");
    disasm->add_option("contract", path, "hex bytecode or assembly file")->required();

    auto* cfg = app.add_subcommand("cfg", "Print the abstract CFG in DOT format");
    cfg->add_option("contract", path)->required();

    uint64_t facts_seed = 0;
    uint64_t facts_timeout = default_timeout();
    auto* facts = app.add_subcommand("facts", "Print local and derived dependency facts");
    facts->add_option("contract", path)->required();
    facts->add_option("--seed", facts_seed, "evaluation order seed");
    facts->add_option("--timeout-ms", facts_timeout, "analysis time limit");

    AnalyzeFlags fl;
    fl.timeout_ms = default_timeout();
    std::vector<std::string> paths;
    auto* analyze_cmd = app.add_subcommand("analyze", "Check a security pattern");
    analyze_cmd->add_option("contracts", paths, "contract files")->required();
    analyze_cmd->add_option("--pattern", fl.pattern, "ts | rw | ni:<components>:<opcodes>");
    analyze_cmd->add_option("--timeout-ms", fl.timeout_ms, "analysis time limit per contract");
    analyze_cmd->add_option("--dump-facts", fl.dump_facts, "write the fact dump to this file");
    analyze_cmd->add_option("--dot", fl.dot, "write the CFG in DOT format to this file");
    analyze_cmd->add_option("--format", fl.format, "json | text")->check(CLI::IsMember({"json", "text"}));
    analyze_cmd->add_option("--seed", fl.seed, "evaluation order seed");
    analyze_cmd->add_flag("--no-timing", fl.no_timing, "report zero timings for reproducible output");
    analyze_cmd->add_option("--jobs", fl.jobs, "parallel analyses")->check(CLI::PositiveNumber);

    std::string z = "timestamp", f = "CALL";
    size_t trials = 50;
    uint64_t oracle_seed = 1;
    auto* oracle = app.add_subcommand("oracle", "Differential noninterference test on the interpreter");
    oracle->add_option("contract", path)->required();
    oracle->add_option("--z", z, "comma-separated components to vary");
    oracle->add_option("--f", f, "comma-separated opcodes to observe");
    oracle->add_option("--trials", trials, "number of configuration pairs");
    oracle->add_option("--seed", oracle_seed, "sampler seed");

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError& e)
    {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kExitError;
    }

    if (*disasm)
        return guarded([&] { std::cout << print_asm(load_contract_file(path)); });
    if (*cfg)
        return guarded([&] { std::cout << Cfg::build(load_contract_file(path)).to_dot(); });
    if (*facts)
        return guarded([&] {
            AnalysisOptions opt;
            opt.seed = facts_seed;
            opt.timeout_ms = facts_timeout;
            for (const auto& line : analyze(load_contract_file(path), opt).dump())
                std::cout << line << "\n";
        });
    if (*analyze_cmd)
        return cmd_analyze(paths, fl);
    return cmd_oracle(path, z, f, trials, oracle_seed);
}
