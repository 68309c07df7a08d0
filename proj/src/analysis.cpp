#include "depguard/analysis.hpp"

#include "depguard/error.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace depguard
{
namespace
{
using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0)
{
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

void check_deadline(Clock::time_point deadline, const char* phase)
{
    if (Clock::now() > deadline)
        throw Error(ErrorKind::Timeout, std::string("analysis timed out during ") + phase);
}

std::vector<std::string> collapsed_tags(const Lfp& lfp, Pred p)
{
    std::set<std::string> tags;
    for (const auto& f : lfp.of(p))
        tags.insert(f.args.back().str());
    return {tags.begin(), tags.end()};
}
}  // namespace

std::vector<std::string> Analysis::dump() const
{
    std::vector<std::string> out;
    for (const auto& f : facts.facts)
        if (!pred_info(f.pred).internal)
            out.push_back(f.str());
    for (const auto& f : lfp.facts)
        if (!pred_info(f.pred).internal)
            out.push_back(f.str());
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::map<std::string, size_t> Analysis::counts() const
{
    std::map<std::string, size_t> out;
    const auto add = [&](const std::vector<DepFact>& v) {
        for (const auto& f : v)
            if (!pred_info(f.pred).internal)
                ++out[std::string(pred_info(f.pred).name)];
    };
    add(facts.facts);
    add(lfp.facts);
    return out;
}

std::vector<std::string> Analysis::gas_tags() const
{
    return collapsed_tags(lfp, Pred::GasDependOn);
}

std::vector<std::string> Analysis::msize_tags() const
{
    return collapsed_tags(lfp, Pred::MsizeDependOn);
}

Analysis analyze(const Contract& c, const AnalysisOptions& opt)
{
    const auto t0 = Clock::now();
    const auto deadline = t0 + std::chrono::milliseconds(opt.timeout_ms);

    auto t = Clock::now();
    Cfg cfg = Cfg::build(c);
    const double cfg_ms = ms_since(t);
    check_deadline(deadline, "CFG construction");

    t = Clock::now();
    FactBase fb = generate_facts(cfg);
    const double facts_ms = ms_since(t);
    check_deadline(deadline, "fact generation");

    t = Clock::now();
    FixpointOptions fo;
    fo.seed = opt.seed;
    fo.max_facts = opt.max_facts;
    fo.deadline = deadline;
    Lfp lfp = solve_fixpoint(fb, fo);
    const double fix_ms = ms_since(t);

    Analysis a{std::move(cfg), std::move(fb), std::move(lfp), {}};
    a.phase_ms = {{"cfg", cfg_ms}, {"facts", facts_ms}, {"fixpoint", fix_ms}};
    return a;
}

Pattern make_pattern(const std::string& name, const Contract& c)
{
    if (name == "ts")
        return pattern_timestamp(c);
    if (name == "rw")
        return pattern_restricted_write(c);
    if (name.starts_with("ni:"))
    {
        const std::string rest = name.substr(3);
        const size_t colon = rest.find(':');
        if (colon == std::string::npos)
            throw std::invalid_argument("pattern 'ni' needs the form ni:<components>:<opcodes>");
        const auto z = parse_components(rest.substr(0, colon));
        const auto f = parse_opset(rest.substr(colon + 1));
        return pattern_noninterference(z, f, c);
    }
    throw std::invalid_argument("unknown pattern '" + name + "' (expected ts, rw or ni:<Z>:<f>)");
}
}  // namespace depguard
