#include "depguard/cfg.hpp"
#include "depguard/error.hpp"

namespace depguard
{
CfgNode Cfg::step(const CfgNode& at, CfgState& state) const
{
    const size_t n = index(at);
    for (const size_t ei : out_[n])
    {
        const CfgEdge& e = edges_[ei];
        if (e.is_guard())
        {
            if (e.guard(state))
                return e.dst;
            continue;
        }
        e.apply(state);
        return e.dst;
    }
    throw Error(ErrorKind::Stuck, "no enabled edge at " + at.str(), at.pc);
}

CfgRun run_cfg(const Cfg& cfg, CfgNode start, CfgState state, uint64_t fuel)
{
    CfgRun r{start, std::move(state), 0};
    while (!r.final_node.is_sink())
    {
        if (r.steps >= fuel)
            throw Error(ErrorKind::FuelExhausted, "CFG run exceeded " + std::to_string(fuel) + " edges",
                        r.final_node.pc);
        r.final_node = cfg.step(r.final_node, r.state);
        ++r.steps;
    }
    return r;
}
}  // namespace depguard
