#include "depguard/cfg.hpp"

#include "depguard/error.hpp"

#include <sstream>

namespace depguard
{
std::string CfgNode::str() const
{
    if (pc == kHaltPc)
        return "halt";
    if (pc == kExceptionPc)
        return "exception";
    return "(" + std::to_string(pc) + "," + std::to_string(sub) + ")";
}

size_t Cfg::index(const CfgNode& n) const
{
    const auto it = ids_.find(n);
    if (it == ids_.end())
        throw Error(ErrorKind::Stuck, "no CFG node " + n.str(), n.pc);
    return it->second;
}

size_t Cfg::intern(const CfgNode& n)
{
    const auto [it, inserted] = ids_.emplace(n, nodes_.size());
    if (inserted)
    {
        nodes_.push_back(n);
        out_.emplace_back();
        in_.emplace_back();
    }
    return it->second;
}

void Cfg::add_edge(CfgEdge e)
{
    const size_t src = intern(e.src);
    const size_t dst = intern(e.dst);
    out_[src].push_back(edges_.size());
    in_[dst].push_back(edges_.size());
    edges_.push_back(std::move(e));
}

std::vector<size_t> Cfg::edges_of(Pc pc) const
{
    std::vector<size_t> out;
    for (auto it = ids_.lower_bound(CfgNode{pc, 0}); it != ids_.end() && it->first.pc == pc; ++it)
        for (const size_t e : out_[it->second])
            out.push_back(e);
    return out;
}

std::string Cfg::to_dot() const
{
    std::ostringstream os;
    os << "digraph cfg {\n";
    for (size_t i = 0; i < nodes_.size(); ++i)
        os << "  n" << i << " [label=\"" << nodes_[i].str() << "\"];\n";
    for (const auto& e : edges_)
    {
        os << "  n" << ids_.at(e.src) << " -> n" << ids_.at(e.dst) << " [label=\"" << e.label;
        if (!e.def.empty())
            os << " def=" << e.def.str();
        os << " use=" << e.use.str() << "\"];\n";
    }
    os << "}\n";
    return os.str();
}
}  // namespace depguard
