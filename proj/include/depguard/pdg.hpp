#pragma once

#include "depguard/cfg.hpp"
#include "depguard/variable.hpp"

#include <cstddef>
#include <utility>
#include <vector>

namespace depguard
{
/// Node-labeled graph the dependence analyses run on. Node Def/Use are the unions over the
/// node's outgoing edges; exits are the sink nodes.
struct FlowGraph
{
    size_t entry = 0;
    std::vector<std::vector<size_t>> succ;
    std::vector<VarSet> def;
    std::vector<VarSet> use;
    std::vector<bool> exit;

    [[nodiscard]] size_t size() const noexcept { return succ.size(); }
    size_t add_node(bool is_exit = false);
};

FlowGraph flow_graph(const Cfg& cfg);

/// Immediate postdominators; the virtual exit has index size(). Nodes that cannot reach an exit
/// are linked to the virtual exit.
std::vector<size_t> postdominators(const FlowGraph& g);

struct Pdg
{
    std::vector<std::pair<size_t, size_t>> cd;  ///< (n, n'): n' is control dependent on n
    std::vector<std::pair<size_t, size_t>> dd;  ///< (n, n'): n' reads a variable n defines
    std::vector<std::vector<size_t>> preds;     ///< reverse adjacency over cd and dd
};

std::vector<std::pair<size_t, size_t>> control_dependence(const FlowGraph& g);
/// Def-use chains: n defines a variable that n' uses, with no intervening exact redefinition.
std::vector<std::pair<size_t, size_t>> data_dependence(const FlowGraph& g);
Pdg build_pdg(const FlowGraph& g);

/// Backward slice: all nodes with a cd/dd path into `targets` (targets included). Sorted.
std::vector<size_t> backward_slice(const Pdg& pdg, const std::vector<size_t>& targets);
}  // namespace depguard
