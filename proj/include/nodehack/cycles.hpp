#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "nodehack/graph.hpp"

namespace nodehack {

using Cycle = std::vector<std::string>;

/// Node-level adjacency over tubes. Tubes into world-backed nodes are left
/// out: their effect reaches the world on the next tick, not the node's outputs.
inline std::map<std::string, std::set<std::string>> dataflow_successors(const Program& program) {
  std::map<std::string, std::set<std::string>> adj;
  for (const auto& [id, _] : program.nodes) adj[id];
  for (const auto& t : program.tubes) {
    const Node* dst = program.find(t.to.node);
    if (!dst || is_world_backed(dst->kind)) continue;
    if (!program.find(t.from.node)) continue;
    adj[t.from.node].insert(t.to.node);
  }
  return adj;
}

/// Every elementary cycle of the tube graph (Johnson's algorithm).
///
/// Each cycle starts at its smallest node id and the list is sorted, so the
/// output is canonical. Empty iff the tube graph is acyclic.
inline std::vector<Cycle> detect_cycles(const Program& program) {
  const auto succ = dataflow_successors(program);
  std::vector<std::string> ids;
  std::map<std::string, int> index;
  for (const auto& [id, _] : succ) {
    index[id] = static_cast<int>(ids.size());
    ids.push_back(id);
  }
  const int n = static_cast<int>(ids.size());
  std::vector<std::vector<int>> adj(n);
  for (const auto& [id, outs] : succ)
    for (const auto& w : outs) adj[index[id]].push_back(index[w]);

  std::vector<Cycle> cycles;
  std::vector<bool> blocked(n);
  std::vector<std::set<int>> blocked_by(n);
  std::vector<int> stack;

  std::function<void(int)> unblock = [&](int u) {
    blocked[u] = false;
    auto waiting = std::move(blocked_by[u]);
    blocked_by[u].clear();
    for (int w : waiting)
      if (blocked[w]) unblock(w);
  };

  for (int start = 0; start < n; ++start) {
    std::fill(blocked.begin(), blocked.end(), false);
    for (auto& b : blocked_by) b.clear();

    std::function<bool(int)> circuit = [&](int v) {
      bool found = false;
      stack.push_back(v);
      blocked[v] = true;
      for (int w : adj[v]) {
        if (w < start) continue;
        if (w == start) {
          Cycle c;
          for (int i : stack) c.push_back(ids[i]);
          cycles.push_back(std::move(c));
          found = true;
        } else if (!blocked[w] && circuit(w)) {
          found = true;
        }
      }
      if (found) {
        unblock(v);
      } else {
        for (int w : adj[v])
          if (w >= start) blocked_by[w].insert(v);
      }
      stack.pop_back();
      return found;
    };
    circuit(start);
  }
  std::sort(cycles.begin(), cycles.end());
  return cycles;
}

}  // namespace nodehack
