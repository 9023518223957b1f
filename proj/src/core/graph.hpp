#pragma once

// Strongly connected components (iterative Tarjan) over adjacency lists.

#include <cstdint>
#include <vector>

namespace tta::detail {

struct Sccs {
  std::vector<std::uint32_t> component;  // per node
  std::uint32_t count = 0;
};

template <class Adj, class Target>
Sccs tarjan(const Adj& adj, Target target_of) {
  const std::uint32_t n = static_cast<std::uint32_t>(adj.size());
  constexpr std::uint32_t unseen = UINT32_MAX;
  Sccs out;
  out.component.assign(n, unseen);
  std::vector<std::uint32_t> index(n, unseen), low(n, 0), stack;
  std::vector<bool> on_stack(n, false);
  std::vector<std::pair<std::uint32_t, std::uint32_t>> call;  // node, next edge position
  std::uint32_t counter = 0;
  for (std::uint32_t root = 0; root < n; ++root) {
    if (index[root] != unseen) continue;
    call.push_back({root, 0});
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = true;
    while (!call.empty()) {
      auto& [v, pos] = call.back();
      if (pos < adj[v].size()) {
        std::uint32_t w = target_of(adj[v][pos]);
        ++pos;
        if (index[w] == unseen) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = true;
          call.push_back({w, 0});
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], index[w]);
        }
        continue;
      }
      std::uint32_t done = v;
      call.pop_back();
      if (!call.empty()) low[call.back().first] = std::min(low[call.back().first], low[done]);
      if (low[done] == index[done]) {
        while (true) {
          std::uint32_t w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          out.component[w] = out.count;
          if (w == done) break;
        }
        ++out.count;
      }
    }
  }
  return out;
}

}  // namespace tta::detail
